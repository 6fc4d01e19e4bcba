#pragma once

// Presets for the four reference BER-vs-SNR figures: dual-hop 4-PAM against
// direct OOK (figures 5 and 6, clear and fog) and two-relay 8-QAM / 8-PAM
// against direct OOK (figures 7 and 8, clear and fog).

#include "fso/scenario.hpp"

#include <string>
#include <vector>

namespace fso {

struct FigureCurve {
  std::string label;
  ScenarioConfig config;
};

/// Pairwise SNR gain the figure's discussion quotes: snr(baseline) - snr(improved).
struct FigureGain {
  std::string label;
  std::string baseline;
  std::string improved;
};

struct FigurePreset {
  int number = 0;
  std::string title;
  std::vector<FigureCurve> curves;
  std::vector<FigureGain> gains;

  const ScenarioConfig& curve(const std::string& label) const;
};

/// Throws DomainError for anything other than 5, 6, 7, 8.
FigurePreset figure_preset(int number);

}  // namespace fso
