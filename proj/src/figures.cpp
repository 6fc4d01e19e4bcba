#include "fso/figures.hpp"

#include "fso/error.hpp"

namespace fso {

namespace {

ScenarioConfig base(bool fog) {
  ScenarioConfig c;
  c.preset = fog ? "light_fog" : "clear";
  c.link = fog ? LinkScenario::light_fog() : LinkScenario::clear_weather();
  c.rho = 0.3;
  // Fog multi-hop curves cross 1e-9 well below 0 dB.
  c.sweep = {-40.0, 80.0, 1.0};
  return c;
}

ScenarioConfig curve(bool fog, int hops, int n_tx, ModulationSpec mod) {
  ScenarioConfig c = base(fog);
  c.hops = hops;
  c.n_tx = n_tx;
  c.modulation = mod;
  return c;
}

FigurePreset dual_hop(int number, bool fog) {
  FigurePreset f;
  f.number = number;
  f.title = std::string("dual-hop 4-PAM vs direct OOK, ") + (fog ? "light fog" : "clear weather");
  const ModulationSpec pam4(Scheme::pam, 4);
  f.curves = {
      {"siso_ook", curve(fog, 1, 1, ModulationSpec::ook())},
      {"miso_ook_2tx", curve(fog, 1, 2, ModulationSpec::ook())},
      {"dualhop_siso_4pam", curve(fog, 2, 1, pam4)},
      {"dualhop_miso_4pam_2tx", curve(fog, 2, 2, pam4)},
  };
  f.gains = {
      {"dualhop_siso_4pam_over_siso_ook", "siso_ook", "dualhop_siso_4pam"},
      {"dualhop_miso_4pam_over_miso_ook", "miso_ook_2tx", "dualhop_miso_4pam_2tx"},
      {"dualhop_miso_over_dualhop_siso", "dualhop_siso_4pam", "dualhop_miso_4pam_2tx"},
  };
  return f;
}

FigurePreset two_relay(int number, bool fog) {
  FigurePreset f;
  f.number = number;
  f.title = std::string("two-relay 8-QAM / 8-PAM vs direct OOK, ") + (fog ? "light fog" : "clear weather");
  const ModulationSpec pam8(Scheme::pam, 8);
  const ModulationSpec qam8(Scheme::qam, 8);
  f.curves = {
      {"siso_ook", curve(fog, 1, 1, ModulationSpec::ook())},
      {"miso_ook_3tx", curve(fog, 1, 3, ModulationSpec::ook())},
      {"k3_siso_8pam", curve(fog, 3, 1, pam8)},
      {"k3_miso_8pam_3tx", curve(fog, 3, 3, pam8)},
      {"k3_siso_8qam", curve(fog, 3, 1, qam8)},
      {"k3_miso_8qam_3tx", curve(fog, 3, 3, qam8)},
  };
  f.gains = {
      {"k3_siso_8pam_over_siso_ook", "siso_ook", "k3_siso_8pam"},
      {"k3_miso_8pam_over_miso_ook", "miso_ook_3tx", "k3_miso_8pam_3tx"},
      {"k3_siso_8qam_over_k3_siso_8pam", "k3_siso_8pam", "k3_siso_8qam"},
      {"k3_miso_8qam_over_k3_miso_8pam", "k3_miso_8pam_3tx", "k3_miso_8qam_3tx"},
      {"k3_miso_over_k3_siso_8pam", "k3_siso_8pam", "k3_miso_8pam_3tx"},
      {"k3_miso_over_k3_siso_8qam", "k3_siso_8qam", "k3_miso_8qam_3tx"},
  };
  return f;
}

}  // namespace

const ScenarioConfig& FigurePreset::curve(const std::string& label) const {
  for (const auto& c : curves) {
    if (c.label == label) return c.config;
  }
  throw DomainError("figure " + std::to_string(number) + " has no curve '" + label + "'");
}

FigurePreset figure_preset(int number) {
  switch (number) {
    case 5: return dual_hop(5, false);
    case 6: return dual_hop(6, true);
    case 7: return two_relay(7, false);
    case 8: return two_relay(8, true);
    default: throw DomainError("figure number must be 5, 6, 7 or 8");
  }
}

}  // namespace fso
