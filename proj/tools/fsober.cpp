// fsober: BER sweeps, target-SNR search and gain comparison for FSO links.
//
// Exit codes: 0 success, 1 validation failure, 2 numeric failure.

#include "fso/error.hpp"
#include "fso/figures.hpp"
#include "fso/parallel.hpp"
#include "fso/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

void emit_csv(const fso::SweepResult& result, const std::string& path) {
  if (path.empty() || path == "-") {
    fso::write_csv(std::cout, result);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  fso::write_csv(out, result);
}

void emit_series(const fso::SweepResult& result, const std::string& dir, const std::string& label) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<double, double>> closed;
  std::vector<std::pair<double, double>> mc;
  for (const auto& p : result.points) {
    closed.emplace_back(p.snr_db, p.ber_closed);
    if (p.ber_mc) mc.emplace_back(p.snr_db, *p.ber_mc);
  }
  std::ofstream out(std::filesystem::path(dir) / (label + "_closed.csv"), std::ios::binary);
  fso::write_series(out, label + " closed form", closed);
  if (!mc.empty()) {
    std::ofstream out_mc(std::filesystem::path(dir) / (label + "_mc.csv"), std::ios::binary);
    fso::write_series(out_mc, label + " monte carlo", mc);
  }
}

void print_findings(const std::vector<fso::Finding>& findings) {
  for (const auto& f : findings) {
    std::cout << (f.severity == fso::Severity::error ? "error" : "warning") << ": " << f.key << ": "
              << f.message << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form and Monte Carlo BER of free-space optical links over log-normal turbulence"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("-j,--threads", threads, "worker threads (default: OpenMP default)")->check(CLI::PositiveNumber);

  std::string config_path;
  std::string output;

  auto* sweep = app.add_subcommand("sweep", "BER vs average SNR sweep, written as CSV");
  sweep->add_option("config", config_path, "scenario config file")->required();
  sweep->add_option("-o,--output", output, "output CSV (overrides [output] path; '-' for stdout)");

  double target = 0.0;
  auto* target_snr = app.add_subcommand("target-snr", "average SNR (dB) at which the BER reaches a target");
  target_snr->add_option("config", config_path, "scenario config file")->required();
  target_snr->add_option("-t,--target", target, "target BER (default: [sweep] target_ber)");

  std::string config_b;
  auto* gain = app.add_subcommand("gain", "SNR gain of config B over config A at a target BER");
  gain->add_option("config_a", config_path, "baseline config")->required();
  gain->add_option("config_b", config_b, "compared config")->required();
  gain->add_option("-t,--target", target, "target BER (default: config A's target_ber)");

  auto* validate = app.add_subcommand("validate", "check a config and list errors and warnings");
  validate->add_option("config", config_path, "scenario config file")->required();

  int figure = 0;
  std::string out_dir = "figures";
  std::uint64_t mc_samples = 0;
  std::uint64_t seed = 1;
  auto* reproduce = app.add_subcommand("reproduce-figure", "regenerate the curves and SNR gains of figure 5-8");
  reproduce->add_option("figure", figure, "figure number")->required()->check(CLI::IsMember({5, 6, 7, 8}));
  reproduce->add_option("-d,--out-dir", out_dir, "directory for per-curve CSV files");
  reproduce->add_option("--mc-samples", mc_samples, "semi-analytic MC samples per point (0 = off)");
  reproduce->add_option("--seed", seed, "MC seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) fso::set_worker_count(threads);

    if (*sweep) {
      const auto config = fso::load_config(config_path);
      print_findings(fso::validate_config(config));
      const auto result = fso::run_sweep(config);
      emit_csv(result, output.empty() ? config.output_path : output);
      if (!config.plot_dir.empty()) emit_series(result, config.plot_dir, "sweep");
    } else if (*target_snr) {
      const auto config = fso::load_config(config_path);
      const double t = target > 0.0 ? target : config.target_ber;
      const double snr = fso::snr_at_target_ber(config, t);
      std::printf("target_ber,snr_db\n%.6e,%.4f\n", t, snr);
    } else if (*gain) {
      const auto a = fso::load_config(config_path);
      const auto b = fso::load_config(config_b);
      const double t = target > 0.0 ? target : a.target_ber;
      const double snr_a = fso::snr_at_target_ber(a, t);
      const double snr_b = fso::snr_at_target_ber(b, t);
      std::printf("# gain_db = snr_a_db - snr_b_db (positive: B needs less SNR)\n");
      std::printf("target_ber,snr_a_db,snr_b_db,gain_db\n%.6e,%.4f,%.4f,%.4f\n", t, snr_a, snr_b, snr_a - snr_b);
    } else if (*validate) {
      const auto config = fso::load_config(config_path);
      const auto findings = fso::validate_config(config);
      print_findings(findings);
      for (const auto& f : findings) {
        if (f.severity == fso::Severity::error) return kExitValidation;
      }
      std::cout << "ok\n";
    } else if (*reproduce) {
      const auto preset = fso::figure_preset(figure);
      const std::string prefix = "fig" + std::to_string(figure) + "_";
      std::filesystem::create_directories(out_dir);
      for (const auto& c : preset.curves) {
        auto config = c.config;
        if (mc_samples > 0) {
          config.mc.enabled = true;
          config.mc.samples = mc_samples;
          config.mc.seed = seed;
        }
        const auto result = fso::run_sweep(config);
        emit_csv(result, (std::filesystem::path(out_dir) / (prefix + c.label + ".csv")).string());
        emit_series(result, out_dir, prefix + c.label);
      }
      std::printf("# figure %d: %s\n", figure, preset.title.c_str());
      std::printf("# gain_db = snr(baseline) - snr(improved) at BER %.0e\n", preset.curves.front().config.target_ber);
      std::printf("gain,baseline,improved,snr_baseline_db,snr_improved_db,gain_db\n");
      for (const auto& g : preset.gains) {
        const auto& base = preset.curve(g.baseline);
        const double s_base = fso::snr_at_target_ber(base, base.target_ber);
        const double s_impr = fso::snr_at_target_ber(preset.curve(g.improved), base.target_ber);
        std::printf("%s,%s,%s,%.4f,%.4f,%.4f\n", g.label.c_str(), g.baseline.c_str(), g.improved.c_str(), s_base,
                    s_impr, s_base - s_impr);
      }
    }
  } catch (const fso::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitValidation;
  } catch (const fso::NotAchievableError& e) {
    std::cerr << "not achievable: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fso::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fso::DomainError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}
