// Scenario runner: simulate / optimize / enforce3db / sweep.

#include <filesystem>
#include <fstream>
#include <cmath>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "mbpower/config.hpp"
#include "mbpower/nli.hpp"
#include "mbpower/optimizer.hpp"
#include "mbpower/oracle.hpp"
#include "mbpower/report.hpp"

namespace fs = std::filesystem;
using namespace mbpower;
using nlohmann::ordered_json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNotConverged = 3;

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

void write_outputs(const fs::path& dir, const Scenario& sc, const std::string& mode,
                   const LaunchSpectrum& spectrum, const std::vector<ChannelReport>& reports,
                   ordered_json convergence, ordered_json extra = nullptr) {
  fs::create_directories(dir);
  const std::string pre = sc.output.prefix;
  {
    auto out = open_out(dir / (pre + "channels.csv"));
    write_channel_csv(out, sc.link.grid, reports);
  }
  if (sc.output.plot_data) {
    auto out = open_out(dir / (pre + "plot.tsv"));
    write_plot_tsv(out, reports);
  }
  ordered_json summary;
  summary["format_version"] = kReportFormatVersion;
  summary["scenario"] = sc.name;
  summary["mode"] = mode;
  const ordered_json stats = summarize(sc.link.grid, reports);
  for (const auto& [k, v] : stats.items()) summary[k] = v;
  summary["launch"] = spectrum_json(spectrum, sc.link.plan);
  summary["convergence"] = std::move(convergence);
  if (!extra.is_null()) summary["sweep"] = std::move(extra);
  summary["config"] = sc.echo;
  auto out = open_out(dir / (pre + "summary.json"));
  out << summary.dump(2) << '\n';
}

ordered_json convergence_json(const OptimizationResult& r) {
  return {{"converged", r.converged},         {"iterations", r.iterations},
          {"evaluations", r.evaluations},     {"restarts_used", r.restarts_used},
          {"residual_dB", std::stod(format_number(r.residual_db, 9))}};
}

int run_oracle(const Scenario& sc, const fs::path& dir) {
  const std::vector<double> launch = eval_launch(sc.launch, sc.link.grid);
  const std::vector<PowerProfile> profiles = span_profiles(sc.link, launch);
  const NliCoefficients eta = compute_span_eta(sc.link.spans[0], profiles[0], sc.link.grid);
  fs::create_directories(dir);
  auto out = open_out(dir / (sc.output.prefix + "oracle.csv"));
  out << "index,closed_form_W,oracle_W,difference_dB,converged\n";
  for (std::size_t i = 0; i < sc.link.grid.size(); ++i) {
    double cf = eta.eta_spm[i] * launch[i] * launch[i] * launch[i];
    for (std::size_t j = 0; j < launch.size(); ++j) cf += eta.eta_xpm[i][j] * launch[i] * launch[j] * launch[j];
    const OracleResult o = gn_integral(sc.link.spans[0], profiles[0], sc.link.grid, launch, i);
    out << i << ',' << cf << ',' << o.p_nli_w << ',' << format_number(lin_to_db(cf / o.p_nli_w)) << ','
        << (o.converged ? "true" : "false") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Launch power simulation and optimization for multiband WDM links"};
  std::string mode = "simulate", config, out_dir = "out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  app.add_option("--mode", mode, "simulate | optimize | enforce3db | sweep")
      ->check(CLI::IsMember({"simulate", "optimize", "enforce3db", "sweep", "oracle"}));
  app.add_option("--config", config, "Scenario file, or the name of a bundled scenario")->required();
  app.add_option("--out-dir", out_dir, "Directory for the CSV, JSON and plot outputs");
  app.add_option("--set", overrides, "Override a config value, key=value (repeatable)");
  app.add_option("--seed", seed, "Optimizer seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }
  if (seed) overrides.push_back("seed=" + std::to_string(*seed));

  try {
    const Scenario sc = load_scenario(config, overrides);
    const fs::path dir(out_dir);

    if (mode == "simulate") {
      const Evaluation ev = evaluate(sc.link, sc.launch, sc.curve);
      write_outputs(dir, sc, mode, sc.launch, ev.reports, {{"converged", true}});
      std::cout << "total " << format_number(ev.total_tbps, 3) << " Tb/s\n";
      return 0;
    }
    if (mode == "optimize") {
      const OptimizationResult r = optimize_throughput(sc.link, sc.curve, sc.optimizer);
      write_outputs(dir, sc, mode, r.best_spectrum, r.reports, convergence_json(r));
      std::cout << "total " << format_number(r.best_total, 3) << " Tb/s"
                << (r.converged ? "" : " (not converged)") << '\n';
      return 0;
    }
    if (mode == "enforce3db") {
      const OptimizationResult r = enforce_3db(sc.link, sc.curve, sc.enforce);
      write_outputs(dir, sc, mode, r.best_spectrum, r.reports, convergence_json(r));
      std::cout << "total " << format_number(r.best_total, 3) << " Tb/s, residual "
                << format_number(r.residual_db, 4) << " dB\n";
      if (!r.converged) {
        std::cerr << "error: 3-dB rule enforcement did not converge in " << r.iterations
                  << " iterations (residual " << format_number(r.residual_db, 4) << " dB)\n";
        return kExitNotConverged;
      }
      return 0;
    }
    if (mode == "sweep") {
      ordered_json rows = ordered_json::array();
      std::optional<Evaluation> best;
      PerBandCubic best_spec;
      const int steps =
          static_cast<int>(std::floor((sc.sweep.max_dbm - sc.sweep.min_dbm) / sc.sweep.step_db + 1e-9));
      for (int k = 0; k <= steps; ++k) {
        const double dbm = sc.sweep.min_dbm + k * sc.sweep.step_db;
        const PerBandCubic spec = uniform_cubic(sc.link.plan, {dbm, 0.0, 0.0, 0.0});
        Evaluation ev = evaluate(sc.link, spec, sc.curve);
        rows.push_back({{"p_launch_dBm", std::stod(format_number(dbm, 9))},
                        {"total_Tbps", std::stod(format_number(ev.total_tbps, 9))}});
        if (!best || ev.total_tbps > best->total_tbps) {
          best = std::move(ev);
          best_spec = spec;
        }
      }
      fs::create_directories(dir);
      {
        auto out = open_out(dir / (sc.output.prefix + "sweep.csv"));
        out << "p_launch_dBm,total_Tbps\n";
        for (const auto& row : rows)
          out << format_number(row["p_launch_dBm"].get<double>()) << ','
              << format_number(row["total_Tbps"].get<double>()) << '\n';
      }
      write_outputs(dir, sc, mode, best_spec, best->reports, {{"converged", true}}, rows);
      std::cout << "best flat launch " << format_number(best_spec.bands.begin()->second[0], 2)
                << " dBm, total " << format_number(best->total_tbps, 3) << " Tb/s\n";
      return 0;
    }
    return run_oracle(sc, dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
