// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <sys/wait.h>

#include "mbpower/config.hpp"
#include "mbpower/nli.hpp"
#include "mbpower/optimizer.hpp"
#include "mbpower/oracle.hpp"

namespace fs = std::filesystem;
using namespace mbpower;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int worker_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Scenario scenario(const std::string& name, std::vector<std::string> overrides = {}) {
  Scenario sc = load_scenario(name, overrides);
  sc.optimizer.threads = std::min(worker_threads(), sc.optimizer.restarts);
  return sc;
}

std::vector<double> launch_dbm(const std::vector<ChannelReport>& reports) {
  std::vector<double> out;
  for (const ChannelReport& r : reports) out.push_back(w_to_dbm(r.p_launch));
  return out;
}

double band_mean_gap(const LinkSpec& link, const std::vector<ChannelReport>& reports,
                     const std::string& band) {
  double s = 0.0;
  const auto members = link.grid.band_members(band);
  for (std::size_t i : members) s += gap_3db(reports[i]);
  return s / static_cast<double>(members.size());
}

/// Optimization runs shared by several criteria.
struct Runs {
  std::map<std::string, OptimizationResult> cache;
  std::map<std::string, double> runtime_s;

  const OptimizationResult& optimize(const std::string& name, bool isrs) {
    const std::string key = name + (isrs ? "/on" : "/off");
    if (!cache.count(key)) {
      const Scenario sc = scenario(name, {isrs ? "isrs=on" : "isrs=off"});
      const auto t0 = std::chrono::steady_clock::now();
      cache[key] = optimize_throughput(sc.link, sc.curve, sc.optimizer);
      runtime_s[key] = seconds_since(t0);
      std::printf("  .. optimized %s in %.0f s: %.3f Tb/s\n", key.c_str(), runtime_s[key],
                  cache[key].best_total);
      std::fflush(stdout);
    }
    return cache[key];
  }

  const OptimizationResult& enforce(const std::string& name) {
    const std::string key = name + "/enforce";
    if (!cache.count(key)) {
      const Scenario sc = scenario(name, {"isrs=on"});
      const auto t0 = std::chrono::steady_clock::now();
      cache[key] = enforce_3db(sc.link, sc.curve, sc.enforce);
      runtime_s[key] = seconds_since(t0);
      std::printf("  .. enforced %s in %.0f s: %.3f Tb/s\n", key.c_str(), runtime_s[key],
                  cache[key].best_total);
      std::fflush(stdout);
    }
    return cache[key];
  }
};

Runs runs;
const std::vector<std::string> kScenarios{"clst_1000km", "clse_300km"};

LinkSpec single_channel_link() {
  const Scenario sc = scenario("clst_1000km", {"isrs=off"});
  LinkSpec link = sc.link;
  const Channel& mid = sc.link.grid[sc.link.grid.size() / 2];
  link.grid = ChannelGrid({{0, mid.f_center_thz, mid.symbol_rate_gbaud, mid.roll_off, mid.band}},
                          link.plan);
  return link;
}

Outcome analytic_optimum() {
  const auto t0 = std::chrono::steady_clock::now();
  const LinkSpec link = single_channel_link();
  auto at = [&](double dbm) {
    return evaluate(link, ExplicitPowers{{dbm_to_w(dbm)}}, ShannonCurve{});
  };
  double grid_best = 0.0, best_total = -1.0;
  for (int k = 0; k <= 3000; ++k) {
    const double dbm = -15.0 + 0.01 * k;
    const double t = at(dbm).total_tbps;
    if (t > best_total) best_total = t, grid_best = dbm;
  }
  const ChannelReport ref = at(0.0).reports[0];
  const double eta = ref.p_nli / std::pow(ref.p_launch, 3);
  const double p_opt = analytic_opt_power(eta, ref.p_ase);
  const ChannelReport r = at(w_to_dbm(p_opt)).reports[0];
  const double ratio = r.p_nli / r.p_ase;
  const double g_err = std::abs(r.gsnr - p_opt / (1.5 * r.p_ase)) / r.gsnr;
  const double dt = seconds_since(t0);
  const bool ok = std::abs(grid_best - w_to_dbm(p_opt)) <= 0.05 && std::abs(ratio - 0.5) <= 0.005 &&
                  g_err <= 1e-6 && dt < 1.0;
  return {ok, fmt("grid %.2f dBm vs analytic %.4f dBm, NLI/ASE %.5f, GSNR rel err %.1e, %.2f s",
                  grid_best, w_to_dbm(p_opt), ratio, g_err, dt)};
}

Outcome cube_law() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario sc = scenario("clst_1000km", {"isrs=off"});
  const std::vector<double> base_w = eval_launch(sc.launch, sc.link.grid);
  const Evaluation base = evaluate(sc.link, ExplicitPowers{base_w}, sc.curve);
  double worst = 0.0;
  for (double k : {0.5, 2.0}) {
    std::vector<double> w = base_w;
    for (double& p : w) p *= k;
    const Evaluation ev = evaluate(sc.link, ExplicitPowers{w}, sc.curve);
    for (std::size_t i = 0; i < w.size(); ++i)
      worst = std::max(worst, std::abs(ev.reports[i].p_nli / (k * k * k * base.reports[i].p_nli) - 1.0));
  }
  const double dt = seconds_since(t0);
  return {worst <= 1e-9 && dt < 30.0,
          fmt("%zu channels, worst relative deviation %.2e, %.2f s", base_w.size(), worst, dt)};
}

Outcome conservation() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario sc = scenario("clst_1000km");
  const std::vector<double> launch = eval_launch(sc.launch, sc.link.grid);
  double worst[2] = {0.0, 0.0};
  for (int photon = 0; photon < 2; ++photon) {
    FiberSpan span = sc.link.spans[0];
    span.alpha_db_per_km = Table(0.0);
    span.raman.photon_flux_correction = photon == 1;
    const PowerProfile p = propagate(span, launch, sc.link.grid);
    auto invariant = [&](std::size_t k) {
      double s = 0.0;
      for (std::size_t i = 0; i < launch.size(); ++i)
        s += photon ? p.powers[k][i] / sc.link.grid[i].f_center_thz : p.powers[k][i];
      return s;
    };
    const double ref = invariant(0);
    for (std::size_t k = 0; k < p.z_km.size(); ++k)
      worst[photon] = std::max(worst[photon], std::abs(invariant(k) / ref - 1.0));
  }
  const double dt = seconds_since(t0);
  return {worst[0] <= 1e-6 && worst[1] <= 1e-6 && dt < 5.0,
          fmt("photon drift %.2e, power drift %.2e, %.2f s", worst[1], worst[0], dt)};
}

Outcome closed_form_raman() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario sc = scenario("clst_1000km");
  FiberSpan span = sc.link.spans[0];
  span.alpha_db_per_km = Table(0.2);
  span.raman.photon_flux_correction = false;
  const std::vector<double> launch = eval_launch(sc.launch, sc.link.grid);
  const PowerProfile ode = propagate(span, launch, sc.link.grid);
  const std::vector<double> closed = triangular_profile(span, launch, sc.link.grid, span.length_km);
  double worst = 0.0;
  for (std::size_t i = 0; i < launch.size(); ++i)
    worst = std::max(worst, std::abs(lin_to_db(closed[i] / ode.powers.back()[i])));
  const double dt = seconds_since(t0);
  return {worst <= 0.1 && dt < 10.0,
          fmt("%zu channels, worst |closed - ODE| %.4f dB, %.2f s", launch.size(), worst, dt)};
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario sc = scenario("clst_1000km");
  const FiberSpan& span = sc.link.spans[0];
  const ChannelGrid& full = sc.link.grid;
  const std::size_t mid = full.size() / 2;
  auto sub_grid = [&](std::size_t first, std::size_t count) {
    std::vector<Channel> chans;
    for (std::size_t i = 0; i < count; ++i) {
      Channel c = full[first + i];
      c.index = static_cast<int>(i);
      chans.push_back(c);
    }
    return ChannelGrid(chans, sc.link.plan);
  };
  auto compare = [&](const ChannelGrid& g, std::size_t ch, double& err, bool& converged) {
    const std::vector<double> launch(g.size(), dbm_to_w(5.0));
    const PowerProfile p = propagate(span, launch, g);
    const NliCoefficients eta = compute_span_eta(span, p, g);
    double closed = eta.eta_spm[ch];
    for (double x : eta.eta_xpm[ch]) closed += x;
    closed *= std::pow(launch[ch], 3);
    const OracleResult o = gn_integral(span, p, g, launch, ch);
    err = std::abs(lin_to_db(closed / o.p_nli_w));
    converged = o.converged;
  };
  double e1 = 0.0, e3 = 0.0;
  bool c1 = false, c3 = false;
  compare(sub_grid(mid, 1), 0, e1, c1);
  compare(sub_grid(mid - 1, 3), 1, e3, c3);
  const double dt = seconds_since(t0);
  return {c1 && c3 && e1 <= 0.5 && e3 <= 1.5 && dt < 300.0,
          fmt("SPM %.3f dB, SPM+XPM %.3f dB, quadrature %s, %.1f s", e1, e3,
              c1 && c3 ? "converged" : "NOT converged", dt)};
}

Outcome emergence() {
  const OptimizationResult& r = runs.optimize("clst_1000km", false);
  const Scenario sc = scenario("clst_1000km");
  std::size_t near = 0;
  for (const ChannelReport& rep : r.reports)
    if (std::abs(gap_3db(rep) - 3.0) <= 0.7) ++near;
  const double frac = static_cast<double>(near) / static_cast<double>(r.reports.size());
  const std::vector<double> p = launch_dbm(r.reports);
  double worst_flat = 0.0;
  for (const Band& b : sc.link.plan.bands()) {
    const auto members = sc.link.grid.band_members(b.name);
    double mean = 0.0;
    for (std::size_t i : members) mean += p[i];
    mean /= static_cast<double>(members.size());
    for (std::size_t i : members) worst_flat = std::max(worst_flat, std::abs(p[i] - mean));
  }
  const double dt = runs.runtime_s["clst_1000km/off"];
  return {frac >= 0.9 && worst_flat <= 1.5 && dt < 1800.0,
          fmt("%.1f%% of gaps in 3 +/- 0.7 dB, worst in-band deviation %.2f dB, %.0f s", 100.0 * frac,
              worst_flat, dt)};
}

Outcome regime_split() {
  const OptimizationResult& r = runs.optimize("clst_1000km", true);
  const Scenario sc = scenario("clst_1000km");
  const double l = band_mean_gap(sc.link, r.reports, "L");
  const double s = band_mean_gap(sc.link, r.reports, "S");
  const std::vector<double> p = launch_dbm(r.reports);
  const double swing = p.back() - p.front();
  return {l >= 6.0 && s <= 3.0 && swing >= 8.0,
          fmt("L mean gap %.2f dB, S mean gap %.2f dB, launch %.2f -> %.2f dBm (swing %.2f dB)", l, s,
              p.front(), p.back(), swing)};
}

Outcome penalty_ordering() {
  bool ok = true;
  std::string detail;
  for (const std::string& name : kScenarios) {
    const double off = runs.optimize(name, false).best_total;
    const double on = runs.optimize(name, true).best_total;
    const double enf = runs.enforce(name).best_total;
    const double isrs_pen = 1.0 - on / off, rule_pen = 1.0 - enf / on;
    ok = ok && off > on && on > enf && isrs_pen <= 0.10 && rule_pen <= 0.05;
    detail += fmt("%s %.2f > %.2f > %.2f Tb/s (ISRS -%.2f%%, rule -%.2f%%); ", name.c_str(), off, on,
                  enf, 100.0 * isrs_pen, 100.0 * rule_pen);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Outcome non_uniformity() {
  bool ok = true;
  std::string detail;
  for (const std::string& name : kScenarios) {
    const double opt = gsnr_peak_to_peak_db(runs.optimize(name, true).reports);
    const double enf = gsnr_peak_to_peak_db(runs.enforce(name).reports);
    ok = ok && enf > opt;
    detail += fmt("%s %.2f dB (rule) vs %.2f dB (optimized); ", name.c_str(), enf, opt);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Outcome enforcement_fidelity() {
  bool ok = true;
  std::string detail;
  for (const std::string& name : kScenarios) {
    const OptimizationResult& r = runs.enforce(name);
    const double residual = rule_residual_db(r.reports);
    ok = ok && r.converged && residual <= 0.05 && r.iterations <= 200;
    detail += fmt("%s residual %.4f dB, %s, %d iterations; ", name.c_str(), residual,
                  r.converged ? "converged" : "NOT converged", r.iterations);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "mbpower_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string cli = MBPOWER_CLI_PATH;
  const std::vector<std::string> modes{"simulate", "optimize", "enforce3db", "sweep"};
  std::size_t files = 0;
  std::string mismatch;
  for (const std::string& mode : modes) {
    for (int run = 0; run < 2; ++run) {
      const fs::path out = root / mode / std::to_string(run);
      const std::string cmd = "\"" + cli + "\" --mode " + mode +
                              " --config clst_1000km --set restarts=2 --set optimizer.max_evals=300" +
                              " --set enforce.max_iters=5 --out-dir \"" + out.string() + "\" > " +
                              (root / (mode + std::to_string(run) + ".log")).string() + " 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc != 0 && !(mode == "enforce3db" && WEXITSTATUS(rc) == 3))
        return {false, fmt("%s run failed with status %d", mode.c_str(), rc)};
    }
    for (const auto& entry : fs::directory_iterator(root / mode / "0")) {
      const fs::path twin = root / mode / "1" / entry.path().filename();
      ++files;
      if (slurp(entry.path()) != slurp(twin)) mismatch += " " + mode + "/" + entry.path().filename().string();
    }
  }
  return {mismatch.empty() && files >= 12,
          mismatch.empty() ? fmt("%zu output files byte-identical across repeated runs", files)
                           : "differing outputs:" + mismatch};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"analytic optimum", analytic_optimum},
      {"cube law", cube_law},
      {"ISRS conservation", conservation},
      {"closed-form vs ODE Raman", closed_form_raman},
      {"NLI oracle equivalence", oracle_equivalence},
      {"3-dB emergence (ISRS off)", emergence},
      {"ISRS-on regime split", regime_split},
      {"penalty ordering", penalty_ordering},
      {"GSNR non-uniformity under the rule", non_uniformity},
      {"enforcement fidelity", enforcement_fidelity},
      {"determinism", determinism},
  };
  int failed = 0;
  std::size_t ran = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(k + 1)) == only.end())
      continue;
    ++ran;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
