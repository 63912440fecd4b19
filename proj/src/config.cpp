#include "mbpower/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace mbpower {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

/// Typed access to one config object; remembers which keys were read so the
/// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path, std::vector<std::string>& unknown)
      : j_(j), path_(std::move(path)), unknown_(unknown) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }
  Section(const Section&) = delete;
  ~Section() {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) unknown_.push_back(path_.empty() ? key : path_ + "." + key);
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key '" + child(key) + "'");
    return j_.at(key);
  }
  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return convert<T>(j_.at(key), child(key));
  }
  template <typename T>
  T require(const std::string& key) {
    return convert<T>(raw(key), child(key));
  }
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

  template <typename T>
  static T convert(const json& v, const std::string& path) {
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (v.is_string()) {
          if (v == "on") return true;
          if (v == "off") return false;
        }
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError("'" + path + "' has the wrong type");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& unknown_;
  std::set<std::string> used_;
};

std::vector<std::pair<double, double>> read_pairs(const json& v, const std::string& path,
                                                  const std::string& base_dir) {
  std::vector<std::pair<double, double>> pts;
  if (v.is_string()) {
    const fs::path file = fs::path(base_dir) / v.get<std::string>();
    std::ifstream in(file);
    if (!in) throw ConfigError("'" + path + "': cannot open table file " + file.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double x, y;
      if (ls >> x >> y) pts.emplace_back(x, y);
    }
    if (pts.empty()) throw ConfigError("'" + path + "': table file has no rows");
    return pts;
  }
  if (!v.is_array()) throw ConfigError("'" + path + "' must be a number, a table or a file name");
  for (const json& row : v) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
      throw ConfigError("'" + path + "' rows must be [x, y] number pairs");
    pts.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  return pts;
}

Table read_table(const json& v, const std::string& path, const std::string& base_dir) {
  if (v.is_number()) return Table(v.get<double>());
  try {
    return Table(read_pairs(v, path, base_dir));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

ordered_json table_json(const Table& t) {
  if (t.points().size() == 1) return t.points().front().second;
  ordered_json arr = ordered_json::array();
  for (const auto& [x, y] : t.points()) arr.push_back({x, y});
  return arr;
}

ordered_json pairs_json(const std::vector<std::pair<double, double>>& pts) {
  ordered_json arr = ordered_json::array();
  for (const auto& [x, y] : pts) arr.push_back({x, y});
  return arr;
}

FiberSpan parse_fiber(const json& j, const std::string& path, const std::string& base_dir,
                      std::vector<std::string>& unknown) {
  Section s(j, path, unknown);
  FiberSpan f;
  if (s.has("alpha_db_per_km"))
    f.alpha_db_per_km = read_table(s.raw("alpha_db_per_km"), s.child("alpha_db_per_km"), base_dir);
  f.d_ref = s.get("d_ps_per_nm_km", f.d_ref);
  f.s_ref = s.get("s_ps_per_nm2_km", f.s_ref);
  f.lambda_ref_nm = s.get("lambda_ref_nm", f.lambda_ref_nm);
  if (s.has("gamma_per_w_km"))
    f.gamma = read_table(s.raw("gamma_per_w_km"), s.child("gamma_per_w_km"), base_dir);
  if (s.has("raman")) {
    Section r(s.raw("raman"), s.child("raman"), unknown);
    const std::string model = r.get<std::string>("model", "triangular");
    if (model == "triangular") {
      TriangularGain tri;
      tri.slope = r.get("slope_per_w_km_thz", tri.slope);
      tri.cutoff_thz = r.get("cutoff_thz", tri.cutoff_thz);
      f.raman.profile = tri;
    } else if (model == "table") {
      f.raman.profile = TabulatedGain{read_pairs(r.raw("points"), r.child("points"), base_dir)};
    } else {
      throw ConfigError("'" + r.child("model") + "' must be 'triangular' or 'table'");
    }
    f.raman.photon_flux_correction =
        r.get("photon_flux_correction", f.raman.photon_flux_correction);
  }
  return f;
}

ordered_json fiber_json(const FiberSpan& f) {
  ordered_json j;
  j["alpha_db_per_km"] = table_json(f.alpha_db_per_km);
  j["d_ps_per_nm_km"] = f.d_ref;
  j["s_ps_per_nm2_km"] = f.s_ref;
  j["lambda_ref_nm"] = f.lambda_ref_nm;
  j["gamma_per_w_km"] = table_json(f.gamma);
  ordered_json r;
  if (const auto* tri = std::get_if<TriangularGain>(&f.raman.profile)) {
    r["model"] = "triangular";
    r["slope_per_w_km_thz"] = tri->slope;
    r["cutoff_thz"] = tri->cutoff_thz;
  } else {
    r["model"] = "table";
    r["points"] = pairs_json(std::get<TabulatedGain>(f.raman.profile).points);
  }
  r["photon_flux_correction"] = f.raman.photon_flux_correction;
  j["raman"] = r;
  return j;
}

AmplifierSpec parse_amp(const json& j, const std::string& path, std::vector<std::string>& unknown) {
  Section s(j, path, unknown);
  AmplifierSpec a;
  const json& nf = s.raw("nf_db");
  if (!nf.is_object()) throw ConfigError("'" + s.child("nf_db") + "' must map band names to dB");
  for (const auto& [band, v] : nf.items())
    a.nf_db[band] = Section::convert<double>(v, s.child("nf_db") + "." + band);
  const std::string policy = s.get<std::string>("policy", "re-equalize");
  if (policy != "re-equalize")
    throw ConfigError("'" + s.child("policy") + "': only 're-equalize' is supported");
  return a;
}

ordered_json amp_json(const AmplifierSpec& a) {
  ordered_json j;
  ordered_json nf;
  for (const auto& [band, v] : a.nf_db) nf[band] = v;
  j["nf_db"] = nf;
  j["policy"] = "re-equalize";
  return j;
}

PowerBounds parse_bounds(Section& s, PowerBounds b) {
  b.min_dbm = s.get("min_dbm", b.min_dbm);
  b.max_dbm = s.get("max_dbm", b.max_dbm);
  if (!(b.max_dbm > b.min_dbm)) throw ConfigError("power bounds need max_dbm > min_dbm");
  return b;
}

json* walk(json& doc, const std::string& key, bool create) {
  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw ConfigError("malformed override key '" + key + "'");
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (const std::exception&) {
        throw ConfigError("override key '" + key + "' needs an array index at '" + part + "'");
      }
      if (idx >= node->size()) throw ConfigError("override index out of range in '" + key + "'");
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) {
        if (!create) return nullptr;
        *node = json::object();
      }
      if (!node->contains(part) && !create) return nullptr;
      node = &(*node)[part];
    }
    if (dot == std::string::npos) return node;
    pos = dot + 1;
  }
}

json parse_value(const std::string& text) {
  if (text == "on") return true;
  if (text == "off") return false;
  json v = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (v.is_discarded()) return text;
  return v;
}

}  // namespace

void apply_overrides(json& doc, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override '" + ov + "' must have the form key=value");
    const std::string key = ov.substr(0, eq);
    const json value = parse_value(ov.substr(eq + 1));
    if (key == "isrs") {
      doc["link"]["isrs"] = value;
    } else if (key == "seed" || key == "restarts") {
      doc["optimizer"][key] = value;
    } else if (key == "gamma") {
      if (!doc.contains("fibers") || !doc["fibers"].is_object())
        throw ConfigError("override 'gamma' needs a 'fibers' section");
      for (auto& [name, fiber] : doc["fibers"].items()) fiber["gamma_per_w_km"] = value;
    } else {
      *walk(doc, key, /*create=*/true) = value;
    }
  }
}

Scenario parse_scenario(const json& doc, const std::string& base_dir) {
  std::vector<std::string> unknown;
  Scenario sc;
  ordered_json echo;
  {
    Section root(doc, "", unknown);
    sc.name = root.get<std::string>("name", "scenario");
    echo["name"] = sc.name;

    // Bands.
    std::vector<Band> bands;
    const json& jb = root.raw("bands");
    if (!jb.is_array()) throw ConfigError("'bands' must be an array");
    for (std::size_t k = 0; k < jb.size(); ++k) {
      Section b(jb[k], "bands." + std::to_string(k), unknown);
      bands.push_back({b.require<std::string>("name"), b.require<double>("f_min_thz"),
                       b.require<double>("f_max_thz")});
    }
    try {
      sc.link.plan = BandPlan(bands);
    } catch (const Error& e) {
      throw ConfigError(std::string("bands: ") + e.what());
    }
    for (const Band& b : bands)
      echo["bands"].push_back({{"name", b.name}, {"f_min_thz", b.f_min_thz}, {"f_max_thz", b.f_max_thz}});

    // Grid.
    {
      Section g(root.raw("grid"), "grid", unknown);
      const double spacing = g.require<double>("spacing_ghz");
      const double rate = g.require<double>("symbol_rate_gbaud");
      const double roll = g.get("roll_off", 0.1);
      try {
        sc.link.grid = build_grid(sc.link.plan, spacing, rate, roll);
      } catch (const Error& e) {
        throw ConfigError(std::string("grid: ") + e.what());
      }
      echo["grid"] = {{"spacing_ghz", spacing}, {"symbol_rate_gbaud", rate}, {"roll_off", roll}};
    }

    // Fibers and spans.
    std::map<std::string, FiberSpan> fibers;
    {
      const json& jf = root.raw("fibers");
      if (!jf.is_object() || jf.empty()) throw ConfigError("'fibers' must be a non-empty object");
      for (const auto& [name, body] : jf.items()) {
        fibers[name] = parse_fiber(body, "fibers." + name, base_dir, unknown);
        echo["fibers"][name] = fiber_json(fibers[name]);
      }
    }
    const json& js = root.raw("spans");
    if (!js.is_array() || js.empty()) throw ConfigError("'spans' must be a non-empty array");
    for (std::size_t k = 0; k < js.size(); ++k) {
      Section s(js[k], "spans." + std::to_string(k), unknown);
      const std::string fiber = s.require<std::string>("fiber");
      auto it = fibers.find(fiber);
      if (it == fibers.end()) throw ConfigError("'" + s.child("fiber") + "' names unknown fiber '" + fiber + "'");
      FiberSpan span = it->second;
      span.length_km = s.require<double>("length_km");
      const int count = s.get("count", 1);
      if (count < 1) throw ConfigError("'" + s.child("count") + "' must be at least 1");
      for (int c = 0; c < count; ++c) sc.link.spans.push_back(span);
      echo["spans"].push_back({{"fiber", fiber}, {"length_km", span.length_km}, {"count", count}});
    }

    // Amplifiers: one object for every span, or one per span.
    {
      const json& ja = root.raw("amplifiers");
      if (ja.is_array()) {
        if (ja.size() != sc.link.spans.size())
          throw ConfigError("'amplifiers' array needs one entry per span (" +
                            std::to_string(sc.link.spans.size()) + ")");
        for (std::size_t k = 0; k < ja.size(); ++k) {
          sc.link.amps.push_back(parse_amp(ja[k], "amplifiers." + std::to_string(k), unknown));
          echo["amplifiers"].push_back(amp_json(sc.link.amps.back()));
        }
      } else {
        const AmplifierSpec a = parse_amp(ja, "amplifiers", unknown);
        sc.link.amps.assign(sc.link.spans.size(), a);
        echo["amplifiers"] = amp_json(a);
      }
    }

    // Link options.
    {
      const json empty = json::object();
      Section l(root.has("link") ? root.raw("link") : empty, "link", unknown);
      sc.link.isrs_enabled = l.get("isrs", true);
      sc.link.noise_bandwidth_ghz = l.get("noise_bandwidth_ghz", sc.link.grid[0].symbol_rate_gbaud);
      sc.link.raman_ctrl.rel_tol = l.get("raman_rel_tol", sc.link.raman_ctrl.rel_tol);
      sc.link.raman_ctrl.max_step_km = l.get("raman_max_step_km", sc.link.raman_ctrl.max_step_km);
      echo["link"] = {{"isrs", sc.link.isrs_enabled},
                      {"noise_bandwidth_ghz", sc.link.noise_bandwidth_ghz},
                      {"raman_rel_tol", sc.link.raman_ctrl.rel_tol},
                      {"raman_max_step_km", sc.link.raman_ctrl.max_step_km}};
    }
    try {
      sc.link.validate();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("link: ") + e.what());
    }

    // Launch spectrum.
    {
      const json dflt = {{"type", "flat"}, {"dbm", 0.0}};
      Section l(root.has("launch") ? root.raw("launch") : dflt, "launch", unknown);
      const std::string type = l.require<std::string>("type");
      if (type == "flat") {
        const double dbm = l.require<double>("dbm");
        sc.launch = uniform_cubic(sc.link.plan, {dbm, 0.0, 0.0, 0.0});
        echo["launch"] = {{"type", "flat"}, {"dbm", dbm}};
      } else if (type == "cubic") {
        const json& jc = l.raw("coefficients");
        if (!jc.is_object()) throw ConfigError("'launch.coefficients' must map bands to [c0, c1, c2, c3]");
        PerBandCubic cubic;
        ordered_json ec;
        for (const Band& b : sc.link.plan.bands()) {
          if (!jc.contains(b.name))
            throw ConfigError("'launch.coefficients' has no entry for band '" + b.name + "'");
          const json& row = jc.at(b.name);
          if (!row.is_array() || row.size() != 4)
            throw ConfigError("'launch.coefficients." + b.name + "' needs 4 numbers");
          CubicCoefficients c{};
          for (int k = 0; k < 4; ++k)
            c[k] = Section::convert<double>(row[k], "launch.coefficients." + b.name);
          cubic.bands[b.name] = c;
          ec[b.name] = c;
        }
        for (const auto& [band, v] : jc.items())
          if (!cubic.bands.count(band)) unknown.push_back("launch.coefficients." + band);
        sc.launch = cubic;
        echo["launch"] = {{"type", "cubic"}, {"coefficients", ec}};
      } else if (type == "explicit") {
        const json& jp = l.raw("powers_dbm");
        if (!jp.is_array() || jp.size() != sc.link.grid.size())
          throw ConfigError("'launch.powers_dbm' needs one value per channel (" +
                            std::to_string(sc.link.grid.size()) + ")");
        ExplicitPowers ex;
        for (const json& v : jp) ex.powers_w.push_back(dbm_to_w(Section::convert<double>(v, "launch.powers_dbm")));
        sc.launch = ex;
        echo["launch"] = {{"type", "explicit"}, {"powers_dbm", jp}};
      } else {
        throw ConfigError("'launch.type' must be 'flat', 'cubic' or 'explicit'");
      }
    }

    // Throughput curve.
    {
      const json dflt = {{"model", "shannon"}};
      Section t(root.has("throughput") ? root.raw("throughput") : dflt, "throughput", unknown);
      const std::string model = t.require<std::string>("model");
      if (model == "shannon") {
        sc.curve = ShannonCurve{};
        echo["throughput"] = {{"model", "shannon"}};
      } else if (model == "transponder" || model == "table") {
        TableCurve tc = model == "table"
                            ? TableCurve{read_pairs(t.raw("points"), "throughput.points", base_dir)}
                            : default_transponder_curve();
        try {
          validate(tc);
        } catch (const Error& e) {
          throw ConfigError(std::string("throughput: ") + e.what());
        }
        sc.curve = tc;
        echo["throughput"] = {{"model", "table"}, {"points", pairs_json(tc.points)}};
      } else {
        throw ConfigError("'throughput.model' must be 'shannon', 'transponder' or 'table'");
      }
    }

    // Optimizer, enforcement, sweep, output.
    {
      const json empty = json::object();
      Section o(root.has("optimizer") ? root.raw("optimizer") : empty, "optimizer", unknown);
      OptimizeOptions& op = sc.optimizer;
      op.restarts = o.get("restarts", op.restarts);
      op.max_evals = o.get("max_evals", op.max_evals);
      op.x_tol_db = o.get("x_tol_db", op.x_tol_db);
      op.f_tol_relative = o.get("f_tol_relative", op.f_tol_relative);
      op.seed = o.get<std::uint64_t>("seed", op.seed);
      op.initial_step_db = o.get("initial_step_db", op.initial_step_db);
      op.restart_spread_db = o.get("restart_spread_db", op.restart_spread_db);
      op.threads = o.get("threads", op.threads);
      op.bounds = parse_bounds(o, op.bounds);
      if (op.restarts < 1 || op.max_evals < 1 || op.threads < 1)
        throw ConfigError("optimizer restarts, max_evals and threads must be positive");
      echo["optimizer"] = {{"restarts", op.restarts},          {"max_evals", op.max_evals},
                           {"x_tol_db", op.x_tol_db},          {"f_tol_relative", op.f_tol_relative},
                           {"seed", op.seed},                  {"initial_step_db", op.initial_step_db},
                           {"restart_spread_db", op.restart_spread_db}, {"threads", op.threads},
                           {"min_dbm", op.bounds.min_dbm},     {"max_dbm", op.bounds.max_dbm}};
    }
    {
      const json empty = json::object();
      Section e(root.has("enforce") ? root.raw("enforce") : empty, "enforce", unknown);
      EnforceOptions& en = sc.enforce;
      en.tol_db = e.get("tol_db", en.tol_db);
      en.max_iters = e.get("max_iters", en.max_iters);
      en.damping = e.get("damping", en.damping);
      en.bounds = parse_bounds(e, en.bounds);
      if (!(en.tol_db > 0.0) || en.max_iters < 0 || !(en.damping > 0.0) || en.damping > 1.0)
        throw ConfigError("enforce needs tol_db > 0, max_iters >= 0 and damping in (0, 1]");
      echo["enforce"] = {{"tol_db", en.tol_db}, {"max_iters", en.max_iters}, {"damping", en.damping},
                         {"min_dbm", en.bounds.min_dbm}, {"max_dbm", en.bounds.max_dbm}};
    }
    {
      const json empty = json::object();
      Section w(root.has("sweep") ? root.raw("sweep") : empty, "sweep", unknown);
      sc.sweep.min_dbm = w.get("min_dbm", sc.sweep.min_dbm);
      sc.sweep.max_dbm = w.get("max_dbm", sc.sweep.max_dbm);
      sc.sweep.step_db = w.get("step_db", sc.sweep.step_db);
      if (!(sc.sweep.step_db > 0.0) || sc.sweep.max_dbm < sc.sweep.min_dbm)
        throw ConfigError("sweep needs step_db > 0 and max_dbm >= min_dbm");
      echo["sweep"] = {{"min_dbm", sc.sweep.min_dbm}, {"max_dbm", sc.sweep.max_dbm},
                       {"step_db", sc.sweep.step_db}};
    }
    {
      const json empty = json::object();
      Section u(root.has("output") ? root.raw("output") : empty, "output", unknown);
      sc.output.plot_data = u.get("plot_data", sc.output.plot_data);
      sc.output.prefix = u.get<std::string>("prefix", sc.output.prefix);
      echo["output"] = {{"plot_data", sc.output.plot_data}, {"prefix", sc.output.prefix}};
    }
  }  // Section destructors record unknown keys here.

  if (!unknown.empty()) {
    std::sort(unknown.begin(), unknown.end());
    std::string msg = "unknown config keys:";
    for (const std::string& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  sc.echo = std::move(echo);
  return sc;
}

std::string bundled_scenario_path(const std::string& name) {
  return (fs::path(MBPOWER_SCENARIO_DIR) / (name + ".json")).string();
}

Scenario load_scenario(const std::string& path_or_name, const std::vector<std::string>& overrides) {
  fs::path path(path_or_name);
  if (!fs::exists(path)) {
    const fs::path bundled = bundled_scenario_path(path_or_name);
    if (!fs::exists(bundled)) throw ConfigError("config file not found: " + path_or_name);
    path = bundled;
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  apply_overrides(doc, overrides);
  return parse_scenario(doc, path.parent_path().string());
}

}  // namespace mbpower
