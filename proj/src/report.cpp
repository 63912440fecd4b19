#include "mbpower/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace mbpower {

using nlohmann::ordered_json;

std::string format_number(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

namespace {

// JSON has no infinities; unbounded ratios become null.
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v, 9));
}

}  // namespace

void write_channel_csv(std::ostream& out, const ChannelGrid& grid,
                       const std::vector<ChannelReport>& reports) {
  out << "# mbpower channel report v" << kReportFormatVersion << "\n";
  out << "index,f_THz,band,p_launch_dBm,p_ase_dBm,p_nli_dBm,osnr_dB,gsnr_nli_dB,gsnr_dB,"
         "gap_3db_dB,throughput_Gbps\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ChannelReport& r = reports[i];
    out << r.index << ',' << format_number(r.f_center_thz) << ',' << grid[i].band << ','
        << format_number(w_to_dbm(r.p_launch)) << ',' << format_number(w_to_dbm(r.p_ase)) << ','
        << format_number(w_to_dbm(r.p_nli)) << ',' << format_number(lin_to_db(r.osnr)) << ','
        << format_number(lin_to_db(r.gsnr_nli)) << ',' << format_number(lin_to_db(r.gsnr)) << ','
        << format_number(gap_3db(r)) << ',' << format_number(r.throughput_gbps) << '\n';
  }
}

void write_plot_tsv(std::ostream& out, const std::vector<ChannelReport>& reports) {
  out << "# f_THz\tp_launch_dBm\tosnr_dB\tgsnr_nli_dB\tgsnr_dB\n";
  for (const ChannelReport& r : reports)
    out << format_number(r.f_center_thz) << '\t' << format_number(w_to_dbm(r.p_launch)) << '\t'
        << format_number(lin_to_db(r.osnr)) << '\t' << format_number(lin_to_db(r.gsnr_nli)) << '\t'
        << format_number(lin_to_db(r.gsnr)) << '\n';
}

ordered_json summarize(const ChannelGrid& grid, const std::vector<ChannelReport>& reports) {
  ordered_json s;
  s["channels"] = reports.size();
  s["total_Tbps"] = num(total_throughput(reports));

  double gmin = INFINITY, gmax = -INFINITY, gap_sum = 0.0;
  std::size_t gap_n = 0;
  std::map<std::string, std::pair<double, std::size_t>> per_band;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const double g = lin_to_db(reports[i].gsnr);
    gmin = std::min(gmin, g);
    gmax = std::max(gmax, g);
    const double gap = gap_3db(reports[i]);
    if (std::isfinite(gap)) {
      gap_sum += gap;
      ++gap_n;
      auto& b = per_band[grid[i].band];
      b.first += gap;
      ++b.second;
    }
  }
  s["gsnr_dB"] = {{"min", num(gmin)}, {"max", num(gmax)}, {"peak_to_peak", num(gmax - gmin)}};
  ordered_json gaps;
  gaps["mean"] = gap_n ? num(gap_sum / static_cast<double>(gap_n)) : ordered_json(nullptr);
  gaps["max_deviation_from_3dB"] = num(rule_residual_db(reports));
  ordered_json bands;
  for (const Channel& ch : grid.channels()) {
    if (bands.contains(ch.band)) continue;
    auto it = per_band.find(ch.band);
    bands[ch.band] = it == per_band.end() ? ordered_json(nullptr)
                                          : num(it->second.first / static_cast<double>(it->second.second));
  }
  gaps["band_mean"] = bands;
  s["gap_3db_dB"] = gaps;
  return s;
}

ordered_json spectrum_json(const LaunchSpectrum& spec, const BandPlan& plan) {
  if (const auto* cubic = std::get_if<PerBandCubic>(&spec)) {
    ordered_json c;
    for (const Band& b : plan.bands()) {
      ordered_json row = ordered_json::array();
      for (double v : cubic->bands.at(b.name)) row.push_back(num(v));
      c[b.name] = row;
    }
    return {{"type", "cubic"}, {"coefficients", c}};
  }
  ordered_json p = ordered_json::array();
  for (double w : std::get<ExplicitPowers>(spec).powers_w) p.push_back(num(w_to_dbm(w)));
  return {{"type", "explicit"}, {"powers_dbm", p}};
}

}  // namespace mbpower
