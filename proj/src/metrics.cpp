#include "mbpower/metrics.hpp"

#include <cmath>
#include <limits>

namespace mbpower {

void validate(const ThroughputCurve& curve) {
  const auto* table = std::get_if<TableCurve>(&curve);
  if (!table) return;
  if (table->points.empty()) throw Error("throughput table is empty");
  for (std::size_t k = 1; k < table->points.size(); ++k) {
    if (!(table->points[k].first > table->points[k - 1].first) ||
        !(table->points[k].second > table->points[k - 1].second))
      throw Error("throughput table must be strictly increasing in GSNR and throughput");
  }
}

TableCurve default_transponder_curve() {
  constexpr double kGapDb = 1.5, kCapGbps = 1400.0, kRateGbaud = 100.0;
  TableCurve t;
  for (double g = -5.0;; g += 0.5) {
    const double v = 2.0 * kRateGbaud * std::log2(1.0 + db_to_lin(g - kGapDb));
    if (v >= kCapGbps) {
      // Close the table exactly on the saturation point.
      const double g_cap = lin_to_db(std::exp2(kCapGbps / (2.0 * kRateGbaud)) - 1.0) + kGapDb;
      t.points.emplace_back(g_cap, kCapGbps);
      break;
    }
    t.points.emplace_back(g, v);
  }
  return t;
}

double gsnr(double p_launch, double p_ase, double p_nli) {
  if (p_launch < 0.0 || p_ase < 0.0 || p_nli < 0.0) throw Error("powers must be non-negative");
  const double noise = p_ase + p_nli;
  if (!(noise > 0.0)) throw Error("GSNR undefined: zero noise power");
  return p_launch / noise;
}

double throughput(double gsnr_lin, double symbol_rate_gbaud, const ThroughputCurve& curve) {
  if (std::holds_alternative<ShannonCurve>(curve))
    return 2.0 * symbol_rate_gbaud * std::log2(1.0 + std::max(gsnr_lin, 0.0));
  const auto& pts = std::get<TableCurve>(curve).points;
  if (!(gsnr_lin > 0.0)) return pts.front().second;
  const double g = lin_to_db(gsnr_lin);
  return Table(pts)(g);
}

double total_throughput(const std::vector<ChannelReport>& reports) {
  double sum = 0.0;
  for (const ChannelReport& r : reports) sum += r.throughput_gbps;
  return sum * 1e-3;
}

double gap_3db(const ChannelReport& report) { return lin_to_db(report.gsnr_nli / report.osnr); }

ChannelReport make_report(int index, double f_center_thz, double p_launch, double p_ase,
                          double p_nli, double symbol_rate_gbaud, const ThroughputCurve& curve) {
  ChannelReport r;
  r.index = index;
  r.f_center_thz = f_center_thz;
  r.p_launch = p_launch;
  r.p_ase = p_ase;
  r.p_nli = p_nli;
  constexpr double inf = std::numeric_limits<double>::infinity();
  r.osnr = p_ase > 0.0 ? p_launch / p_ase : inf;
  r.gsnr_nli = p_nli > 0.0 ? p_launch / p_nli : inf;
  r.gsnr = gsnr(p_launch, p_ase, p_nli);
  r.throughput_gbps = throughput(r.gsnr, symbol_rate_gbaud, curve);
  return r;
}

double gsnr_peak_to_peak_db(const std::vector<ChannelReport>& reports) {
  if (reports.empty()) return 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const ChannelReport& r : reports) {
    const double g = lin_to_db(r.gsnr);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  return hi - lo;
}

}  // namespace mbpower
