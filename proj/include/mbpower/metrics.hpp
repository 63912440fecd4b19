#pragma once

#include <variant>
#include <vector>

#include "mbpower/common.hpp"

namespace mbpower {

/// Linear-unit quality figures of one channel at the receiver.
struct ChannelReport {
  int index = 0;
  double f_center_thz = 0.0;
  double p_launch = 0.0;  // W
  double p_ase = 0.0;     // W
  double p_nli = 0.0;     // W
  double osnr = 0.0;
  double gsnr_nli = 0.0;  // +inf when p_nli == 0
  double gsnr = 0.0;
  double throughput_gbps = 0.0;
};

struct ShannonCurve {};

/// (GSNR dB, Gb/s) points, strictly increasing in both, clamped at the ends.
struct TableCurve {
  std::vector<std::pair<double, double>> points;
};

using ThroughputCurve = std::variant<ShannonCurve, TableCurve>;

void validate(const ThroughputCurve& curve);

/// Shannon minus a 1.5 dB implementation gap for 100 GBaud, saturating at 1.4 Tb/s.
TableCurve default_transponder_curve();

double gsnr(double p_launch, double p_ase, double p_nli);
double throughput(double gsnr_lin, double symbol_rate_gbaud, const ThroughputCurve& curve);
double total_throughput(const std::vector<ChannelReport>& reports);  // Tb/s
double gap_3db(const ChannelReport& report);                          // dB

ChannelReport make_report(int index, double f_center_thz, double p_launch, double p_ase,
                          double p_nli, double symbol_rate_gbaud, const ThroughputCurve& curve);

/// Max minus min GSNR in dB.
double gsnr_peak_to_peak_db(const std::vector<ChannelReport>& reports);

}  // namespace mbpower
