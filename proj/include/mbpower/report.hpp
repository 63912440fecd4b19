#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbpower/metrics.hpp"
#include "mbpower/optimizer.hpp"
#include "mbpower/spectrum.hpp"

namespace mbpower {

inline constexpr int kReportFormatVersion = 1;

/// Per-channel CSV with a versioned header comment.
void write_channel_csv(std::ostream& out, const ChannelGrid& grid,
                       const std::vector<ChannelReport>& reports);

/// Frequency vs. launch power, OSNR, GSNR_NLI and GSNR (tab separated).
void write_plot_tsv(std::ostream& out, const std::vector<ChannelReport>& reports);

/// Summary figures of a set of reports: totals, GSNR spread, 3-dB gaps per band.
nlohmann::ordered_json summarize(const ChannelGrid& grid, const std::vector<ChannelReport>& reports);

nlohmann::ordered_json spectrum_json(const LaunchSpectrum& spec, const BandPlan& plan);

/// Fixed-format decimal used in every text output; "inf"/"-inf"/"nan" otherwise.
std::string format_number(double v, int decimals = 6);

}  // namespace mbpower
