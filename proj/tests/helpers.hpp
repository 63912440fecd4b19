#pragma once

#include <vector>

#include "mbpower/noise.hpp"
#include "mbpower/raman.hpp"
#include "mbpower/spectrum.hpp"

namespace mbpower::testing {

inline BandPlan clst_plan() {
  return BandPlan({{"L", 184.50, 190.35}, {"C", 190.75, 196.60}, {"S", 197.00, 202.85}});
}

/// Channels at explicit centers (THz), all in one wide band.
inline ChannelGrid grid_at(const std::vector<double>& centers_thz, double rate_gbaud = 100.0,
                           double roll_off = 0.1) {
  BandPlan plan({{"X", centers_thz.front() - 1.0, centers_thz.back() + 1.0}});
  std::vector<Channel> chans;
  for (std::size_t i = 0; i < centers_thz.size(); ++i)
    chans.push_back({static_cast<int>(i), centers_thz[i], rate_gbaud, roll_off, "X"});
  return ChannelGrid(chans, plan);
}

inline FiberSpan lossy_span(double alpha_db = 0.2, double length = 100.0) {
  FiberSpan s;
  s.length_km = length;
  s.alpha_db_per_km = Table(alpha_db);
  s.gamma = Table(1.3);
  s.raman.profile = TriangularGain{0.0, 0.0};
  return s;
}

/// Link with one band "X" holding the given channels.
inline LinkSpec simple_link(const std::vector<double>& centers_thz, const FiberSpan& span,
                            int spans, double nf_db = 5.0) {
  LinkSpec link;
  link.plan = BandPlan({{"X", centers_thz.front() - 1.0, centers_thz.back() + 1.0}});
  link.grid = grid_at(centers_thz);
  link.spans.assign(spans, span);
  AmplifierSpec amp;
  amp.nf_db["X"] = nf_db;
  link.amps.assign(spans, amp);
  link.noise_bandwidth_ghz = 100.0;
  return link;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace mbpower::testing
