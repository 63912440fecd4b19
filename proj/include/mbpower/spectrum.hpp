#pragma once

#include <array>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mbpower/common.hpp"

namespace mbpower {

struct Band {
  std::string name;
  double f_min_thz = 0.0;
  double f_max_thz = 0.0;

  double width_thz() const { return f_max_thz - f_min_thz; }
  bool operator==(const Band&) const = default;
};

/// Ordered, disjoint frequency bands.
class BandPlan {
 public:
  BandPlan() = default;
  explicit BandPlan(std::vector<Band> bands);

  const std::vector<Band>& bands() const { return bands_; }
  std::size_t size() const { return bands_.size(); }
  const Band& band(const std::string& name) const;
  bool operator==(const BandPlan&) const = default;

 private:
  std::vector<Band> bands_;
};

struct Channel {
  int index = 0;
  double f_center_thz = 0.0;
  double symbol_rate_gbaud = 0.0;
  double roll_off = 0.0;
  std::string band;

  double occupied_bw_thz() const { return symbol_rate_gbaud * (1.0 + roll_off) * 1e-3; }
  double symbol_rate_hz() const { return symbol_rate_gbaud * 1e9; }
  double f_center_hz() const { return f_center_thz * 1e12; }
  bool operator==(const Channel&) const = default;
};

class ChannelGrid {
 public:
  ChannelGrid() = default;
  /// Checks ordering, band containment and non-overlap against the plan.
  ChannelGrid(std::vector<Channel> channels, const BandPlan& plan);

  const std::vector<Channel>& channels() const { return channels_; }
  const Channel& operator[](std::size_t i) const { return channels_[i]; }
  std::size_t size() const { return channels_.size(); }
  bool empty() const { return channels_.empty(); }

  /// Indices of the channels belonging to a band, ascending in frequency.
  std::vector<std::size_t> band_members(const std::string& band) const;
  double f_min_thz() const { return channels_.front().f_center_thz; }
  double f_max_thz() const { return channels_.back().f_center_thz; }
  bool operator==(const ChannelGrid&) const = default;

 private:
  std::vector<Channel> channels_;
};

/// Coefficients of power_dBm(x) = c0 + c1 x + c2 x^2 + c3 x^3, x in [0, 1]
/// from the lowest to the highest channel of the band.
using CubicCoefficients = std::array<double, 4>;

struct PerBandCubic {
  std::map<std::string, CubicCoefficients> bands;
  bool operator==(const PerBandCubic&) const = default;
};

struct ExplicitPowers {
  std::vector<double> powers_w;
  bool operator==(const ExplicitPowers&) const = default;
};

using LaunchSpectrum = std::variant<PerBandCubic, ExplicitPowers>;

/// Places the largest number of channels that fit each band on a uniform
/// grid of the given spacing, centered in the band.
ChannelGrid build_grid(const BandPlan& plan, double spacing_ghz, double symbol_rate_gbaud,
                       double roll_off);

/// Per-channel launch power in W.
std::vector<double> eval_launch(const LaunchSpectrum& spec, const ChannelGrid& grid);

/// Normalized position of channel i inside its band (0 lowest, 1 highest;
/// 0 for a band holding a single channel).
double band_position(const ChannelGrid& grid, std::size_t i);

/// Same cubic in every band of the plan.
PerBandCubic uniform_cubic(const BandPlan& plan, const CubicCoefficients& c);

}  // namespace mbpower
