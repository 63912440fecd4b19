#include "mbpower/spectrum.hpp"

#include <cmath>

namespace mbpower {

BandPlan::BandPlan(std::vector<Band> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) throw Error("band plan is empty");
  for (std::size_t k = 0; k < bands_.size(); ++k) {
    const Band& b = bands_[k];
    if (!(b.f_max_thz > b.f_min_thz))
      throw Error("band '" + b.name + "' has f_max <= f_min");
    if (k > 0 && !(b.f_min_thz > bands_[k - 1].f_max_thz))
      throw Error("band '" + b.name + "' overlaps or precedes band '" + bands_[k - 1].name + "'");
    for (std::size_t j = 0; j < k; ++j)
      if (bands_[j].name == b.name) throw Error("duplicate band name '" + b.name + "'");
  }
}

const Band& BandPlan::band(const std::string& name) const {
  for (const Band& b : bands_)
    if (b.name == name) return b;
  throw Error("unknown band '" + name + "'");
}

ChannelGrid::ChannelGrid(std::vector<Channel> channels, const BandPlan& plan)
    : channels_(std::move(channels)) {
  for (std::size_t k = 0; k < channels_.size(); ++k) {
    const Channel& ch = channels_[k];
    const Band& b = plan.band(ch.band);
    if (ch.symbol_rate_gbaud <= 0.0) throw Error("channel symbol rate must be positive");
    if (ch.roll_off < 0.0 || ch.roll_off > 1.0) throw Error("roll-off must lie in [0, 1]");
    // Band edges bound the channel centers; spectra may spill into guard bands.
    if (ch.f_center_thz < b.f_min_thz || ch.f_center_thz > b.f_max_thz)
      throw Error("channel " + std::to_string(ch.index) + " lies outside band '" + b.name + "'");
    if (k > 0) {
      const Channel& prev = channels_[k - 1];
      if (!(ch.f_center_thz > prev.f_center_thz))
        throw Error("channels must be sorted by ascending frequency");
      const double min_sep = 0.5 * (ch.occupied_bw_thz() + prev.occupied_bw_thz());
      if (ch.f_center_thz - prev.f_center_thz < min_sep - 1e-12)
        throw Error("channels " + std::to_string(prev.index) + " and " +
                    std::to_string(ch.index) + " overlap");
    }
  }
}

std::vector<std::size_t> ChannelGrid::band_members(const std::string& band) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < channels_.size(); ++i)
    if (channels_[i].band == band) out.push_back(i);
  return out;
}

ChannelGrid build_grid(const BandPlan& plan, double spacing_ghz, double symbol_rate_gbaud,
                       double roll_off) {
  const double occupied_ghz = symbol_rate_gbaud * (1.0 + roll_off);
  if (spacing_ghz < occupied_ghz)
    throw Error("channel spacing is smaller than the occupied bandwidth");
  const double spacing_thz = spacing_ghz * 1e-3;

  std::vector<Channel> channels;
  for (const Band& b : plan.bands()) {
    if (b.width_thz() < occupied_ghz * 1e-3)
      throw Error("band '" + b.name + "' is narrower than one channel");
    // Outer channel centers span strictly less than the band width. The small
    // slack absorbs rounding in widths that are exact multiples of the spacing.
    const auto n = static_cast<int>(std::ceil(b.width_thz() / spacing_thz - 1e-9));
    const double span = (n - 1) * spacing_thz;
    const double first = b.f_min_thz + 0.5 * (b.width_thz() - span);
    for (int k = 0; k < n; ++k) {
      Channel ch;
      ch.index = static_cast<int>(channels.size());
      ch.f_center_thz = first + k * spacing_thz;
      ch.symbol_rate_gbaud = symbol_rate_gbaud;
      ch.roll_off = roll_off;
      ch.band = b.name;
      channels.push_back(std::move(ch));
    }
  }
  return ChannelGrid(std::move(channels), plan);
}

double band_position(const ChannelGrid& grid, std::size_t i) {
  const std::string& band = grid[i].band;
  double lo = grid[i].f_center_thz, hi = lo;
  for (const Channel& ch : grid.channels()) {
    if (ch.band != band) continue;
    lo = std::min(lo, ch.f_center_thz);
    hi = std::max(hi, ch.f_center_thz);
  }
  if (hi <= lo) return 0.0;
  return (grid[i].f_center_thz - lo) / (hi - lo);
}

std::vector<double> eval_launch(const LaunchSpectrum& spec, const ChannelGrid& grid) {
  if (const auto* ex = std::get_if<ExplicitPowers>(&spec)) {
    if (ex->powers_w.size() != grid.size())
      throw Error("explicit launch has " + std::to_string(ex->powers_w.size()) +
                  " powers for " + std::to_string(grid.size()) + " channels");
    for (double p : ex->powers_w)
      if (!(p > 0.0) || !std::isfinite(p)) throw Error("explicit launch powers must be positive");
    return ex->powers_w;
  }

  const auto& cubic = std::get<PerBandCubic>(spec);
  std::vector<double> out(grid.size());
  std::map<std::string, std::pair<double, double>> extent;
  for (const Channel& ch : grid.channels()) {
    auto [it, fresh] = extent.try_emplace(ch.band, ch.f_center_thz, ch.f_center_thz);
    if (!fresh) {
      it->second.first = std::min(it->second.first, ch.f_center_thz);
      it->second.second = std::max(it->second.second, ch.f_center_thz);
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Channel& ch = grid[i];
    auto it = cubic.bands.find(ch.band);
    if (it == cubic.bands.end())
      throw Error("launch spectrum has no coefficients for band '" + ch.band + "'");
    const auto [lo, hi] = extent.at(ch.band);
    const double x = hi > lo ? (ch.f_center_thz - lo) / (hi - lo) : 0.0;
    const CubicCoefficients& c = it->second;
    const double dbm = c[0] + x * (c[1] + x * (c[2] + x * c[3]));
    if (!std::isfinite(dbm)) throw Error("launch spectrum is not finite in band '" + ch.band + "'");
    out[i] = dbm_to_w(dbm);
  }
  return out;
}

PerBandCubic uniform_cubic(const BandPlan& plan, const CubicCoefficients& c) {
  PerBandCubic out;
  for (const Band& b : plan.bands()) out.bands[b.name] = c;
  return out;
}

}  // namespace mbpower
