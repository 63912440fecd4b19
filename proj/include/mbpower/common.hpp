#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mbpower {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace constants {
inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kThreeDb = 3.0102999566398120;  // 10 log10(2)
}  // namespace constants

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_w(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double w_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// dB/km to 1/km (power attenuation).
inline double db_per_km_to_neper(double db_per_km) {
  return db_per_km * std::log(10.0) / 10.0;
}

/// Piecewise-linear table y(x), clamped to the end values outside its range.
/// A single point is a constant.
class Table {
 public:
  Table() = default;
  explicit Table(double constant) : points_{{0.0, constant}} {}
  explicit Table(std::vector<std::pair<double, double>> points)
      : points_(std::move(points)) {
    if (points_.empty()) throw Error("table needs at least one point");
    for (std::size_t k = 1; k < points_.size(); ++k)
      if (!(points_[k].first > points_[k - 1].first))
        throw Error("table abscissae must be strictly increasing");
  }

  double operator()(double x) const {
    if (points_.empty()) throw Error("empty table");
    if (x <= points_.front().first) return points_.front().second;
    if (x >= points_.back().first) return points_.back().second;
    auto hi = std::upper_bound(points_.begin(), points_.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  }

  const std::vector<std::pair<double, double>>& points() const { return points_; }
  bool operator==(const Table&) const = default;

 private:
  std::vector<std::pair<double, double>> points_;
};

}  // namespace mbpower
