#pragma once

#include <map>
#include <string>
#include <vector>

#include "mbpower/raman.hpp"
#include "mbpower/spectrum.hpp"

namespace mbpower {

enum class GainPolicy {
  /// Every amplifier restores the launch spectrum at the next span input.
  ReEqualize,
};

struct AmplifierSpec {
  std::map<std::string, double> nf_db;  // per band
  GainPolicy policy = GainPolicy::ReEqualize;
  bool operator==(const AmplifierSpec&) const = default;
};

struct LinkSpec {
  BandPlan plan;
  ChannelGrid grid;
  std::vector<FiberSpan> spans;
  std::vector<AmplifierSpec> amps;  // one per span, at the span output
  bool isrs_enabled = true;
  double noise_bandwidth_ghz = 100.0;
  RamanControl raman_ctrl;

  void validate() const;
};

/// Amplifier gains that restore `launch` from the span output powers.
/// Gains below one are ideal noiseless attenuation.
std::vector<double> amp_gains(const PowerProfile& profile, const std::vector<double>& launch);

/// Power profile of every span for a re-equalized link launching `launch`.
/// Spans with identical parameters share one solve. With ISRS disabled the
/// profiles are launch-independent pure-loss solutions scaled to `launch`.
std::vector<PowerProfile> span_profiles(const LinkSpec& link, const std::vector<double>& launch);

/// Accumulated ASE per channel in W over the link noise bandwidth.
std::vector<double> ase_accumulate(const LinkSpec& link, const std::vector<double>& launch);
std::vector<double> ase_accumulate(const LinkSpec& link, const std::vector<double>& launch,
                                   const std::vector<PowerProfile>& profiles);

}  // namespace mbpower
