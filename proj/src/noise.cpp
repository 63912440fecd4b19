#include "mbpower/noise.hpp"

namespace mbpower {

void LinkSpec::validate() const {
  if (spans.empty()) throw Error("link has no spans");
  if (amps.size() != spans.size()) throw Error("link needs exactly one amplifier per span");
  if (grid.empty()) throw Error("link has no channels");
  if (!(noise_bandwidth_ghz > 0.0)) throw Error("noise bandwidth must be positive");
  for (const FiberSpan& s : spans) s.validate(grid);
  for (const AmplifierSpec& a : amps) {
    for (const Band& b : plan.bands()) {
      auto it = a.nf_db.find(b.name);
      if (it == a.nf_db.end()) throw Error("amplifier has no noise figure for band '" + b.name + "'");
      if (!(it->second > 0.0)) throw Error("noise figure must be positive in band '" + b.name + "'");
    }
  }
}

std::vector<double> amp_gains(const PowerProfile& profile, const std::vector<double>& launch) {
  const auto& out = profile.powers.back();
  if (out.size() != launch.size()) throw Error("profile and launch sizes differ");
  std::vector<double> g(launch.size());
  for (std::size_t i = 0; i < launch.size(); ++i) g[i] = launch[i] / out[i];
  return g;
}

std::vector<PowerProfile> span_profiles(const LinkSpec& link, const std::vector<double>& launch) {
  std::vector<PowerProfile> profiles;
  profiles.reserve(link.spans.size());
  for (std::size_t s = 0; s < link.spans.size(); ++s) {
    std::size_t same = s;
    for (std::size_t r = 0; r < s; ++r)
      if (link.spans[r] == link.spans[s]) {
        same = r;
        break;
      }
    if (same != s) {
      profiles.push_back(profiles[same]);
      continue;
    }
    try {
      if (link.isrs_enabled) {
        profiles.push_back(propagate(link.spans[s], launch, link.grid, link.raman_ctrl));
      } else {
        const std::vector<double> unit(launch.size(), 1.0);
        PowerProfile p = propagate(without_raman(link.spans[s]), unit, link.grid, link.raman_ctrl);
        for (auto& row : p.powers)
          for (std::size_t i = 0; i < row.size(); ++i) row[i] *= launch[i];
        profiles.push_back(std::move(p));
      }
    } catch (const Error& e) {
      throw Error("span " + std::to_string(s) + ": " + e.what());
    }
  }
  return profiles;
}

std::vector<double> ase_accumulate(const LinkSpec& link, const std::vector<double>& launch) {
  return ase_accumulate(link, launch, span_profiles(link, launch));
}

std::vector<double> ase_accumulate(const LinkSpec& link, const std::vector<double>& launch,
                                   const std::vector<PowerProfile>& profiles) {
  if (profiles.size() != link.spans.size()) throw Error("need one profile per span");
  const std::size_t n = link.grid.size();
  const double bn = link.noise_bandwidth_ghz * 1e9;
  std::vector<double> ase(n, 0.0);
  for (std::size_t s = 0; s < profiles.size(); ++s) {
    const std::vector<double> g = amp_gains(profiles[s], launch);
    const AmplifierSpec& amp = link.amps[s];
    for (std::size_t i = 0; i < n; ++i) {
      if (g[i] < 1.0) continue;
      const double nf = db_to_lin(amp.nf_db.at(link.grid[i].band));
      ase[i] += constants::kPlanck * link.grid[i].f_center_hz() * bn * (g[i] * nf - 1.0);
    }
  }
  return ase;
}

}  // namespace mbpower
