#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "mbpower/nli.hpp"
#include "mbpower/oracle.hpp"

using namespace mbpower;
using namespace mbpower::testing;

TEST_CASE("oracle vanishes without nonlinearity") {
  FiberSpan s = lossy_span(0.2);
  s.gamma = Table(0.0);
  const ChannelGrid g = grid_at({193.5});
  const PowerProfile p = propagate(s, {1e-3}, g);
  CHECK(gn_integral_at(s, p, g, {1e-3}, 0, 101) == 0.0);
}

TEST_CASE("oracle is cubic in a lone channel's power") {
  FiberSpan s = lossy_span(0.2);
  const ChannelGrid g = grid_at({193.5});
  const PowerProfile p = propagate(s, {1e-3}, g);
  const double a = gn_integral_at(s, p, g, {1e-3}, 0, 151);
  const double b = gn_integral_at(s, p, g, {2e-3}, 0, 151);
  CHECK(b == doctest::Approx(8.0 * a).epsilon(1e-9));
}

TEST_CASE("closed-form SPM agrees with the oracle") {
  FiberSpan s = lossy_span(0.2);
  const ChannelGrid g = grid_at({193.5});
  const PowerProfile p = propagate(s, {1e-3}, g);
  const OracleResult o = gn_integral(s, p, g, {1e-3}, 0, {301});
  CHECK(o.converged);
  CHECK(std::abs(o.p_nli_w - o.p_nli_coarse_w) / o.p_nli_w < 0.01);
  const double closed = compute_span_eta(s, p, g).eta_spm[0] * 1e-9;
  CHECK(std::abs(lin_to_db(closed / o.p_nli_w)) < 0.5);
}

TEST_CASE("closed-form SPM+XPM agrees with the oracle on three channels") {
  FiberSpan s = lossy_span(0.2);
  const ChannelGrid g = grid_at({193.35, 193.5, 193.65});
  const std::vector<double> launch(3, 1e-3);
  const PowerProfile p = propagate(s, launch, g);
  const auto e = compute_span_eta(s, p, g);
  const OracleResult o = gn_integral(s, p, g, launch, 1);
  CHECK(o.converged);
  const double closed = (e.eta_spm[1] + e.eta_xpm[1][0] + e.eta_xpm[1][2]) * 1e-9;
  CHECK(std::abs(lin_to_db(closed / o.p_nli_w)) < 1.5);
}

TEST_CASE("oracle limits") {
  FiberSpan s = lossy_span(0.2);
  const ChannelGrid g = grid_at({193.0, 193.2, 193.4, 193.6, 193.8, 194.0});
  const std::vector<double> launch(6, 1e-3);
  const PowerProfile p = propagate(s, launch, g);
  CHECK_THROWS_AS(gn_integral(s, p, g, launch, 0, {51}), Error);
  const ChannelGrid g1 = grid_at({193.5});
  const PowerProfile p1 = propagate(s, {1e-3}, g1);
  CHECK_THROWS_AS(gn_integral(s, p1, g1, {1e-3}, 0, {2}), Error);
  CHECK_THROWS_AS(gn_integral(s, p1, g1, {1e-3}, 1, {51}), Error);
}
