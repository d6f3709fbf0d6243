#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pinfield/green.hpp"
#include "pinfield/scans.hpp"

using namespace pinfield;

namespace {

const BoundConstants& constants(int d) {
  static const BoundConstants k2 = estimate_constants(Potential::gaussian(), 2);
  static const BoundConstants k3 = estimate_constants(Potential::gaussian(), 3);
  return d == 2 ? k2 : k3;
}

}  // namespace

TEST_CASE("d2 scan: zero disorder gives zeros") {
  const int Ls[] = {4, 8, 16};
  const auto r = scan_overlap_scaling_d2(Ls, Potential::gaussian(), DisorderModel::zero(), 0.0, constants(2), {});
  REQUIRE(r.points.size() == 3);
  for (const auto& p : r.points) {
    CHECK(p.value == 0.0);
    CHECK(p.comparison == 0.0);
    CHECK(p.bound < 0.0);
  }
  CHECK_FALSE(r.positive);
  CHECK(r.above_bound);
}

TEST_CASE("d2 curve: close to 2/pi at L = 16 and stabilizing") {
  const int Ls[] = {4, 8, 16};
  const auto r = overlap_lower_curve_d2(Ls, 1.0);
  CHECK(r.points[2].comparison == doctest::Approx(2.0 / std::numbers::pi).epsilon(0.15));
  CHECK(r.points[0].comparison == doctest::Approx(0.596).epsilon(2e-3));
  CHECK(r.points[1].comparison == doctest::Approx(0.613).epsilon(2e-3));
  CHECK(r.comparison_stable);
  CHECK(r.positive);
  REQUIRE(r.has_fit);
  CHECK(r.limit_proxy > 0.0);
  CHECK(r.limit_proxy < 1.0);
}

TEST_CASE("d2 scan: eps = 0 Gaussian route matches twice the comparison curve") {
  const int Ls[] = {2, 4};
  ScanOptions opt;
  opt.replicas = 200;
  opt.master_seed = 9;
  const auto r = scan_overlap_scaling_d2(Ls, Potential::gaussian(), DisorderModel::gaussian(1.0), 0.0, constants(2), opt);
  for (const auto& p : r.points) {
    CHECK(p.engine == "exact");
    CHECK(std::abs(p.value - 2.0 * p.comparison) < 4.0 * p.error);
    CHECK(p.bound < p.comparison);
  }
  CHECK(r.positive);
  CHECK(r.above_bound);
}

TEST_CASE("d2 scan: MCMC at eps = 10 is positive") {
  const int Ls[] = {1, 2};
  ScanOptions opt;
  opt.replicas = 8;
  opt.engine = Engine::mcmc;
  opt.sampler.sweeps = 4000;
  opt.sampler.burn_in = 200;
  opt.sampler.per_site = false;
  const auto r = scan_overlap_scaling_d2(Ls, Potential::gaussian(), DisorderModel::gaussian(1.0), 10.0, constants(2), opt);
  for (const auto& p : r.points) CHECK(p.engine == "mcmc");
  CHECK(r.positive);
  CHECK(r.above_bound);
  CHECK_FALSE(r.has_fit);
  const auto again = scan_overlap_scaling_d2(Ls, Potential::gaussian(), DisorderModel::gaussian(1.0), 10.0, constants(2), opt);
  CHECK(again.points[1].value == r.points[1].value);
}

TEST_CASE("d>=3 scan: zero disorder") {
  const int Ls[] = {1, 2};
  const auto& k = constants(3);
  const auto r = scan_overlap_dgeq3(3, Ls, Potential::gaussian(), DisorderModel::zero(), 0.0, k, {});
  CHECK(k.B1.value >= 1.0);
  for (const auto& p : r.points) {
    CHECK(p.value == 0.0);
    CHECK(p.bound == doctest::Approx(-std::log(k.B1.value)));
    CHECK(p.bound <= 0.0);
  }
  CHECK(r.above_bound);
}

TEST_CASE("d>=3 scan: eps = 0 per-site overlap against the average Green diagonal") {
  const int Ls[] = {1, 2};
  ScanOptions opt;
  opt.replicas = 100;
  const auto r = scan_overlap_dgeq3(3, Ls, Potential::gaussian(), DisorderModel::gaussian(1.0), 0.0, constants(3), opt);
  const double g_inf = infinite_volume_green_origin(3);
  CHECK(r.limit_proxy == doctest::Approx(g_inf));
  CHECK(r.points[0].comparison < r.points[1].comparison);
  CHECK(r.points[1].comparison < g_inf);
  for (const auto& p : r.points) {
    CHECK(p.engine == "exact");
    CHECK(std::abs(p.value - p.comparison) < 4.0 * p.error);
  }
  CHECK(r.above_bound);
}

TEST_CASE("d>=3 scan: comparison scales with the second moment") {
  const int Ls[] = {1};
  ScanOptions opt;
  opt.replicas = 4;
  const auto& k = constants(3);
  const double log_term = std::log(k.B1.value + k.B2.value * 0.0);
  const auto a = scan_overlap_dgeq3(3, Ls, Potential::gaussian(), DisorderModel::gaussian(1.0), 0.0, k, opt);
  const auto b = scan_overlap_dgeq3(3, Ls, Potential::gaussian(), DisorderModel::gaussian(2.0), 0.0, k, opt);
  CHECK(b.points[0].comparison == doctest::Approx(4.0 * a.points[0].comparison).epsilon(1e-14));
  CHECK(b.points[0].bound + log_term == doctest::Approx(4.0 * (a.points[0].bound + log_term)).epsilon(1e-14));
  CHECK_THROWS_AS(scan_overlap_dgeq3(2, Ls, Potential::gaussian(), DisorderModel::zero(), 0.0, k, opt),
                  InvalidArgument);
}

TEST_CASE("constant field: h = 0 gives zeros") {
  const int Ls[] = {1, 2, 3};
  const auto r = scan_constant_field(2, Ls, Potential::gaussian(), 0.0, 1.0, {});
  for (const auto& p : r.points) {
    CHECK(p.value == 0.0);
    CHECK(p.comparison == 0.0);
  }
  CHECK_FALSE(r.has_fit);
}

TEST_CASE("constant field: d = 2 exponent") {
  const int Ls[] = {8, 16, 32};
  const auto r = scan_constant_field(2, Ls, Potential::gaussian(), 1.0, 0.0, {});
  REQUIRE(r.has_fit);
  CHECK(r.limit_proxy >= 3.8);
  CHECK(r.limit_proxy <= 4.2);
  CHECK(r.positive);
  for (const auto& p : r.points) CHECK(p.value == p.comparison);
}

TEST_CASE("constant field: strong pinning on the 3x3 box") {
  const int Ls[] = {1};
  const auto r = scan_constant_field(2, Ls, Potential::gaussian(), 1.0, 100.0, {});
  CHECK(r.points[0].engine == "exact");
  CHECK(r.points[0].value > 0.0);
  CHECK(r.points[0].value < r.points[0].comparison);
  CHECK(r.positive);
}

TEST_CASE("scans: input validation") {
  const int bad[] = {4, 4};
  CHECK_THROWS_AS(overlap_lower_curve_d2(bad, 1.0), InvalidArgument);
  CHECK_THROWS_AS(overlap_lower_curve_d2(std::span<const int>{}, 1.0), InvalidArgument);
  const int Ls[] = {1};
  CHECK_THROWS_AS(scan_constant_field(2, Ls, Potential::gaussian(), -1.0, 0.0, {}), InvalidArgument);
  CHECK(linear_size(4) == 10.0);
}
