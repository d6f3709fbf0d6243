#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "pinfield/gaussian.hpp"
#include "pinfield/green.hpp"
#include "pinfield/philox.hpp"

using namespace pinfield;

namespace {

const double kPi = std::numbers::pi;

Volume domino() { return Volume::from_sites(2, {{0, 0}, {1, 0}}); }

FieldConfig random_field(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
  CounterRng rng(seed, 0);
  FieldConfig eta{std::vector<double>(n)};
  for (double& v : eta.values) v = sigma * rng.normal();
  return eta;
}

}  // namespace

TEST_CASE("precision matrix entries") {
  SUBCASE("single site") {
    const auto a = precision_matrix(Volume::box(2, 0), {}, 1.0).dense();
    REQUIRE(a.rows() == 1);
    CHECK(a(0, 0) == 0.5);
  }
  SUBCASE("domino") {
    const auto a = precision_matrix(domino(), {}, 1.0).dense();
    CHECK(a(0, 0) == 0.5);
    CHECK(a(1, 1) == 0.5);
    CHECK(a(0, 1) == -0.125);
    CHECK(a(1, 0) == -0.125);
  }
  SUBCASE("pinned site acts as exterior") {
    const std::size_t pinned[] = {1};
    const auto p = precision_matrix(domino(), pinned, 1.0);
    REQUIRE(p.size() == 1);
    CHECK(p.dense()(0, 0) == 0.5);
    CHECK(p.sites().front() == 0);
  }
  SUBCASE("pinned site must belong to the volume") {
    const std::size_t pinned[] = {5};
    CHECK_THROWS_AS(precision_matrix(domino(), pinned, 1.0), InvalidArgument);
  }
}

TEST_CASE("precision matrix spectrum and row sums") {
  for (int d : {2, 3}) {
    const auto vol = Volume::box(d, 2);
    const std::size_t pinned[] = {0, 3, vol.center_index()};
    const auto p = precision_matrix(vol, pinned, 1.0);
    const Eigen::MatrixXd a = p.dense();
    CHECK((a - a.transpose()).norm() == 0.0);
    const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
    CHECK(eig.minCoeff() > 0.0);
    CHECK(eig.maxCoeff() <= 1.0 + 1e-12);
    const auto sums = p.row_sums();
    for (std::size_t r = 0; r < p.size(); ++r) {
      const std::size_t site = p.sites()[r];
      bool interior = vol.boundary_degree(site) == 0;
      for (std::size_t j : vol.neighbors(site)) {
        if (j == 0 || j == 3 || j == vol.center_index()) interior = false;
      }
      if (interior) {
        CHECK(std::abs(sums[static_cast<Eigen::Index>(r)]) < 1e-15);
      } else {
        CHECK(sums[static_cast<Eigen::Index>(r)] > 0.0);
      }
    }
  }
}

TEST_CASE("green matrix") {
  SUBCASE("single site") {
    const auto g = green_matrix(precision_matrix(Volume::box(2, 0), {}, 1.0));
    CHECK(g(0, 0) == doctest::Approx(2.0));
  }
  SUBCASE("domino: inverse with det 15/64") {
    const auto g = green_matrix(precision_matrix(domino(), {}, 1.0));
    CHECK(g(0, 0) == doctest::Approx(32.0 / 15.0).epsilon(1e-14));
    CHECK(g(0, 1) == doctest::Approx(8.0 / 15.0).epsilon(1e-14));
    CHECK(g.sum_all() == doctest::Approx(2 * 40.0 / 15.0).epsilon(1e-14));
  }
  SUBCASE("G A = I, symmetric, positive entries") {
    const auto vol = Volume::box(2, 3);
    const auto p = precision_matrix(vol, {}, 1.0);
    const auto g = green_matrix(p);
    const Eigen::MatrixXd prod = g.dense() * p.dense();
    CHECK((prod - Eigen::MatrixXd::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((g.dense() - g.dense().transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(g.dense().minCoeff() > 0.0);
  }
  SUBCASE("iterative mode agrees with the dense inverse") {
    const auto vol = Volume::box(3, 2);
    const auto p = precision_matrix(vol, {}, 1.0);
    const GreenMatrix dense(p, GreenMatrix::Mode::dense);
    const GreenMatrix iter(p, GreenMatrix::Mode::iterative);
    CHECK_FALSE(iter.is_dense());
    const std::size_t c = vol.center_index();
    CHECK(iter(c, c) == doctest::Approx(dense(c, c)).epsilon(1e-9));
    CHECK(iter(0, c) == doctest::Approx(dense(0, c)).epsilon(1e-9));
    CHECK(iter.sum_all() == doctest::Approx(dense.sum_all()).epsilon(1e-9));
    CHECK((iter.diagonal() - dense.diagonal()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK_THROWS_AS(iter.dense(), InvalidArgument);
  }
}

TEST_CASE("gaussian log partition") {
  SUBCASE("single site, zero field") {
    const auto s = gaussian_log_partition(Volume::box(2, 0), {}, FieldConfig{{0.0}});
    CHECK(s.log_z == doctest::Approx(std::log(2 * std::sqrt(kPi))).epsilon(1e-14));
    CHECK(s.log_z == doctest::Approx(1.265512).epsilon(1e-6));
  }
  SUBCASE("single site, field 0.5") {
    const auto s = gaussian_log_partition(Volume::box(2, 0), {}, FieldConfig{{0.5}});
    CHECK(s.log_z == doctest::Approx(std::log(2 * std::sqrt(kPi)) + 0.25).epsilon(1e-14));
    CHECK(s.mean[0] == doctest::Approx(1.0));
  }
  SUBCASE("domino, zero field") {
    const auto s = gaussian_log_partition(domino(), {}, FieldConfig{{0.0, 0.0}});
    CHECK(std::exp(s.log_z) == doctest::Approx(2 * kPi / std::sqrt(15.0 / 64.0)).epsilon(1e-13));
    CHECK(std::exp(s.log_z) == doctest::Approx(12.978492).epsilon(1e-6));
  }
  SUBCASE("internal consistency and shift identity on random fields") {
    for (int L : {1, 2}) {
      const auto vol = Volume::box(2, L);
      const auto zero = gaussian_log_partition(vol, {}, FieldConfig{std::vector<double>(vol.size())});
      const auto g = green_matrix(precision_matrix(vol, {}, 1.0));
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto eta = random_field(vol.size(), seed);
        const auto s = gaussian_log_partition(vol, {}, eta);
        Eigen::Map<const Eigen::VectorXd> e(eta.values.data(), static_cast<Eigen::Index>(eta.size()));
        const double quad = e.dot(g.dense() * e);
        CHECK(std::abs((s.log_z - zero.log_z) - 0.5 * quad) < 1e-10);
        CHECK(s.log_z == doctest::Approx(0.5 * vol.size() * std::log(2 * kPi) - 0.5 * s.log_det + 0.5 * s.quad_form));
        CHECK(s.log_det <= 0.0);
      }
    }
  }
}

TEST_CASE("quadratic energy equals one half phi^T A phi") {
  for (int d : {2, 3}) {
    const auto vol = Volume::box(d, 2);
    const Eigen::MatrixXd a = precision_matrix(vol, {}, 1.0).dense();
    const FieldConfig zero{std::vector<double>(vol.size())};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto phi = random_field(vol.size(), 100 + seed, 2.0);
      Eigen::Map<const Eigen::VectorXd> x(phi.values.data(), static_cast<Eigen::Index>(phi.size()));
      const double energy = hamiltonian(vol, Potential::gaussian(1.0), zero, phi.values);
      CHECK(energy == doctest::Approx(0.5 * x.dot(a * x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("box spectral identities match dense linear algebra") {
  for (int d : {1, 2, 3}) {
    for (int L : {0, 1, 2}) {
      const auto vol = Volume::box(d, L);
      const auto p = precision_matrix(vol, {}, 0.7);
      const auto g = green_matrix(p);
      CHECK(box_green_trace(d, L, 0.7) == doctest::Approx(g.dense().trace()).epsilon(1e-12));
      const auto s = gaussian_log_partition(vol, {}, FieldConfig{std::vector<double>(vol.size())}, 0.7);
      CHECK(box_log_det(d, L, 0.7) == doctest::Approx(s.log_det).epsilon(1e-12));
    }
  }
}
