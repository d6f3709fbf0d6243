// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [C1 C2 ...]   (no arguments runs everything)

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pinfield/bounds.hpp"
#include "pinfield/digest.hpp"
#include "pinfield/exact.hpp"
#include "pinfield/gaussian.hpp"
#include "pinfield/green.hpp"
#include "pinfield/philox.hpp"
#include "pinfield/sampler.hpp"
#include "pinfield/scans.hpp"
#include "support/quadrature_oracle.hpp"

#ifndef PINFIELD_CLI_PATH
#define PINFIELD_CLI_PATH "pinfield"
#endif

using namespace pinfield;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

FieldConfig normal_field(std::size_t n, std::uint64_t seed, double sigma) {
  CounterRng rng(seed, 7);
  FieldConfig eta{std::vector<double>(n)};
  for (double& v : eta.values) v = sigma * rng.normal();
  return eta;
}

Volume square(int side) {
  std::vector<std::vector<int>> s;
  for (int x = 0; x < side; ++x)
    for (int y = 0; y < side; ++y) s.push_back({x, y});
  return Volume::from_sites(2, s);
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Precision matrix built directly from the lattice definition: A_ii = 1/2, A_ij = -1/(4d) for neighbours.
Eigen::MatrixXd precision_from_coordinates(const Volume& vol) {
  const auto n = static_cast<Eigen::Index>(vol.size());
  const int d = vol.dimension();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 0.5;
    for (Eigen::Index j = 0; j < n; ++j) {
      int dist = 0;
      const auto si = vol.site(static_cast<std::size_t>(i));
      const auto sj = vol.site(static_cast<std::size_t>(j));
      for (int k = 0; k < d; ++k) dist += std::abs(si[k] - sj[k]);
      if (dist == 1) a(i, j) = -1.0 / (4.0 * d);
    }
  }
  return a;
}

// ---------------------------------------------------------------------------

Outcome c1_oracle_equivalence() {
  Outcome o;
  const std::vector<std::pair<int, std::vector<std::vector<int>>>> volumes{
      {2, {{0, 0}}},
      {2, {{0, 0}, {1, 0}}},
      {2, {{0, 0}, {2, 0}}},
      {2, {{0, 0}, {1, 0}, {2, 0}}},
      {2, {{0, 0}, {1, 0}, {1, 1}}},
      {2, {{0, 0}, {1, 0}, {3, 3}}},
      {2, {{0, 0}, {2, 0}, {0, 2}}},
      {3, {{0, 0, 0}}},
      {3, {{0, 0, 0}, {0, 0, 1}}},
      {3, {{0, 0, 0}, {1, 1, 1}}},
      {3, {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}}},
      {3, {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}}},
      {3, {{0, 0, 0}, {0, 0, 1}, {2, 2, 2}}},
      {3, {{0, 0, 0}, {0, 2, 0}, {2, 0, 0}}},
  };
  double worst = 0.0;
  int cases = 0;
  std::uint64_t seed = 1000;
  for (const auto& [d, sites] : volumes) {
    const Volume vol = Volume::from_sites(d, sites);
    const oracle::MixedQuadrature quad(vol, Potential::gaussian(1.0), -25.0, 25.0, 1001);
    for (int k = 0; k < 20; ++k, ++seed) {
      CounterRng rng(seed, 3);
      const FieldConfig eta = normal_field(vol.size(), seed, 1.5);
      const double eps = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
      const auto q = quad.solve(eta, eps);
      const auto s = exact_mixed_solution(vol, eta, eps);
      double gap = rel_gap(s.log_z, q.log_z);
      for (std::size_t i = 0; i < vol.size(); ++i) {
        gap = std::max({gap, rel_gap(s.mean[i], q.mean[i]), rel_gap(s.pin_probability[i], q.pin_probability[i])});
      }
      worst = std::max(worst, gap);
      ++cases;
    }
  }
  o.require(worst <= 1e-8, "max relative gap " + std::to_string(worst));
  o.detail << cases << " (eta, eps) pairs on " << volumes.size() << " volumes; max relative gap " << worst;
  return o;
}

Outcome c2_gaussian_shift() {
  Outcome o;
  double worst = 0.0;
  int cases = 0;
  for (int side = 1; side <= 4; ++side) {
    const Volume vol = square(side);
    const Eigen::MatrixXd a = precision_from_coordinates(vol);
    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    const FieldConfig zero{std::vector<double>(vol.size(), 0.0)};
    const double log_z0 = gaussian_log_partition(vol, {}, zero).log_z;
    const double log_z0_subset = exact_mixed_solution(vol, zero, 0.0).log_z;
    for (int k = 0; k < 50; ++k) {
      const FieldConfig eta = normal_field(vol.size(), 2000 + 100 * side + k, 1.0 + 0.05 * k);
      const Eigen::Map<const Eigen::VectorXd> e(eta.values.data(), static_cast<Eigen::Index>(eta.size()));
      const double half_q = 0.5 * e.dot(llt.solve(e));
      const double shift = gaussian_log_partition(vol, {}, eta).log_z - log_z0;
      const double shift_subset = exact_mixed_solution(vol, eta, 0.0).log_z - log_z0_subset;
      worst = std::max({worst, rel_gap(shift, half_q), rel_gap(shift_subset, half_q)});
      ++cases;
    }
  }
  o.require(worst <= 1e-10, "max relative gap " + std::to_string(worst));
  o.detail << cases << " fields on 1x1..4x4 boxes; max relative gap " << worst;
  return o;
}

Outcome c3_sampler() {
  Outcome o;
  const Volume vol = Volume::box(2, 1);
  const Potential pot = Potential::gaussian();
  const FieldConfig eta = sample_disorder(DisorderModel::gaussian(1.0), vol, 7);
  const ModelParams params(vol, pot, 0.5, eta);
  const auto exact = exact_mixed_solution(vol, eta, 0.5);
  SamplerConfig sc;
  sc.sweeps = 1000000;
  sc.burn_in = 10000;
  sc.batches = 50;
  sc.seed = 2024;
  const auto est = estimate_observables(params, sc);
  int checked = 0, outside = 0;
  double worst = 0.0;
  auto check = [&](const Estimate& e, double truth, const std::string& name) {
    const double z = std::abs(e.mean - truth) / e.error;
    worst = std::max(worst, z);
    ++checked;
    if (z > 3.0) {
      ++outside;
      o.require(false, name + " at " + std::to_string(z) + " SE");
    }
  };
  check(est.overlap, exact.overlap, "overlap");
  check(est.pinned_fraction, exact.pinned_fraction, "pinned fraction");
  for (std::size_t i = 0; i < vol.size(); ++i) {
    check(est.mean[i], exact.mean[i], "mean " + std::to_string(i));
    check(est.second_moment[i], exact.second_moment[i], "second moment " + std::to_string(i));
    check(est.pin_probability[i], exact.pin_probability[i], "pin probability " + std::to_string(i));
  }

  // Domino pin patterns against closed-form subset weights.
  const Volume dom = Volume::from_sites(2, {{0, 0}, {1, 0}});
  const FieldConfig deta{{0.3, -0.7}};
  const double eps = 1.0;
  const double two_pi = 2.0 * std::numbers::pi;
  // free site with both neighbours at 0 or exterior: precision 1/2
  auto single = [&](double h) { return std::sqrt(two_pi / 0.5) * std::exp(h * h / (2.0 * 0.5)); };
  const double a = 0.5, b = -1.0 / 8.0;
  const double det = a * a - b * b;
  const double q = (a * deta[0] * deta[0] - 2.0 * b * deta[0] * deta[1] + a * deta[1] * deta[1]) / det;
  const double w_free = two_pi / std::sqrt(det) * std::exp(0.5 * q);
  // pattern index: bit0 = site 0 pinned, bit1 = site 1 pinned
  const double w[4] = {w_free, eps * single(deta[1]), eps * single(deta[0]), eps * eps};
  const double total = w[0] + w[1] + w[2] + w[3];
  SamplerConfig dc;
  dc.sweeps = 10000000;
  dc.thinning = 10;
  dc.burn_in = 1000;
  dc.batches = 20;
  dc.seed = 77;
  dc.per_site = false;
  std::vector<double> counts(4, 0.0);
  run_chain(ModelParams(dom, pot, eps, deta), dc, [&](const ChainState& s) {
    counts[static_cast<std::size_t>(s.pinned[0] + 2 * s.pinned[1])] += 1.0;
  });
  const double samples = counts[0] + counts[1] + counts[2] + counts[3];
  double chi2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double expected = samples * w[k] / total;
    chi2 += (counts[static_cast<std::size_t>(k)] - expected) * (counts[static_cast<std::size_t>(k)] - expected) / expected;
  }
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(3.0), chi2));
  o.require(p > 0.001, "domino chi-square p = " + std::to_string(p));
  o.detail << "3x3: " << checked - outside << "/" << checked << " observables within 3 SE (max " << worst
           << " SE, 1e6 sweeps); domino: " << static_cast<long>(samples) << " samples, chi2 = " << chi2
           << ", p = " << p;
  return o;
}

Outcome c4_overlap_bound() {
  Outcome o;
  const Volume vol = square(4);
  const auto constants = estimate_constants(Potential::gaussian(), 2);
  int held = 0, total = 0;
  double min_slack = 1e300, min_step = 1e300, decomposition = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const FieldConfig eta = sample_disorder(DisorderModel::gaussian(1.0), vol, seed);
    for (double eps : {0.0, 0.1, 1.0, 10.0}) {
      const auto r = audit_overlap_bound(vol, Potential::gaussian(), eta, eps, constants);
      ++total;
      bool ok = r.engine == "exact" && r.slack >= -1e-9 && r.steps.size() == 3;
      double sum = 0.0;
      for (const auto& s : r.steps) {
        ok = ok && s.slack >= -1e-9;
        min_step = std::min(min_step, s.slack);
        sum += s.slack;
      }
      decomposition = std::max(decomposition, rel_gap(sum, r.slack));
      min_slack = std::min(min_slack, r.slack);
      held += ok ? 1 : 0;
    }
  }
  o.require(held == total, std::to_string(total - held) + " reports with negative slack");
  o.require(decomposition < 1e-9, "slack decomposition gap " + std::to_string(decomposition));
  o.detail << held << "/" << total << " reports hold; min slack " << min_slack << ", min step slack " << min_step
           << ", decomposition gap " << decomposition;
  return o;
}

Outcome c5_pinning() {
  Outcome o;
  const Volume vol = Volume::box(2, 1);
  const auto constants = estimate_constants(Potential::gaussian(), 2);
  int held = 0, total = 0;
  double min_slack = 1e300, min_top = 1.0;
  bool monotone = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const FieldConfig eta = sample_disorder(DisorderModel::gaussian(1.0), vol, seed);
    double previous = -1.0;
    for (double t : {5.0, 10.0, 20.0}) {
      const auto r = audit_pinning_bound(vol, Potential::gaussian(), eta, std::exp(t), 1.0, constants);
      ++total;
      bool ok = r.slack >= -1e-9;
      for (const auto& s : r.steps) ok = ok && s.slack >= -1e-9;
      held += ok ? 1 : 0;
      min_slack = std::min(min_slack, r.slack);
      const double f = r.values.at("pinned_fraction");
      monotone = monotone && f >= previous;
      previous = f;
    }
    min_top = std::min(min_top, previous);
  }
  o.require(held == total, std::to_string(total - held) + " reports with negative slack");
  o.require(monotone, "pinned fraction decreased in eps");
  o.require(min_top > 0.99, "pinned fraction at e^20 = " + std::to_string(min_top));
  o.detail << held << "/" << total << " reports hold (min slack " << min_slack << "); min pinned fraction at e^20 "
           << min_top;
  return o;
}

// Brillouin-zone integral (2pi)^-3 \int dk / A(k), A(k) = (1/6) sum_a (1 - cos k_a), with the
// k_3 integral done in closed form: \int_0^pi dk / (a - cos k) = pi / sqrt(a^2 - 1).
double brillouin_zone_green_d3() {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double pi = std::numbers::pi;
  auto inner = [&](double k1) {
    auto f = [&](double k2) {
      const double s1 = std::sin(0.5 * k1), s2 = std::sin(0.5 * k2);
      const double a_minus_1 = 2.0 * (s1 * s1 + s2 * s2);
      if (a_minus_1 <= 0.0) return 0.0;  // underflow at the corner k = 0, a null set
      return 1.0 / std::sqrt(a_minus_1 * (a_minus_1 + 2.0));
    };
    return integrator.integrate(f, 0.0, pi, 1e-12);
  };
  const double outer = integrator.integrate(inner, 0.0, pi, 1e-11);
  return 6.0 * outer / (pi * pi);
}

Outcome c6_green() {
  Outcome o;
  const int l2[] = {16, 32, 64, 128};
  const auto s2 = green_diagonal_scan(2, l2);
  const double slope = s2.diagonal_fit.slope;
  const double target = 4.0 / std::numbers::pi;
  o.require(std::abs(slope / target - 1.0) <= 0.10, "d=2 diagonal slope " + std::to_string(slope));

  const int l3[] = {4, 8, 12, 16, 20};
  const auto s3 = green_diagonal_scan(3, l3);
  bool increasing = true;
  for (std::size_t k = 1; k < s3.rows.size(); ++k) increasing = increasing && s3.rows[k].g00 > s3.rows[k - 1].g00;
  const double oracle = brillouin_zone_green_d3();
  const double extrapolated = extrapolate_green_origin(s3);
  o.require(increasing, "d=3 G(0,0) not increasing");
  o.require(std::abs(oracle - 3.0328) < 1e-3, "Brillouin-zone oracle " + std::to_string(oracle));
  o.require(std::abs(extrapolated / oracle - 1.0) <= 0.01, "d=3 extrapolation " + std::to_string(extrapolated));

  const int sum2[] = {8, 16, 32};
  const double e2 = green_diagonal_scan(2, sum2).sum_exponent_fit.slope;
  const double e3 = s3.sum_exponent_fit.slope;
  o.require(std::abs(e2 - 4.0) <= 0.2, "d=2 sum exponent " + std::to_string(e2));
  o.require(std::abs(e3 - 5.0) <= 0.2, "d=3 sum exponent " + std::to_string(e3));
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "d=2 slope %.4f vs 4/pi %.4f; d=3 extrapolation %.5f vs oracle %.5f (library %.5f); "
                "sum exponents %.3f (d=2), %.3f (d=3)",
                slope, target, extrapolated, oracle, infinite_volume_green_origin(3), e2, e3);
  o.detail << buf;
  return o;
}

Outcome c7_scaling() {
  Outcome o;
  const int curve_ls[] = {4, 8, 16, 32};
  const auto curve = overlap_lower_curve_d2(curve_ls, 1.0);
  o.require(curve.positive, "comparison curve not positive");
  o.require(curve.comparison_stable, "comparison curve not stable");
  const auto constants = estimate_constants(Potential::gaussian(), 2);
  ScanOptions opt;
  opt.engine = Engine::mcmc;
  opt.replicas = 50;
  opt.master_seed = 31;
  opt.sampler.sweeps = 20000;
  opt.sampler.burn_in = 2000;
  opt.sampler.per_site = false;
  const int ls[] = {4, 8};
  const auto scan = scan_overlap_scaling_d2(ls, Potential::gaussian(), DisorderModel::gaussian(1.0), 10.0, constants, opt);
  o.require(scan.positive, "measured normalized overlap not positive at 3 sigma");
  o.detail << "curve";
  for (const auto& p : curve.points) o.detail << " L=" << p.L << ":" << p.comparison;
  o.detail << " (limit proxy " << curve.limit_proxy << "); eps=10 MCMC";
  for (const auto& p : scan.points) {
    o.detail << " L=" << p.L << ": " << p.value << " +- " << p.error << (p.slow_mixing ? " [slow mixing]" : "");
  }
  o.detail << "; above finite-volume bound: " << (scan.above_bound ? "yes" : "no");
  return o;
}

Outcome c8_ibp() {
  Outcome o;
  const auto r =
      check_gaussian_ibp(Volume::box(2, 1), Potential::gaussian(), DisorderModel::gaussian(1.0), 1.0, 500, 8);
  o.require(r.holds(), "estimates differ by more than 3 combined SE");
  o.detail << "overlap " << r.values.at("overlap_mean") << " +- " << r.values.at("overlap_error")
           << ", sigma^2 variance sum " << r.values.at("variance_term_mean") << " +- "
           << r.values.at("variance_term_error") << ", |diff| " << r.lhs << " vs 3 SE " << r.rhs;
  return o;
}

Outcome c9_monotonicity() {
  Outcome o;
  const Volume vol = Volume::box(2, 1);
  std::vector<double> field_grid;
  for (int k = 0; k <= 20; ++k) field_grid.push_back(0.1 * k);
  const std::vector<double> eps_grid{0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  int failures = 0, reports = 0;
  double min_slack = 1e300;
  for (std::uint64_t seed = 101; seed <= 150; ++seed) {
    const FieldConfig eta = sample_disorder(DisorderModel::gaussian(1.0), vol, seed);
    const auto f = check_monotonicity(vol, Potential::gaussian(), eta, MonotoneMode::field, field_grid, 1.0);
    const auto p = check_monotonicity(vol, Potential::gaussian(), eta, MonotoneMode::pinning, eps_grid);
    for (const auto* r : {&f, &p}) {
      ++reports;
      bool ok = r->holds() && r->slack >= -1e-10;
      for (const auto& st : r->steps) ok = ok && (!st.asserted || st.slack >= -1e-10);
      failures += ok ? 0 : 1;
      min_slack = std::min(min_slack, r->slack);
    }
  }
  const Volume box4 = square(4);
  const auto big = check_monotonicity(box4, Potential::gaussian(), sample_disorder(DisorderModel::gaussian(1.0), box4, 5),
                                      MonotoneMode::field, field_grid, 1.0);
  ++reports;
  failures += big.holds() && big.slack >= -1e-10 ? 0 : 1;
  o.require(failures == 0, std::to_string(failures) + " monotonicity failures");
  o.detail << failures << " failures in " << reports << " reports (50 fields x {field, pinning} on 3x3, plus 4x4 seed 5);"
           << " min slack " << min_slack;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c10_determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "pinfield_acceptance_determinism";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"exact", "exact --d 2 --L 1 --eps 1 --disorder gauss:1 --seed 11"},
      {"sample-chain", "sample --d 2 --sites '0,0;1,0' --eps 1 --sweeps 20000 --seed 3"},
      {"sample-replicas",
       "sample --d 2 --L 1 --eps 0.5 --disorder gauss:1 --replicas 6 --engine mcmc --sweeps 4000 --burnin 200"},
      {"audit",
       "audit --d 2 --L 1 --eps 20 --disorder gauss:1 --seed 11 --replicas 40 "
       "--inequality overlap-bound,pinning-bound,monotone-field,monotone-pinning,gaussian-ibp"},
      {"scan", "scan --d 2 --scan overlap-d2 --Ls 1,2 --eps 10 --disorder gauss:1 --replicas 4 --engine mcmc "
               "--sweeps 2000 --burnin 100"},
      {"green", "green --d 3 --Ls 2,4,6"},
  };
  const std::string cli = PINFIELD_CLI_PATH;
  int identical = 0;
  for (const auto& [name, args] : runs) {
    const fs::path first = base / (name + "-first");
    const fs::path replay1 = base / (name + "-replay1");
    const fs::path replay4 = base / (name + "-replay4");
    auto call = [&](const std::string& extra) {
      const std::string cmd = "'" + cli + "' " + extra + " > /dev/null 2>&1";
      return std::system(cmd.c_str());
    };
    const int s0 = call(args + " --threads 1 --out '" + first.string() + "'");
    const std::string manifest = (first / "manifest.json").string();
    const int s1 = call(std::string(name.substr(0, name.find('-'))) + " --config '" + manifest + "' --threads 1 --out '" +
                        replay1.string() + "'");
    const int s4 = call(std::string(name.substr(0, name.find('-'))) + " --config '" + manifest + "' --threads 4 --out '" +
                        replay4.string() + "'");
    if (s0 != 0 || s1 != 0 || s4 != 0) {
      o.require(false, name + " exited nonzero");
      continue;
    }
    const auto m0 = nlohmann::json::parse(slurp(first / "manifest.json"))["outputs"];
    const auto m1 = nlohmann::json::parse(slurp(replay1 / "manifest.json"))["outputs"];
    const auto m4 = nlohmann::json::parse(slurp(replay4 / "manifest.json"))["outputs"];
    bool files_match = true;
    for (const auto& [file, digest] : m0.items()) {
      files_match = files_match && sha256_file(first / file) == digest.get<std::string>() &&
                    sha256_file(replay4 / file) == digest.get<std::string>();
    }
    const bool same = !m0.empty() && m0 == m1 && m0 == m4 && files_match;
    o.require(same, name + " digests differ");
    identical += same ? 1 : 0;
  }
  o.detail << identical << "/" << runs.size() << " commands reproduce identical output digests from their manifest"
           << " with --threads 1 and 4";
  return o;
}

Outcome extra_anharmonic_sampler() {
  Outcome o;
  const Volume vol = Volume::box(2, 1);
  const Potential pot = Potential::anharmonic(0.5);
  const FieldConfig eta = sample_disorder(DisorderModel::gaussian(1.0), vol, 7);
  const double eps = 0.5;
  // overlap = d/dt log Z[(1 + t) eta] at t = 0, by a central difference of the quadrature oracle.
  auto oracle_overlap = [&](const Potential& p) {
    const oracle::MixedQuadrature quad(vol, p, -18.0, 18.0, 73);
    const double t = 1e-4;
    return (quad.solve(eta.scaled(1.0 + t), eps, false).log_z - quad.solve(eta.scaled(1.0 - t), eps, false).log_z) /
           (2.0 * t);
  };
  const double gaussian_check = oracle_overlap(Potential::gaussian());
  const double gaussian_exact = exact_mixed_solution(vol, eta, eps).overlap;
  o.require(std::abs(gaussian_check - gaussian_exact) < 1e-6, "oracle grid inaccurate on the Gaussian case");
  const double truth = oracle_overlap(pot);
  SamplerConfig sc;
  sc.sweeps = 200000;
  sc.burn_in = 2000;
  sc.batches = 20;
  sc.seed = 99;
  sc.per_site = false;
  const auto est = estimate_observables(ModelParams(vol, pot, eps, eta), sc);
  const double z = std::abs(est.overlap.mean - truth) / est.overlap.error;
  o.require(z <= 3.0, "anharmonic overlap at " + std::to_string(z) + " SE");
  o.detail << "3x3 kappa=0.5 eps=0.5: MCMC overlap " << est.overlap.mean << " +- " << est.overlap.error
           << " vs quadrature " << truth << " (" << z << " SE); oracle grid check on Gaussian "
           << std::abs(gaussian_check - gaussian_exact);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::tuple<std::string, std::string, std::function<Outcome()>>> criteria{
      {"C1", "exact engine vs mixed-measure quadrature", c1_oracle_equivalence},
      {"C2", "Gaussian shift identity", c2_gaussian_shift},
      {"C3", "sampler vs exact (3x3, domino chi-square)", c3_sampler},
      {"C4", "overlap bound audit, 400 exact reports", c4_overlap_bound},
      {"C5", "pinning bound audit", c5_pinning},
      {"C6", "Green function asymptotics", c6_green},
      {"C7", "d=2 overlap scaling proxy", c7_scaling},
      {"C8", "Gaussian integration by parts", c8_ibp},
      {"C9", "monotonicity and convexity", c9_monotonicity},
      {"C10", "determinism across replays and thread counts", c10_determinism},
      {"X1", "anharmonic sampler vs quadrature", extra_anharmonic_sampler},
  };
  std::set<std::string> selected(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [id, title, fn] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %s: %s [%s] (%.1f s)\n", o.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
