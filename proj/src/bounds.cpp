#include "pinfield/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numbers>

#include "pinfield/digest.hpp"
#include "pinfield/exact.hpp"
#include "pinfield/gaussian.hpp"
#include "pinfield/green.hpp"

namespace pinfield {

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string digest_inputs(const std::string& id, const Volume& vol, const Potential& pot, const FieldConfig& eta,
                          std::initializer_list<double> extra) {
  std::string s = id + "|" + pot.describe() + "|d=" + std::to_string(vol.dimension()) + "|sites=";
  for (std::size_t i = 0; i < vol.size(); ++i) {
    for (int x : vol.site(i)) s += std::to_string(x) + ",";
    s += ";";
  }
  s += "|eta=";
  for (double v : eta.values) s += hex_double(v) + ",";
  s += "|params=";
  for (double v : extra) s += hex_double(v) + ",";
  return sha256_hex(s);
}

double quad_form(const Volume& vol, const FieldConfig& eta) {
  const GreenMatrix g(precision_matrix(vol, {}, 1.0));
  Eigen::Map<const Eigen::VectorXd> e(eta.values.data(), static_cast<Eigen::Index>(eta.size()));
  return e.dot(g.apply(e));
}

void add_step(BoundReport& r, std::string name, double lhs, double rhs, bool asserted = true) {
  r.steps.push_back({std::move(name), lhs, rhs, rhs - lhs, asserted});
}

void finish(BoundReport& r, double lhs, double rhs) {
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
}

void require_exact_volume(const Volume& vol, const Potential& pot, const char* what) {
  if (!pot.is_gaussian()) throw InvalidArgument(std::string(what) + ": the exact engine needs a Gaussian potential");
  if (vol.size() > kMaxExactSites) {
    throw VolumeTooLarge(std::string(what) + ": " + std::to_string(vol.size()) +
                         " sites exceed the exact enumeration limit");
  }
}

Engine audit_engine(Engine requested, const Volume& vol, const Potential& pot) {
  if (requested == Engine::mcmc) return Engine::mcmc;
  const bool exact_ok = pot.is_gaussian() && vol.size() <= kMaxExactSites;
  if (requested == Engine::exact) {
    require_exact_volume(vol, pot, "audit");
    return Engine::exact;
  }
  return exact_ok ? Engine::exact : Engine::mcmc;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

const char* provenance_name(Provenance p) { return p == Provenance::analytic ? "analytic" : "empirical"; }

std::map<std::string, Constant> BoundConstants::table() const {
  std::map<std::string, Constant> t{{"c_G", c_G}, {"C_G", C_G}, {"C_nG", C_nG}, {"B1", B1}, {"B2", B2}};
  if (d >= 3) {
    t["C1"] = C1;
    t["C2"] = C2;
  }
  return t;
}

BoundConstants estimate_constants(const Potential& pot, int d, std::span<const int> sweep, bool require_stable) {
  if (sweep.empty()) throw InvalidArgument("estimate_constants: empty volume sweep");
  if (d < 1) throw InvalidArgument("estimate_constants: dimension must be positive");
  BoundConstants k;
  k.d = d;
  k.c_minus = pot.c_minus();
  k.sweep.assign(sweep.begin(), sweep.end());
  double run_g = 0.0;
  double run_n = 0.0;
  for (int L : sweep) {
    if (L < 0) throw InvalidArgument("estimate_constants: negative box radius");
    const double n = std::pow(2.0 * L + 1.0, d);
    const double log_z = 0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * box_log_det(d, L, 1.0);
    const double per_site = std::exp(log_z / n);
    const double comparison = per_site / std::sqrt(k.c_minus);
    k.gaussian_per_site.push_back(per_site);
    k.comparison_per_site.push_back(comparison);
    run_g = std::max(run_g, per_site);
    run_n = std::max(run_n, comparison);
    k.C_G_running.push_back(run_g);
    k.C_nG_running.push_back(run_n);
  }
  const std::size_t m = sweep.size();
  k.stabilized = m >= 2 && std::abs(k.gaussian_per_site[m - 1] / k.gaussian_per_site[m - 2] - 1.0) <=
                               kConstantStabilityTolerance;
  std::string sweep_text;
  for (int L : sweep) sweep_text += (sweep_text.empty() ? "" : ",") + std::to_string(L);
  if (require_stable && !k.stabilized) {
    std::string values;
    for (double v : k.gaussian_per_site) values += (values.empty() ? "" : ", ") + format_value(v);
    throw ConstantNotStabilized("per-site partition function did not stabilize within 1% over boxes L={" +
                                sweep_text + "} in d=" + std::to_string(d) + ": " + values);
  }
  const std::string source = "1.05 x max over boxes L={" + sweep_text + "}, d=" + std::to_string(d);
  k.c_G = {kSqrt2Pi, Provenance::analytic, "sqrt(2 pi); eigenvalues of A at unit curvature <= 1"};
  k.C_G = {kConstantSafetyFactor * run_g, Provenance::empirical, source + ", unit-curvature Gaussian"};
  k.C_nG = {kConstantSafetyFactor * run_n, Provenance::empirical,
            source + ", Gaussian at curvature c_-=" + format_value(k.c_minus)};
  k.B1 = {k.C_nG.value / k.c_G.value, Provenance::empirical, "C_nG / c_G"};
  k.B2 = {1.0 / k.c_G.value, Provenance::analytic, "1 / c_G"};
  if (d >= 3) {
    k.green_origin = infinite_volume_green_origin(d);
    const double rc = std::sqrt(k.c_minus);
    k.C1 = {std::log((1.0 + rc / kSqrt2Pi) * k.C_G.value / rc), Provenance::empirical,
            "log((1 + sqrt(c_-/2pi)) C_G / sqrt(c_-))"};
    k.C2 = {k.green_origin / (2.0 * k.c_minus), Provenance::analytic, "G_inf(0,0) / (2 c_-)"};
  }
  return k;
}

BoundConstants estimate_constants(const Potential& pot, int d) {
  const int sweep[] = {4, 8, 16, 32};
  return estimate_constants(pot, d, sweep, true);
}

bool BoundReport::holds() const {
  if (!(slack >= -tolerance)) return false;
  return std::all_of(steps.begin(), steps.end(),
                     [&](const BoundStep& s) { return !s.asserted || s.slack >= -tolerance; });
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["engine"] = engine;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["slack"] = slack;
  j["tolerance"] = tolerance;
  j["holds"] = holds();
  auto& steps_json = j["steps"] = nlohmann::ordered_json::array();
  for (const auto& s : steps) {
    steps_json.push_back({{"name", s.name}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"slack", s.slack}, {"asserted", s.asserted}});
  }
  auto& c = j["constants"] = nlohmann::ordered_json::object();
  for (const auto& [name, k] : constants) {
    c[name] = {{"value", k.value}, {"provenance", provenance_name(k.provenance)}, {"source", k.source}};
  }
  auto& v = j["values"] = nlohmann::ordered_json::object();
  for (const auto& [name, x] : values) v[name] = x;
  j["inputs_digest"] = inputs_digest;
  return j.dump();
}

BoundReport audit_overlap_bound(const Volume& vol, const Potential& pot, const FieldConfig& eta, double epsilon,
                                const BoundConstants& constants, const AuditOptions& options) {
  const ModelParams params(vol, pot, epsilon, eta);
  const Engine engine = audit_engine(options.engine, vol, pot);
  const double n = static_cast<double>(vol.size());
  BoundReport r;
  r.id = kOverlapBound;
  r.engine = engine_name(engine);
  r.constants = {{"c_G", constants.c_G}, {"C_nG", constants.C_nG}};
  const double q = quad_form(vol, eta);
  const double lhs = 0.5 * q - n * std::log((constants.C_nG.value + epsilon) / constants.c_G.value);
  r.values["quad_form"] = q;
  if (engine == Engine::exact) {
    const FieldConfig zero{std::vector<double>(vol.size(), 0.0)};
    const FieldConfig fields[] = {eta, zero};
    const double eps[] = {epsilon};
    const auto sol = exact_mixed_grid(vol, fields, eps, pot.parameter(), options.threads);
    const double log_z = sol[0].log_z;
    const double log_z0 = sol[1].log_z;
    add_step(r, "convexity", log_z - log_z0, sol[0].overlap);
    add_step(r, "gaussian-comparison", 0.5 * q + n * std::log(constants.c_G.value), log_z);
    add_step(r, "denominator", log_z0, n * std::log(constants.C_nG.value + epsilon));
    r.values["log_z"] = log_z;
    r.values["log_z_zero_field"] = log_z0;
    r.values["overlap"] = sol[0].overlap;
    r.tolerance = kExactTolerance;
    finish(r, lhs, sol[0].overlap);
  } else {
    SamplerConfig sc = options.sampler;
    sc.per_site = false;
    const auto est = estimate_observables(params, sc);
    r.values["overlap"] = est.overlap.mean;
    r.values["overlap_error"] = est.overlap.error;
    r.values["sweeps"] = static_cast<double>(sc.sweeps);
    r.values["slow_mixing"] = est.slow_mixing ? 1.0 : 0.0;
    r.tolerance = 3.0 * est.overlap.error;
    finish(r, lhs, est.overlap.mean);
  }
  r.inputs_digest = digest_inputs(r.id, vol, pot, eta, {epsilon, static_cast<double>(options.sampler.seed)});
  return r;
}

double pinning_bound_rhs(double quad, std::size_t sites, double epsilon, double epsilon0, double c_minus, double C_G) {
  if (!(epsilon > epsilon0) || !(epsilon0 > 0.0)) throw InvalidArgument("pinning bound: need eps > eps0 > 0");
  const double rc = std::sqrt(c_minus);
  const double inner = std::log(epsilon * rc / ((1.0 + epsilon0 * rc / kSqrt2Pi) * C_G)) -
                       quad / (2.0 * c_minus * static_cast<double>(sites));
  return inner / std::log(epsilon / epsilon0);
}

double pinning_average_bound(const BoundConstants& constants, double epsilon, double second_moment) {
  if (constants.d < 3) throw InvalidArgument("pinning average bound: needs d >= 3");
  if (!(epsilon > 1.0)) throw InvalidArgument("pinning average bound: needs eps > 1");
  return 1.0 - (constants.C1.value + constants.C2.value * second_moment) / std::log(epsilon);
}

BoundReport audit_pinning_bound(const Volume& vol, const Potential& pot, const FieldConfig& eta, double epsilon,
                                double epsilon0, const BoundConstants& constants, const AuditOptions& options) {
  if (!(epsilon > epsilon0) || !(epsilon0 > 0.0)) throw InvalidArgument("pinning audit: need eps > eps0 > 0");
  const ModelParams params(vol, pot, epsilon, eta);
  const Engine engine = audit_engine(options.engine, vol, pot);
  const std::size_t n = vol.size();
  const double c = pot.c_minus();
  const double q = quad_form(vol, eta);
  const double bound = pinning_bound_rhs(q, n, epsilon, epsilon0, c, constants.C_G.value);
  BoundReport r;
  r.id = kPinningBound;
  r.engine = engine_name(engine);
  r.constants = {{"C_G", constants.C_G}};
  r.values["quad_form"] = q;
  r.values["bound"] = bound;
  r.values["epsilon0"] = epsilon0;
  r.values["c_minus"] = c;
  if (engine == Engine::exact) {
    const double dn = static_cast<double>(n);
    const auto at_eps = exact_mixed_solution(vol, eta, epsilon, pot.parameter(), options.threads);
    const auto at_eps0 = exact_mixed_solution(vol, eta, epsilon0, pot.parameter(), options.threads);
    const double pinned_sum = dn * at_eps.pinned_fraction;
    add_step(r, "back-integration", at_eps.log_z - at_eps0.log_z, std::log(epsilon / epsilon0) * pinned_sum);
    add_step(r, "all-pinned-term", dn * std::log(epsilon), at_eps.log_z);
    // Exact engine: the potential is the Gaussian at curvature c_-, so the comparison is an equality.
    const double gauss_c = exact_mixed_solution(vol, eta, epsilon0, c, options.threads).log_z;
    add_step(r, "curvature-comparison", at_eps0.log_z, gauss_c);
    const double rc = std::sqrt(c);
    const FieldConfig eta_unit = eta.scaled(1.0 / rc);
    const double eps_unit = epsilon0 * rc;
    const double unit = exact_mixed_solution(vol, eta_unit, eps_unit, 1.0, options.threads).log_z;
    add_step(r, "rescaling", gauss_c, -0.5 * dn * std::log(c) + unit);
    const auto free = gaussian_log_partition(vol, {}, eta_unit, 1.0);
    add_step(r, "atom-absorption", unit, dn * std::log(1.0 + eps_unit / kSqrt2Pi) + free.log_z);
    add_step(r, "gaussian-upper", free.log_z - 0.5 * free.quad_form, dn * std::log(constants.C_G.value));
    r.values["pinned_fraction"] = at_eps.pinned_fraction;
    r.values["log_z"] = at_eps.log_z;
    r.values["log_z_eps0"] = at_eps0.log_z;
    r.tolerance = kExactTolerance;
    finish(r, bound, at_eps.pinned_fraction);
  } else {
    SamplerConfig sc = options.sampler;
    sc.per_site = false;
    const auto est = estimate_observables(params, sc);
    r.values["pinned_fraction"] = est.pinned_fraction.mean;
    r.values["pinned_fraction_error"] = est.pinned_fraction.error;
    r.values["sweeps"] = static_cast<double>(sc.sweeps);
    r.values["slow_mixing"] = est.slow_mixing ? 1.0 : 0.0;
    r.tolerance = 3.0 * est.pinned_fraction.error;
    finish(r, bound, est.pinned_fraction.mean);
  }
  r.inputs_digest =
      digest_inputs(r.id, vol, pot, eta, {epsilon, epsilon0, static_cast<double>(options.sampler.seed)});
  return r;
}

BoundReport check_gaussian_ibp(const Volume& vol, const Potential& pot, const DisorderModel& disorder, double epsilon,
                               std::size_t replicas, std::uint64_t master_seed, int threads) {
  if (disorder.law != DisorderModel::Law::gaussian) {
    throw InvalidArgument("integration by parts check needs Gaussian disorder, got " + disorder.to_string());
  }
  require_exact_volume(vol, pot, "integration by parts check");
  DisorderAverageConfig cfg;
  cfg.disorder = disorder;
  cfg.replicas = replicas;
  cfg.master_seed = master_seed;
  cfg.engine = Engine::exact;
  cfg.threads = threads;
  const auto avg = disorder_average(vol, pot, epsilon, cfg);
  const double s2 = disorder.parameter * disorder.parameter;
  std::vector<double> diff;
  for (const auto& rep : avg.replicas) diff.push_back(rep.overlap - s2 * rep.variance_sum);
  const Estimate paired = sample_mean(diff);
  const double var_term = s2 * avg.variance_sum.mean;
  const double var_term_error = s2 * avg.variance_sum.error;
  const double combined = std::hypot(avg.overlap.error, var_term_error);

  BoundReport r;
  r.id = kGaussianIbp;
  r.engine = engine_name(avg.engine);
  r.values["overlap_mean"] = avg.overlap.mean;
  r.values["overlap_error"] = avg.overlap.error;
  r.values["variance_term_mean"] = var_term;
  r.values["variance_term_error"] = var_term_error;
  r.values["paired_difference"] = paired.mean;
  r.values["paired_error"] = paired.error;
  r.values["ratio"] = var_term != 0.0 ? avg.overlap.mean / var_term : 0.0;
  r.values["replicas"] = static_cast<double>(replicas);
  r.tolerance = 0.0;
  finish(r, std::abs(avg.overlap.mean - var_term), 3.0 * combined);
  const FieldConfig none{{}};
  r.inputs_digest = digest_inputs(r.id, vol, pot, none,
                                  {epsilon, disorder.parameter, static_cast<double>(replicas),
                                   static_cast<double>(master_seed)});
  return r;
}

BoundReport check_monotonicity(const Volume& vol, const Potential& pot, const FieldConfig& eta, MonotoneMode mode,
                               std::span<const double> grid, double parameter, int threads) {
  require_exact_volume(vol, pot, "monotonicity check");
  if (grid.size() < 2) throw InvalidArgument("monotonicity check: grid needs at least two points");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw InvalidArgument("monotonicity check: grid must be strictly increasing");
  }
  const ModelParams checked(vol, pot, mode == MonotoneMode::field ? parameter : grid.front(), eta);
  BoundReport r;
  r.tolerance = 1e-10;
  r.engine = engine_name(Engine::exact);
  std::vector<double> f;
  if (mode == MonotoneMode::field) {
    r.id = kMonotoneField;
    std::vector<FieldConfig> fields;
    for (double h : grid) fields.push_back(eta.scaled(h));
    const double eps[] = {parameter};
    const auto sols = exact_mixed_grid(vol, fields, eps, pot.parameter(), threads);
    std::vector<double> log_z;
    for (const auto& s : sols) {
      double v = 0.0;
      for (std::size_t i = 0; i < vol.size(); ++i) v += eta[i] * s.mean[i];
      f.push_back(v);
      log_z.push_back(s.log_z);
    }
    for (std::size_t k = 1; k < grid.size(); ++k) {
      add_step(r, "overlap h=" + format_value(grid[k - 1]) + "->" + format_value(grid[k]), f[k - 1], f[k]);
    }
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
      const double left = (log_z[k] - log_z[k - 1]) / (grid[k] - grid[k - 1]);
      const double right = (log_z[k + 1] - log_z[k]) / (grid[k + 1] - grid[k]);
      add_step(r, "convexity h=" + format_value(grid[k]), left, right);
    }
  } else {
    r.id = kMonotonePinning;
    const auto sols = exact_mixed_grid(vol, std::span<const FieldConfig>(&eta, 1), grid, pot.parameter(), threads);
    for (const auto& s : sols) f.push_back(s.pinned_fraction * static_cast<double>(vol.size()));
    for (std::size_t k = 1; k < grid.size(); ++k) {
      add_step(r, "pinned eps=" + format_value(grid[k - 1]) + "->" + format_value(grid[k]), f[k - 1], f[k]);
    }
    // The back-integration integrand F(eps)/eps need not be monotone; recorded only.
    for (std::size_t k = 1; k < grid.size(); ++k) {
      if (grid[k - 1] <= 0.0) continue;
      add_step(r, "integrand eps=" + format_value(grid[k - 1]) + "->" + format_value(grid[k]), f[k - 1] / grid[k - 1],
               f[k] / grid[k], false);
    }
  }
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : r.steps) {
    if (s.asserted) worst = std::min(worst, s.slack);
  }
  finish(r, 0.0, worst);
  r.values["first"] = f.front();
  r.values["last"] = f.back();
  r.values["points"] = static_cast<double>(grid.size());
  std::vector<double> extra(grid.begin(), grid.end());
  extra.push_back(parameter);
  extra.push_back(mode == MonotoneMode::field ? 0.0 : 1.0);
  std::string s;
  for (double v : extra) s += hex_double(v) + ",";
  r.inputs_digest = sha256_hex(digest_inputs(r.id, vol, pot, eta, {}) + "|" + s);
  return r;
}

}  // namespace pinfield
