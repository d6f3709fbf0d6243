#include "pinfield/sampler.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "pinfield/exact.hpp"
#include "pinfield/gaussian.hpp"
#include "pinfield/parallel.hpp"

namespace pinfield {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kQuadratureTolerance = 1e-10;
constexpr int kMaxRejections = 100000;
constexpr double kWindow = 9.0;

double pin_probability_from_logs(double log_atom, double log_continuous) {
  if (std::isinf(log_atom) && log_atom < 0) return 0.0;
  const double delta = log_continuous - log_atom;
  if (delta > 0) {
    const double t = std::exp(-delta);
    return t / (1.0 + t);
  }
  return 1.0 / (1.0 + std::exp(delta));
}

struct LocalField {
  const ChainState& state;
  std::size_t site;
  const ModelParams& params;
  double scale;  // 1/(4d)

  double energy(double x) const { return local_energy(state, site, params, x); }

  double slope(double x) const {
    const auto& pot = params.potential;
    double s = params.volume.boundary_degree(site) * pot.derivative(x);
    for (std::size_t j : params.volume.neighbors(site)) s += pot.derivative(x - state.height[j]);
    return scale * s - params.eta[site];
  }

  double curvature(double x) const {
    const auto& pot = params.potential;
    double s = params.volume.boundary_degree(site) * pot.second_derivative(x);
    for (std::size_t j : params.volume.neighbors(site)) s += pot.second_derivative(x - state.height[j]);
    return scale * s;
  }

  std::string describe() const {
    std::ostringstream out;
    out << "site " << site << ", eta " << params.eta[site] << ", neighbour heights [";
    bool first = true;
    for (std::size_t j : params.volume.neighbors(site)) {
      out << (first ? "" : ", ") << state.height[j];
      first = false;
    }
    out << "], exterior edges " << params.volume.boundary_degree(site);
    return out.str();
  }
};

// E is convex with E'' >= alpha, so the root of E' lies within |E'(0)|/alpha of 0.
double find_mode(const LocalField& f, double alpha) {
  const double g0 = f.slope(0.0);
  if (g0 == 0.0) return 0.0;
  double lo = g0 > 0 ? -g0 / alpha : 0.0;
  double hi = g0 > 0 ? 0.0 : -g0 / alpha;
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double g = f.slope(x);
    if (g == 0.0) return x;
    if (g > 0) hi = x; else lo = x;
    double next = x - g / f.curvature(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(x)) || hi - lo <= 1e-15 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

MixedLaw gaussian_law(const ChainState& state, std::size_t site, const ModelParams& params) {
  const auto& vol = params.volume;
  const double c = params.potential.parameter();
  const double d = vol.dimension();
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t j : vol.neighbors(site)) {
    s += state.height[j];
    s2 += state.height[j] * state.height[j];
  }
  MixedLaw law;
  law.gaussian = true;
  law.curvature = 0.5 * c;
  const double b = c * s / (4.0 * d) + params.eta[site];
  const double k = c * s2 / (8.0 * d);
  law.center = b / law.curvature;
  law.energy_at_center = k - 0.5 * b * law.center;
  law.log_atom_weight = params.epsilon > 0 ? std::log(params.epsilon) - k : kNegInf;
  law.log_continuous_mass =
      -law.energy_at_center + 0.5 * std::log(2.0 * std::numbers::pi / law.curvature);
  law.pin_probability = pin_probability_from_logs(law.log_atom_weight, law.log_continuous_mass);
  return law;
}

MixedLaw quadrature_law(const ChainState& state, std::size_t site, const ModelParams& params) {
  const LocalField f{state, site, params, 1.0 / (4.0 * params.volume.dimension())};
  MixedLaw law;
  law.curvature = 0.5 * params.potential.c_minus();
  law.center = find_mode(f, law.curvature);
  law.energy_at_center = f.energy(law.center);
  const double width = 1.0 / std::sqrt(law.curvature);
  auto integrand = [&](double u) {
    const double x = law.center + width * u;
    return std::exp(-(f.energy(x) - law.energy_at_center));
  };
  // The integrand is bounded by exp(-u^2/2); the mass outside |u| < 9 is below 1e-17 of the total.
  double error = 0.0;
  const double mass = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, -kWindow, kWindow, 12, kQuadratureTolerance, &error);
  if (!(mass > 0.0) || !std::isfinite(mass) || error > 100 * kQuadratureTolerance * mass) {
    throw SamplerError("single-site quadrature did not converge (estimate " + std::to_string(mass) + ", error " +
                       std::to_string(error) + ") at " + f.describe());
  }
  law.log_continuous_mass = -law.energy_at_center + std::log(mass * width);
  law.log_atom_weight = params.epsilon > 0 ? std::log(params.epsilon) - f.energy(0.0) : kNegInf;
  law.pin_probability = pin_probability_from_logs(law.log_atom_weight, law.log_continuous_mass);
  return law;
}

double draw_continuous(const MixedLaw& law, const ChainState& state, std::size_t site, const ModelParams& params,
                       CounterRng& rng) {
  const double width = 1.0 / std::sqrt(law.curvature);
  if (law.gaussian) return law.center + width * rng.normal();
  const LocalField f{state, site, params, 1.0 / (4.0 * params.volume.dimension())};
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double x = law.center + width * rng.normal();
    const double dx = x - law.center;
    const double excess = f.energy(x) - law.energy_at_center - 0.5 * law.curvature * dx * dx;
    if (excess < -1e-9 * (1.0 + std::abs(f.energy(x)))) {
      throw SamplerError("rejection envelope violated (V'' below c_minus?) at " + f.describe());
    }
    if (std::log(rng.uniform()) < -excess) return x;
  }
  throw SamplerError("rejection sampler exhausted its attempts at " + f.describe());
}

// Fixed-length batches accumulated on the fly; the trailing remainder is dropped.
class BatchAccumulator {
 public:
  BatchAccumulator(std::size_t observables, std::size_t batches, std::size_t batch_length)
      : m_(observables), batches_(batches), length_(batch_length), sums_(observables * batches, 0.0) {}

  // Returns the row for the next sample, or nullptr once all batches are full.
  double* next() {
    const std::size_t b = count_ / length_;
    if (b >= batches_) return nullptr;
    ++count_;
    return sums_.data() + b * m_;
  }

  Estimate estimate(std::size_t k, std::size_t first, std::size_t last) const {
    std::vector<double> means;
    for (std::size_t b = first; b < last; ++b) means.push_back(sums_[b * m_ + k] / static_cast<double>(length_));
    return sample_mean(means);
  }

  std::size_t batches() const { return batches_; }

 private:
  std::size_t m_, batches_, length_;
  std::size_t count_ = 0;
  std::vector<double> sums_;
};

}  // namespace

ChainState ChainState::initial(std::size_t n) {
  ChainState s;
  s.pinned.assign(n, 0);
  s.height.assign(n, 0.0);
  return s;
}

double local_energy(const ChainState& state, std::size_t site, const ModelParams& params, double x) {
  const auto& pot = params.potential;
  const auto& vol = params.volume;
  double s = vol.boundary_degree(site) * pot.value(x);
  for (std::size_t j : vol.neighbors(site)) s += pot.value(x - state.height[j]);
  return s / (4.0 * vol.dimension()) - params.eta[site] * x;
}

MixedLaw site_conditional(const ChainState& state, std::size_t site, const ModelParams& params,
                          ConditionalRoute route) {
  if (site >= params.volume.size()) throw InvalidArgument("site_conditional: site outside the volume");
  if (state.size() != params.volume.size()) throw InvalidArgument("site_conditional: state size mismatch");
  if (route == ConditionalRoute::automatic && params.potential.is_gaussian()) {
    return gaussian_law(state, site, params);
  }
  return quadrature_law(state, site, params);
}

void gibbs_sweep(ChainState& state, const ModelParams& params, CounterRng& rng) {
  for (std::size_t i = 0; i < state.size(); ++i) {
    const MixedLaw law = site_conditional(state, i, params);
    if (rng.uniform() < law.pin_probability) {
      state.pinned[i] = 1;
      state.height[i] = 0.0;
    } else {
      state.pinned[i] = 0;
      state.height[i] = draw_continuous(law, state, i, params, rng);
    }
  }
  ++state.sweeps;
}

std::size_t SamplerConfig::recorded() const {
  if (burn_in >= sweeps || thinning == 0) return 0;
  return (sweeps - burn_in) / thinning;
}

void SamplerConfig::validate() const {
  if (batches < 8) throw InvalidArgument("sampler: at least 8 batches are required");
  if (burn_in >= sweeps) throw InvalidArgument("sampler: burn-in must be smaller than the number of sweeps");
  if (thinning == 0) throw InvalidArgument("sampler: thinning must be positive");
  if (recorded() < batches) {
    throw InvalidArgument("sampler: " + std::to_string(recorded()) + " recorded sweeps cannot fill " +
                          std::to_string(batches) + " batches");
  }
}

void run_chain(const ModelParams& params, const SamplerConfig& config,
               const std::function<void(const ChainState&)>& record) {
  config.validate();
  ChainState state = ChainState::initial(params.volume.size());
  CounterRng rng(config.seed, 0);
  for (std::size_t s = 1; s <= config.sweeps; ++s) {
    gibbs_sweep(state, params, rng);
    if (s > config.burn_in && (s - config.burn_in) % config.thinning == 0) record(state);
  }
}

double EstimatorResult::variance_sum() const {
  double v = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) v += second_moment[i].mean - mean[i].mean * mean[i].mean;
  return v;
}

EstimatorResult estimate_observables(const ModelParams& params, const SamplerConfig& config) {
  config.validate();
  const std::size_t n = params.volume.size();
  const std::size_t m = 2 + (config.per_site ? 3 * n : 0);
  BatchAccumulator acc(m, config.batches, config.recorded() / config.batches);
  run_chain(params, config, [&](const ChainState& s) {
    double* row = acc.next();
    if (row == nullptr) return;
    double overlap = 0.0;
    double pinned = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      overlap += params.eta[i] * s.height[i];
      pinned += s.pinned[i];
    }
    row[0] += overlap;
    row[1] += pinned / static_cast<double>(n);
    if (config.per_site) {
      for (std::size_t i = 0; i < n; ++i) {
        row[2 + i] += s.height[i];
        row[2 + n + i] += s.height[i] * s.height[i];
        row[2 + 2 * n + i] += s.pinned[i];
      }
    }
  });

  EstimatorResult out;
  out.sweeps = config.sweeps;
  out.seed = config.seed;
  const std::size_t nb = acc.batches();
  const std::size_t half = nb / 2;
  for (std::size_t k = 0; k < m; ++k) {
    const Estimate a = acc.estimate(k, 0, half);
    const Estimate b = acc.estimate(k, half, nb);
    const double spread = std::sqrt(a.error * a.error + b.error * b.error);
    if (spread > 0 && std::abs(a.mean - b.mean) > 5.0 * spread) out.slow_mixing = true;
  }
  out.overlap = acc.estimate(0, 0, nb);
  out.pinned_fraction = acc.estimate(1, 0, nb);
  if (config.per_site) {
    for (std::size_t i = 0; i < n; ++i) {
      out.mean.push_back(acc.estimate(2 + i, 0, nb));
      out.second_moment.push_back(acc.estimate(2 + n + i, 0, nb));
      out.pin_probability.push_back(acc.estimate(2 + 2 * n + i, 0, nb));
    }
  }
  return out;
}

const char* engine_name(Engine engine) {
  switch (engine) {
    case Engine::automatic: return "auto";
    case Engine::exact: return "exact";
    case Engine::mcmc: return "mcmc";
  }
  return "auto";
}

Engine parse_engine(const std::string& text) {
  if (text == "auto") return Engine::automatic;
  if (text == "exact") return Engine::exact;
  if (text == "mcmc") return Engine::mcmc;
  throw InvalidArgument("unknown engine '" + text + "' (expected auto, exact or mcmc)");
}

Engine resolve_engine(Engine requested, const Volume& vol, const Potential& pot, double epsilon) {
  if (requested == Engine::mcmc) return Engine::mcmc;
  const bool exact_ok = pot.is_gaussian() && (epsilon == 0.0 || vol.size() <= kMaxExactSites);
  if (requested == Engine::exact) {
    if (!pot.is_gaussian()) throw InvalidArgument("exact engine requires a Gaussian potential");
    if (!exact_ok) {
      throw VolumeTooLarge("exact engine: " + std::to_string(vol.size()) + " sites exceed the enumeration limit of " +
                           std::to_string(kMaxExactSites) + "; use the sampler");
    }
    return Engine::exact;
  }
  return exact_ok ? Engine::exact : Engine::mcmc;
}

DisorderAverage disorder_average(const Volume& vol, const Potential& pot, double epsilon,
                                 const DisorderAverageConfig& config) {
  if (config.replicas < 2) throw InvalidArgument("disorder_average: at least two replicas are required");
  if (config.antithetic && config.replicas % 2 != 0) {
    throw InvalidArgument("disorder_average: antithetic pairing needs an even replica count");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("disorder_average: epsilon must be >= 0");

  DisorderAverage out;
  out.engine = resolve_engine(config.engine, vol, pot, epsilon);
  const std::size_t R = config.replicas;
  out.replicas.resize(R);
  std::vector<FieldConfig> etas(R);
  for (std::size_t r = 0; r < R; ++r) {
    auto& rep = out.replicas[r];
    rep.replica = r;
    const std::size_t source = config.antithetic ? r - r % 2 : r;
    rep.eta_seed = derive_seed(config.master_seed, source, 0);
    rep.chain_seed = derive_seed(config.master_seed, r, 1);
    etas[r] = sample_disorder(config.disorder, vol, rep.eta_seed);
    if (config.antithetic && r % 2 == 1) etas[r] = etas[r].scaled(-1.0);
  }

  if (out.engine == Engine::exact && epsilon == 0.0) {
    const GreenMatrix g(precision_matrix(vol, {}, pot.parameter()));
    const double trace = g.diagonal().sum();
    for (std::size_t r = 0; r < R; ++r) {
      Eigen::Map<const Eigen::VectorXd> e(etas[r].values.data(), static_cast<Eigen::Index>(vol.size()));
      out.replicas[r].overlap = e.dot(g.apply(e));
      out.replicas[r].variance_sum = trace;
    }
  } else if (out.engine == Engine::exact) {
    const double eps[] = {epsilon};
    const auto sols = exact_mixed_grid(vol, etas, eps, pot.parameter(), config.threads);
    for (std::size_t r = 0; r < R; ++r) {
      out.replicas[r].overlap = sols[r].overlap;
      out.replicas[r].pinned_fraction = sols[r].pinned_fraction;
      out.replicas[r].variance_sum = sols[r].variance_sum();
    }
  } else {
    parallel_for(R, config.threads, [&](std::size_t r) {
      SamplerConfig sc = config.sampler;
      sc.seed = out.replicas[r].chain_seed;
      sc.per_site = true;
      const auto est = estimate_observables(ModelParams(vol, pot, epsilon, etas[r]), sc);
      auto& rep = out.replicas[r];
      rep.overlap = est.overlap.mean;
      rep.overlap_error = est.overlap.error;
      rep.pinned_fraction = est.pinned_fraction.mean;
      rep.pinned_fraction_error = est.pinned_fraction.error;
      rep.variance_sum = est.variance_sum();
      rep.slow_mixing = est.slow_mixing;
    });
  }

  const std::size_t group = config.antithetic ? 2 : 1;
  std::vector<double> ov, pf, vs;
  for (std::size_t r = 0; r < R; r += group) {
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t k = r; k < r + group; ++k) {
      a += out.replicas[k].overlap;
      b += out.replicas[k].pinned_fraction;
      c += out.replicas[k].variance_sum;
    }
    ov.push_back(a / group);
    pf.push_back(b / group);
    vs.push_back(c / group);
  }
  out.overlap = sample_mean(ov);
  out.pinned_fraction = sample_mean(pf);
  out.variance_sum = sample_mean(vs);
  return out;
}

}  // namespace pinfield
