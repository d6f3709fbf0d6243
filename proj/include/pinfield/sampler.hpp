#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pinfield/model.hpp"
#include "pinfield/philox.hpp"
#include "pinfield/statistics.hpp"

namespace pinfield {

/// Raised when the single-site quadrature or the rejection envelope fails.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChainState {
  std::vector<std::uint8_t> pinned;
  std::vector<double> height;  ///< exactly 0 on pinned sites
  std::uint64_t sweeps = 0;

  /// All sites unpinned at height 0.
  static ChainState initial(std::size_t n);
  std::size_t size() const { return height.size(); }
};

/// Conditional law of one site given the rest: a weighted atom at 0 plus the density
/// exp(-E(x)) with E(x) = (1/4d) sum_{j~i} V(x - phi_j) - eta_i x
/// (exterior and pinned neighbours at height 0).
struct MixedLaw {
  double log_atom_weight = 0.0;        ///< log(eps) - E(0); -inf for eps = 0
  double log_continuous_mass = 0.0;    ///< log of the integral of exp(-E)
  double pin_probability = 0.0;
  double center = 0.0;     ///< mean of the continuous part (Gaussian V) or its mode
  double curvature = 0.0;  ///< precision of the Gaussian part, or the envelope curvature c_-/2
  double energy_at_center = 0.0;
  bool gaussian = false;
};

enum class ConditionalRoute { automatic, quadrature };

/// Closed form for Gaussian V; adaptive quadrature (relative tolerance 1e-10) otherwise.
/// `ConditionalRoute::quadrature` forces the numerical route for any potential.
MixedLaw site_conditional(const ChainState& state, std::size_t site, const ModelParams& params,
                          ConditionalRoute route = ConditionalRoute::automatic);

/// Local energy E(x) of `site` in `state`.
double local_energy(const ChainState& state, std::size_t site, const ModelParams& params, double x);

/// One systematic scan in canonical site order.
void gibbs_sweep(ChainState& state, const ModelParams& params, CounterRng& rng);

struct SamplerConfig {
  std::size_t sweeps = 100000;
  std::size_t burn_in = 1000;
  std::size_t thinning = 1;
  std::size_t batches = 20;
  std::uint64_t seed = 1;
  bool per_site = true;  ///< also estimate per-site means, second moments and pin probabilities

  /// Number of recorded samples after burn-in and thinning.
  std::size_t recorded() const;
  void validate() const;
};

/// Runs one chain (stream 0 of CounterRng(config.seed)) and calls `record` after every
/// recorded sweep.
void run_chain(const ModelParams& params, const SamplerConfig& config,
               const std::function<void(const ChainState&)>& record);

struct EstimatorResult {
  Estimate overlap;          ///< sum_i eta_i phi_i
  Estimate pinned_fraction;  ///< (1/|Lambda|) sum_i 1{phi_i = 0}
  std::vector<Estimate> mean;
  std::vector<Estimate> second_moment;
  std::vector<Estimate> pin_probability;
  std::size_t sweeps = 0;
  std::uint64_t seed = 0;
  /// Some observable differs by more than 5 sigma between the two halves of the chain.
  bool slow_mixing = false;

  double variance_sum() const;
};

EstimatorResult estimate_observables(const ModelParams& params, const SamplerConfig& config);

enum class Engine { automatic, exact, mcmc };

const char* engine_name(Engine engine);
Engine parse_engine(const std::string& text);

struct DisorderAverageConfig {
  DisorderModel disorder;
  std::size_t replicas = 2;
  std::uint64_t master_seed = 1;
  Engine engine = Engine::automatic;
  SamplerConfig sampler;
  int threads = 1;
  /// Replica 2k+1 uses the negated field of replica 2k; errors are taken over pairs.
  bool antithetic = false;
};

struct ReplicaResult {
  std::size_t replica = 0;
  std::uint64_t eta_seed = 0;
  std::uint64_t chain_seed = 0;
  double overlap = 0.0;
  double overlap_error = 0.0;  ///< 0 for exact inner solves
  double pinned_fraction = 0.0;
  double pinned_fraction_error = 0.0;
  double variance_sum = 0.0;   ///< sum_i Var(phi_i)
  bool slow_mixing = false;
};

struct DisorderAverage {
  Estimate overlap;
  Estimate pinned_fraction;
  Estimate variance_sum;
  std::vector<ReplicaResult> replicas;
  Engine engine = Engine::exact;
};

/// Engine actually used by disorder_average for the given request: the Gaussian closed
/// form when eps = 0, subset enumeration for small volumes, MCMC otherwise.
Engine resolve_engine(Engine requested, const Volume& vol, const Potential& pot, double epsilon);

/// Quenched average over replicas. Replica r draws eta from derive_seed(master, r, 0)
/// and runs its chain from derive_seed(master, r, 1); the result is independent of
/// the thread count.
DisorderAverage disorder_average(const Volume& vol, const Potential& pot, double epsilon,
                                 const DisorderAverageConfig& config);

}  // namespace pinfield
