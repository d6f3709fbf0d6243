#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinfield/model.hpp"
#include "pinfield/sampler.hpp"

namespace pinfield {

enum class Provenance { analytic, empirical };

const char* provenance_name(Provenance p);

struct Constant {
  double value = 0.0;
  Provenance provenance = Provenance::analytic;
  std::string source;  ///< how the value was obtained
};

inline constexpr double kConstantSafetyFactor = 1.05;
inline constexpr double kConstantStabilityTolerance = 0.01;

class ConstantNotStabilized : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Concrete values for the constants of the overlap and pinning bounds.
///
/// c_G = sqrt(2 pi) is analytic (eigenvalues of A at unit curvature are at most 1).
/// C_G and C_nG are 1.05 times the largest per-site partition function Z^{1/|Lambda|}
/// over a sweep of boxes: Gaussian at unit curvature for C_G, Gaussian at curvature
/// c_- for C_nG (Z_{0,D}[0] <= Z^{Gauss, c_-}_{0,D}[0]).
struct BoundConstants {
  int d = 0;
  double c_minus = 1.0;
  std::vector<int> sweep;
  std::vector<double> gaussian_per_site;    ///< Z^{1/|Lambda|}, unit curvature
  std::vector<double> comparison_per_site;  ///< Z^{1/|Lambda|}, curvature c_-
  std::vector<double> C_G_running;          ///< max-so-far along the sweep
  std::vector<double> C_nG_running;
  bool stabilized = false;  ///< last two sweep entries within 1%
  double green_origin = 0.0;  ///< G_{Z^d}(0,0) for d >= 3, else 0

  Constant c_G, C_G, C_nG;
  Constant B1, B2;  ///< B1 = C_nG / c_G, B2 = 1 / c_G
  Constant C1, C2;  ///< pinning-average constants (d >= 3)

  std::map<std::string, Constant> table() const;
};

/// Box sweep in dimension d. Throws ConstantNotStabilized when `require_stable` is set and
/// the last two per-site values differ by more than 1% (or the sweep has a single entry).
BoundConstants estimate_constants(const Potential& pot, int d, std::span<const int> sweep, bool require_stable = true);

/// Default sweep {4, 8, 16, 32}.
BoundConstants estimate_constants(const Potential& pot, int d);

struct BoundStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;     ///< rhs - lhs
  bool asserted = true;   ///< informational steps do not affect holds()
};

/// One inequality lhs <= rhs evaluated on concrete inputs.
struct BoundReport {
  std::string id;
  std::string engine;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;  ///< 1e-9 exact; 3 sigma for Monte Carlo
  std::vector<BoundStep> steps;
  std::map<std::string, Constant> constants;
  std::map<std::string, double> values;  ///< auxiliary numbers (estimates, errors, inputs)
  std::string inputs_digest;

  bool holds() const;
  /// Single-line JSON.
  std::string to_json() const;
};

inline constexpr double kExactTolerance = 1e-9;

/// Inequality ids.
inline constexpr const char* kOverlapBound = "overlap-bound";
inline constexpr const char* kPinningBound = "pinning-bound";
inline constexpr const char* kGaussianIbp = "gaussian-ibp";
inline constexpr const char* kMonotoneField = "monotone-field";
inline constexpr const char* kMonotonePinning = "monotone-pinning";

struct AuditOptions {
  Engine engine = Engine::automatic;
  SamplerConfig sampler;
  int threads = 1;
};

/// (1/2) eta^T G eta - |Lambda| log((C_nG + eps) / c_G) <= sum_i eta_i mu(phi_i),
/// with the convexity, Gaussian-comparison and denominator steps reported separately
/// (exact engine).
BoundReport audit_overlap_bound(const Volume& vol, const Potential& pot, const FieldConfig& eta, double epsilon,
                                const BoundConstants& constants, const AuditOptions& options = {});

/// Right-hand side of the fixed-disorder pinned-fraction bound:
///   (1 / log(eps/eps0)) (log(eps c^{1/2} / ((1 + eps0 c^{1/2} / sqrt(2 pi)) C_G)) - eta^T G eta / (2 c |Lambda|))
/// with c = c_-.
double pinning_bound_rhs(double quad_form, std::size_t sites, double epsilon, double epsilon0, double c_minus,
                         double C_G);

/// Disorder-averaged form 1 - (C1 + C2 E eta^2) / log eps  (eps0 = 1, d >= 3).
double pinning_average_bound(const BoundConstants& constants, double epsilon, double second_moment);

/// Pinned fraction >= pinning_bound_rhs, with the chain steps (back-integration,
/// all-pinned term, comparison with curvature c_-, rescaling, atom absorption,
/// Gaussian upper constant) for the exact engine.
BoundReport audit_pinning_bound(const Volume& vol, const Potential& pot, const FieldConfig& eta, double epsilon,
                                double epsilon0, const BoundConstants& constants, const AuditOptions& options = {});

/// Replica-averaged overlap against sigma^2 times the replica-averaged variance sum,
/// exact inner solver; holds when they agree within 3 combined standard errors.
BoundReport check_gaussian_ibp(const Volume& vol, const Potential& pot, const DisorderModel& disorder, double epsilon,
                               std::size_t replicas, std::uint64_t master_seed, int threads = 1);

enum class MonotoneMode { field, pinning };

/// field:   `grid` holds field strengths h at pinning eps = `parameter`; checks that
///          h -> sum_i eta_i mu[h eta](phi_i) is nondecreasing and h -> log Z[h eta] convex.
/// pinning: `grid` holds pinning strengths; checks that eps -> sum_i mu(phi_i = 0) is
///          nondecreasing (`parameter` unused). F(eps)/eps is recorded as unasserted steps.
BoundReport check_monotonicity(const Volume& vol, const Potential& pot, const FieldConfig& eta, MonotoneMode mode,
                               std::span<const double> grid, double parameter = 1.0, int threads = 1);

}  // namespace pinfield
