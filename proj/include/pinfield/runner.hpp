#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pinfield {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully resolved run configuration. JSON layout:
///   {"command": ..., "model": {...}, "disorder": {...}, "engine": ..., "sampler": {...},
///    "audit": {...}, "scan": {...}, "threads": N, "out": DIR}
/// Unknown keys are rejected at every level.
struct RunConfig {
  std::string command;  ///< exact | sample | audit | scan | green

  struct Model {
    std::optional<int> d;
    int L = 1;
    std::vector<std::vector<int>> sites;  ///< overrides the box when nonempty
    std::string potential = "gaussian";   ///< gaussian | anharmonic
    double curvature = 1.0;               ///< Gaussian c
    double kappa = 0.5;                   ///< anharmonic kappa
    double eps = 0.0;
  } model;

  struct Disorder {
    std::string law = "zero";  ///< zero | const:h | gauss:sigma | rademacher:h
    std::uint64_t master_seed = 1;
    std::size_t replicas = 1;
    bool antithetic = false;
  } disorder;

  std::string engine = "auto";  ///< auto | exact | mcmc

  struct Sampler {
    std::size_t sweeps = 100000;
    std::size_t burn_in = 1000;
    std::size_t batches = 20;
    std::size_t thinning = 1;
  } sampler;

  struct Audit {
    std::vector<std::string> inequalities{"overlap-bound"};
    double eps0 = 1.0;
    int constant_sweep_lmax = 32;  ///< sweep 4, 8, ..., lmax
    std::vector<double> field_grid{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
    std::vector<double> eps_grid{0.0, 0.5, 1.0, 2.0, 4.0};
  } audit;

  struct Scan {
    std::string kind = "overlap-d2";  ///< overlap-d2 | overlap-d2-curve | overlap-dgeq3 | constant-field
    std::vector<int> Ls{4, 8, 16};    ///< also used by `green`
    double h = 1.0;
  } scan;

  int threads = 1;
  std::string out;

  /// Throws ConfigError on unknown keys, wrong types or missing required fields.
  static RunConfig from_json_text(const std::string& text);
  /// Accepts a config file or a run manifest (its embedded "config").
  static RunConfig from_file(const std::filesystem::path& path);
  std::string to_json_text() const;
  /// Semantic checks (builds the volume, potential, disorder law); throws ConfigError.
  void validate() const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitEngineError = 3;

struct RunResult {
  int status = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> outputs;
};

/// Output directory: `out` if set, else $PINFIELD_OUT, else "pinfield_out".
std::filesystem::path resolve_output_dir(const RunConfig& config);

/// Validates, executes and writes the command's tables plus manifest.json.
/// Nothing is written when the configuration is invalid.
RunResult run(const RunConfig& config);

const char* version_string();

}  // namespace pinfield
