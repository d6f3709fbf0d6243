#include "pinfield/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "pinfield/bounds.hpp"
#include "pinfield/digest.hpp"
#include "pinfield/exact.hpp"
#include "pinfield/gaussian.hpp"
#include "pinfield/green.hpp"
#include "pinfield/philox.hpp"
#include "pinfield/sampler.hpp"
#include "pinfield/scans.hpp"

#ifndef PINFIELD_VERSION
#define PINFIELD_VERSION "unknown"
#endif

namespace pinfield {

using json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kCommands{"exact", "sample", "audit", "scan", "green"};
const std::set<std::string> kInequalities{kOverlapBound, kPinningBound, kGaussianIbp, kMonotoneField,
                                          kMonotonePinning};
const std::set<std::string> kScanKinds{"overlap-d2", "overlap-d2-curve", "overlap-dgeq3", "constant-field"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& dst, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("expected true or false");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError("expected a nonnegative integer");
      }
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("expected a number");
    }
    dst = v.get<T>();
  } catch (const ConfigError& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Volume make_volume(const RunConfig& c) {
  const int d = *c.model.d;
  if (!c.model.sites.empty()) return Volume::from_sites(d, c.model.sites);
  return Volume::box(d, c.model.L);
}

Potential make_potential(const RunConfig& c) {
  if (c.model.potential == "gaussian") return Potential::gaussian(c.model.curvature);
  if (c.model.potential == "anharmonic") return Potential::anharmonic(c.model.kappa);
  throw ConfigError("model.potential: expected 'gaussian' or 'anharmonic', got '" + c.model.potential + "'");
}

SamplerConfig make_sampler(const RunConfig& c, std::uint64_t seed) {
  SamplerConfig s;
  s.sweeps = c.sampler.sweeps;
  s.burn_in = c.sampler.burn_in;
  s.batches = c.sampler.batches;
  s.thinning = c.sampler.thinning;
  s.seed = seed;
  return s;
}

std::uint64_t chain_seed(const RunConfig& c) { return derive_seed(c.disorder.master_seed, 0, 1); }

std::vector<int> constant_sweep(const RunConfig& c) {
  std::vector<int> sweep;
  for (int L = 4; L <= c.audit.constant_sweep_lmax; L *= 2) sweep.push_back(L);
  return sweep;
}

bool increasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] > v[k - 1])) return false;
  return true;
}

// Tables are built in memory and written only after the whole command succeeded.
struct Output {
  std::string name;
  std::string text;
};

struct Csv {
  std::ostringstream s;
  explicit Csv(const std::string& header) { s << header << '\n'; }
  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((s << (first ? "" : ",") << cells, first = false), ...);
    s << '\n';
  }
};

std::string coords(const Volume& vol, std::size_t i) {
  std::string t;
  for (int x : vol.site(i)) t += "," + std::to_string(x);
  return t.substr(1);
}

std::string coord_header(int d) {
  std::string t;
  for (int a = 0; a < d; ++a) t += ",x" + std::to_string(a);
  return t.substr(1);
}

struct Execution {
  int status = kExitOk;
  std::string message;
  std::vector<Output> outputs;
};

Execution run_exact(const RunConfig& c) {
  const Volume vol = make_volume(c);
  const Potential pot = make_potential(c);
  if (!pot.is_gaussian()) throw InvalidArgument("exact engine: needs a Gaussian potential, got " + pot.describe());
  const FieldConfig eta = sample_disorder(DisorderModel::parse(c.disorder.law), vol, c.disorder.master_seed);
  const double eps = c.model.eps;
  std::vector<double> mean(vol.size()), var(vol.size()), pin(vol.size(), 0.0);
  double log_z = 0.0, overlap = 0.0, pinned = 0.0;
  std::string route;
  if (eps == 0.0 && vol.size() > kMaxExactSites) {
    route = "gaussian";
    const GreenMatrix g(precision_matrix(vol, {}, pot.parameter()));
    const auto summary = gaussian_log_partition(vol, {}, eta, pot.parameter());
    const Eigen::VectorXd diag = g.diagonal();
    log_z = summary.log_z;
    for (std::size_t i = 0; i < vol.size(); ++i) {
      mean[i] = summary.mean[static_cast<Eigen::Index>(i)];
      var[i] = diag[static_cast<Eigen::Index>(i)];
      overlap += eta[i] * mean[i];
    }
  } else {
    route = "subset-expansion";
    const auto sol = exact_mixed_solution(vol, eta, eps, pot.parameter(), c.threads);
    log_z = sol.log_z;
    overlap = sol.overlap;
    pinned = sol.pinned_fraction;
    for (std::size_t i = 0; i < vol.size(); ++i) {
      mean[i] = sol.mean[i];
      var[i] = sol.variance(i);
      pin[i] = sol.pin_probability[i];
    }
  }
  Csv csv("site," + coord_header(vol.dimension()) + ",eta,mean,variance,pin_prob");
  for (std::size_t i = 0; i < vol.size(); ++i) {
    csv.row(i, coords(vol, i), fmt(eta[i]), fmt(mean[i]), fmt(var[i]), fmt(pin[i]));
  }
  json summary;
  summary["route"] = route;
  summary["sites"] = vol.size();
  summary["log_z"] = log_z;
  summary["overlap"] = overlap;
  summary["pinned_fraction"] = pinned;
  return {kExitOk, "", {{"exact.csv", csv.s.str()}, {"summary.json", summary.dump(2) + "\n"}}};
}

Execution run_sample(const RunConfig& c) {
  const Volume vol = make_volume(c);
  const Potential pot = make_potential(c);
  const DisorderModel disorder = DisorderModel::parse(c.disorder.law);
  Csv csv("replica,observable,site,mean,stderr,sweeps,seed");
  json summary;
  const std::size_t sweeps = c.sampler.sweeps;
  if (c.disorder.replicas == 1) {
    const FieldConfig eta = sample_disorder(disorder, vol, c.disorder.master_seed);
    const SamplerConfig sc = make_sampler(c, chain_seed(c));
    const auto est = estimate_observables(ModelParams(vol, pot, c.model.eps, eta), sc);
    csv.row(0, "overlap", "", fmt(est.overlap.mean), fmt(est.overlap.error), sweeps, sc.seed);
    csv.row(0, "pinned_fraction", "", fmt(est.pinned_fraction.mean), fmt(est.pinned_fraction.error), sweeps, sc.seed);
    csv.row(0, "variance_sum", "", fmt(est.variance_sum()), "", sweeps, sc.seed);
    for (std::size_t i = 0; i < vol.size(); ++i) {
      csv.row(0, "mean", i, fmt(est.mean[i].mean), fmt(est.mean[i].error), sweeps, sc.seed);
      csv.row(0, "second_moment", i, fmt(est.second_moment[i].mean), fmt(est.second_moment[i].error), sweeps, sc.seed);
      csv.row(0, "pin_prob", i, fmt(est.pin_probability[i].mean), fmt(est.pin_probability[i].error), sweeps, sc.seed);
    }
    summary["engine"] = "mcmc";
    summary["chain_seed"] = sc.seed;
    summary["recorded_samples"] = sc.recorded();
    summary["slow_mixing"] = est.slow_mixing;
    return {kExitOk, "", {{"estimates.csv", csv.s.str()}, {"summary.json", summary.dump(2) + "\n"}}};
  }
  DisorderAverageConfig cfg;
  cfg.disorder = disorder;
  cfg.replicas = c.disorder.replicas;
  cfg.master_seed = c.disorder.master_seed;
  cfg.engine = c.engine == "auto" ? Engine::mcmc : parse_engine(c.engine);
  cfg.sampler = make_sampler(c, 0);
  cfg.sampler.per_site = false;
  cfg.threads = c.threads;
  cfg.antithetic = c.disorder.antithetic;
  const auto avg = disorder_average(vol, pot, c.model.eps, cfg);
  bool slow = false;
  for (const auto& r : avg.replicas) {
    csv.row(r.replica, "overlap", "", fmt(r.overlap), fmt(r.overlap_error), sweeps, r.chain_seed);
    csv.row(r.replica, "pinned_fraction", "", fmt(r.pinned_fraction), fmt(r.pinned_fraction_error), sweeps,
            r.chain_seed);
    csv.row(r.replica, "variance_sum", "", fmt(r.variance_sum), "", sweeps, r.chain_seed);
    slow = slow || r.slow_mixing;
  }
  const auto master = c.disorder.master_seed;
  csv.row("average", "overlap", "", fmt(avg.overlap.mean), fmt(avg.overlap.error), sweeps, master);
  csv.row("average", "pinned_fraction", "", fmt(avg.pinned_fraction.mean), fmt(avg.pinned_fraction.error), sweeps,
          master);
  csv.row("average", "variance_sum", "", fmt(avg.variance_sum.mean), fmt(avg.variance_sum.error), sweeps, master);
  summary["engine"] = engine_name(avg.engine);
  summary["replicas"] = avg.replicas.size();
  summary["slow_mixing"] = slow;
  return {kExitOk, "", {{"estimates.csv", csv.s.str()}, {"summary.json", summary.dump(2) + "\n"}}};
}

Execution run_audit(const RunConfig& c) {
  const Volume vol = make_volume(c);
  const Potential pot = make_potential(c);
  const DisorderModel disorder = DisorderModel::parse(c.disorder.law);
  const FieldConfig eta = sample_disorder(disorder, vol, c.disorder.master_seed);
  AuditOptions opt;
  opt.engine = parse_engine(c.engine);
  opt.sampler = make_sampler(c, chain_seed(c));
  opt.threads = c.threads;
  std::optional<BoundConstants> constants;
  auto need_constants = [&]() -> const BoundConstants& {
    if (!constants) {
      const auto sweep = constant_sweep(c);
      constants = estimate_constants(pot, vol.dimension(), sweep, true);
    }
    return *constants;
  };
  std::string lines;
  int failed = 0;
  for (const auto& id : c.audit.inequalities) {
    BoundReport r;
    if (id == kOverlapBound) {
      r = audit_overlap_bound(vol, pot, eta, c.model.eps, need_constants(), opt);
    } else if (id == kPinningBound) {
      r = audit_pinning_bound(vol, pot, eta, c.model.eps, c.audit.eps0, need_constants(), opt);
    } else if (id == kGaussianIbp) {
      r = check_gaussian_ibp(vol, pot, disorder, c.model.eps, c.disorder.replicas, c.disorder.master_seed,
                             c.threads);
    } else if (id == kMonotoneField) {
      r = check_monotonicity(vol, pot, eta, MonotoneMode::field, c.audit.field_grid, c.model.eps, c.threads);
    } else {
      r = check_monotonicity(vol, pot, eta, MonotoneMode::pinning, c.audit.eps_grid, 1.0, c.threads);
    }
    if (!r.holds()) ++failed;
    lines += r.to_json() + "\n";
  }
  Execution e{kExitOk, "", {{"reports.jsonl", lines}}};
  if (constants) {
    Csv csv("name,value,provenance,source");
    for (const auto& [name, k] : constants->table()) {
      csv.row(name, fmt(k.value), provenance_name(k.provenance), "\"" + k.source + "\"");
    }
    e.outputs.push_back({"constants.csv", csv.s.str()});
  }
  if (failed > 0) {
    e.status = kExitAuditFailed;
    e.message = std::to_string(failed) + " of " + std::to_string(c.audit.inequalities.size()) + " audits failed";
  }
  return e;
}

Execution run_scan(const RunConfig& c) {
  const Potential pot = make_potential(c);
  const int d = *c.model.d;
  const DisorderModel disorder = DisorderModel::parse(c.disorder.law);
  ScanOptions opt;
  opt.engine = parse_engine(c.engine);
  opt.sampler = make_sampler(c, 0);
  opt.sampler.per_site = false;
  opt.replicas = c.disorder.replicas;
  opt.master_seed = c.disorder.master_seed;
  opt.threads = c.threads;
  const std::vector<int>& Ls = c.scan.Ls;
  ScalingScanResult r;
  const auto sweep = constant_sweep(c);
  if (c.scan.kind == "overlap-d2") {
    r = scan_overlap_scaling_d2(Ls, pot, disorder, c.model.eps, estimate_constants(pot, d, sweep, true), opt);
  } else if (c.scan.kind == "overlap-d2-curve") {
    r = overlap_lower_curve_d2(Ls, disorder.second_moment());
  } else if (c.scan.kind == "overlap-dgeq3") {
    r = scan_overlap_dgeq3(d, Ls, pot, disorder, c.model.eps, estimate_constants(pot, d, sweep, true), opt);
  } else {
    r = scan_constant_field(d, Ls, pot, c.scan.h, c.model.eps, opt);
  }
  Csv csv("L,sites,value,stderr,comparison,bound,normalization,fit_slope,fit_r2,engine,slow_mixing");
  for (const auto& p : r.points) {
    csv.row(p.L, p.sites, fmt(p.value), fmt(p.error), fmt(p.comparison), fmt(p.bound), r.normalization,
            r.has_fit ? fmt(r.fit.slope) : "", r.has_fit ? fmt(r.fit.r2) : "", p.engine, p.slow_mixing ? 1 : 0);
  }
  json summary;
  summary["kind"] = r.kind;
  summary["normalization"] = r.normalization;
  summary["has_fit"] = r.has_fit;
  if (r.has_fit) {
    summary["fit"] = {{"description", r.fit_description},
                      {"slope", r.fit.slope},
                      {"intercept", r.fit.intercept},
                      {"r2", r.fit.r2}};
  }
  summary["limit_proxy"] = r.limit_proxy;
  summary["positive"] = r.positive;
  summary["above_bound"] = r.above_bound;
  summary["comparison_stable"] = r.comparison_stable;
  return {kExitOk, "", {{"scan.csv", csv.s.str()}, {"summary.json", summary.dump(2) + "\n"}}};
}

Execution run_green(const RunConfig& c) {
  const int d = *c.model.d;
  const double curvature = c.model.potential == "gaussian" ? c.model.curvature : 1.0;
  const GreenScan scan = green_diagonal_scan(d, c.scan.Ls, curvature, c.threads);
  Csv csv("L,g00,avg_diag,sum_all");
  for (const auto& row : scan.rows) csv.row(row.L, fmt(row.g00), fmt(row.avg_diag), fmt(row.sum_all));
  json summary;
  summary["d"] = d;
  summary["curvature"] = curvature;
  if (scan.rows.size() >= 2) {
    summary["diagonal_vs_log_L"] = {{"slope", scan.diagonal_fit.slope}, {"r2", scan.diagonal_fit.r2}};
    summary["sum_exponent"] = {{"slope", scan.sum_exponent_fit.slope}, {"r2", scan.sum_exponent_fit.r2}};
  }
  if (d >= 3) {
    summary["g_inf_origin"] = infinite_volume_green_origin(d) / curvature;
    if (scan.rows.size() >= 3) summary["g00_extrapolated"] = extrapolate_green_origin(scan);
  }
  return {kExitOk, "", {{"green.csv", csv.s.str()}, {"summary.json", summary.dump(2) + "\n"}}};
}

}  // namespace

const char* version_string() { return PINFIELD_VERSION; }

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  RunConfig c;
  check_keys(j, {"command", "model", "disorder", "engine", "sampler", "audit", "scan", "threads", "out"}, "config");
  read(j, "command", c.command, "config");
  read(j, "engine", c.engine, "config");
  read(j, "threads", c.threads, "config");
  read(j, "out", c.out, "config");
  if (j.contains("model")) {
    const json& m = j["model"];
    check_keys(m, {"d", "L", "sites", "potential", "curvature", "kappa", "eps"}, "model");
    if (m.contains("d") && !m["d"].is_null()) {
      int d = 0;
      read(m, "d", d, "model");
      c.model.d = d;
    }
    read(m, "L", c.model.L, "model");
    read(m, "sites", c.model.sites, "model");
    read(m, "potential", c.model.potential, "model");
    read(m, "curvature", c.model.curvature, "model");
    read(m, "kappa", c.model.kappa, "model");
    read(m, "eps", c.model.eps, "model");
  }
  if (j.contains("disorder")) {
    const json& m = j["disorder"];
    check_keys(m, {"law", "master_seed", "replicas", "antithetic"}, "disorder");
    read(m, "law", c.disorder.law, "disorder");
    read(m, "master_seed", c.disorder.master_seed, "disorder");
    read(m, "replicas", c.disorder.replicas, "disorder");
    read(m, "antithetic", c.disorder.antithetic, "disorder");
  }
  if (j.contains("sampler")) {
    const json& m = j["sampler"];
    check_keys(m, {"sweeps", "burn_in", "batches", "thinning"}, "sampler");
    read(m, "sweeps", c.sampler.sweeps, "sampler");
    read(m, "burn_in", c.sampler.burn_in, "sampler");
    read(m, "batches", c.sampler.batches, "sampler");
    read(m, "thinning", c.sampler.thinning, "sampler");
  }
  if (j.contains("audit")) {
    const json& m = j["audit"];
    check_keys(m, {"inequalities", "eps0", "constant_sweep_lmax", "field_grid", "eps_grid"}, "audit");
    read(m, "inequalities", c.audit.inequalities, "audit");
    read(m, "eps0", c.audit.eps0, "audit");
    read(m, "constant_sweep_lmax", c.audit.constant_sweep_lmax, "audit");
    read(m, "field_grid", c.audit.field_grid, "audit");
    read(m, "eps_grid", c.audit.eps_grid, "audit");
  }
  if (j.contains("scan")) {
    const json& m = j["scan"];
    check_keys(m, {"kind", "Ls", "h"}, "scan");
    read(m, "kind", c.scan.kind, "scan");
    read(m, "Ls", c.scan.Ls, "scan");
    read(m, "h", c.scan.h, "scan");
  }
  return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("version")) return from_json_text(j["config"].dump());
  return from_json_text(text);
}

std::string RunConfig::to_json_text() const {
  json j;
  j["command"] = command;
  j["model"] = {{"d", model.d ? json(*model.d) : json(nullptr)},
                {"L", model.L},
                {"sites", model.sites},
                {"potential", model.potential},
                {"curvature", model.curvature},
                {"kappa", model.kappa},
                {"eps", model.eps}};
  j["disorder"] = {{"law", disorder.law},
                   {"master_seed", disorder.master_seed},
                   {"replicas", disorder.replicas},
                   {"antithetic", disorder.antithetic}};
  j["engine"] = engine;
  j["sampler"] = {{"sweeps", sampler.sweeps},
                  {"burn_in", sampler.burn_in},
                  {"batches", sampler.batches},
                  {"thinning", sampler.thinning}};
  j["audit"] = {{"inequalities", audit.inequalities},
                {"eps0", audit.eps0},
                {"constant_sweep_lmax", audit.constant_sweep_lmax},
                {"field_grid", audit.field_grid},
                {"eps_grid", audit.eps_grid}};
  j["scan"] = {{"kind", scan.kind}, {"Ls", scan.Ls}, {"h", scan.h}};
  j["threads"] = threads;
  j["out"] = out;
  return j.dump(2);
}

void RunConfig::validate() const {
  if (!kCommands.count(command)) throw ConfigError("command: expected exact|sample|audit|scan|green, got '" + command + "'");
  if (!model.d) throw ConfigError("model.d: missing");
  if (*model.d < 1) throw ConfigError("model.d: must be positive");
  if (threads < 1) throw ConfigError("threads: must be positive");
  if (!std::isfinite(model.eps) || model.eps < 0.0) throw ConfigError("model.eps: must be finite and >= 0");
  try {
    const Volume vol = make_volume(*this);
    const Potential pot = make_potential(*this);
    const DisorderModel law = DisorderModel::parse(disorder.law);
    const Engine eng = parse_engine(engine);
    make_sampler(*this, 1).validate();
    if (disorder.replicas < 1) throw ConfigError("disorder.replicas: must be >= 1");
    if (command == "audit") {
      if (audit.inequalities.empty()) throw ConfigError("audit.inequalities: empty");
      for (const auto& id : audit.inequalities) {
        if (!kInequalities.count(id)) throw ConfigError("audit.inequalities: unknown id '" + id + "'");
      }
      if (audit.constant_sweep_lmax < 8) throw ConfigError("audit.constant_sweep_lmax: must be >= 8");
      auto wants = [&](const char* id) {
        return std::find(audit.inequalities.begin(), audit.inequalities.end(), id) != audit.inequalities.end();
      };
      if (wants(kPinningBound) && !(model.eps > audit.eps0 && audit.eps0 > 0.0)) {
        throw ConfigError("pinning-bound: needs eps > eps0 > 0");
      }
      if (wants(kGaussianIbp) && law.law != DisorderModel::Law::gaussian) {
        throw ConfigError("gaussian-ibp: needs gauss:sigma disorder");
      }
      if (wants(kMonotoneField) && (audit.field_grid.size() < 2 || !increasing(audit.field_grid))) {
        throw ConfigError("audit.field_grid: needs at least two strictly increasing values");
      }
      if (wants(kMonotonePinning) && (audit.eps_grid.size() < 2 || !increasing(audit.eps_grid) ||
                                      audit.eps_grid.front() < 0.0)) {
        throw ConfigError("audit.eps_grid: needs at least two strictly increasing values >= 0");
      }
    }
    if (command == "scan" || command == "green") {
      if (scan.Ls.empty()) throw ConfigError("scan.Ls: empty");
      for (std::size_t k = 0; k < scan.Ls.size(); ++k) {
        if (scan.Ls[k] < 0 || (k > 0 && scan.Ls[k] <= scan.Ls[k - 1])) {
          throw ConfigError("scan.Ls: must be nonnegative and strictly increasing");
        }
      }
    }
    if (command == "scan") {
      if (!kScanKinds.count(scan.kind)) throw ConfigError("scan.kind: unknown kind '" + scan.kind + "'");
      if ((scan.kind == "overlap-d2" || scan.kind == "overlap-d2-curve") && *model.d != 2) {
        throw ConfigError("scan.kind " + scan.kind + ": needs d = 2");
      }
      if (scan.kind == "overlap-dgeq3" && *model.d < 3) throw ConfigError("scan.kind overlap-dgeq3: needs d >= 3");
      if (!(scan.h >= 0.0)) throw ConfigError("scan.h: must be >= 0");
      if (scan.kind == "overlap-d2" || scan.kind == "overlap-dgeq3") {
        if (audit.constant_sweep_lmax < 8) throw ConfigError("audit.constant_sweep_lmax: must be >= 8");
      }
    }
    if (command == "green" && *model.d < 1) throw ConfigError("green: needs d >= 1");
    (void)vol;
    (void)pot;
    (void)eng;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::filesystem::path resolve_output_dir(const RunConfig& config) {
  if (!config.out.empty()) return config.out;
  if (const char* env = std::getenv("PINFIELD_OUT"); env != nullptr && *env != '\0') return env;
  return "pinfield_out";
}

RunResult run(const RunConfig& config) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  try {
    config.validate();
  } catch (const ConfigError& e) {
    return {kExitConfigError, e.what(), {}};
  }
  const auto t1 = clock::now();
  Execution e;
  try {
    if (config.command == "exact") e = run_exact(config);
    else if (config.command == "sample") e = run_sample(config);
    else if (config.command == "audit") e = run_audit(config);
    else if (config.command == "scan") e = run_scan(config);
    else e = run_green(config);
  } catch (const std::exception& ex) {
    return {kExitEngineError, std::string("engine error: ") + ex.what(), {}};
  }
  const auto t2 = clock::now();

  const std::filesystem::path dir = resolve_output_dir(config);
  RunResult result{e.status, e.message, {}};
  json digests = json::object();
  try {
    std::filesystem::create_directories(dir);
    for (const auto& out : e.outputs) {
      const auto path = dir / out.name;
      std::ofstream f(path, std::ios::binary);
      f << out.text;
      if (!f) throw std::runtime_error("cannot write " + path.string());
      digests[out.name] = sha256_hex(out.text);
      result.outputs.push_back(path);
    }
    const auto t3 = clock::now();
    auto seconds = [](clock::duration d) { return std::chrono::duration<double>(d).count(); };
    json manifest;
    manifest["version"] = version_string();
    manifest["command"] = config.command;
    manifest["config"] = json::parse(config.to_json_text());
    manifest["status"] = e.status;
    manifest["wall_clock_seconds"] = seconds(t3 - t0);
    manifest["timings"] = {{"validate", seconds(t1 - t0)}, {"compute", seconds(t2 - t1)}, {"write", seconds(t3 - t2)}};
    manifest["outputs"] = digests;
    const auto path = dir / "manifest.json";
    std::ofstream f(path, std::ios::binary);
    f << manifest.dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write " + path.string());
    result.outputs.push_back(path);
  } catch (const std::exception& ex) {
    return {kExitEngineError, std::string("output error: ") + ex.what(), result.outputs};
  }
  return result;
}

}  // namespace pinfield
