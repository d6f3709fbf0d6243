#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "pinfield/runner.hpp"

using namespace pinfield;

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<int> parse_ints(const std::string& text, const char* flag) {
  std::vector<int> v;
  for (const auto& s : split(text)) {
    std::size_t used = 0;
    int x = 0;
    try {
      x = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw ConfigError(std::string(flag) + ": not an integer list: " + text);
    v.push_back(x);
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-field pinning model: exact solver, sampler, inequality audits and scans"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1, 1);

  std::string config_path;
  int d = 0, L = 0, threads = 1;
  double eps = 0, kappa = 0, curvature = 1, eps0 = 1, h = 0;
  std::string disorder, engine, out, potential, inequality, scan_kind, Ls, sites;
  std::uint64_t seed = 0;
  std::size_t replicas = 0, sweeps = 0, burnin = 0, batches = 0, thinning = 0;

  for (const char* name : {"exact", "sample", "audit", "scan", "green"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file or run manifest");
    sub->add_option("--d", d, "lattice dimension");
    sub->add_option("--L", L, "box [-L, L]^d");
    sub->add_option("--eps", eps, "pinning strength");
    sub->add_option("--kappa", kappa, "anharmonic potential parameter (selects the anharmonic potential)");
    sub->add_option("--curvature", curvature, "Gaussian potential curvature");
    sub->add_option("--potential", potential, "gaussian | anharmonic");
    sub->add_option("--disorder", disorder, "zero | const:h | gauss:sigma | rademacher:h");
    sub->add_option("--replicas", replicas, "disorder replicas");
    sub->add_option("--seed", seed, "master seed (fields and chains)");
    sub->add_option("--sweeps", sweeps, "sampler sweeps after burn-in");
    sub->add_option("--burnin", burnin, "sampler burn-in sweeps");
    sub->add_option("--batches", batches, "batch-means batches");
    sub->add_option("--thinning", thinning, "record every k-th sweep");
    sub->add_option("--eps0", eps0, "reference pinning strength of the pinning bound");
    sub->add_option("--engine", engine, "auto | exact | mcmc");
    sub->add_option("--inequality", inequality, "comma-separated audit ids");
    sub->add_option("--scan", scan_kind, "overlap-d2 | overlap-d2-curve | overlap-dgeq3 | constant-field");
    sub->add_option("--Ls", Ls, "comma-separated box sizes for scan and green");
    sub->add_option("--field", h, "constant field strength h of the constant-field scan");
    sub->add_option("--sites", sites, "explicit sites, e.g. \"0,0;1,0\" (replaces the box)");
    sub->add_option("--out", out, "output directory (default $PINFIELD_OUT)");
    sub->add_option("--threads", threads, "worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto given = [&](const char* flag) { return sub->count(flag) > 0; };
  RunConfig config;
  try {
    if (given("--config")) config = RunConfig::from_file(config_path);
    config.command = sub->get_name();
    if (given("--d")) config.model.d = d;
    if (given("--L")) {
      config.model.L = L;
      config.model.sites.clear();
    }
    if (given("--sites")) {
      config.model.sites.clear();
      std::stringstream ss(sites);
      std::string site;
      while (std::getline(ss, site, ';')) config.model.sites.push_back(parse_ints(site, "--sites"));
    }
    if (given("--eps")) config.model.eps = eps;
    if (given("--potential")) config.model.potential = potential;
    if (given("--kappa")) {
      config.model.kappa = kappa;
      config.model.potential = "anharmonic";
    }
    if (given("--curvature")) config.model.curvature = curvature;
    if (given("--disorder")) config.disorder.law = disorder;
    if (given("--replicas")) config.disorder.replicas = replicas;
    if (given("--seed")) config.disorder.master_seed = seed;
    if (given("--sweeps")) config.sampler.sweeps = sweeps;
    if (given("--burnin")) config.sampler.burn_in = burnin;
    if (given("--batches")) config.sampler.batches = batches;
    if (given("--thinning")) config.sampler.thinning = thinning;
    if (given("--eps0")) config.audit.eps0 = eps0;
    if (given("--engine")) config.engine = engine;
    if (given("--inequality")) config.audit.inequalities = split(inequality);
    if (given("--scan")) config.scan.kind = scan_kind;
    if (given("--Ls")) config.scan.Ls = parse_ints(Ls, "--Ls");
    if (given("--field")) config.scan.h = h;
    if (given("--out")) config.out = out;
    if (given("--threads")) config.threads = threads;
  } catch (const ConfigError& e) {
    std::cerr << "pinfield: " << e.what() << '\n';
    return kExitConfigError;
  }

  const RunResult result = run(config);
  if (!result.message.empty()) std::cerr << "pinfield: " << result.message << '\n';
  for (const auto& path : result.outputs) std::cout << path.string() << '\n';
  return result.status;
}
