#include "pinfield/model.hpp"

#include <cmath>
#include <sstream>

#include "pinfield/philox.hpp"

namespace pinfield {

FieldConfig FieldConfig::scaled(double factor) const {
  FieldConfig out{values};
  for (double& v : out.values) v *= factor;
  return out;
}

DisorderModel DisorderModel::gaussian(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("gaussian disorder: sigma must be >= 0");
  return {Law::gaussian, sigma};
}

DisorderModel DisorderModel::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  if (name == "zero") {
    if (colon != std::string::npos) throw InvalidArgument("disorder 'zero' takes no parameter");
    return zero();
  }
  if (colon == std::string::npos) throw InvalidArgument("disorder '" + text + "' needs a parameter");
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw InvalidArgument("trailing characters");
  } catch (const std::exception&) {
    throw InvalidArgument("disorder '" + text + "': bad numeric parameter");
  }
  if (!std::isfinite(value)) throw InvalidArgument("disorder parameter must be finite");
  if (name == "const") return constant(value);
  if (name == "gauss") return gaussian(value);
  if (name == "rademacher") return rademacher(value);
  throw InvalidArgument("unknown disorder law '" + name + "'");
}

double DisorderModel::second_moment() const {
  return law == Law::zero ? 0.0 : parameter * parameter;
}

std::string DisorderModel::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (law) {
    case Law::zero: return "zero";
    case Law::constant: os << "const:" << parameter; break;
    case Law::gaussian: os << "gauss:" << parameter; break;
    case Law::rademacher: os << "rademacher:" << parameter; break;
  }
  return os.str();
}

ModelParams::ModelParams(Volume vol, Potential pot, double eps, FieldConfig fields)
    : volume(std::move(vol)), potential(pot), epsilon(eps), eta(std::move(fields)) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("model: epsilon must be finite and >= 0");
  if (eta.size() != volume.size()) throw InvalidArgument("model: field length does not match the volume");
}

double hamiltonian(const Volume& vol, const Potential& pot, const FieldConfig& eta, std::span<const double> phi) {
  if (phi.size() != vol.size() || eta.size() != vol.size()) {
    throw InvalidArgument("hamiltonian: configuration length does not match the volume");
  }
  const double weight = 1.0 / (4.0 * vol.dimension());
  double pair = 0.0;
  for (const auto& [i, j] : vol.internal_edges()) pair += pot.value(phi[i] - phi[j]);
  double boundary = 0.0;
  double field = 0.0;
  for (std::size_t i = 0; i < vol.size(); ++i) {
    boundary += vol.boundary_degree(i) * pot.value(phi[i]);
    field += eta[i] * phi[i];
  }
  return weight * (pair + boundary) - field;
}

FieldConfig sample_disorder(const DisorderModel& model, const Volume& vol, std::uint64_t seed) {
  FieldConfig eta{std::vector<double>(vol.size(), 0.0)};
  switch (model.law) {
    case DisorderModel::Law::zero:
      break;
    case DisorderModel::Law::constant:
      std::fill(eta.values.begin(), eta.values.end(), model.parameter);
      break;
    case DisorderModel::Law::gaussian:
      if (model.parameter < 0.0) throw InvalidArgument("gaussian disorder: sigma must be >= 0");
      for (std::size_t i = 0; i < vol.size(); ++i) {
        CounterRng rng(seed, i);
        eta.values[i] = model.parameter * rng.normal();
      }
      break;
    case DisorderModel::Law::rademacher:
      for (std::size_t i = 0; i < vol.size(); ++i) {
        CounterRng rng(seed, i);
        eta.values[i] = (rng() >> 63) != 0 ? model.parameter : -model.parameter;
      }
      break;
  }
  return eta;
}

}  // namespace pinfield
