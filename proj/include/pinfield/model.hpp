#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pinfield/lattice.hpp"
#include "pinfield/potential.hpp"

namespace pinfield {

/// Quenched field realization eta, one value per site in canonical order.
struct FieldConfig {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  FieldConfig scaled(double factor) const;
};

/// i.i.d. single-site law of the random fields.
struct DisorderModel {
  enum class Law { zero, constant, gaussian, rademacher };

  Law law = Law::zero;
  /// h for constant/rademacher, sigma for gaussian; unused for zero.
  double parameter = 0.0;

  static DisorderModel zero() { return {}; }
  static DisorderModel constant(double h) { return {Law::constant, h}; }
  static DisorderModel gaussian(double sigma);
  static DisorderModel rademacher(double h) { return {Law::rademacher, h}; }
  /// Parses "zero", "const:h", "gauss:sigma" or "rademacher:h".
  static DisorderModel parse(const std::string& text);

  double second_moment() const;
  bool symmetric() const { return law != Law::constant || parameter == 0.0; }
  std::string to_string() const;
};

/// Parameters of the finite-volume Gibbs measure.
struct ModelParams {
  Volume volume;
  Potential potential;
  double epsilon;
  FieldConfig eta;

  ModelParams(Volume vol, Potential pot, double eps, FieldConfig fields);
};

/// Energy H with zero boundary condition outside the volume:
///   H = (1/4d) sum_<ij> V(phi_i - phi_j) + (1/4d) sum_{boundary (i,j)} V(phi_i) - sum_i eta_i phi_i
double hamiltonian(const Volume& vol, const Potential& pot, const FieldConfig& eta, std::span<const double> phi);

/// Independent draw per site from a counter-based stream keyed by (seed, site index),
/// so the result does not depend on iteration order.
FieldConfig sample_disorder(const DisorderModel& model, const Volume& vol, std::uint64_t seed);

}  // namespace pinfield
