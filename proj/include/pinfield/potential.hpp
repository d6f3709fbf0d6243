#pragma once

#include <string>

namespace pinfield {

/// Even pair interaction V with V(0) = 0 and curvature bounds c_minus <= V'' <= c_plus.
///
/// Two families are built in:
///   gaussian(c):     V(t) = c t^2 / 2
///   anharmonic(k):   V(t) = k t^2 / 2 + (1 - k) log cosh t,   k in (0, 1]
/// The anharmonic family has inf V'' = k, sup V'' = 1 and quadratic growth.
class Potential {
 public:
  enum class Kind { gaussian, anharmonic };

  static Potential gaussian(double curvature = 1.0);
  static Potential anharmonic(double kappa);

  Kind kind() const { return kind_; }
  bool is_gaussian() const { return kind_ == Kind::gaussian; }
  /// Curvature c for the Gaussian family, kappa for the anharmonic family.
  double parameter() const { return parameter_; }

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  double c_minus() const { return c_minus_; }
  double c_plus() const { return c_plus_; }
  double growth_exponent() const { return 2.0; }

  std::string describe() const;

 private:
  Potential(Kind kind, double parameter);
  void validate() const;

  Kind kind_;
  double parameter_;
  double c_minus_;
  double c_plus_;
};

}  // namespace pinfield
