#include "pinfield/potential.hpp"

#include <cmath>
#include <sstream>

#include "pinfield/lattice.hpp"

namespace pinfield {

namespace {

double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

Potential::Potential(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {
  if (kind == Kind::gaussian) {
    if (!(parameter > 0.0) || !std::isfinite(parameter)) {
      throw InvalidArgument("gaussian potential: curvature must be positive and finite");
    }
    c_minus_ = parameter;
    c_plus_ = parameter;
  } else {
    if (!(parameter > 0.0 && parameter <= 1.0)) {
      throw InvalidArgument("anharmonic potential: kappa must lie in (0, 1]");
    }
    c_minus_ = parameter;
    c_plus_ = 1.0;
  }
  validate();
}

Potential Potential::gaussian(double curvature) { return Potential(Kind::gaussian, curvature); }

Potential Potential::anharmonic(double kappa) { return Potential(Kind::anharmonic, kappa); }

double Potential::value(double t) const {
  if (kind_ == Kind::gaussian) return 0.5 * parameter_ * t * t;
  return 0.5 * parameter_ * t * t + (1.0 - parameter_) * log_cosh(t);
}

double Potential::derivative(double t) const {
  if (kind_ == Kind::gaussian) return parameter_ * t;
  return parameter_ * t + (1.0 - parameter_) * std::tanh(t);
}

double Potential::second_derivative(double t) const {
  if (kind_ == Kind::gaussian) return parameter_;
  const double s = 1.0 / std::cosh(t);
  return parameter_ + (1.0 - parameter_) * s * s;
}

// Evenness, V(0) = 0 and the curvature window, checked on a grid.
void Potential::validate() const {
  if (value(0.0) != 0.0) throw InvalidArgument("potential: V(0) must vanish");
  for (int k = 0; k <= 400; ++k) {
    const double t = -20.0 + 0.1 * k;
    const double v = value(t);
    if (std::abs(v - value(-t)) > 1e-12 * (1.0 + std::abs(v))) {
      throw InvalidArgument("potential: V must be even");
    }
    const double c = second_derivative(t);
    if (c < c_minus_ * (1.0 - 1e-12) || c > c_plus_ * (1.0 + 1e-12)) {
      throw InvalidArgument("potential: curvature metadata inconsistent with V''");
    }
  }
}

std::string Potential::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::gaussian) {
    os << "gaussian(c=" << parameter_ << ")";
  } else {
    os << "anharmonic(kappa=" << parameter_ << ")";
  }
  return os.str();
}

}  // namespace pinfield
