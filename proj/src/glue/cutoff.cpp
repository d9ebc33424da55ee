#include "ghlab/glue/cutoff.hpp"

#include "ghlab/kernels/cubature.hpp"

#include <cmath>

namespace ghlab::glue {

namespace {

constexpr double kWidth = Cutoff::outer - Cutoff::inner;

double bump(double s) { return s <= 0 || s >= 1 ? 0.0 : std::exp(-1 / (s * (1 - s))); }

double bump_prime(double s) {
  if (s <= 0 || s >= 1) return 0.0;
  const double q = s * (1 - s);
  return bump(s) * (1 - 2 * s) / (q * q);
}

double primitive(double s) {
  if (s <= 0) return 0;
  return kernels::integrate_1d(bump, 0, std::min(s, 1.0), 1e-14, 1e-300).value;
}

}  // namespace

Cutoff::Cutoff() {
  norm_ = primitive(1.0);
  for (int k = 1; k < 4000; ++k) {
    const double x = inner + kWidth * k / 4000.0;
    max1_ = std::max(max1_, std::abs(derivative(x)));
    max2_ = std::max(max2_, std::abs(second_derivative(x)));
  }
}

double Cutoff::operator()(double x) const {
  const double a = std::abs(x);
  if (a <= inner) return 1.0;
  if (a >= outer) return 0.0;
  const double s = (outer - a) / kWidth;
  // Integrate from the nearer end so both plateaus are approached smoothly.
  if (s <= 0.5) return primitive(s) / norm_;
  return 1.0 - primitive(1 - s) / norm_;
}

double Cutoff::derivative(double x) const {
  const double a = std::abs(x);
  if (a <= inner || a >= outer) return 0.0;
  const double s = (outer - a) / kWidth;
  const double d = -bump(s) / (norm_ * kWidth);
  return x < 0 ? -d : d;
}

double Cutoff::second_derivative(double x) const {
  const double a = std::abs(x);
  if (a <= inner || a >= outer) return 0.0;
  const double s = (outer - a) / kWidth;
  return bump_prime(s) / (norm_ * kWidth * kWidth);
}

const Cutoff& cutoff() {
  static const Cutoff c;
  return c;
}

}  // namespace ghlab::glue
