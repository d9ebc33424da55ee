#pragma once

#include "ghlab/ansatz/first_order.hpp"

#include <functional>
#include <string>

namespace ghlab::ansatz {

/// Least-squares fit log|y| = intercept - exponent * log x.
struct DecayFit {
  double exponent = 0, intercept = 0, r2 = 0;
  std::vector<std::pair<double, double>> samples;   // (x, |y|)
  int rejected = 0;

  /// >= 8 samples spanning >= 2 decades in x.
  bool adequate() const;
};

DecayFit fit_power_law(const std::vector<std::pair<double, double>>& samples);

/// p(r) = base + r * direction over the flat coordinates.
struct Ray {
  std::string name;
  BasePoint base;
  Vec direction;   // length N + 2

  BasePoint at(double r) const;
};

/// r_k = r0 * 2^(k/2), k = 0..count-1.
std::vector<double> geometric_radii(double r0, int count = 17);

/// The three N = 3 families: generic (everything scales), parallel to D_{01}
/// at a fixed transverse offset, and along D_{012} at a fixed offset.
Ray generic_ray(int n);
Ray simple_ray(int n);
Ray deep_ray(int n);

/// l_i = 1 + distance to the union of D_J over |J| = i + 1.
double weight_ell(const QuadForm& a, int i, const BasePoint& p);

enum class WeightMode { radius, anorm, ell };

struct DecayOptions {
  WeightMode mode = WeightMode::anorm;
  int ell_index = 1;
  double locus_margin = 1e-8;   // samples closer than this to the locus are rejected
};

/// Fits |quantity| against the chosen abscissa along the ray.
DecayFit decay_scan(const QuadForm& a, const std::function<double(const BasePoint&)>& quantity, const Ray& ray,
                    const std::vector<double>& radii, const DecayOptions& opt = {});

/// |E| of the first-order field.
std::function<double(const BasePoint&)> first_order_error(const QuadForm& a, const kernels::QuadratureSpec& q);

}  // namespace ghlab::ansatz
