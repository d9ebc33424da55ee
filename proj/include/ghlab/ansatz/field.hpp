#pragma once

#include "ghlab/core/finite_diff.hpp"

#include <functional>
#include <string>
#include <utility>

namespace ghlab::ansatz {

/// GH coefficients at one point. Derivative slots are over the flat
/// coordinates (mu_1..mu_N, x = Re eta, y = Im eta).
struct GHSample {
  Mat V;
  double W = 0;
  int order = 0;
  std::vector<Mat> dV;   // N + 2 entries, filled for order >= 1
  Vec dW;                // N + 2
  Mat eta_lap_V;         // V_xx + V_yy, filled for order >= 2
  Mat hess_W;            // (N + 2) x (N + 2)
};

/// Pair (V, W) on a base domain, with derivative access.
class GHField {
 public:
  using Sampler = std::function<GHSample(const BasePoint&, int order)>;
  using Values = std::function<std::pair<Mat, double>(const BasePoint&)>;
  using Domain = std::function<bool(const BasePoint&)>;

  GHField(int n, Sampler s, Domain domain = {}, std::string name = "field", DerivMode mode = DerivMode::analytic);

  /// V = A, W = det A everywhere.
  static GHField constant(const QuadForm& a);
  /// Derivatives by central differences of the values.
  static GHField from_values(int n, Values f, FdOptions opt = {}, Domain domain = {}, std::string name = "field");

  GHSample sample(const BasePoint& p, int order = 0) const;
  bool in_domain(const BasePoint& p) const { return !domain_ || domain_(p); }
  int n() const { return n_; }
  const std::string& name() const { return name_; }
  DerivMode mode() const { return mode_; }

 private:
  int n_;
  Sampler sampler_;
  Domain domain_;
  std::string name_;
  DerivMode mode_;
};

}  // namespace ghlab::ansatz
