#pragma once

#include "ghlab/core/types.hpp"

#include <functional>
#include <vector>

namespace ghlab {

struct FdOptions {
  /// Absolute step; 0 picks one from the derivative order and the Richardson flag.
  double step = 0.0;
  bool richardson = true;
};

/// Value, first and second derivatives of a vector-valued map R^d -> R^m.
struct Jet {
  Vec value;               // m
  Mat grad;                // m x d
  std::vector<Mat> hess;   // m entries of d x d
};

using VecMap = std::function<Vec(const Vec&)>;

/// Central differences, optionally with one Richardson level (h and h/2).
Jet fd_jet(const VecMap& f, const Vec& x, const FdOptions& opt = {}, bool second = true);

double fd_default_step(const Vec& x, bool second = false, bool richardson = false);

enum class DerivMode { analytic, finite_difference };

/// Scalar function on the base with gradient/Hessian over (mu, Re eta, Im eta).
class ScalarField {
 public:
  using ValueFn = std::function<double(const BasePoint&)>;
  using GradFn = std::function<Vec(const BasePoint&)>;
  using HessFn = std::function<Mat(const BasePoint&)>;

  static ScalarField analytic(ValueFn v, GradFn g, HessFn h);
  static ScalarField finite_difference(ValueFn v, FdOptions opt = {});

  double value(const BasePoint& p) const { return value_(p); }
  Vec gradient(const BasePoint& p) const;
  Mat hessian(const BasePoint& p) const;
  DerivMode mode() const { return mode_; }
  const FdOptions& fd_options() const { return opt_; }

 private:
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
  DerivMode mode_ = DerivMode::finite_difference;
  FdOptions opt_;
};

}  // namespace ghlab
