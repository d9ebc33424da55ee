#pragma once

#include "ghlab/core/types.hpp"

#include <functional>
#include <vector>

namespace ghlab::kernels {

/// Integrand writing m components for a point x of the unit-free box coordinates.
using VecIntegrand = std::function<void(const double* x, double* out)>;

struct Box {
  Vec lo, hi;
};

struct CubatureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  long max_evals = 4'000'000;
};

struct CubatureResult {
  Vec value;   // m
  Vec error;   // m
  Vec l1;      // integral of |f_k|, the scale used by the relative tolerance
  long evals = 0;
  bool converged = false;
};

/// h-adaptive cubature over a union of boxes: Gauss-Kronrod 7/15 in one
/// dimension, the Genz-Malik 7/5 pair otherwise. Regions are refined
/// largest-error-first with a fixed tie-break, so results are reproducible.
/// Component k converges once error_k <= max(abs_tol, rel_tol * l1_k).
CubatureResult adaptive_cubature(int dim, int m, const VecIntegrand& f, const std::vector<Box>& boxes,
                                 const CubatureOptions& opt);

/// Adaptive Gauss-Kronrod for a scalar function on [a, b].
struct Quad1d {
  double value = 0, error = 0;
  long evals = 0;
  bool converged = false;
};
Quad1d integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                    double abs_tol = 1e-300, long max_evals = 200'000);

}  // namespace ghlab::kernels
