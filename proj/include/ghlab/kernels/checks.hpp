#pragma once

#include "ghlab/kernels/kernel.hpp"

namespace ghlab::kernels {

/// amplitude * exp(1 - 1/(1 - s^2)), s = |x - centre| / radius in the flat
/// coordinates (mu, Re eta, Im eta); zero for s >= 1.
struct Bump {
  BasePoint centre;
  double radius = 1;
  double amplitude = 1;

  double value(const Vec& x) const;
  Mat hessian(const Vec& x) const;
};

struct WeakCheck {
  double lhs = 0, rhs = 0, rel_gap = 0;
  long evals = 0;
  bool converged = false;
};

/// lhs = integral of alpha * Lap_A(bump) dVol_A,
/// rhs = -2 pi sqrt(det A) * integral over the stratum cone of bump(sum_k u_k g_k) du.
/// Throws std::invalid_argument if the support reaches the boundary of the kernel's stratum.
WeakCheck weak_distributional_check(const QuadForm& a, const KernelSpec& spec, const Bump& bump,
                                    const QuadratureSpec& inner, double outer_rel_tol = 1e-4);

}  // namespace ghlab::kernels
