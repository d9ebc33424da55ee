#pragma once

#include "ghlab/ansatz/field.hpp"
#include "ghlab/kernels/kernel.hpp"

#include <optional>

namespace ghlab::ansatz {

/// v_ii = alpha_0i + sum_{k != i} alpha_ik, v_ij = -alpha_ij, w = det A tr(A^{-1} v).
/// With a restriction I every kernel is replaced by alpha_{I,..}, so v_ij = 0
/// unless i, j are both in I.
struct FirstOrderSample {
  Mat v;
  double w = 0;
  GHSample field;     // V = A + v, W = det A + w, with derivatives up to the requested order
  bool spd = true;    // V positive definite
  double error = 0;   // largest kernel quadrature error estimate
  bool converged = true;
  long evals = 0;
};

class FirstOrderField {
 public:
  FirstOrderField(const QuadForm& a, const kernels::QuadratureSpec& q, std::optional<IndexSet> restriction = {});

  FirstOrderSample eval(const BasePoint& p, int order = 0) const;
  GHField as_field() const;

  const QuadForm& form() const { return a_; }
  const std::optional<IndexSet>& restriction() const { return restriction_; }

 private:
  QuadForm a_;
  kernels::QuadratureSpec q_;
  std::optional<IndexSet> restriction_;
  std::vector<kernels::Kernel> kernels_;   // (a, b) pairs, a < b, in lexicographic order
};

/// V1 and W1 of the first-order ansatz.
std::pair<Mat, double> first_order_field(const QuadForm& a, const kernels::QuadratureSpec& q, const BasePoint& p);

/// Remainders h_{I,ij} = v_ij - v_{I,ij} and h_I = w - w_I.
struct Remainder {
  Mat v_I, h;
  double w_I = 0, h_w = 0;
};
Remainder restricted_field(const QuadForm& a, const IndexSet& i, const kernels::QuadratureSpec& q, const BasePoint& p);

/// sigma_k(A^{-1} v) for k = 1..N and the volume-form error
/// E = -det A S / (det A + w + det A S), S = sum_{k >= 2} sigma_k.
struct SigmaExpansion {
  Vec sigma;
  double E = 0;
  double E_direct = 0;   // W / det V - 1 evaluated directly
};
SigmaExpansion sigma_expansion(const QuadForm& a, const Mat& v);

}  // namespace ghlab::ansatz
