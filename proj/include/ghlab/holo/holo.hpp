#pragma once

#include "ghlab/kernels/kernel.hpp"

#include <vector>

namespace ghlab::holo {

/// Holomorphic data along the stratum I = {0, 1, ..., n}, built from the
/// restricted first-order coefficients p_ij = v_{I,ij}, i, j in 1..n.
///   gamma_i (i >= 1): -2 int_0^inf d_eta p_ii(mu + s e_i, eta) ds
///   gamma_0:          -2 int_0^inf sum_ij d_eta p_ij(mu - s (e_1 + ... + e_n), eta) ds
/// so that d gamma_i / d mu_j = 2 d_eta p_ij, and every gamma_i vanishes at
/// the far end of its ray.
class Gamma {
 public:
  Gamma(const QuadForm& a, int n, const kernels::QuadratureSpec& q, double line_rel_tol = 1e-9);

  int n() const { return n_; }
  const QuadForm& form() const { return a_; }
  const IndexSet& stratum() const { return i_; }

  /// gamma_0 .. gamma_n.
  std::vector<cplx> all(const BasePoint& p) const;
  cplx gamma(int i, const BasePoint& p) const;

  /// p_ij on the n x n block and d_eta p_ij = (d_x - i d_y) p_ij / 2.
  Mat p_block(const BasePoint& p) const;
  Eigen::MatrixXcd p_block_deta(const BasePoint& p) const;

  /// Schur complement G_I on 1..n.
  const Mat& G() const { return g_; }

  long evals() const { return evals_; }

 private:
  cplx ray_integral(int i, const BasePoint& p) const;

  QuadForm a_;
  int n_;
  IndexSet i_;
  kernels::QuadratureSpec q_;
  double line_tol_;
  std::vector<kernels::Kernel> kernels_;   // alpha_{I,ab}, a < b in I
  Mat g_;
  mutable long evals_ = 0;
};

/// |sum gamma_i - 1/eta| * |eta|.
double gamma_sum_check(const Gamma& g, const BasePoint& p);

/// log|z_0| .. log|z_n| at the end of a polyline, integrating
///   d log|z_i| = sum_j (G + p)_ij dmu_j + Re(gamma_i deta),   i >= 1,
///   d log|z_0| = -sum_ij (G + p)_ij dmu_j + Re(gamma_0 deta).
/// Gauge: log|z_0| = log|eta| and log|z_i| = 0 at the first vertex.
struct LogZ {
  Vec log_abs;
  double product_gap = 0;   // |sum log|z_i| - log|eta||
  bool converged = true;
};
LogZ log_z(const Gamma& g, const std::vector<BasePoint>& path, double rel_tol = 1e-10);

/// N = 1 model coordinates with integration constant c:
///   |w_1|^2 = e^c e^{2 G mu} (mu + r), |w_0|^2 = e^{-c} e^{-2 G mu} (r - mu), r = sqrt(mu^2 + |eta|^2).
struct ModelCoords {
  double w0 = 0, w1 = 0;
};
ModelCoords model_coords(double g, double c, const BasePoint& p);

/// Fitted K1..K4 with K1 e^{K2 s} m <= |z| <= K3 e^{K4 s} m on every sample,
/// s = |mu_I| and m = |vec mu_I|. The exponents are least-squares slopes of
/// log(|z| / m) against s; K1 and K3 are then the tightest constants.
struct GrowthSample {
  double mu_norm = 0;    // |mu_I|
  double vec_norm = 0;   // |vec mu_I|
  double z_norm = 0;
};
struct GrowthFit {
  double K1 = 0, K2 = 0, K3 = 0, K4 = 0;
  bool holds = false;
  int used = 0;
};
GrowthFit growth_bound_check(const std::vector<GrowthSample>& samples, double radius_floor);

}  // namespace ghlab::holo
