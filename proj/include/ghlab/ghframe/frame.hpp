#pragma once

#include "ghlab/ansatz/field.hpp"

#include <array>

namespace ghlab::ghframe {

using ansatz::GHField;
using ansatz::GHSample;

/// Gram matrix of the GH metric in the adapted coframe
/// (dmu_1..dmu_N, theta_1..theta_N, dx, dy): blockdiag(V, V^{-1}, W I_2).
struct FramePoint {
  BasePoint base;
  Mat V;
  double W = 0;
  Mat gram;

  /// sqrt(det gram) / det V: the ratio of the Riemannian volume to the
  /// normalised holomorphic volume, equal to W / det V.
  double volume_ratio() const;
};

FramePoint frame_at(const GHField& field, const BasePoint& p);

struct CyResidual {
  double absolute = 0;     // det V - W
  double normalized = 0;   // det V / W - 1
};
CyResidual cy_residual(const GHField& field, const BasePoint& p);

/// first:  max_{i,j,k} |dV_ij/dmu_k - dV_ik/dmu_j|
/// second: max_{i,j} |W_{mu_i mu_j} + (V_xx + V_yy)_ij|
/// The relative forms divide by the largest magnitude among the terms involved.
struct Integrability {
  double first = 0, second = 0;
  double first_rel = 0, second_rel = 0;
};
Integrability integrability_residual(const GHField& field, const BasePoint& p);
Integrability integrability_residual(const GHSample& s);

/// F_j written as a real 2-form on (mu, x, y):
///   F_j = W_{mu_j} dx^dy + sum_i dmu_i ^ (V_ij,y dx - V_ij,x dy).
/// Complex components follow from dx = (deta + deta~)/2, dy = (deta - deta~)/(2i).
struct CurvatureSample {
  Vec xy;             // coefficient of dx^dy, per j
  Mat mu_x, mu_y;     // (i, j): coefficient of dmu_i ^ dx, dmu_i ^ dy in F_j
  Eigen::MatrixXcd mu_eta, mu_etabar;   // (i, j): dmu_i ^ deta, dmu_i ^ deta~
  Eigen::VectorXcd eta_etabar;          // deta ^ deta~
  double dF_residual = 0;               // largest coefficient of dmu_i ^ dx ^ dy in dF_j
  double max_abs = 0;                   // largest real coefficient
};
CurvatureSample curvature_F(const GHField& field, const BasePoint& p);

/// |du|_g with the co-metric V^{-1} on mu-covectors and W^{-1} on (x, y).
double grad_norm(const GHField& field, const ScalarField& u, const BasePoint& p);

}  // namespace ghlab::ghframe
