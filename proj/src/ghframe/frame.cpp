#include "ghlab/ghframe/frame.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace ghlab::ghframe {

double FramePoint::volume_ratio() const { return std::sqrt(gram.determinant()) / V.determinant(); }

FramePoint frame_at(const GHField& field, const BasePoint& p) {
  const GHSample s = field.sample(p, 0);
  const int n = field.n();
  Eigen::LLT<Mat> llt(s.V);
  if (llt.info() != Eigen::Success || !(s.W > 0)) throw std::domain_error("frame_at: V not SPD or W not positive");
  FramePoint f;
  f.base = p;
  f.V = s.V;
  f.W = s.W;
  f.gram = Mat::Zero(2 * n + 2, 2 * n + 2);
  f.gram.topLeftCorner(n, n) = s.V;
  f.gram.block(n, n, n, n) = llt.solve(Mat::Identity(n, n));
  f.gram(2 * n, 2 * n) = f.gram(2 * n + 1, 2 * n + 1) = s.W;
  return f;
}

CyResidual cy_residual(const GHField& field, const BasePoint& p) {
  const GHSample s = field.sample(p, 0);
  const double det = s.V.determinant();
  return {det - s.W, det / s.W - 1};
}

Integrability integrability_residual(const GHSample& s) {
  if (s.order < 2) throw std::invalid_argument("integrability_residual: needs second derivatives");
  const int n = static_cast<int>(s.V.rows());
  Integrability r;
  double scale1 = 0, scale2 = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double a = s.dV[k](i, j), b = s.dV[j](i, k);
        r.first = std::max(r.first, std::abs(a - b));
        scale1 = std::max({scale1, std::abs(a), std::abs(b)});
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = s.hess_W(i, j), b = s.eta_lap_V(i, j);
      r.second = std::max(r.second, std::abs(a + b));
      scale2 = std::max({scale2, std::abs(a), std::abs(b)});
    }
  r.first_rel = scale1 > 0 ? r.first / scale1 : r.first;
  r.second_rel = scale2 > 0 ? r.second / scale2 : r.second;
  return r;
}

Integrability integrability_residual(const GHField& field, const BasePoint& p) {
  return integrability_residual(field.sample(p, 2));
}

CurvatureSample curvature_F(const GHField& field, const BasePoint& p) {
  const GHSample s = field.sample(p, 2);
  const int n = field.n();
  const cplx I(0, 1);
  CurvatureSample c;
  c.xy = s.dW.head(n);
  c.mu_x.resize(n, n);
  c.mu_y.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      c.mu_x(i, j) = s.dV[n + 1](i, j);
      c.mu_y(i, j) = -s.dV[n](i, j);
    }
  // a dmu^dx + b dmu^dy = dmu ^ ((a - i b)/2 deta + (a + i b)/2 deta~); dx^dy = (i/2) deta^deta~.
  c.mu_eta = (c.mu_x.cast<cplx>() - I * c.mu_y.cast<cplx>()) / 2.0;
  c.mu_etabar = (c.mu_x.cast<cplx>() + I * c.mu_y.cast<cplx>()) / 2.0;
  c.eta_etabar = c.xy.cast<cplx>() * (I / 2.0);
  c.max_abs = std::max({c.xy.cwiseAbs().maxCoeff(), c.mu_x.cwiseAbs().maxCoeff(), c.mu_y.cwiseAbs().maxCoeff()});
  c.dF_residual = integrability_residual(s).second;
  return c;
}

double grad_norm(const GHField& field, const ScalarField& u, const BasePoint& p) {
  const GHSample s = field.sample(p, 0);
  const int n = field.n();
  const Vec g = u.gradient(p);
  const Vec gm = g.head(n);
  const double mu_part = gm.dot(Eigen::LLT<Mat>(s.V).solve(gm));
  const double eta_part = (g[n] * g[n] + g[n + 1] * g[n + 1]) / s.W;
  return std::sqrt(std::max(0.0, mu_part + eta_part));
}

}  // namespace ghlab::ghframe
