#include "ghlab/ansatz/first_order.hpp"

#include "ghlab/locus/locus.hpp"

#include <Eigen/Eigenvalues>

namespace ghlab::ansatz {

using kernels::Kernel;
using kernels::KernelSpec;
using kernels::Order;

FirstOrderField::FirstOrderField(const QuadForm& a, const kernels::QuadratureSpec& q, std::optional<IndexSet> restriction)
    : a_(a), q_(q), restriction_(std::move(restriction)) {
  q_.validate();
  const int n = a.n();
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      KernelSpec s{i, j, std::nullopt};
      if (restriction_) s = s.restricted_to(*restriction_);
      kernels_.emplace_back(a, s);
    }
}

FirstOrderSample FirstOrderField::eval(const BasePoint& p, int order) const {
  const int n = a_.n(), d = n + 2;
  const Order ord = order >= 2 ? Order::hessian : order == 1 ? Order::gradient : Order::value;
  // Each kernel alpha_ab enters v linearly: with e_0 = 0 it contributes
  // alpha_ab (e_a - e_b)(e_a - e_b)^T in the mu_1..mu_N indices.
  FirstOrderSample out;
  out.v = Mat::Zero(n, n);
  std::vector<Mat> dv(order >= 1 ? d : 0, Mat::Zero(n, n));
  std::vector<Mat> hv(order >= 2 ? n * n : 0);
  std::vector<std::vector<Mat>> hess_v;
  if (order >= 2) hess_v.assign(n, std::vector<Mat>(n, Mat::Zero(d, d)));
  for (const auto& k : kernels_) {
    if (k.identically_zero()) continue;
    const auto kv = k.eval(p, q_, ord);
    out.error = std::max(out.error, kv.error);
    out.converged = out.converged && kv.converged;
    out.evals += kv.evals;
    const int a = k.spec().a, b = k.spec().b;
    auto add = [&](auto&& apply) {
      if (a >= 1) apply(a - 1, a - 1, 1.0);
      apply(b - 1, b - 1, 1.0);
      if (a >= 1) {
        apply(a - 1, b - 1, -1.0);
        apply(b - 1, a - 1, -1.0);
      }
    };
    add([&](int i, int j, double s) { out.v(i, j) += s * kv.value; });
    if (order >= 1)
      add([&](int i, int j, double s) {
        for (int c = 0; c < d; ++c) dv[c](i, j) += s * kv.grad[c];
      });
    if (order >= 2) add([&](int i, int j, double s) { hess_v[i][j] += s * kv.hess; });
  }
  const Mat& ainv = a_.inverse();
  const double det = a_.det();
  out.w = det * (ainv.cwiseProduct(out.v)).sum();
  GHSample& g = out.field;
  g.order = order;
  g.V = a_.matrix() + out.v;
  g.W = det + out.w;
  if (order >= 1) {
    g.dV = dv;
    g.dW.resize(d);
    for (int c = 0; c < d; ++c) g.dW[c] = det * ainv.cwiseProduct(dv[c]).sum();
  }
  if (order >= 2) {
    g.eta_lap_V.resize(n, n);
    g.hess_W = Mat::Zero(d, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        g.eta_lap_V(i, j) = hess_v[i][j](n, n) + hess_v[i][j](n + 1, n + 1);
        g.hess_W += det * ainv(i, j) * hess_v[i][j];
      }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(g.V, Eigen::EigenvaluesOnly);
  out.spd = es.eigenvalues().minCoeff() > 0;
  return out;
}

GHField FirstOrderField::as_field() const {
  auto self = *this;
  auto s = [self](const BasePoint& p, int order) { return self.eval(p, order).field; };
  std::string name = restriction_ ? "first-order|" + restriction_->label() : "first-order";
  return GHField(a_.n(), s, {}, name);
}

std::pair<Mat, double> first_order_field(const QuadForm& a, const kernels::QuadratureSpec& q, const BasePoint& p) {
  const auto s = FirstOrderField(a, q).eval(p, 0);
  return {s.field.V, s.field.W};
}

Remainder restricted_field(const QuadForm& a, const IndexSet& i, const kernels::QuadratureSpec& q, const BasePoint& p) {
  i.require_stratum();
  const locus::RegionReport r = locus::region_membership(a, locus::RegionConstants::defaults(a), p);
  if (!r.in_B(i)) throw std::domain_error("restricted_field: point outside B" + i.label());
  const auto full = FirstOrderField(a, q).eval(p, 0);
  const auto part = FirstOrderField(a, q, i).eval(p, 0);
  Remainder out;
  out.v_I = part.v;
  out.w_I = part.w;
  out.h = full.v - part.v;
  out.h_w = full.w - part.w;
  return out;
}

SigmaExpansion sigma_expansion(const QuadForm& a, const Mat& v) {
  const int n = a.n();
  if (v.rows() != n || v.cols() != n) throw std::invalid_argument("sigma_expansion: dimension mismatch");
  // A^{-1} v is similar to the symmetric L^{-1} v L^{-T}.
  const Mat& l = a.chol();
  const Mat m = l.triangularView<Eigen::Lower>().solve(
      l.triangularView<Eigen::Lower>().solve(v).transpose());
  const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly).eigenvalues();
  // Elementary symmetric polynomials by the product recurrence.
  Vec e = Vec::Zero(n + 1);
  e[0] = 1;
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j >= 1; --j) e[j] += ev[k] * e[j - 1];
  SigmaExpansion out;
  out.sigma = e.tail(n);
  const double det = a.det();
  const double w = det * out.sigma[0];
  const double rest = out.sigma.size() > 1 ? out.sigma.tail(n - 1).sum() : 0.0;
  out.E = -det * rest / (det + w + det * rest);
  out.E_direct = (det + w) / (a.matrix() + v).determinant() - 1;
  return out;
}

}  // namespace ghlab::ansatz
