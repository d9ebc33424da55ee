#include "ghlab/ansatz/field.hpp"

#include <stdexcept>

namespace ghlab::ansatz {

GHField::GHField(int n, Sampler s, Domain domain, std::string name, DerivMode mode)
    : n_(n), sampler_(std::move(s)), domain_(std::move(domain)), name_(std::move(name)), mode_(mode) {
  if (n < 1) throw std::invalid_argument("GHField: dimension must be >= 1");
}

GHSample GHField::sample(const BasePoint& p, int order) const {
  if (p.dim() != n_) throw std::invalid_argument("GHField: dimension mismatch");
  if (!in_domain(p)) throw std::domain_error("GHField " + name_ + ": point outside the domain");
  return sampler_(p, order);
}

GHField GHField::constant(const QuadForm& a) {
  const int n = a.n();
  const Mat v = a.matrix();
  const double w = a.det();
  auto s = [n, v, w](const BasePoint&, int order) {
    GHSample g;
    g.V = v;
    g.W = w;
    g.order = order;
    if (order >= 1) {
      g.dV.assign(n + 2, Mat::Zero(n, n));
      g.dW = Vec::Zero(n + 2);
    }
    if (order >= 2) {
      g.eta_lap_V = Mat::Zero(n, n);
      g.hess_W = Mat::Zero(n + 2, n + 2);
    }
    return g;
  };
  return GHField(n, s, {}, "constant");
}

GHField GHField::from_values(int n, Values f, FdOptions opt, Domain domain, std::string name) {
  auto s = [n, f, opt](const BasePoint& p, int order) {
    GHSample g;
    std::tie(g.V, g.W) = f(p);
    g.order = order;
    if (order == 0) return g;
    // Pack the upper triangle of V followed by W.
    const int nv = n * (n + 1) / 2;
    VecMap packed = [&](const Vec& x) {
      const auto [v, w] = f(BasePoint::from_flat(x));
      Vec out(nv + 1);
      int c = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out[c++] = v(i, j);
      out[nv] = w;
      return out;
    };
    const Jet jet = fd_jet(packed, p.flat(), opt, order >= 2);
    const int d = n + 2;
    g.dV.assign(d, Mat::Zero(n, n));
    int c = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++c)
        for (int k = 0; k < d; ++k) g.dV[k](i, j) = g.dV[k](j, i) = jet.grad(c, k);
    g.dW = jet.grad.row(nv).transpose();
    if (order >= 2) {
      g.eta_lap_V = Mat::Zero(n, n);
      c = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++c) {
          const Mat& h = jet.hess[c];
          g.eta_lap_V(i, j) = g.eta_lap_V(j, i) = h(n, n) + h(n + 1, n + 1);
        }
      g.hess_W = jet.hess[nv];
    }
    return g;
  };
  return GHField(n, s, std::move(domain), std::move(name), DerivMode::finite_difference);
}

}  // namespace ghlab::ansatz
