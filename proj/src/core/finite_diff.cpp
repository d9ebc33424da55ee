#include "ghlab/core/finite_diff.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ghlab {

double fd_default_step(const Vec& x, bool second, bool richardson) {
  // balances truncation h^p against roundoff eps / h^order
  const int order = second ? 2 : 1, p = richardson ? 4 : 2;
  return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (order + p)) * std::max(1.0, x.norm());
}

namespace {

Jet central(const VecMap& f, const Vec& x, double h, const Vec& f0, bool second) {
  const int d = static_cast<int>(x.size());
  const int m = static_cast<int>(f0.size());
  Jet j;
  j.value = f0;
  j.grad.resize(m, d);
  std::vector<Vec> plus(d), minus(d);
  for (int i = 0; i < d; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    plus[i] = f(xp);
    minus[i] = f(xm);
    j.grad.col(i) = (plus[i] - minus[i]) / (2 * h);
  }
  if (!second) return j;
  j.hess.assign(m, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i) {
    const Vec dii = (plus[i] - 2 * f0 + minus[i]) / (h * h);
    for (int c = 0; c < m; ++c) j.hess[c](i, i) = dii[c];
    for (int k = i + 1; k < d; ++k) {
      Vec a = x, b = x, c = x, e = x;
      a[i] += h; a[k] += h;
      b[i] += h; b[k] -= h;
      c[i] -= h; c[k] += h;
      e[i] -= h; e[k] -= h;
      const Vec dik = (f(a) - f(b) - f(c) + f(e)) / (4 * h * h);
      for (int q = 0; q < m; ++q) j.hess[q](i, k) = j.hess[q](k, i) = dik[q];
    }
  }
  return j;
}

}  // namespace

Jet fd_jet(const VecMap& f, const Vec& x, const FdOptions& opt, bool second) {
  const double h = opt.step > 0 ? opt.step : fd_default_step(x, second, opt.richardson);
  const double floor = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, x.cwiseAbs().maxCoeff());
  if (!(h > floor)) throw std::domain_error("fd_jet: step underflow");
  const Vec f0 = f(x);
  Jet coarse = central(f, x, h, f0, second);
  if (!opt.richardson) return coarse;
  Jet fine = central(f, x, h / 2, f0, second);
  fine.grad = (4 * fine.grad - coarse.grad) / 3;
  for (std::size_t c = 0; c < fine.hess.size(); ++c) fine.hess[c] = (4 * fine.hess[c] - coarse.hess[c]) / 3;
  return fine;
}

ScalarField ScalarField::analytic(ValueFn v, GradFn g, HessFn h) {
  ScalarField s;
  s.value_ = std::move(v);
  s.grad_ = std::move(g);
  s.hess_ = std::move(h);
  s.mode_ = DerivMode::analytic;
  return s;
}

ScalarField ScalarField::finite_difference(ValueFn v, FdOptions opt) {
  ScalarField s;
  s.value_ = std::move(v);
  s.mode_ = DerivMode::finite_difference;
  s.opt_ = opt;
  return s;
}

namespace {
VecMap lift(const ScalarField::ValueFn& v) {
  return [v](const Vec& x) {
    Vec out(1);
    out[0] = v(BasePoint::from_flat(x));
    return out;
  };
}
}  // namespace

Vec ScalarField::gradient(const BasePoint& p) const {
  if (mode_ == DerivMode::analytic) return grad_(p);
  return fd_jet(lift(value_), p.flat(), opt_, false).grad.row(0).transpose();
}

Mat ScalarField::hessian(const BasePoint& p) const {
  if (mode_ == DerivMode::analytic) return hess_(p);
  return fd_jet(lift(value_), p.flat(), opt_, true).hess[0];
}

}  // namespace ghlab
