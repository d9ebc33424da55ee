#include "ghlab/holo/holo.hpp"

#include "ghlab/kernels/cubature.hpp"

#include <cmath>
#include <stdexcept>

namespace ghlab::holo {

using kernels::Kernel;
using kernels::KernelSpec;
using kernels::Order;

namespace {

IndexSet leading(int n, int big_n) {
  std::vector<int> m(n + 1);
  for (int k = 0; k <= n; ++k) m[k] = k;
  return IndexSet(m, big_n);
}

}  // namespace

Gamma::Gamma(const QuadForm& a, int n, const kernels::QuadratureSpec& q, double line_rel_tol)
    : a_(a), n_(n), i_(leading(n, a.n())), q_(q), line_tol_(line_rel_tol) {
  if (n < 1 || n > a.n()) throw std::invalid_argument("Gamma: need 1 <= n <= N");
  q_.validate();
  for (int x = 0; x <= n; ++x)
    for (int y = x + 1; y <= n; ++y) kernels_.emplace_back(a, KernelSpec{x, y, i_});
  g_ = schur_complement(a, i_).matrix();
}

Mat Gamma::p_block(const BasePoint& p) const {
  Mat v = Mat::Zero(n_, n_);
  for (const auto& k : kernels_) {
    const double al = k.eval(p, q_, Order::value).value;
    const int x = k.spec().a, y = k.spec().b;
    v(y - 1, y - 1) += al;
    if (x >= 1) {
      v(x - 1, x - 1) += al;
      v(x - 1, y - 1) -= al;
      v(y - 1, x - 1) -= al;
    }
  }
  return v;
}

Eigen::MatrixXcd Gamma::p_block_deta(const BasePoint& p) const {
  const int big_n = a_.n();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n_, n_);
  for (const auto& k : kernels_) {
    const auto kv = k.eval(p, q_, Order::gradient);
    evals_ += kv.evals;
    const cplx d = 0.5 * cplx(kv.grad[big_n], -kv.grad[big_n + 1]);
    const int x = k.spec().a, y = k.spec().b;
    v(y - 1, y - 1) += d;
    if (x >= 1) {
      v(x - 1, x - 1) += d;
      v(x - 1, y - 1) -= d;
      v(y - 1, x - 1) -= d;
    }
  }
  return v;
}

cplx Gamma::ray_integral(int i, const BasePoint& p) const {
  const int big_n = a_.n();
  Vec dir = Vec::Zero(big_n);
  if (i == 0) dir.head(n_).setConstant(-1.0);
  else dir[i - 1] = 1.0;
  // s = L t / (1 - t); the integrand decays like s^-3 (|I| = 2) or faster.
  const double len = std::max(1.0, std::sqrt(p.mu.head(n_).squaredNorm() + std::norm(p.eta)));
  kernels::VecIntegrand f = [&](const double* t, double* out) {
    const double om = 1 - t[0];
    const double s = len * t[0] / om;
    const double ds = len / (om * om);
    const BasePoint q(p.mu + s * dir, p.eta);
    const auto d = p_block_deta(q);
    const cplx val = i == 0 ? d.sum() : d(i - 1, i - 1);
    out[0] = -2 * val.real() * ds;
    out[1] = -2 * val.imag() * ds;
  };
  const auto res = kernels::adaptive_cubature(1, 2, f, {kernels::Box{Vec::Zero(1), Vec::Ones(1)}},
                                              {line_tol_, 1e-300, 200'000});
  if (!res.converged) throw std::runtime_error("Gamma: line integral did not converge");
  return {res.value[0], res.value[1]};
}

cplx Gamma::gamma(int i, const BasePoint& p) const {
  if (i < 0 || i > n_) throw std::invalid_argument("Gamma: index out of range");
  if (p.dim() != a_.n()) throw std::invalid_argument("Gamma: dimension mismatch");
  if (p.eta == cplx(0, 0)) throw std::domain_error("Gamma: eta = 0");
  return ray_integral(i, p);
}

std::vector<cplx> Gamma::all(const BasePoint& p) const {
  std::vector<cplx> g(n_ + 1);
  for (int i = 0; i <= n_; ++i) g[i] = gamma(i, p);
  return g;
}

double gamma_sum_check(const Gamma& g, const BasePoint& p) {
  cplx s = 0;
  for (const auto& x : g.all(p)) s += x;
  return std::abs(s - 1.0 / p.eta) * std::abs(p.eta);
}

LogZ log_z(const Gamma& g, const std::vector<BasePoint>& path, double rel_tol) {
  if (path.size() < 2) throw std::invalid_argument("log_z: path needs at least two vertices");
  const int n = g.n();
  LogZ out;
  out.log_abs = Vec::Zero(n + 1);
  out.log_abs[0] = std::log(std::abs(path.front().eta));
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const BasePoint& a = path[seg];
    const BasePoint& b = path[seg + 1];
    const Vec dmu = b.mu - a.mu;
    const cplx deta = b.eta - a.eta;
    if (dmu.norm() == 0 && deta == cplx(0, 0)) continue;
    kernels::VecIntegrand f = [&](const double* t, double* o) {
      const BasePoint q(a.mu + t[0] * dmu, a.eta + t[0] * deta);
      const Vec row = (g.G() + g.p_block(q)) * dmu.head(n);
      const bool moving_eta = deta != cplx(0, 0);
      std::vector<cplx> gam;
      if (moving_eta) gam = g.all(q);
      double total = 0;
      for (int i = 1; i <= n; ++i) {
        o[i] = row[i - 1] + (moving_eta ? (gam[i] * deta).real() : 0.0);
        total += row[i - 1];
      }
      o[0] = -total + (moving_eta ? (gam[0] * deta).real() : 0.0);
    };
    const auto res = kernels::adaptive_cubature(1, n + 1, f, {kernels::Box{Vec::Zero(1), Vec::Ones(1)}},
                                                {rel_tol, 1e-14, 200'000});
    out.converged = out.converged && res.converged;
    out.log_abs += res.value;
  }
  out.product_gap = std::abs(out.log_abs.sum() - std::log(std::abs(path.back().eta)));
  return out;
}

ModelCoords model_coords(double g, double c, const BasePoint& p) {
  if (p.dim() != 1) throw std::invalid_argument("model_coords: N = 1 only");
  const double mu = p.mu[0];
  const double r = std::hypot(mu, std::abs(p.eta));
  // mu + r and r - mu multiply to |eta|^2; take the cancellation-free one directly.
  double plus = mu + r, minus = r - mu;
  if (mu >= 0) minus = std::norm(p.eta) / plus;
  else plus = std::norm(p.eta) / minus;
  ModelCoords w;
  w.w1 = std::exp(0.5 * (c + 2 * g * mu + std::log(plus)));
  w.w0 = std::exp(0.5 * (-c - 2 * g * mu + std::log(minus)));
  return w;
}

GrowthFit growth_bound_check(const std::vector<GrowthSample>& samples, double radius_floor) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : samples)
    if (s.vec_norm > radius_floor) {
      if (!(s.z_norm > 0)) throw std::domain_error("growth_bound_check: |z| = 0 on an admissible sample");
      pts.emplace_back(s.mu_norm, std::log(s.z_norm / s.vec_norm));
    }
  GrowthFit f;
  f.used = static_cast<int>(pts.size());
  if (f.used < 2) return f;
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) mx += x, my += y;
  mx /= f.used, my /= f.used;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  f.K2 = f.K4 = slope;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& [x, y] : pts) lo = std::min(lo, y - slope * x), hi = std::max(hi, y - slope * x);
  f.K1 = std::exp(lo);
  f.K3 = std::exp(hi);
  f.holds = true;
  for (const auto& [x, y] : pts) {
    const double ez = std::exp(y);
    if (ez < f.K1 * std::exp(f.K2 * x) * (1 - 1e-12) || ez > f.K3 * std::exp(f.K4 * x) * (1 + 1e-12)) f.holds = false;
  }
  return f;
}

}  // namespace ghlab::holo
