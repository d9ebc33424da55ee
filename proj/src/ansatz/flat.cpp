#include "ghlab/ansatz/flat.hpp"

#include <cmath>
#include <limits>

namespace ghlab::ansatz {

namespace {

// Root of g(y) = sum_k log(y + c_k) - log|eta|^2 on (0, inf), with
// c = (x0, x0 + 2 mu_1, ..., x0 + 2 mu_N) >= 0 and x = x0 + y. Solving for
// the offset keeps the smallest factor y + c_min accurate to full precision.
// g is increasing and concave, so Newton from the left never overshoots;
// bisection guards the first steps.
Vec solve_factors(const Vec& mu, double eta2) {
  const int n = static_cast<int>(mu.size());
  const double x0 = std::max(0.0, -2 * mu.minCoeff());
  Vec c(n + 1);
  c[0] = x0;
  for (int i = 0; i < n; ++i) c[i + 1] = std::max(0.0, x0 + 2 * mu[i]);
  if (eta2 == 0) return c;
  const double target = std::log(eta2);
  auto g = [&](double y, double& slope) {
    double v = -target;
    slope = 0;
    for (int k = 0; k <= n; ++k) {
      v += std::log(y + c[k]);
      slope += 1 / (y + c[k]);
    }
    return v;
  };
  double lo = 0, hi = 1, s;
  while (g(hi, s) < 0) hi *= 2;
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double v = g(y, s);
    if (v < 0) lo = y;
    else hi = y;
    double next = y - v / s;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 4 * std::numeric_limits<double>::epsilon() * std::max(y, 1e-300)) {
      y = next;
      break;
    }
    y = next;
    if (hi - lo <= 2 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return (c.array() + y).matrix();
}

}  // namespace

FlatData flat_field(const BasePoint& p) {
  const int n = p.dim();
  FlatData f;
  const double eta2 = std::norm(p.eta);
  const Vec factors = solve_factors(p.mu, eta2);
  f.x = factors[0];
  f.z2 = factors.tail(n);
  // Exact zeros: the factor that pins x0 is zero by construction.
  if (eta2 == 0)
    for (int i = 0; i < n; ++i)
      if (f.z2[i] <= 4 * std::numeric_limits<double>::epsilon() * std::abs(p.mu[i])) f.z2[i] = 0;

  Vec all(n + 1);
  all[0] = f.x;
  all.tail(n) = f.z2;
  int zeros = 0;
  for (int i = 0; i <= n; ++i) zeros += all[i] == 0;

  double prod = f.x;
  for (int i = 0; i < n; ++i) prod *= f.z2[i];
  f.root_residual = eta2 > 0 ? std::abs(prod - eta2) / eta2 : prod;

  f.V_inv = Mat::Constant(n, n, f.x);
  f.V_inv.diagonal() += f.z2;
  // W^{-1} = sum_i prod_{j != i} |z_j|^2, pole-free form of |eta|^2 sum 1/|z_i|^2.
  f.W_inv = 0;
  for (int i = 0; i <= n; ++i) {
    double t = 1;
    for (int j = 0; j <= n; ++j)
      if (j != i) t *= all[j];
    f.W_inv += t;
  }
  f.on_locus = zeros >= 2;
  if (f.on_locus) return f;
  f.V = f.V_inv.inverse();
  f.W = 1 / f.W_inv;
  return f;
}

GHField flat_ghfield(int n, FdOptions opt) {
  auto values = [](const BasePoint& p) {
    const auto f = flat_field(p);
    if (f.on_locus) throw std::domain_error("flat field: point on the discriminant locus");
    return std::make_pair(f.V, f.W);
  };
  return GHField::from_values(n, values, opt, {}, "flat");
}

}  // namespace ghlab::ansatz
