#include "ghlab/kernels/checks.hpp"

#include "ghlab/locus/locus.hpp"

#include <cmath>
#include <numbers>

namespace ghlab::kernels {

double Bump::value(const Vec& x) const {
  const double w = (x - centre.flat()).squaredNorm() / (radius * radius);
  if (w >= 1) return 0;
  return amplitude * std::exp(1 - 1 / (1 - w));
}

Mat Bump::hessian(const Vec& x) const {
  const Vec dx = x - centre.flat();
  const int d = static_cast<int>(x.size());
  const double r2 = radius * radius;
  const double w = dx.squaredNorm() / r2;
  if (w >= 1) return Mat::Zero(d, d);
  const double om = 1 - w;
  const double g = std::exp(1 - 1 / om);
  const double g1 = -g / (om * om);
  const double g2 = g * (1 / std::pow(om, 4) - 2 / std::pow(om, 3));
  const Vec dw = 2 * dx / r2;
  return amplitude * (g2 * dw * dw.transpose() + g1 * (2 / r2) * Mat::Identity(d, d));
}

WeakCheck weak_distributional_check(const QuadForm& a, const KernelSpec& spec, const Bump& bump,
                                    const QuadratureSpec& inner, double outer_rel_tol) {
  if (spec.restriction) throw std::invalid_argument("weak_distributional_check: unrestricted kernels only");
  const int n = a.n();
  if (bump.centre.dim() != n || !(bump.radius > 0)) throw std::invalid_argument("weak_distributional_check: bad bump");
  const Kernel kernel(a, spec);
  const IndexSet own({spec.a, spec.b}, n);
  const double stretch = std::sqrt(std::max(a.lambda_max(), a.det()));
  if (!(locus::dist_boundary(a, own, bump.centre) > stretch * bump.radius))
    throw std::invalid_argument("weak_distributional_check: bump support reaches the stratum boundary");

  std::vector<int> params;
  for (int k = 0; k <= n; ++k)
    if (k != spec.a && k != spec.b) params.push_back(k);
  const Mat b = generators(params, n);
  const int t_dim = n - 1;

  // Orthonormal frame: stratum tangent directions, then the single normal in mu.
  Mat frame = Mat::Identity(n, n);
  if (t_dim > 0) {
    Eigen::HouseholderQR<Mat> qr(b);
    frame = qr.householderQ() * Mat::Identity(n, n);
  }
  const Vec normal = frame.col(n - 1);
  const Vec c = bump.centre.flat();
  const double r = bump.radius;
  const double vol_factor = std::pow(a.det(), 1.5);

  WeakCheck out;
  {
    const int dim = t_dim + 3;
    Box box{Vec(dim), Vec(dim)};
    for (int k = 0; k < t_dim; ++k) box.lo[k] = -r, box.hi[k] = r;
    box.lo[t_dim] = 0, box.hi[t_dim] = r;
    box.lo[t_dim + 1] = 0, box.hi[t_dim + 1] = std::numbers::pi;
    box.lo[t_dim + 2] = 0, box.hi[t_dim + 2] = 2 * std::numbers::pi;
    long inner_evals = 0;
    VecIntegrand f = [&](const double* z, double* o) {
      double t2 = 0;
      Vec x = c;
      for (int k = 0; k < t_dim; ++k) {
        x.head(n) += z[k] * frame.col(k);
        t2 += z[k] * z[k];
      }
      const double rho = z[t_dim], th = z[t_dim + 1], ph = z[t_dim + 2];
      o[0] = 0;
      if (t2 + rho * rho >= r * r) return;
      x.head(n) += rho * std::cos(th) * normal;
      x[n] += rho * std::sin(th) * std::cos(ph);
      x[n + 1] += rho * std::sin(th) * std::sin(ph);
      const double lap = laplace_A(a, bump.hessian(x));
      if (lap == 0) return;
      double al;
      try {
        const auto kv = kernel.eval(BasePoint::from_flat(x), inner, Order::value);
        inner_evals += kv.evals;
        al = kv.value;
      } catch (const SingularityError&) {
        return;  // measure-zero set; the integrand vanishes like rho there
      }
      o[0] = al * lap * vol_factor * rho * rho * std::sin(th);
    };
    const auto res = adaptive_cubature(dim, 1, f, {box}, {outer_rel_tol, 1e-300, inner.max_evals});
    out.lhs = res.value[0];
    out.converged = res.converged;
    out.evals = res.evals + inner_evals;
    const double scale_l1 = res.l1[0];

    const double pre = -2 * std::numbers::pi * std::sqrt(a.det());
    if (t_dim == 0) {
      out.rhs = pre * bump.value(Vec::Zero(n + 2));
    } else {
      Eigen::JacobiSVD<Mat> svd(b);
      const double smin = svd.singularValues().minCoeff();
      const double upper = (c.head(n).norm() + r) / smin + r;
      Box pb{Vec::Zero(t_dim), Vec::Constant(t_dim, upper)};
      VecIntegrand g = [&](const double* u, double* o) {
        Vec x = Vec::Zero(n + 2);
        for (int k = 0; k < t_dim; ++k) x.head(n) += u[k] * b.col(k);
        o[0] = bump.value(x);
      };
      const auto rr = adaptive_cubature(t_dim, 1, g, {pb}, {1e-10, 1e-300, 2'000'000});
      out.rhs = pre * rr.value[0];
      out.converged = out.converged && rr.converged;
    }
    const double denom = out.rhs != 0 ? std::abs(out.rhs) : scale_l1;
    out.rel_gap = denom > 0 ? std::abs(out.lhs - out.rhs) / denom : 0.0;
  }
  return out;
}

}  // namespace ghlab::kernels
