#include "ghlab/core/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ghlab {

double anorm(const QuadForm& a, const BasePoint& p) {
  if (a.n() != p.dim()) throw std::invalid_argument("anorm: dimension mismatch");
  const double q = a.quad(p.mu) + a.det() * std::norm(p.eta);
  return std::sqrt(std::max(q, 0.0));
}

Mat schur(const Mat& h, const std::vector<int>& keep, const std::vector<int>& drop) {
  Mat hk = submatrix(h, keep, keep);
  if (drop.empty()) return hk;
  const Mat hkd = submatrix(h, keep, drop);
  const Mat hd = submatrix(h, drop, drop);
  Eigen::LLT<Mat> llt(hd);
  if (llt.info() != Eigen::Success) throw std::logic_error("schur: eliminated block not positive definite");
  Mat s = hk - hkd * llt.solve(hkd.transpose());
  return 0.5 * (s + s.transpose());
}

QuadForm schur_complement(const QuadForm& a, const IndexSet& i) {
  if (i.N() != a.n()) throw std::invalid_argument("schur_complement: dimension mismatch");
  const auto keep = coords_of(i.active());
  if (keep.empty()) throw std::invalid_argument("schur_complement: no active index");
  return QuadForm(schur(a.matrix(), keep, coords_of(i.complement_active())));
}

double laplace_A(const QuadForm& a, const Mat& h) {
  const int n = a.n();
  if (h.rows() != n + 2) throw std::invalid_argument("laplace_A: Hessian size mismatch");
  double s = (a.inverse().cwiseProduct(h.topLeftCorner(n, n))).sum();
  return s + (h(n, n) + h(n + 1, n + 1)) / a.det();
}

double laplace_A(const QuadForm& a, const ScalarField& u, const BasePoint& p) {
  if (a.n() != p.dim()) throw std::invalid_argument("laplace_A: dimension mismatch");
  return laplace_A(a, u.hessian(p));
}

double laplace_A_fd(const QuadForm& a, const std::function<double(const BasePoint&)>& f, const BasePoint& p,
                    double step, double* terms) {
  const int n = a.n();
  if (p.dim() != n) throw std::invalid_argument("laplace_A_fd: dimension mismatch");
  if (!(step > 0)) throw std::invalid_argument("laplace_A_fd: step must be positive");
  Eigen::SelfAdjointEigenSolver<Mat> es(a.inverse());
  const Vec x = p.flat();
  const double f0 = f(p);
  double total = 0, scale = 0;
  auto second = [&](const Vec& dir, double h) {
    return (f(BasePoint::from_flat(x + h * dir)) - 2 * f0 + f(BasePoint::from_flat(x - h * dir))) / (h * h);
  };
  for (int k = 0; k < n + 2; ++k) {
    Vec dir = Vec::Zero(n + 2);
    double weight;
    if (k < n) {
      dir.head(n) = es.eigenvectors().col(k);
      weight = es.eigenvalues()[k];
    } else {
      dir[k] = 1;
      weight = 1 / a.det();
    }
    const double coarse = second(dir, step), fine = second(dir, step / 2);
    const double d2 = (4 * fine - coarse) / 3;
    total += weight * d2;
    scale += std::abs(weight * d2);
  }
  if (terms) *terms = scale;
  return total;
}

double ball_volume(int k) {
  if (k <= 0) throw std::invalid_argument("ball_volume: k must be positive");
  return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

ConeProjection project_onto_cone(const Mat& m, const Mat& b, const Vec& y) {
  const int d = static_cast<int>(b.cols());
  if (d > 20) throw std::invalid_argument("project_onto_cone: too many generators");
  const Mat mb = m * b;
  const Mat h = b.transpose() * mb;
  const Vec g = mb.transpose() * y;
  ConeProjection best;
  best.dist2 = std::numeric_limits<double>::infinity();
  const std::uint64_t total = std::uint64_t{1} << d;
  for (std::uint64_t s = 0; s < total; ++s) {
    std::vector<int> idx;
    for (int c = 0; c < d; ++c)
      if ((s >> c) & 1u) idx.push_back(c);
    Vec u = Vec::Zero(d);
    if (!idx.empty()) {
      const Mat hs = submatrix(h, idx, idx);
      Vec gs(idx.size());
      for (std::size_t c = 0; c < idx.size(); ++c) gs[c] = g[idx[c]];
      const Vec us = hs.llt().solve(gs);
      bool ok = true;
      for (std::size_t c = 0; c < idx.size(); ++c) {
        if (!(us[c] > 0)) ok = false;
        u[idx[c]] = us[c];
      }
      if (!ok) continue;
    }
    const Vec r = y - b * u;
    const double d2 = r.dot(m * r);
    if (d2 < best.dist2) {
      best.u = u;
      best.residual = r;
      best.dist2 = d2;
      best.support = s;
    }
  }
  return best;
}

Mat random_spd(int n, double lo, double hi, std::mt19937_64& rng) {
  if (!(lo > 0) || !(hi >= lo)) throw std::invalid_argument("random_spd: need 0 < lo <= hi");
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(lo, hi);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  const Mat q = qr.householderQ();
  Vec ev(n);
  for (int i = 0; i < n; ++i) ev[i] = unif(rng);
  if (n >= 2) {
    ev[0] = lo;
    ev[1] = hi;
  }
  Mat a = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

}  // namespace ghlab
