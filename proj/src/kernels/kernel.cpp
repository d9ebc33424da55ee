#include "ghlab/kernels/kernel.hpp"

#include "ghlab/kernels/sobol.hpp"

#include <cmath>
#include <numbers>

namespace ghlab::kernels {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
  if (max_evals < 1000) throw std::invalid_argument("QuadratureSpec: max_evals must be at least 1000");
  if (qmc_log2_points < 4 || qmc_log2_points > 30 || qmc_replicates < 2)
    throw std::invalid_argument("QuadratureSpec: bad QMC sizes");
}

KernelSpec KernelSpec::zero_i(int i) {
  if (i < 1) throw std::invalid_argument("KernelSpec: zero_i needs i >= 1");
  return KernelSpec{0, i, std::nullopt};
}

KernelSpec KernelSpec::pair(int i, int j) {
  if (i == j || i < 0 || j < 0) throw std::invalid_argument("KernelSpec: pair needs distinct indices");
  return KernelSpec{std::min(i, j), std::max(i, j), std::nullopt};
}

KernelSpec KernelSpec::restricted_to(const IndexSet& i) const {
  KernelSpec s = *this;
  s.restriction = i;
  return s;
}

std::string KernelSpec::label() const {
  std::string s = "alpha" + std::to_string(a) + std::to_string(b);
  if (restriction) s += "|" + restriction->label();
  return s;
}

Kernel::Kernel(const QuadForm& a, const KernelSpec& spec) : a_(a), spec_(spec), n_(a.n()) {
  if (!(spec.a >= 0 && spec.a < spec.b && spec.b <= n_)) throw std::invalid_argument("Kernel: bad indices " + spec.label());
  kappa_ = a.det();
  const double sqrt_det = std::sqrt(a.det());
  std::vector<int> free;
  if (spec.restriction) {
    const IndexSet& rs = *spec.restriction;
    if (rs.N() != n_) throw std::invalid_argument("Kernel: restriction dimension mismatch");
    rs.require_stratum();
    if (!rs.contains(spec.a) || !rs.contains(spec.b)) {
      zero_ = true;
      return;
    }
    for (int k : rs.members())
      if (k != spec.a && k != spec.b) free.push_back(k);
    const auto line = rs.complement();
    m_ = rs.size() - 1;
    if (line.empty()) {
      p_ = a.matrix();
      pref_ = sqrt_det * std::tgamma(0.5 * m_) / (2 * std::pow(std::numbers::pi, 0.5 * m_));
    } else {
      const Mat l = generators(line, n_);
      const Mat al = a.matrix() * l;
      const Mat g = l.transpose() * al;
      Eigen::LLT<Mat> llt(g);
      p_ = a.matrix() - al * llt.solve(al.transpose());
      p_ = 0.5 * (p_ + p_.transpose());
      double det_g = 1;
      const Mat lg = llt.matrixL();
      for (int i = 0; i < lg.rows(); ++i) det_g *= lg(i, i) * lg(i, i);
      pref_ = sqrt_det * std::tgamma(0.5 * m_) / (2 * std::pow(std::numbers::pi, 0.5 * m_) * std::sqrt(det_g));
    }
  } else {
    for (int k = 0; k <= n_; ++k)
      if (k != spec.a && k != spec.b) free.push_back(k);
    m_ = n_;
    p_ = a.matrix();
    pref_ = sqrt_det * std::tgamma(0.5 * m_) / (2 * std::pow(std::numbers::pi, 0.5 * m_));
  }
  params_ = free;
  b_ = generators(params_, n_);
}

double Kernel::singular_distance(const BasePoint& p) const {
  if (zero_) return std::numeric_limits<double>::infinity();
  const double eta2 = kappa_ * std::norm(p.eta);
  if (params_.empty()) return std::sqrt(p.mu.dot(p_ * p.mu) + eta2);
  return std::sqrt(project_onto_cone(p_, b_, p.mu).dist2 + eta2);
}

namespace {

int components(Order order, int dim) {
  switch (order) {
    case Order::value: return 1;
    case Order::gradient: return 1 + dim;
    case Order::hessian: return 1 + dim + dim * (dim + 1) / 2;
  }
  return 1;
}

/// Writes weight * (f, grad f, upper Hessian of f) for f = Q^(-m/2), Q = r^T P r + kappa |eta|^2.
void integrand_jet(const Vec& r, const Vec& pr, double q, double kappa, cplx eta, const Mat& p, int m, Order order,
                   double weight, double* out) {
  const double hm = 0.5 * m;
  const double f = std::pow(q, -hm);
  out[0] = weight * f;
  if (order == Order::value) return;
  const int n = static_cast<int>(r.size()), dim = n + 2;
  const double f1 = -hm * f / q;
  double dq[64];
  for (int i = 0; i < n; ++i) dq[i] = 2 * pr[i];
  dq[n] = 2 * kappa * eta.real();
  dq[n + 1] = 2 * kappa * eta.imag();
  for (int i = 0; i < dim; ++i) out[1 + i] = weight * f1 * dq[i];
  if (order != Order::hessian) return;
  const double f2 = hm * (hm + 1) * f / (q * q);
  int c = 1 + dim;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double d2 = 0;
      if (i < n && j < n) d2 = 2 * p(i, j);
      else if (i == j) d2 = 2 * kappa;
      out[c++] = weight * (f2 * dq[i] * dq[j] + f1 * d2);
    }
}

void unpack(const Vec& v, const Vec& e, double pref, Order order, int dim, KernelValue& kv) {
  kv.value = pref * v[0];
  kv.error = pref * e[0];
  if (order == Order::value) return;
  kv.grad = pref * v.segment(1, dim);
  if (order != Order::hessian) return;
  kv.hess.resize(dim, dim);
  int c = 1 + dim;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) kv.hess(i, j) = kv.hess(j, i) = pref * v[c++];
}

}  // namespace

KernelValue Kernel::eval_point(const BasePoint& p, Order order) const {
  const int dim = n_ + 2;
  Vec out(components(order, dim));
  const Vec pr = p_ * p.mu;
  const double q = p.mu.dot(pr) + kappa_ * std::norm(p.eta);
  integrand_jet(p.mu, pr, q, kappa_, p.eta, p_, m_, order, 1.0, out.data());
  KernelValue kv;
  unpack(out, Vec::Zero(out.size()), pref_, order, dim, kv);
  kv.evals = 1;
  return kv;
}

KernelValue Kernel::eval(const BasePoint& p, const QuadratureSpec& q, Order order) const {
  q.validate();
  if (p.dim() != n_) throw std::invalid_argument("Kernel: dimension mismatch");
  const int dim = n_ + 2;
  if (zero_) {
    KernelValue kv;
    if (order != Order::value) kv.grad = Vec::Zero(dim);
    if (order == Order::hessian) kv.hess = Mat::Zero(dim, dim);
    return kv;
  }
  const double eta2 = kappa_ * std::norm(p.eta);
  const double threshold = 10 * std::pow(q.abs_tol, 1.0 / n_);
  if (params_.empty()) {
    if (std::sqrt(p.mu.dot(p_ * p.mu) + eta2) <= threshold)
      throw SingularityError("Kernel: point on the singular stratum of " + spec_.label());
    return eval_point(p, order);
  }

  // Centre the substitution at the nearest point of the integration cone and
  // use the transverse distance as the length scale along each parameter.
  const auto cp = project_onto_cone(p_, b_, p.mu);
  const double qmin = cp.dist2 + eta2;
  if (!(std::sqrt(std::max(qmin, 0.0)) > threshold))
    throw SingularityError("Kernel: point on the singular stratum of " + spec_.label());
  const int d = integration_dim();
  const Mat pb = p_ * b_;
  const Vec h_diag = (b_.transpose() * pb).diagonal();
  Vec scale(d), tau_lo(d), tau_hi(d), edge(d);
  for (int k = 0; k < d; ++k) scale[k] = std::sqrt(qmin / h_diag[k]);
  const double reach = 2 * (cp.u.cwiseAbs().maxCoeff() + scale.maxCoeff());
  for (int k = 0; k < d; ++k) {
    tau_lo[k] = -std::asinh(cp.u[k] / scale[k]);
    tau_hi[k] = std::asinh(reach / scale[k]);
    edge[k] = cp.u[k] + reach;
  }
  const Vec rc = cp.residual;
  const Vec prc = p_ * rc;
  const int ncomp = components(order, dim);

  // Inner region: the box 0 <= u <= edge, sinh-stretched around the foot c,
  // z in [-1, 0] covering [tau_lo, 0] and z in [0, 1] covering [0, tau_hi].
  // Outer region: u = v / t with v on face j of the box (v_j = edge_j) and
  // t in (0, 1]; the first coordinate is shifted by 2 + 2j to tag the face.
  VecIntegrand f = [&](const double* z, double* out) {
    Vec delta(d);
    double jac = 1;
    if (z[0] < 1.5) {
      for (int k = 0; k < d; ++k) {
        const double span = z[k] < 0 ? -tau_lo[k] : tau_hi[k];
        const double tau = z[k] * span;
        delta[k] = scale[k] * std::sinh(tau);
        jac *= scale[k] * std::cosh(tau) * span;
      }
    } else {
      const int face = static_cast<int>((z[0] - 2) / 2);
      const double t = z[0] - 2 - 2 * face;
      for (int k = 0, c = 1; k < d; ++k) {
        const double v = k == face ? edge[k] : edge[k] * z[c++];
        delta[k] = v / t - cp.u[k];
        jac *= edge[k];
      }
      jac /= std::pow(t, d + 1);
    }
    const Vec r = rc - b_ * delta;
    const Vec pr = prc - pb * delta;
    const double qq = std::max(r.dot(pr), 0.0) + eta2;
    integrand_jet(r, pr, qq, kappa_, p.eta, p_, m_, order, jac, out);
  };

  std::vector<Box> boxes;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Box b{Vec(d), Vec(d)};
    bool ok = true;
    for (int k = 0; k < d; ++k) {
      const bool lower = (mask >> k) & 1;
      if (lower && !(tau_lo[k] < 0)) ok = false;
      b.lo[k] = lower ? -1.0 : 0.0;
      b.hi[k] = lower ? 0.0 : 1.0;
    }
    if (ok) boxes.push_back(b);
  }
  for (int face = 0; face < d; ++face) {
    Box b{Vec::Zero(d), Vec::Ones(d)};
    b.lo[0] = 2 + 2 * face;
    b.hi[0] = 3 + 2 * face;
    boxes.push_back(b);
  }

  KernelValue kv;
  if (q.method == Method::adaptive_nested) {
    const auto res = adaptive_cubature(d, ncomp, f, boxes, {q.rel_tol, q.abs_tol / pref_, q.max_evals});
    unpack(res.value, res.error, pref_, order, dim, kv);
    kv.converged = res.converged;
    kv.evals = res.evals;
    return kv;
  }

  // Randomized QMC over the same substituted boxes; error = standard error over shifts.
  const long npts = 1L << q.qmc_log2_points;
  std::vector<Vec> reps;
  Vec buf(ncomp);
  std::vector<double> x(d), z(d);
  for (int rep = 0; rep < q.qmc_replicates; ++rep) {
    Vec acc = Vec::Zero(ncomp);
    for (const auto& box : boxes) {
      Sobol sob(d, q.qmc_seed * 1000003ULL + static_cast<std::uint64_t>(rep) + 1);
      double vol = 1;
      for (int k = 0; k < d; ++k) vol *= box.hi[k] - box.lo[k];
      Vec s = Vec::Zero(ncomp);
      for (long i = 0; i < npts; ++i) {
        sob.next(x.data());
        for (int k = 0; k < d; ++k) z[k] = box.lo[k] + x[k] * (box.hi[k] - box.lo[k]);
        f(z.data(), buf.data());
        s += buf;
      }
      acc += vol * s / static_cast<double>(npts);
    }
    reps.push_back(acc);
  }
  Vec mean = Vec::Zero(ncomp);
  for (const auto& r : reps) mean += r;
  mean /= static_cast<double>(reps.size());
  Vec var = Vec::Zero(ncomp);
  for (const auto& r : reps) var += (r - mean).cwiseAbs2();
  const Vec se = (var / static_cast<double>(reps.size() * (reps.size() - 1))).cwiseSqrt();
  unpack(mean, se, pref_, order, dim, kv);
  kv.evals = npts * static_cast<long>(boxes.size()) * q.qmc_replicates;
  kv.converged = kv.error <= std::max(q.abs_tol, q.rel_tol * std::abs(kv.value));
  return kv;
}

KernelValue alpha(const QuadForm& a, const KernelSpec& spec, const QuadratureSpec& q, const BasePoint& p) {
  return Kernel(a, spec).eval(p, q, Order::value);
}

Vec alpha_grad(const QuadForm& a, const KernelSpec& spec, const QuadratureSpec& q, const BasePoint& p) {
  return Kernel(a, spec).eval(p, q, Order::gradient).grad;
}

double beta(const QuadForm& a, const IndexSet& i, int ka, int kb, const QuadratureSpec& q, const BasePoint& p) {
  const auto spec = KernelSpec::pair(ka, kb);
  return alpha(a, spec, q, p).value - alpha(a, spec.restricted_to(i), q, p).value;
}

}  // namespace ghlab::kernels
