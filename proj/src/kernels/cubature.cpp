#include "ghlab/kernels/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghlab::kernels {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Region {
  Vec lo, hi, val, err, l1;
  int split = 0;
  double priority = 0;
  long id = 0;
};

struct Rule {
  int dim, m;
  const VecIntegrand& f;
  std::vector<double> x, buf;
  long evals = 0;

  Rule(int d, int mm, const VecIntegrand& ff) : dim(d), m(mm), f(ff), x(d), buf(mm) {}

  const std::vector<double>& at(const Vec& p) {
    for (int i = 0; i < dim; ++i) x[i] = p[i];
    f(x.data(), buf.data());
    ++evals;
    return buf;
  }

  void gauss_kronrod(Region& r) {
    const double c = 0.5 * (r.lo[0] + r.hi[0]), h = 0.5 * (r.hi[0] - r.lo[0]);
    Vec k = Vec::Zero(m), g = Vec::Zero(m), a = Vec::Zero(m);
    Vec p(1);
    for (int i = 0; i < 8; ++i) {
      const int reps = i == 7 ? 1 : 2;
      for (int s = 0; s < reps; ++s) {
        p[0] = c + (s == 0 ? 1 : -1) * h * kXgk[i];
        const auto& v = at(p);
        for (int q = 0; q < m; ++q) {
          k[q] += kWgk[i] * v[q];
          a[q] += kWgk[i] * std::abs(v[q]);
          if (i % 2 == 1) g[q] += kWg[i / 2] * v[q];
        }
      }
    }
    r.val = h * k;
    r.l1 = h * a;
    r.err = (h * (k - g)).cwiseAbs();
    r.split = 0;
  }

  void genz_malik(Region& r) {
    const double l2 = std::sqrt(9.0 / 70.0), l4 = std::sqrt(9.0 / 10.0), l5 = std::sqrt(9.0 / 19.0);
    const double d = dim;
    const double w1 = (12824.0 - 9120.0 * d + 400.0 * d * d) / 19683.0, w2 = 980.0 / 6561.0,
                 w3 = (1820.0 - 400.0 * d) / 19683.0, w4 = 200.0 / 19683.0,
                 w5 = 6859.0 / 19683.0 / std::ldexp(1.0, dim);
    const double e1 = (729.0 - 950.0 * d + 50.0 * d * d) / 729.0, e2 = 245.0 / 486.0,
                 e3 = (265.0 - 100.0 * d) / 1458.0, e4 = 25.0 / 729.0;
    const Vec c = 0.5 * (r.lo + r.hi), h = 0.5 * (r.hi - r.lo);
    double vol = 1;
    for (int i = 0; i < dim; ++i) vol *= 2 * h[i];

    Vec f0(m), s2 = Vec::Zero(m), s3 = Vec::Zero(m), s4 = Vec::Zero(m), s5 = Vec::Zero(m);
    Vec a0(m), a2 = Vec::Zero(m), a3 = Vec::Zero(m), a4 = Vec::Zero(m), a5 = Vec::Zero(m);
    {
      const auto& v = at(c);
      for (int q = 0; q < m; ++q) f0[q] = v[q], a0[q] = std::abs(v[q]);
    }
    Vec diff = Vec::Zero(dim);
    Vec p = c;
    Vec t2(m), t3(m);
    for (int i = 0; i < dim; ++i) {
      t2.setZero();
      t3.setZero();
      for (int s : {1, -1}) {
        p[i] = c[i] + s * l2 * h[i];
        const auto& v = at(p);
        for (int q = 0; q < m; ++q) t2[q] += v[q], a2[q] += std::abs(v[q]);
      }
      for (int s : {1, -1}) {
        p[i] = c[i] + s * l4 * h[i];
        const auto& v = at(p);
        for (int q = 0; q < m; ++q) t3[q] += v[q], a3[q] += std::abs(v[q]);
      }
      p[i] = c[i];
      s2 += t2;
      s3 += t3;
      double dsum = 0;
      for (int q = 0; q < m; ++q) dsum += std::abs(t2[q] - 2 * f0[q] - (t3[q] - 2 * f0[q]) / 7.0) * weight_[q];
      diff[i] = dsum;
    }
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        for (int si : {1, -1})
          for (int sj : {1, -1}) {
            p[i] = c[i] + si * l4 * h[i];
            p[j] = c[j] + sj * l4 * h[j];
            const auto& v = at(p);
            for (int q = 0; q < m; ++q) s4[q] += v[q], a4[q] += std::abs(v[q]);
            p[i] = c[i];
            p[j] = c[j];
          }
    const long corners = 1L << dim;
    for (long bits = 0; bits < corners; ++bits) {
      for (int i = 0; i < dim; ++i) p[i] = c[i] + (((bits >> i) & 1) ? -l5 : l5) * h[i];
      const auto& v = at(p);
      for (int q = 0; q < m; ++q) s5[q] += v[q], a5[q] += std::abs(v[q]);
    }
    const Vec i7 = vol * (w1 * f0 + w2 * s2 + w3 * s3 + w4 * s4 + w5 * s5);
    const Vec i5 = vol * (e1 * f0 + e2 * s2 + e3 * s3 + e4 * s4);
    r.val = i7;
    r.err = (i7 - i5).cwiseAbs();
    r.l1 = vol * (std::abs(w1) * a0 + w2 * a2 + std::abs(w3) * a3 + w4 * a4 + w5 * a5);
    int best = 0;
    for (int i = 1; i < dim; ++i)
      if (diff[i] > diff[best] * (1 + 1e-12)) best = i;
    // Without a clear fourth-difference winner, split the widest side.
    if (!(diff[best] > 0)) {
      best = 0;
      for (int i = 1; i < dim; ++i)
        if (h[i] > h[best]) best = i;
    }
    r.split = best;
  }

  void apply(Region& r) { dim == 1 ? gauss_kronrod(r) : genz_malik(r); }

  Vec weight_;
};

struct ByPriority {
  bool operator()(const Region& a, const Region& b) const {
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.id > b.id;
  }
};

}  // namespace

CubatureResult adaptive_cubature(int dim, int m, const VecIntegrand& f, const std::vector<Box>& boxes,
                                 const CubatureOptions& opt) {
  if (dim < 1 || m < 1) throw std::invalid_argument("adaptive_cubature: bad dimensions");
  if (!(opt.rel_tol > 0) || !(opt.abs_tol >= 0)) throw std::invalid_argument("adaptive_cubature: bad tolerances");
  Rule rule(dim, m, f);
  rule.weight_ = Vec::Ones(m);
  std::vector<Region> heap;
  long next_id = 0;
  for (const auto& b : boxes) {
    if (b.lo.size() != dim || b.hi.size() != dim) throw std::invalid_argument("adaptive_cubature: box dimension");
    Region r;
    r.lo = b.lo;
    r.hi = b.hi;
    r.id = next_id++;
    rule.apply(r);
    heap.push_back(std::move(r));
  }
  Vec val = Vec::Zero(m), err = Vec::Zero(m), l1 = Vec::Zero(m);
  auto recompute = [&] {
    val.setZero();
    err.setZero();
    l1.setZero();
    for (const auto& r : heap) val += r.val, err += r.err, l1 += r.l1;
  };
  recompute();
  Vec w(m);
  for (int q = 0; q < m; ++q) w[q] = 1.0 / std::max({opt.abs_tol, opt.rel_tol * l1[q], 1e-300});
  rule.weight_ = w;
  for (auto& r : heap) r.priority = (r.err.cwiseProduct(w)).maxCoeff();
  std::make_heap(heap.begin(), heap.end(), ByPriority{});

  auto tol_ok = [&] {
    for (int q = 0; q < m; ++q)
      if (!(err[q] <= std::max(opt.abs_tol, opt.rel_tol * l1[q]))) return false;
    return true;
  };
  bool converged = false;
  while (true) {
    if (tol_ok()) {
      recompute();
      if (tol_ok()) {
        converged = true;
        break;
      }
    }
    if (rule.evals >= opt.max_evals) break;
    std::pop_heap(heap.begin(), heap.end(), ByPriority{});
    Region parent = std::move(heap.back());
    heap.pop_back();
    val -= parent.val;
    err -= parent.err;
    l1 -= parent.l1;
    const int s = parent.split;
    const double mid = 0.5 * (parent.lo[s] + parent.hi[s]);
    for (int half = 0; half < 2; ++half) {
      Region c;
      c.lo = parent.lo;
      c.hi = parent.hi;
      (half == 0 ? c.hi : c.lo)[s] = mid;
      c.id = next_id++;
      rule.apply(c);
      c.priority = (c.err.cwiseProduct(w)).maxCoeff();
      val += c.val;
      err += c.err;
      l1 += c.l1;
      heap.push_back(std::move(c));
      std::push_heap(heap.begin(), heap.end(), ByPriority{});
    }
  }
  recompute();
  CubatureResult res;
  res.value = val;
  res.error = err;
  res.l1 = l1;
  res.evals = rule.evals;
  res.converged = converged;
  for (int q = 0; q < m; ++q)
    if (!std::isfinite(val[q])) throw std::runtime_error("adaptive_cubature: non-finite integral");
  return res;
}

Quad1d integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                    long max_evals) {
  if (a == b) return {0.0, 0.0, 0, true};
  if (b < a) {
    auto r = integrate_1d(f, b, a, rel_tol, abs_tol, max_evals);
    r.value = -r.value;
    return r;
  }
  VecIntegrand g = [&f](const double* x, double* out) { out[0] = f(x[0]); };
  Box box{Vec::Constant(1, a), Vec::Constant(1, b)};
  CubatureOptions o{rel_tol, abs_tol, max_evals};
  const auto r = adaptive_cubature(1, 1, g, {box}, o);
  return {r.value[0], r.error[0], r.evals, r.converged};
}

}  // namespace ghlab::kernels
