#include "ghlab/ansatz/decay.hpp"

#include "ghlab/locus/locus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ghlab::ansatz {

bool DecayFit::adequate() const {
  if (samples.size() < 8) return false;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& [x, y] : samples) lo = std::min(lo, x), hi = std::max(hi, x);
  return hi >= 100 * lo;
}

DecayFit fit_power_law(const std::vector<std::pair<double, double>>& samples) {
  DecayFit f;
  for (const auto& [x, y] : samples) {
    if (x > 0 && std::abs(y) > 0 && std::isfinite(y)) f.samples.emplace_back(x, std::abs(y));
    else ++f.rejected;
  }
  const int n = static_cast<int>(f.samples.size());
  if (n < 2) throw std::invalid_argument("fit_power_law: need at least two usable samples");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : f.samples) sx += std::log(x), sy += std::log(y);
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : f.samples) {
    const double dx = std::log(x) - mx, dy = std::log(y) - my;
    sxx += dx * dx, sxy += dx * dy, syy += dy * dy;
  }
  if (!(sxx > 0)) throw std::invalid_argument("fit_power_law: abscissae are all equal");
  const double slope = sxy / sxx;
  f.exponent = -slope;
  f.intercept = my - slope * mx;
  // A flat series fits perfectly.
  f.r2 = syy > 0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

BasePoint Ray::at(double r) const { return BasePoint::from_flat(base.flat() + r * direction); }

std::vector<double> geometric_radii(double r0, int count) {
  std::vector<double> r(count);
  for (int k = 0; k < count; ++k) r[k] = r0 * std::pow(2.0, 0.5 * k);
  return r;
}

namespace {

Ray make_ray(std::string name, const Vec& mu0, cplx eta0, const Vec& dmu, cplx deta) {
  const int n = static_cast<int>(mu0.size());
  Vec dir(n + 2);
  dir.head(n) = dmu;
  dir[n] = deta.real();
  dir[n + 1] = deta.imag();
  return Ray{std::move(name), BasePoint(mu0, eta0), dir};
}

void need3(int n) {
  if (n < 3) throw std::invalid_argument("ray families need N >= 3");
}

}  // namespace

Ray generic_ray(int n) {
  need3(n);
  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = 0.3 + 0.2 * i;
  return make_ray("generic", Vec::Zero(n), 0.0, d, cplx(0.25, 0.15));
}

Ray simple_ray(int n) {
  need3(n);
  Vec base = Vec::Zero(n), d = Vec::Zero(n);
  base[0] = 1;
  for (int i = 1; i < n; ++i) d[i] = 0.4 + 0.3 * i;
  return make_ray("parallel-D01", base, cplx(0.5, 0.0), d, 0.0);
}

Ray deep_ray(int n) {
  need3(n);
  Vec base = Vec::Zero(n), d = Vec::Zero(n);
  base[0] = 1;
  base[1] = 1.5;
  for (int i = 2; i < n; ++i) d[i] = 1;
  return make_ray("along-D012", base, cplx(0.5, 0.0), d, 0.0);
}

double weight_ell(const QuadForm& a, int i, const BasePoint& p) {
  const int n = a.n();
  if (i < 1 || i > n) throw std::invalid_argument("weight_ell: index out of range");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& j : index_sets(n, i + 1, i + 1)) best = std::min(best, locus::dist_closed_stratum(a, j, p));
  return 1 + best;
}

DecayFit decay_scan(const QuadForm& a, const std::function<double(const BasePoint&)>& quantity, const Ray& ray,
                    const std::vector<double>& radii, const DecayOptions& opt) {
  std::vector<std::pair<double, double>> s;
  int rejected = 0;
  for (double r : radii) {
    const BasePoint p = ray.at(r);
    if (locus::dist_locus(a, p) <= opt.locus_margin) {
      ++rejected;
      continue;
    }
    double x = r;
    if (opt.mode == WeightMode::anorm) x = anorm(a, p);
    else if (opt.mode == WeightMode::ell) x = weight_ell(a, opt.ell_index, p);
    s.emplace_back(x, quantity(p));
  }
  DecayFit f = fit_power_law(s);
  f.rejected += rejected;
  return f;
}

std::function<double(const BasePoint&)> first_order_error(const QuadForm& a, const kernels::QuadratureSpec& q) {
  const FirstOrderField field(a, q);
  return [field, a](const BasePoint& p) { return std::abs(sigma_expansion(a, field.eval(p, 0).v).E); };
}

}  // namespace ghlab::ansatz
