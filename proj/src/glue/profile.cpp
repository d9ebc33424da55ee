#include "ghlab/glue/profile.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ghlab::glue {

namespace {

constexpr double kLog2 = std::numbers::ln2;

}  // namespace

ExtensionProfile::ExtensionProfile(double K, double M, double R1, double eps) : k_(K), m_(M), r1_(R1), eps_(eps) {
  if (!(K > 0) || !(M > 2) || !(R1 > M + 1) || !(eps > 0 && eps < 1))
    throw std::invalid_argument("ExtensionProfile: need K > 0, M > 2, R1 > M + 1, 0 < eps < 1");
  // Bridge p(s) = sum c_k s^k, t = M - 1 + 2 s; derivatives in t pick up powers of 1/2.
  const double t0 = m_ - 1, t1 = m_ + 1;
  const double h0 = k_, h0p = 0, h0pp = 0;
  const double u = 3.0;   // t1 - M + 2
  const double lu = std::log(u);
  const double h1 = 2 * kLog2 * k_ / (u * lu);
  // h = c / g, g = u log u: h' = -c g' / g^2, h'' = c (2 g'^2 - g g'') / g^3.
  const double c = 2 * kLog2 * k_;
  const double g = u * lu, gp = lu + 1, gpp = 1 / u;
  const double h1p = -c * gp / (g * g);
  const double h1pp = c * (2 * gp * gp - g * gpp) / (g * g * g);
  const double target = H_closed_high(t1) - H_closed_low(t0);
  // Unknowns c_0..c_6 in s; t-derivatives scale by 2^k.
  Eigen::Matrix<double, 7, 7> a = Eigen::Matrix<double, 7, 7>::Zero();
  Eigen::Matrix<double, 7, 1> b;
  for (int k = 0; k < 7; ++k) {
    a(0, k) = k == 0 ? 1 : 0;
    a(1, k) = k == 1 ? 1 : 0;
    a(2, k) = k == 2 ? 2 : 0;
    a(3, k) = 1;
    a(4, k) = k;
    a(5, k) = k * (k - 1);
    a(6, k) = 2.0 / (k + 1);   // dt = 2 ds
  }
  b << h0, 2 * h0p, 4 * h0pp, h1, 2 * h1p, 4 * h1pp, target;
  const Eigen::Matrix<double, 7, 1> sol = a.fullPivLu().solve(b);
  for (int k = 0; k < 7; ++k) c_[k] = sol[k];

  // f continuous at M + 1 with f = K t below M - 1 and f' = H / t on the bridge.
  double f_bridge = k_ * t0;
  {
    const int n = 2000;
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      // Gauss-Legendre 2-point per panel.
      const double a0 = t0 + 2.0 * i / n, a1 = t0 + 2.0 * (i + 1) / n;
      const double mid = 0.5 * (a0 + a1), half = 0.5 * (a1 - a0), off = half / std::sqrt(3.0);
      acc += half * (H(mid - off) / (mid - off) + H(mid + off) / (mid + off));
    }
    f_bridge += acc;
  }
  f_const_ = f_bridge - (f_closed(t1));
}

double ExtensionProfile::h_closed(double t) const {
  if (t < m_) return k_;
  const double u = t - m_ + 2;
  return 2 * kLog2 * k_ / (u * std::log(u));
}

double ExtensionProfile::H_closed_high(double t) const {
  return k_ * m_ + 2 * kLog2 * k_ * std::log(std::log(t - m_ + 2));
}

double ExtensionProfile::f_closed(double t) const {
  const double u = t - m_ + 2;
  return k_ * m_ * std::log(t) + 2 * kLog2 * k_ * std::log(u) * (std::log(std::log(u)) - 1);
}

double ExtensionProfile::bridge_value(double t, int deriv) const {
  const double s = (t - (m_ - 1)) / 2;
  double v = 0;
  if (deriv == 0) {
    for (int k = 6; k >= 0; --k) v = v * s + c_[k];
    return v;
  }
  for (int k = 6; k >= 1; --k) v = v * s + k * c_[k];
  return v / 2;
}

double ExtensionProfile::bridge_integral(double t) const {
  const double s = (t - (m_ - 1)) / 2;
  double v = 0;
  for (int k = 6; k >= 0; --k) v = v * s + c_[k] / (k + 1);
  return 2 * v * s;
}

double ExtensionProfile::h(double t) const {
  if (t <= m_ - 1 || t >= m_ + 1) return h_closed(t);
  return bridge_value(t, 0);
}

double ExtensionProfile::h_prime(double t) const {
  if (t <= m_ - 1) return 0;
  if (t >= m_ + 1) {
    const double u = t - m_ + 2, lu = std::log(u);
    return -2 * kLog2 * k_ * (lu + 1) / (u * u * lu * lu);
  }
  return bridge_value(t, 1);
}

double ExtensionProfile::H(double t) const {
  if (t <= m_ - 1) return H_closed_low(t);
  if (t >= m_ + 1) return H_closed_high(t);
  return H_closed_low(m_ - 1) + bridge_integral(t);
}

double ExtensionProfile::f(double t) const {
  if (t <= m_ - 1) return k_ * t;
  if (t > m_ + 1) return f_closed(t) + f_const_;
  // Bridge: integrate f' = H / t from M - 1.
  const double t0 = m_ - 1;
  const int n = 200;
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    const double a0 = t0 + (t - t0) * i / n, a1 = t0 + (t - t0) * (i + 1) / n;
    const double mid = 0.5 * (a0 + a1), half = 0.5 * (a1 - a0), off = half / std::sqrt(3.0);
    acc += half * (H(mid - off) / (mid - off) + H(mid + off) / (mid + off));
  }
  return k_ * t0 + acc;
}

double ExtensionProfile::th_of_log(double log_t) const {
  if (log_t < 40) {
    const double t = std::exp(log_t);
    return t * h(t);
  }
  // u = t - M + 2 with t / u = 1 to double precision.
  return 2 * kLog2 * k_ / log_t;
}

double ExtensionProfile::H_of_log(double log_t) const {
  if (log_t < 40) return H(std::exp(log_t));
  return k_ * m_ + 2 * kLog2 * k_ * std::log(log_t);
}

ProfileMargin profile_condition_check(const ExtensionProfile& p, double growth_c, double log_t_lo, double log_t_hi,
                                      int samples) {
  if (!(growth_c > 0) || !(log_t_hi > log_t_lo) || samples < 2)
    throw std::invalid_argument("profile_condition_check: bad range");
  ProfileMargin out;
  out.min_margin = std::numeric_limits<double>::infinity();
  out.samples = samples;
  const double power = -2 * (1 - p.eps());
  for (int k = 0; k < samples; ++k) {
    const double lt = log_t_lo + (log_t_hi - log_t_lo) * k / (samples - 1);
    const double mu = std::max(p.R1(), lt / growth_c);
    const double Hv = p.H_of_log(lt);
    const double m = p.th_of_log(lt) - std::pow(mu, power) * Hv * Hv;
    if (m < out.min_margin) out.min_margin = m, out.argmin_log_t = lt;
  }
  return out;
}

double proxy_margin(const ExtensionProfile& p, double growth_c, double t) {
  const double Hv = p.H(t);
  return p.h(t) - growth_c / t * std::pow(std::log(t), -2 * (1 - p.eps())) * Hv * Hv;
}

}  // namespace ghlab::glue
