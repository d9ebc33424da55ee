#pragma once

#include <cmath>

namespace ghlab::glue {

/// Radial extension profile with H = t f' and H' = h:
///   h = K on [0, M),  h = 2 log2 K / ((t - M + 2) log(t - M + 2)) on [M, inf),
///   H = K t on [0, M - 1],  H = K M + 2 log2 K loglog(t - M + 2) on [M + 1, inf),
/// and the quoted f = K M log t + 2 log2 K log(t - M + 2)(loglog(t - M + 2) - 1) + C
/// for t > M + 1. On (M - 1, M + 1), h is a sextic bridge matching h, h', h''
/// at both ends whose integral equals H(M + 1) - H(M - 1), so H joins both
/// closed forms exactly.
class ExtensionProfile {
 public:
  ExtensionProfile(double K, double M, double R1, double eps);

  double K() const { return k_; }
  double M() const { return m_; }
  double R1() const { return r1_; }
  double eps() const { return eps_; }

  double h(double t) const;
  double h_prime(double t) const;
  double H(double t) const;
  /// f' = H / t and (t f')' = h; positivity of both is dd^c f > 0.
  double f_prime(double t) const { return H(t) / t; }
  double tf_prime_derivative(double t) const { return h(t); }
  /// f = K t below M - 1, f' = H / t on the bridge, and the quoted closed form
  /// plus a constant (continuity at M + 1) above.
  double f(double t) const;

  /// t h(t) and H(t) as functions of log t, valid beyond the range of exp.
  double th_of_log(double log_t) const;
  double H_of_log(double log_t) const;

  /// Closed-form pieces used directly, without the bridge.
  double h_closed(double t) const;
  double H_closed_low(double t) const { return k_ * t; }
  double H_closed_high(double t) const;
  double f_closed(double t) const;

  /// Bridge coefficients in s = (t - M + 1) / 2 on [0, 1], lowest degree first.
  const double* bridge() const { return c_; }

 private:
  double bridge_value(double t, int deriv) const;
  double bridge_integral(double t) const;

  double k_, m_, r1_, eps_;
  double c_[7] = {};
  double f_const_ = 0;
};

/// Worst point of the positivity condition
///   h(t) - (1/t) |mu_I|^{-2(1 - eps)} H(t)^2 > 0,
/// with |mu_I| replaced by its smallest admissible value max(R1, log t / C)
/// on the decay region R1 < |mu_I| < 2 R1, log t <= C |mu_I|. The margin is
/// reported as t * (lhs) so that it stays O(1) over many decades.
struct ProfileMargin {
  double min_margin = 0;
  double argmin_log_t = 0;
  int samples = 0;
};
ProfileMargin profile_condition_check(const ExtensionProfile& p, double growth_c, double log_t_lo, double log_t_hi,
                                      int samples = 4000);

/// Reduced form h - (C/t) (log t)^{-2(1-eps)} H^2 at one t; valid where H grows linearly.
double proxy_margin(const ExtensionProfile& p, double growth_c, double t);

}  // namespace ghlab::glue
