#pragma once

namespace ghlab::glue {

/// chi = 1 on |x| <= 3/8, 0 on |x| >= 1/2; in between the normalised
/// integral of exp(-1 / (s (1 - s))) over the shell.
class Cutoff {
 public:
  static constexpr double inner = 0.375;
  static constexpr double outer = 0.5;

  Cutoff();

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  /// sup |chi'| and sup |chi''| on a fine grid of the shell.
  double max_first() const { return max1_; }
  double max_second() const { return max2_; }

 private:
  double norm_ = 1, max1_ = 0, max2_ = 0;
};

const Cutoff& cutoff();

}  // namespace ghlab::glue
