#pragma once

#include "ghlab/core/geometry.hpp"
#include "ghlab/kernels/cubature.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ghlab::kernels {

enum class Method { adaptive_nested, quasi_monte_carlo };

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  long max_evals = 4'000'000;
  Method method = Method::adaptive_nested;
  int qmc_log2_points = 16;   // points per replicate = 2^qmc_log2_points
  int qmc_replicates = 8;
  std::uint64_t qmc_seed = 1;

  void validate() const;
};

/// alpha_{ab} with a < b in {0..N}; a = 0 gives the alpha_{0b} family.
/// With a restriction I the parameters attached to I' run over all of R.
struct KernelSpec {
  int a = 0, b = 1;
  std::optional<IndexSet> restriction;

  static KernelSpec zero_i(int i);
  static KernelSpec pair(int i, int j);
  KernelSpec restricted_to(const IndexSet& i) const;
  std::string label() const;
};

enum class Order { value = 0, gradient = 1, hessian = 2 };

struct KernelValue {
  double value = 0;
  Vec grad;      // over (mu, Re eta, Im eta), filled for Order >= gradient
  Mat hess;      // filled for Order::hessian
  double error = 0;
  bool converged = true;
  long evals = 0;
};

class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluator for one kernel. Integrand:
///   pref * (|mu - sum_k u_k g_k|_P^2 + det(A) |eta|^2)^(-m/2),  u_k >= 0,
/// over the generators g_k of the stratum cone, k outside {a, b} and not
/// integrated out by the restriction. Unrestricted: P = A, m = N. Restricted to
/// I: P is A with the span of the I' generators projected out and m = |I| - 1.
class Kernel {
 public:
  Kernel(const QuadForm& a, const KernelSpec& spec);

  KernelValue eval(const BasePoint& p, const QuadratureSpec& q, Order order = Order::value) const;

  /// Distance (in the kernel's metric) from p to its singular set.
  double singular_distance(const BasePoint& p) const;

  bool identically_zero() const { return zero_; }
  int integration_dim() const { return static_cast<int>(params_.size()); }
  int exponent() const { return m_; }
  double prefactor() const { return pref_; }
  const KernelSpec& spec() const { return spec_; }
  const Mat& metric() const { return p_; }

 private:
  KernelValue eval_point(const BasePoint& p, Order order) const;

  QuadForm a_;
  KernelSpec spec_;
  bool zero_ = false;
  int n_ = 0, m_ = 0;
  std::vector<int> params_;
  Mat b_, p_;
  double kappa_ = 0, pref_ = 0;
};

KernelValue alpha(const QuadForm& a, const KernelSpec& spec, const QuadratureSpec& q, const BasePoint& p);
Vec alpha_grad(const QuadForm& a, const KernelSpec& spec, const QuadratureSpec& q, const BasePoint& p);

/// alpha_{ij} - alpha_{I,ij}; equals alpha_{ij} when i or j lies outside I.
double beta(const QuadForm& a, const IndexSet& i, int ka, int kb, const QuadratureSpec& q, const BasePoint& p);

}  // namespace ghlab::kernels
