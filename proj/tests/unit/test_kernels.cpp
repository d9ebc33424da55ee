#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ghlab/kernels/checks.hpp"
#include "ghlab/kernels/sobol.hpp"
#include "ghlab/locus/locus.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ghlab;
using namespace ghlab::kernels;

namespace {

BasePoint random_point(std::mt19937_64& rng, int n, double half = 2) {
  std::uniform_real_distribution<double> u(-half, half);
  Vec m(n);
  for (int k = 0; k < n; ++k) m[k] = u(rng);
  const double re = u(rng) / 2;
  return BasePoint(m, cplx(re, u(rng) / 2));
}

BasePoint off_locus(std::mt19937_64& rng, const QuadForm& a, double margin, double half = 2) {
  for (;;) {
    BasePoint p = random_point(rng, a.n(), half);
    if (locus::dist_locus(a, p) > margin) return p;
  }
}

QuadratureSpec tight() {
  QuadratureSpec q;
  q.rel_tol = 1e-11;
  return q;
}

}  // namespace

TEST_CASE("N = 1: alpha_01 = 1 / (2 sqrt(mu^2 + |eta|^2))") {
  std::mt19937_64 rng(1);
  for (double a11 : {0.5, 1.0, 3.0}) {
    const QuadForm a(Mat::Constant(1, 1, a11));
    const Kernel k(a, KernelSpec::zero_i(1));
    CHECK(k.prefactor() == doctest::Approx(oracle::kernel_prefactor(a.matrix())).epsilon(1e-14));
    CHECK(k.prefactor() == doctest::Approx(std::sqrt(a11) / 2).epsilon(1e-14));
    for (int t = 0; t < 20; ++t) {
      const BasePoint p = random_point(rng, 1);
      const double want = 1 / (2 * std::hypot(p.mu[0], std::abs(p.eta)));
      REQUIRE(k.eval(p, tight()).value == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("prefactor matches 2 pi sqrt(det A) / (N (N+2) omega_{N+2})") {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 5; ++n) {
    const QuadForm a(random_spd(n, 0.5, 2, rng));
    const Kernel k(a, KernelSpec::zero_i(1));
    CHECK(k.prefactor() == doctest::Approx(oracle::kernel_prefactor(a.matrix())).epsilon(1e-13));
    CHECK(k.integration_dim() == n - 1);
    CHECK(k.exponent() == n);
  }
}

TEST_CASE("restricted |I| = 2 kernel has the closed form 1 / (2 sqrt(mu_1^2 + det A_{2..N} |eta|^2))") {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 4; ++n) {
    const QuadForm a(random_spd(n, 0.5, 2, rng));
    std::vector<int> rest;
    for (int k = 1; k < n; ++k) rest.push_back(k);
    const double det_rest = submatrix(a.matrix(), rest, rest).determinant();
    const Kernel k(a, KernelSpec::pair(0, 1).restricted_to(IndexSet({0, 1}, n)));
    for (int t = 0; t < 20; ++t) {
      const BasePoint p = random_point(rng, n);
      const double want = 1 / (2 * std::sqrt(p.mu[0] * p.mu[0] + det_rest * std::norm(p.eta)));
      REQUIRE(k.eval(p, QuadratureSpec{}).value == doctest::Approx(want).epsilon(1e-8));
    }
  }
}

TEST_CASE("full kernels agree with a tensor Gauss-Legendre oracle") {
  std::mt19937_64 rng(4);
  for (int n = 2; n <= 3; ++n) {
    const QuadForm a(random_spd(n, 0.5, 2, rng));
    for (int t = 0; t < 4; ++t) {
      const BasePoint p = off_locus(rng, a, 0.7);
      for (int x = 0; x <= n; ++x)
        for (int y = x + 1; y <= n; ++y) {
          const double got = Kernel(a, KernelSpec::pair(x, y)).eval(p, QuadratureSpec{}).value;
          const double want = oracle::kernel_tensor(a.matrix(), x, y, p.mu, p.eta, 32, 6);
          REQUIRE(got == doctest::Approx(want).epsilon(1e-9));
        }
    }
  }
}

TEST_CASE("alpha_01 at mu = (2,1,1), eta = 0, A = I: agreement with a 10^7-point Halton oracle") {
  const QuadForm a = QuadForm::identity(3);
  const BasePoint p(Vec{{2, 1, 1}}, 0.0);
  const auto kv = Kernel(a, KernelSpec::pair(0, 1)).eval(p, tight());
  const auto mc = oracle::kernel_qmc(a.matrix(), 0, 1, p.mu, p.eta, 1'250'000, 8, 99);
  CHECK(mc.std_error > 0);
  CHECK(std::abs(kv.value - mc.mean) < 3 * mc.std_error + 1e-12);
  CHECK(kv.error < 1e-9 * kv.value);
}

TEST_CASE("the library's QMC path agrees with the adaptive path") {
  std::mt19937_64 rng(5);
  const QuadForm a(random_spd(3, 0.5, 2, rng));
  QuadratureSpec qmc;
  qmc.method = Method::quasi_monte_carlo;
  qmc.qmc_log2_points = 14;
  qmc.qmc_replicates = 8;
  for (int t = 0; t < 3; ++t) {
    const BasePoint p = off_locus(rng, a, 0.5);
    const Kernel k(a, KernelSpec::pair(1, 2));
    const auto ad = k.eval(p, tight());
    const auto mc = k.eval(p, qmc);
    REQUIRE(mc.error > 0);
    CHECK(std::abs(ad.value - mc.value) < 4 * mc.error);
  }
}

TEST_CASE("Sobol points are stratified in each coordinate") {
  Sobol s(3, 0);
  std::vector<int> bins(3 * 16, 0);
  double x[3];
  for (int i = 0; i < 256; ++i) {
    s.next(x);
    for (int d = 0; d < 3; ++d) ++bins[d * 16 + static_cast<int>(x[d] * 16)];
  }
  for (int b : bins) CHECK(b == 16);
}

TEST_CASE("gradients and Hessians under the integral match differences of values") {
  std::mt19937_64 rng(6);
  const QuadForm a(random_spd(3, 0.5, 2, rng));
  const auto q = tight();
  for (int t = 0; t < 3; ++t) {
    const BasePoint p = off_locus(rng, a, 0.7);
    for (const auto& spec : {KernelSpec::pair(0, 2), KernelSpec::pair(1, 3),
                             KernelSpec::pair(0, 1).restricted_to(IndexSet({0, 1, 2}, 3))}) {
      const Kernel k(a, spec);
      const auto jet = k.eval(p, q, Order::hessian);
      const VecMap f = [&](const Vec& x) { return Vec::Constant(1, k.eval(BasePoint::from_flat(x), q).value); };
      const Jet fd = fd_jet(f, p.flat(), FdOptions{0.02, true});
      const double gs = jet.grad.cwiseAbs().maxCoeff(), hs = jet.hess.cwiseAbs().maxCoeff();
      REQUIRE((jet.grad - fd.grad.row(0).transpose()).cwiseAbs().maxCoeff() < 1e-6 * gs);
      REQUIRE((jet.hess - fd.hess[0]).cwiseAbs().maxCoeff() < 1e-4 * hs);
    }
  }
}

TEST_CASE("commutativity relations between kernel derivatives") {
  std::mt19937_64 rng(7);
  const int n = 3;
  const QuadForm a(random_spd(n, 0.5, 2, rng));
  const QuadratureSpec q;
  for (int t = 0; t < 20; ++t) {
    const BasePoint p = off_locus(rng, a, 0.5);
    std::vector<std::vector<Vec>> g(n + 1, std::vector<Vec>(n + 1));
    double scale = 0;
    for (int x = 0; x <= n; ++x)
      for (int y = x + 1; y <= n; ++y) {
        g[x][y] = g[y][x] = alpha_grad(a, KernelSpec::pair(x, y), q, p);
        scale = std::max(scale, g[x][y].head(n).cwiseAbs().maxCoeff());
      }
    for (int i = 0; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
          if (i != j && i != k && j != k) REQUIRE(std::abs(g[i][j][k - 1] - g[i][k][j - 1]) < 1e-4 * scale);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        double s = 0;
        for (int tt = 1; tt <= n; ++tt) s += g[i][j][tt - 1];
        REQUIRE(std::abs(g[0][i][j - 1] + s) < 1e-4 * scale);
      }
  }
}

TEST_CASE("eta-parity: d alpha_01 / d Re eta is odd in Re eta for A = I") {
  const QuadForm a = QuadForm::identity(3);
  const Kernel k(a, KernelSpec::pair(0, 1));
  for (double x : {0.3, 0.9, 1.7}) {
    const BasePoint p(Vec{{0.7, 0.4, 1.1}}, cplx(x, 0.2)), m(Vec{{0.7, 0.4, 1.1}}, cplx(-x, 0.2));
    const double gp = k.eval(p, tight(), Order::gradient).grad[3];
    const double gm = k.eval(m, tight(), Order::gradient).grad[3];
    CHECK(gp == doctest::Approx(-gm).epsilon(1e-9));
  }
}

TEST_CASE("kernels are positive and permutation equivariant") {
  std::mt19937_64 rng(8);
  const int n = 3;
  const QuadForm a(random_spd(n, 0.5, 2, rng));
  Mat perm = Mat::Identity(n, n);
  perm.row(0).swap(perm.row(1));
  const QuadForm b(perm * a.matrix() * perm.transpose());
  auto relabel = [](int k) { return k == 1 ? 2 : k == 2 ? 1 : k; };
  for (int t = 0; t < 20; ++t) {
    const BasePoint p = off_locus(rng, a, 0.3);
    const BasePoint pp(perm * p.mu, p.eta);
    const int x = static_cast<int>(rng() % (n + 1));
    int y = static_cast<int>(rng() % n);
    if (y >= x) ++y;
    const double v = alpha(a, KernelSpec::pair(x, y), QuadratureSpec{}, p).value;
    const double w = alpha(b, KernelSpec::pair(relabel(x), relabel(y)), QuadratureSpec{}, pp).value;
    REQUIRE(v > 0);
    REQUIRE(v == doctest::Approx(w).epsilon(1e-9));
  }
}

TEST_CASE("restricted kernels are invariant along the integrated-out directions") {
  std::mt19937_64 rng(9);
  const int n = 3;
  const QuadForm a(random_spd(n, 0.5, 2, rng));
  for (const auto& I : {IndexSet({0, 1}, n), IndexSet({1, 2}, n), IndexSet({0, 2, 3}, n)}) {
    const auto mem = I.members();
    const Kernel k(a, KernelSpec::pair(mem[0], mem[1]).restricted_to(I));
    for (int t = 0; t < 5; ++t) {
      const BasePoint p = off_locus(rng, a, 0.5);
      Vec shift = Vec::Zero(n);
      std::uniform_real_distribution<double> u(-3, 3);
      for (int c : I.complement()) shift += u(rng) * generator(c, n);
      const double v0 = k.eval(p, tight()).value;
      const double v1 = k.eval(BasePoint(p.mu + shift, p.eta), tight()).value;
      REQUIRE(std::abs(v0 - v1) < 1e-12 * std::max(1.0, v0));
    }
  }
}

TEST_CASE("harmonicity from the Hessian under the integral, N = 2, 3, 4") {
  std::mt19937_64 rng(10);
  QuadratureSpec q;
  q.rel_tol = 1e-8;
  for (int n = 2; n <= 4; ++n) {
    const QuadForm a(random_spd(n, 0.5, 2, rng));
    std::vector<KernelSpec> specs;
    for (int x = 0; x <= n; ++x)
      for (int y = x + 1; y <= n; ++y) specs.push_back(KernelSpec::pair(x, y));
    for (int t = 0; t < 50; ++t) {
      const Kernel k(a, specs[t % specs.size()]);
      const BasePoint p = off_locus(rng, a, 0.3);
      const auto jet = k.eval(p, q, Order::hessian);
      double terms = 0;
      for (int s = 0; s < n; ++s)
        for (int r = 0; r < n; ++r) terms += std::abs(a.inverse()(s, r) * jet.hess(s, r));
      terms += (std::abs(jet.hess(n, n)) + std::abs(jet.hess(n + 1, n + 1))) / a.det();
      REQUIRE(std::abs(laplace_A(a, jet.hess)) < 1e-3 * terms);
    }
  }
}

TEST_CASE("harmonicity from finite differences of quadrature values") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 3; ++n) {
    const QuadForm a(random_spd(n, 0.5, 2, rng));
    for (int t = 0; t < 5; ++t) {
      const Kernel k(a, KernelSpec::pair(t % n, n));
      const BasePoint p = off_locus(rng, a, 0.5);
      const double h = 0.05 * k.singular_distance(p);
      double terms = 0;
      const double lap = laplace_A_fd(a, [&](const BasePoint& x) { return k.eval(x, QuadratureSpec{}).value; }, p, h, &terms);
      REQUIRE(std::abs(lap) < 1e-3 * terms);
    }
  }
}

TEST_CASE("beta: convention outside I and the nested difference along a ray") {
  std::mt19937_64 rng(12);
  const int n = 3;
  const QuadForm a(random_spd(n, 0.5, 2, rng));
  const IndexSet I({0, 1}, n), J({0, 1, 2}, n);
  const QuadratureSpec q;
  const BasePoint p = off_locus(rng, a, 0.5);
  CHECK(beta(a, I, 0, 2, q, p) == alpha(a, KernelSpec::pair(0, 2), q, p).value);
  CHECK(beta(a, I, 2, 3, q, p) == alpha(a, KernelSpec::pair(2, 3), q, p).value);

  // Along mu = (1, s, 0.3 s), eta = 0.5: inside B_I for large s, and both
  // dist(p, boundary of D_I) and dist(p, D_J) grow linearly.
  const auto consts = locus::RegionConstants::defaults(a);
  std::vector<std::pair<double, double>> nested, full;
  for (int k = 0; k < 12; ++k) {
    const double s = 400 * std::pow(2.0, k / 2.0);
    const BasePoint x(Vec{{1, s, 0.3 * s}}, 0.5);
    REQUIRE(locus::region_membership(a, consts, x).in_B(I));
    const double ai = alpha(a, KernelSpec::pair(0, 1).restricted_to(I), q, x).value;
    const double aj = alpha(a, KernelSpec::pair(0, 1).restricted_to(J), q, x).value;
    nested.emplace_back(locus::dist_closed_stratum(a, J, x), std::abs(ai - aj));
    full.emplace_back(locus::dist_boundary(a, I, x), std::abs(beta(a, I, 0, 1, q, x)));
  }
  for (const auto* v : {&nested, &full}) {
    double lo = INFINITY, hi = 0;
    for (const auto& [d, b] : *v) lo = std::min(lo, d * b), hi = std::max(hi, d * b);
    CHECK(hi > 0);
    CHECK(hi / lo < 2);   // b * d stays within a bounded band over 1.6 decades
  }
}

TEST_CASE("weak distributional identity and its sanity checks, N = 2") {
  const QuadForm a = QuadForm::identity(2);
  QuadratureSpec inner;
  inner.rel_tol = 1e-7;
  const auto spec = KernelSpec::pair(0, 1);
  const Bump on{BasePoint(Vec{{0, 3}}, 0.0), 1, 1};
  const auto w = weak_distributional_check(a, spec, on, inner);
  CHECK(w.converged);
  CHECK(w.rhs < 0);
  CHECK(w.rel_gap < 1e-2);

  const Bump twice{on.centre, 1, 2};
  const auto w2 = weak_distributional_check(a, spec, twice, inner);
  CHECK(w2.lhs == doctest::Approx(2 * w.lhs).epsilon(1e-12));
  CHECK(w2.rhs == doctest::Approx(2 * w.rhs).epsilon(1e-12));

  const Bump off{BasePoint(Vec{{3, 3}}, cplx(0, 2)), 0.8, 1};
  const auto w0 = weak_distributional_check(a, spec, off, inner);
  CHECK(w0.rhs == 0.0);
  CHECK(w0.rel_gap < 1e-3);

  const Bump straddles{BasePoint(Vec{{0, 0.5}}, 0.0), 1, 1};
  CHECK_THROWS_AS(weak_distributional_check(a, spec, straddles, inner), std::invalid_argument);
}

TEST_CASE("singular points and invalid specs are rejected") {
  const QuadForm a = QuadForm::identity(3);
  const Kernel k(a, KernelSpec::pair(0, 1));
  CHECK_THROWS_AS(k.eval(BasePoint(Vec{{0, 2, 3}}, 0.0), QuadratureSpec{}), SingularityError);
  CHECK(k.singular_distance(BasePoint(Vec{{1, 2, 3}}, 0.0)) == doctest::Approx(1));
  QuadratureSpec bad;
  bad.max_evals = 10;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = QuadratureSpec{};
  bad.rel_tol = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS(KernelSpec::pair(2, 2));
  CHECK(Kernel(a, KernelSpec::pair(0, 3).restricted_to(IndexSet({0, 1}, 3))).identically_zero());
}
