#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ghlab/ansatz/first_order.hpp"
#include "ghlab/ansatz/flat.hpp"
#include "ghlab/ghframe/frame.hpp"
#include "ghlab/locus/locus.hpp"

#include <cmath>
#include <random>

using namespace ghlab;
using namespace ghlab::ghframe;
using ansatz::FirstOrderField;

namespace {

BasePoint random_point(std::mt19937_64& rng, int n, double half = 2) {
  std::uniform_real_distribution<double> u(-half, half);
  Vec m(n);
  for (int k = 0; k < n; ++k) m[k] = u(rng);
  const double re = u(rng) / 2;
  return BasePoint(m, cplx(re, u(rng) / 2));
}

BasePoint off_locus(std::mt19937_64& rng, const QuadForm& a, double margin) {
  for (;;) {
    BasePoint p = random_point(rng, a.n());
    if (locus::dist_locus(a, p) > margin) return p;
  }
}

/// Constant field with V_01 += mu_2 (a deliberate break of the first integrability condition).
GHField corrupted(const QuadForm& a) {
  const int n = a.n();
  auto s = [a, n](const BasePoint& p, int order) {
    GHSample g;
    g.order = order;
    g.V = a.matrix();
    g.V(0, 1) += p.mu[2];
    g.V(1, 0) += p.mu[2];
    g.W = a.det();
    if (order >= 1) {
      g.dV.assign(n + 2, Mat::Zero(n, n));
      g.dV[2](0, 1) = g.dV[2](1, 0) = 1;
      g.dW = Vec::Zero(n + 2);
    }
    if (order >= 2) {
      g.eta_lap_V = Mat::Zero(n, n);
      g.hess_W = Mat::Zero(n + 2, n + 2);
    }
    return g;
  };
  return GHField(n, s, {}, "corrupted");
}

}  // namespace

TEST_CASE("frame of the flat field at mu = 0, eta = 1, N = 2") {
  const auto flat = ansatz::flat_ghfield(2);
  const BasePoint p(Vec{{0, 0}}, 1.0);
  const FramePoint f = frame_at(flat, p);
  const Mat vinv{{2, 1}, {1, 2}};
  REQUIRE(f.gram.rows() == 6);
  CHECK((f.gram.block(0, 0, 2, 2) - vinv.inverse()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.gram.block(2, 2, 2, 2) - vinv).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.gram.block(4, 4, 2, 2) - Mat::Identity(2, 2) / 3).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(f.gram.block(0, 2, 2, 4).isZero());
  CHECK(f.gram.determinant() == doctest::Approx(f.W * f.W).epsilon(1e-12));
  CHECK(cy_residual(flat, p).normalized == doctest::Approx(0).epsilon(1e-14));
}

TEST_CASE("gram determinant is W^2 and the volume ratio is W / det V") {
  std::mt19937_64 rng(31);
  const auto flat = ansatz::flat_ghfield(3);
  kernels::QuadratureSpec q;
  q.rel_tol = 1e-8;
  const QuadForm a(random_spd(3, 0.5, 2, rng));
  const GHField first = FirstOrderField(a, q).as_field();
  for (int t = 0; t < 20; ++t) {
    const BasePoint p = off_locus(rng, a, 0.3);
    for (const GHField* g : {&flat, &first}) {
      const FramePoint f = frame_at(*g, p);
      REQUIRE(Eigen::SelfAdjointEigenSolver<Mat>(f.gram).eigenvalues().minCoeff() > 0);
      REQUIRE(f.gram.determinant() == doctest::Approx(f.W * f.W).epsilon(1e-12));
      REQUIRE(f.volume_ratio() * (1 + cy_residual(*g, p).normalized) == doctest::Approx(1).epsilon(1e-12));
    }
    REQUIRE(std::abs(cy_residual(flat, p).normalized) < 1e-10);
  }
}

TEST_CASE("constant field: constant gram, zero residuals, zero curvature") {
  const QuadForm a(Mat{{2, 0.3, 0}, {0.3, 1, 0.2}, {0, 0.2, 1.5}});
  const GHField c = GHField::constant(a);
  const BasePoint p(Vec{{1, -2, 0.5}}, cplx(0.2, 3)), q(Vec{{-7, 4, 1}}, cplx(-1, 0));
  CHECK(frame_at(c, p).gram == frame_at(c, q).gram);
  CHECK(std::abs(cy_residual(c, p).normalized) < 1e-15);
  const auto r = integrability_residual(c, p);
  CHECK(r.first == 0.0);
  CHECK(r.second == 0.0);
  const auto f = curvature_F(c, p);
  CHECK(f.max_abs == 0.0);
  CHECK(f.dF_residual == 0.0);
}

TEST_CASE("a corrupted field is caught by the first integrability condition") {
  const GHField bad = corrupted(QuadForm::identity(3));
  const auto r = integrability_residual(bad, BasePoint(Vec{{0.1, 0.2, 0.3}}, 1.0));
  CHECK(r.first == 1.0);
  CHECK(r.second == 0.0);
  CHECK_THROWS_AS(integrability_residual(bad.sample(BasePoint(Vec{{0.1, 0.2, 0.3}}, 1.0), 1)), std::invalid_argument);
}

TEST_CASE("frame_at rejects a non-positive V") {
  const GHField neg(1, [](const BasePoint&, int order) {
    GHSample g;
    g.order = order;
    g.V = Mat::Constant(1, 1, -1);
    g.W = 1;
    return g;
  });
  CHECK_THROWS_AS(frame_at(neg, BasePoint(Vec{{0.0}}, 1.0)), std::domain_error);
}

TEST_CASE("first-order field: integrability and closed curvature with analytic derivatives") {
  std::mt19937_64 rng(32);
  const kernels::QuadratureSpec q;
  for (int n = 2; n <= 3; ++n) {
    const QuadForm a(random_spd(n, 0.5, 2, rng));
    const GHField g = FirstOrderField(a, q).as_field();
    for (int t = 0; t < (n == 2 ? 10 : 3); ++t) {
      const BasePoint p = off_locus(rng, a, 0.4);
      const auto r = integrability_residual(g, p);
      REQUIRE(r.first_rel < 1e-6);
      REQUIRE(r.second_rel < 1e-6);
      const auto f = curvature_F(g, p);
      REQUIRE(f.dF_residual == r.second);
      // reality: the deta and deta~ parts are conjugate, deta ^ deta~ is imaginary
      REQUIRE((f.mu_eta - f.mu_etabar.conjugate()).cwiseAbs().maxCoeff() == 0.0);
      REQUIRE(f.eta_etabar.real().cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("restricted field: F_j = 0 for j outside I") {
  std::mt19937_64 rng(33);
  const int n = 3;
  const QuadForm a(random_spd(n, 0.5, 2, rng));
  const IndexSet I({0, 1, 2}, n);
  const kernels::QuadratureSpec q;
  const GHField g = FirstOrderField(a, q, I).as_field();
  for (int t = 0; t < 5; ++t) {
    const BasePoint p = off_locus(rng, a, 0.4);
    const auto f = curvature_F(g, p);
    REQUIRE(f.max_abs > 0);
    for (int j : I.complement_active()) {
      REQUIRE(std::abs(f.xy[j - 1]) < 1e-8 * f.max_abs);
      REQUIRE(f.mu_x.col(j - 1).isZero());
      REQUIRE(f.mu_y.col(j - 1).isZero());
    }
  }
}

TEST_CASE("grad_norm: hand values and a bounded |d|vec mu_I|| on the first-order field") {
  const QuadForm a(Mat{{2, 0.5, 0}, {0.5, 1, 0}, {0, 0, 3}});
  const GHField c = GHField::constant(a);
  const BasePoint p(Vec{{0.4, 1, 2}}, cplx(1, -1));
  const auto mu1 = ScalarField::analytic(
      [](const BasePoint& x) { return x.mu[0]; },
      [](const BasePoint&) { Vec g = Vec::Zero(5); g[0] = 1; return g; },
      [](const BasePoint&) { return Mat(Mat::Zero(5, 5)); });
  CHECK(grad_norm(c, mu1, p) == doctest::Approx(std::sqrt(a.inverse()(0, 0))).epsilon(1e-14));
  const auto one = ScalarField::finite_difference([](const BasePoint&) { return 1.0; });
  CHECK(grad_norm(c, one, p) == 0.0);

  // |vec mu_I| is the A-distance to the span of D_I; with the first-order
  // metric its gradient stays bounded along a ray parallel to D_01.
  const IndexSet I({0, 1}, 3);
  const kernels::QuadratureSpec q;
  const GHField g = FirstOrderField(a, q).as_field();
  const auto vec_mu = ScalarField::finite_difference(
      [&](const BasePoint& x) { return locus::project(a, I, x).dist; }, FdOptions{1e-3, true});
  double first_half = 0, all = 0;
  for (int k = 0; k < 12; ++k) {
    const double s = 4 * std::pow(2.0, k / 2.0);
    const double v = grad_norm(g, vec_mu, BasePoint(Vec{{1.5, s, 0.5 * s}}, cplx(0.5, 0.5)));
    REQUIRE(std::isfinite(v));
    if (k < 6) first_half = std::max(first_half, v);
    all = std::max(all, v);
  }
  CHECK(all <= 1.5 * first_half);
}
