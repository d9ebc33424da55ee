#include "ghlab/cli/experiments.hpp"

#include "ghlab/ansatz/decay.hpp"
#include "ghlab/ansatz/flat.hpp"
#include "ghlab/ghframe/frame.hpp"
#include "ghlab/glue/cutoff.hpp"
#include "ghlab/glue/profile.hpp"
#include "ghlab/glue/weight.hpp"
#include "ghlab/holo/holo.hpp"
#include "ghlab/kernels/checks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace ghlab::cli {

int thread_count() {
  if (const char* env = std::getenv("GHLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_count(), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t row_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ index);
}

namespace {

using kernels::Kernel;
using kernels::KernelSpec;

std::string tag(const std::string& prefix, int idx) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d", idx);
  return prefix + buf;
}

/// Computes rows in parallel; a throwing row becomes a failed row carrying the message.
std::vector<ResultRow> rows_of(int count, std::size_t columns, const std::function<ResultRow(int)>& make,
                               const std::function<std::string(int)>& name) {
  std::vector<ResultRow> rows(count);
  parallel_for(count, [&](int i) {
    try {
      rows[i] = make(i);
    } catch (const std::exception& e) {
      rows[i] = ResultRow{name(i), std::vector<double>(columns, NAN), 0, false, e.what()};
    }
  });
  return rows;
}

void append(std::vector<ResultRow>& to, std::vector<ResultRow>&& from) {
  for (auto& r : from) to.push_back(std::move(r));
}

std::mt19937_64 rng_for(const ExperimentConfig& c, std::uint64_t stream, int idx) {
  return std::mt19937_64(row_seed(c.seed, stream, static_cast<std::uint64_t>(idx)));
}

BasePoint random_point(std::mt19937_64& rng, int n, double mu_half, double eta_half) {
  std::uniform_real_distribution<double> mu(-mu_half, mu_half), eta(-eta_half, eta_half);
  Vec m(n);
  for (int k = 0; k < n; ++k) m[k] = mu(rng);
  const double re = eta(rng);
  return BasePoint(m, cplx(re, eta(rng)));
}

/// eta with modulus in [lo, hi] and uniform phase.
cplx random_eta(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> r(lo, hi), ph(0, 2 * std::numbers::pi);
  return std::polar(r(rng), ph(rng));
}

int required_n(const ExperimentConfig& c, int fallback, int lo, const char* who) {
  const int n = c.n_or(fallback);
  if (n < lo) throw ConfigError(std::string(who) + " needs N >= " + std::to_string(lo));
  return n;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

// flat-cy: |det V / W - 1| for the flat metric at random off-locus points.
RunResult flat_cy(const ExperimentConfig& c) {
  const int n = c.n_or(3);
  const double tol = c.param("tol", 1e-9);
  RunResult r{"flat-cy", {"det_V", "W", "rel_cy", "root_residual"}};
  r.rows = rows_of(
      c.points_or(1000), 4,
      [&](int i) {
        auto rng = rng_for(c, 1, i);
        BasePoint p = random_point(rng, n, 3, 2);
        auto d = ansatz::flat_field(p);
        while (d.on_locus) d = ansatz::flat_field(p = random_point(rng, n, 3, 2));
        const double det = d.V.determinant();
        const double gap = std::abs(det / d.W - 1);
        return ResultRow{tag("pt", i), {det, d.W, gap, d.root_residual}, tol, gap < tol};
      },
      [](int i) { return tag("pt", i); });
  r.summary["N"] = n;
  return r;
}

// taubnut-exact: N = 1, the first-order field is exactly Taub-NUT.
RunResult taubnut_exact(const ExperimentConfig& c) {
  if (c.N && *c.N != 1) throw ConfigError("taubnut-exact runs at N = 1 only");
  const QuadForm a = c.form(1);
  const double tol = c.param("tol", 1e-10);
  RunResult r{"taubnut-exact", {"mu", "abs_eta", "E_sigma", "E_direct", "V_rel_gap"}};
  r.rows = rows_of(
      c.points_or(100), 5,
      [&](int i) {
        auto rng = rng_for(c, 2, i);
        const BasePoint p = random_point(rng, 1, 3, 2);
        const auto [V, W] = ansatz::first_order_field(a, c.quad, p);
        const auto s = ansatz::sigma_expansion(a, V - a.matrix());
        const double radius = std::hypot(p.mu[0], std::abs(p.eta));
        const double closed = a(0, 0) + 1 / (2 * radius);
        const double vgap = rel(V(0, 0), closed);
        const bool pass = std::abs(s.E) < tol && std::abs(s.E_direct) < tol && vgap < tol && std::abs(W - closed) < tol * closed;
        return ResultRow{tag("pt", i), {p.mu[0], std::abs(p.eta), s.E, s.E_direct, vgap}, tol, pass};
      },
      [](int i) { return tag("pt", i); });
  return r;
}

// kernel-closedform: alpha_{I,01}, I = {0,1}, against 1 / (2 sqrt(mu_1^2 + det A_{2..N} |eta|^2)).
RunResult kernel_closedform(const ExperimentConfig& c) {
  const int n = required_n(c, 3, 2, "kernel-closedform");
  const QuadForm a = c.form(n);
  const double tol = c.param("tol", 1e-8);
  std::vector<int> rest;
  for (int k = 1; k < n; ++k) rest.push_back(k);
  const double det_rest = submatrix(a.matrix(), rest, rest).determinant();
  const Kernel kern(a, KernelSpec::pair(0, 1).restricted_to(IndexSet({0, 1}, n)));
  RunResult r{"kernel-closedform", {"alpha", "closed_form", "rel_err", "quad_error"}};
  r.rows = rows_of(
      c.points_or(100), 4,
      [&](int i) {
        auto rng = rng_for(c, 3, i);
        const BasePoint p = random_point(rng, n, 2, 1.5);
        const auto v = kern.eval(p, c.quad);
        const double closed = 1 / (2 * std::sqrt(p.mu[0] * p.mu[0] + det_rest * std::norm(p.eta)));
        const double e = rel(v.value, closed);
        return ResultRow{tag("pt", i), {v.value, closed, e, v.error}, tol, e < tol && v.converged};
      },
      [](int i) { return tag("pt", i); });
  r.summary["N"] = n;
  return r;
}

BasePoint away_from_locus(std::mt19937_64& rng, const QuadForm& a, double mu_half, double eta_half, double margin) {
  for (;;) {
    BasePoint p = random_point(rng, a.n(), mu_half, eta_half);
    if (locus::dist_locus(a, p) > margin) return p;
  }
}

// commutativity: d alpha_ij / d mu_k = d alpha_ik / d mu_j and
// d alpha_0i / d mu_j = -sum_t d alpha_ij / d mu_t, with alpha_ab = alpha_ba.
RunResult commutativity(const ExperimentConfig& c) {
  const int n = required_n(c, 3, 2, "commutativity");
  const QuadForm a = c.form(n);
  const double tol = c.param("tol", 1e-4);
  std::vector<std::vector<std::optional<Kernel>>> k(n + 1, std::vector<std::optional<Kernel>>(n + 1));
  for (int x = 0; x <= n; ++x)
    for (int y = x + 1; y <= n; ++y) k[x][y].emplace(a, KernelSpec::pair(x, y)), k[y][x] = k[x][y];
  RunResult r{"commutativity", {"cross_rel", "sum_rel", "scale"}};
  r.rows = rows_of(
      c.points_or(20), 3,
      [&](int idx) {
        auto rng = rng_for(c, 4, idx);
        const BasePoint p = away_from_locus(rng, a, 2, 1, 0.5);
        std::vector<std::vector<Vec>> g(n + 1, std::vector<Vec>(n + 1));
        for (int x = 0; x <= n; ++x)
          for (int y = x + 1; y <= n; ++y)
            g[x][y] = g[y][x] = k[x][y]->eval(p, c.quad, kernels::Order::gradient).grad;
        double scale = 0;
        for (int x = 0; x <= n; ++x)
          for (int y = x + 1; y <= n; ++y) scale = std::max(scale, g[x][y].head(n).cwiseAbs().maxCoeff());
        double cross = 0, sum = 0;
        for (int i = 0; i <= n; ++i)
          for (int j = 1; j <= n; ++j)
            for (int kk = 1; kk <= n; ++kk)
              if (i != j && i != kk && j != kk) cross = std::max(cross, std::abs(g[i][j][kk - 1] - g[i][kk][j - 1]));
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            double s = 0;
            for (int t = 1; t <= n; ++t) s += g[i][j][t - 1];
            sum = std::max(sum, std::abs(g[0][i][j - 1] + s));
          }
        cross /= scale, sum /= scale;
        return ResultRow{tag("pt", idx), {cross, sum, scale}, tol, cross < tol && sum < tol};
      },
      [](int i) { return tag("pt", i); });
  return r;
}

// harmonicity: Delta_A alpha by finite differences of quadrature values, one kernel per point in rotation.
RunResult harmonicity(const ExperimentConfig& c) {
  const int n = required_n(c, 3, 1, "harmonicity");
  const QuadForm a = c.form(n);
  const double tol = c.param("tol", 1e-3);
  const double step_frac = c.param("step_fraction", 0.05);
  std::vector<Kernel> ks;
  for (int x = 0; x <= n; ++x)
    for (int y = x + 1; y <= n; ++y) ks.emplace_back(a, KernelSpec::pair(x, y));
  RunResult r{"harmonicity", {"kernel", "singular_distance", "laplacian_rel_fd", "laplacian_rel_analytic"}};
  r.rows = rows_of(
      c.points_or(50), 4,
      [&](int idx) {
        auto rng = rng_for(c, 5, idx);
        const std::size_t which = static_cast<std::size_t>(idx) % ks.size();
        const Kernel& kern = ks[which];
        BasePoint p = random_point(rng, n, 2, 1);
        while (kern.singular_distance(p) < 0.3) p = random_point(rng, n, 2, 1);
        const double d = kern.singular_distance(p);
        double terms = 0;
        const double lap = laplace_A_fd(a, [&](const BasePoint& x) { return kern.eval(x, c.quad).value; }, p,
                                        step_frac * d, &terms);
        const auto jet = kern.eval(p, c.quad, kernels::Order::hessian);
        double aterms = 0;
        const Mat& ainv = a.inverse();
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t) aterms += std::abs(ainv(s, t) * jet.hess(s, t));
        aterms += (std::abs(jet.hess(n, n)) + std::abs(jet.hess(n + 1, n + 1))) / a.det();
        const double fd_rel = std::abs(lap) / terms;
        const double an_rel = std::abs(laplace_A(a, jet.hess)) / aterms;
        return ResultRow{tag("pt", idx), {static_cast<double>(which), d, fd_rel, an_rel}, tol, fd_rel < tol && an_rel < tol,
                         kern.spec().label()};
      },
      [](int i) { return tag("pt", i); });
  return r;
}

// weak-chern: the distributional pairing against bumps centred on the kernel's own stratum.
RunResult weak_chern(const ExperimentConfig& c) {
  const int n = required_n(c, 2, 2, "weak-chern");
  const QuadForm a = c.form(n);
  const double tol = c.param("tol", 1e-2);
  const double dist = c.param("distance", 3);
  const double radius = c.param("radius", 1);
  const double outer = c.param("outer_rel_tol", 1e-4);
  kernels::QuadratureSpec inner = c.quad;
  inner.rel_tol = std::max(inner.rel_tol, 1e-7);
  // One placement per kernel (a, b): centre dist * (first generator of the stratum) + the opposite shift.
  std::vector<KernelSpec> specs;
  for (int x = 0; x <= n; ++x)
    for (int y = x + 1; y <= n; ++y) specs.push_back(KernelSpec::pair(x, y));
  const int count = std::min<int>(c.points_or(3), static_cast<int>(specs.size()));
  RunResult r{"weak-chern", {"lhs", "rhs", "rel_gap"}};
  r.rows = rows_of(
      count, 3,
      [&](int idx) {
        const auto& spec = specs[idx];
        Vec centre = Vec::Zero(n);
        for (int k = 0; k <= n; ++k)
          if (k != spec.a && k != spec.b) centre += dist * generator(k, n);
        const kernels::Bump bump{BasePoint(centre, 0.0), radius, 1};
        const auto w = kernels::weak_distributional_check(a, spec, bump, inner, outer);
        return ResultRow{tag("bump", idx), {w.lhs, w.rhs, w.rel_gap}, tol, w.rel_gap < tol && w.converged,
                         spec.label()};
      },
      [](int i) { return tag("bump", i); });
  return r;
}

// pythagoras: dist(p, D_J)^2 = dist(p, D_I)^2 + dist(p_I, D_J)^2 when both projections are interior.
RunResult pythagoras(const ExperimentConfig& c) {
  const int nmax = c.n_or(4);
  if (nmax < 2) throw ConfigError("pythagoras needs N >= 2");
  const double tol = c.param("tol", 1e-10);
  RunResult r{"pythagoras", {"N", "dist2_J", "dist2_I_plus_step", "gap"}};
  r.rows = rows_of(
      c.points_or(500), 4,
      [&](int idx) {
        auto rng = rng_for(c, 7, idx);
        const int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(nmax - 1));
        const QuadForm a(random_spd(n, c.lambda, c.Lambda, rng));
        const std::uint64_t all = (std::uint64_t{1} << (n + 1)) - 1;
        for (int attempt = 0; attempt < 200000; ++attempt) {
          const std::uint64_t mi = rng() & all, mj = (rng() & all) | mi;
          const IndexSet I = IndexSet::from_mask(mi, n), J = IndexSet::from_mask(mj, n);
          if (I.size() < 2 || !I.strict_subset_of(J)) continue;
          const BasePoint p = random_point(rng, n, 3, 1);
          const auto pi = locus::project(a, I, p);
          if (!pi.interior) continue;
          const auto pij = locus::project(a, J, pi.foot);
          if (!pij.interior) continue;
          const double dj = locus::dist_closed_stratum(a, J, p);
          const double di = locus::dist_closed_stratum(a, I, p);
          const double step = locus::dist_closed_stratum(a, J, pi.foot);
          const double lhs = dj * dj, rhs = di * di + step * step;
          const double gap = std::abs(lhs - rhs) / std::max(1.0, lhs);
          return ResultRow{tag("inst", idx), {double(n), lhs, rhs, gap}, tol, gap < tol, I.label() + "<" + J.label()};
        }
        throw std::runtime_error("no interior instance found");
      },
      [](int i) { return tag("inst", i); });
  return r;
}

// eigen-interval: the spectrum of G_I inside [lambda (lambda / Lambda)^(N-1), Lambda] over every stratum.
RunResult eigen_interval(const ExperimentConfig& c) {
  const int n = required_n(c, 4, 1, "eigen-interval");
  RunResult r{"eigen-interval", {"lambda_min", "lambda_max", "lower_bound", "min_eig", "max_eig"}};
  r.rows = rows_of(
      c.points_or(100), 5,
      [&](int idx) {
        auto rng = rng_for(c, 8, idx);
        const QuadForm a(random_spd(n, c.lambda, c.Lambda, rng));
        const double lo = a.lambda_min() * std::pow(a.lambda_min() / a.lambda_max(), n - 1);
        double emin = INFINITY, emax = 0;
        for (const auto& I : index_sets(n, 2, n + 1)) {
          const auto g = schur_complement(a, I);
          emin = std::min(emin, g.lambda_min());
          emax = std::max(emax, g.lambda_max());
        }
        const bool pass = emin >= lo * (1 - 1e-12) && emax <= a.lambda_max() * (1 + 1e-12);
        return ResultRow{tag("mat", idx), {a.lambda_min(), a.lambda_max(), lo, emin, emax}, 0, pass};
      },
      [](int i) { return tag("mat", i); });
  return r;
}

// decay-scan: |E| of the first-order field along the three N = 3 ray families.
RunResult decay_scan(const ExperimentConfig& c) {
  const int n = required_n(c, 3, 3, "decay-scan");
  const QuadForm a = c.form(n);
  const double r0 = c.param("r0", 10);
  const int count = static_cast<int>(c.param("samples", 17));
  const auto radii = ansatz::geometric_radii(r0, count);
  struct Family {
    ansatz::Ray ray;
    double expected, tol;
  };
  const std::vector<Family> fam = {{ansatz::generic_ray(n), 2.0, 0.2},
                                   {ansatz::simple_ray(n), 1.0, 0.2},
                                   {ansatz::deep_ray(n), 0.0, 0.1}};
  const auto err = ansatz::first_order_error(a, c.quad);
  RunResult r{"decay-scan", {"radius", "anorm", "abs_E", "exponent", "expected", "r2"}};
  // Every (family, radius) sample is its own row; the fit rows are assembled afterwards.
  const int per = static_cast<int>(radii.size());
  auto samples = rows_of(
      static_cast<int>(fam.size()) * per, 6,
      [&](int idx) {
        const auto& f = fam[idx / per];
        const double rad = radii[idx % per];
        const BasePoint p = f.ray.at(rad);
        const double e = std::abs(err(p));
        return ResultRow{f.ray.name + tag("/r", idx % per), {rad, anorm(a, p), e, NAN, f.expected, NAN}, 0,
                         std::isfinite(e)};
      },
      [&](int idx) { return fam[idx / per].ray.name + tag("/r", idx % per); });
  for (std::size_t fi = 0; fi < fam.size(); ++fi) {
    std::vector<std::pair<double, double>> pts;
    bool finite = true;
    for (int k = 0; k < per; ++k) {
      const auto& row = samples[fi * per + k];
      finite = finite && row.pass;
      pts.emplace_back(row.values[1], row.values[2]);
    }
    const auto& f = fam[fi];
    ResultRow fit{f.ray.name + "/fit", {NAN, NAN, pts.back().second, NAN, f.expected, NAN}, f.tol, false};
    if (finite) {
      const auto d = ansatz::fit_power_law(pts);
      fit.values[3] = d.exponent;
      fit.values[5] = d.r2;
      fit.pass = d.adequate() && std::abs(d.exponent - f.expected) <= f.tol;
      if (f.expected == 0.0) {
        // |E| has to settle at a positive constant, not merely decay slowly.
        const double last = pts.back().second, prev = pts[pts.size() - 2].second;
        fit.pass = fit.pass && last > 0 && std::abs(last / prev - 1) < 0.05;
      }
      r.summary[f.ray.name + "_exponent"] = d.exponent;
    }
    r.rows.push_back(fit);
  }
  append(r.rows, std::move(samples));
  return r;
}

// beta-bounds: |beta_{I,01}| dist(p, boundary of D_I) stays bounded along a ray escaping into B_I.
RunResult beta_bounds(const ExperimentConfig& c) {
  const int n = required_n(c, 3, 3, "beta-bounds");
  const QuadForm a = c.form(n);
  const IndexSet I({0, 1}, n);
  const double tol = c.param("tol", 0.1);
  const int count = c.points_or(100);
  const double r0 = c.param("r0", 10), decades = c.param("decades", 2.2);
  const auto ray = ansatz::simple_ray(n);
  RunResult r{"beta-bounds", {"radius", "dist_boundary", "abs_beta_01", "product", "beta_02_minus_alpha_02", "exponent"}};
  const Kernel a02(a, KernelSpec::pair(0, 2));
  auto samples = rows_of(
      count, 6,
      [&](int k) {
        const double rad = r0 * std::pow(10.0, decades * k / std::max(1, count - 1));
        const BasePoint p = ray.at(rad);
        const double db = locus::dist_boundary(a, I, p);
        const double b01 = kernels::beta(a, I, 0, 1, c.quad, p);
        const double conv = kernels::beta(a, I, 0, 2, c.quad, p) - a02.eval(p, c.quad).value;
        return ResultRow{tag("r", k), {rad, db, std::abs(b01), std::abs(b01) * db, conv, NAN}, 0,
                         std::isfinite(b01) && conv == 0.0};
      },
      [](int k) { return tag("r", k); });
  std::vector<std::pair<double, double>> pts;
  double first = NAN, peak = 0;
  for (const auto& s : samples) {
    pts.emplace_back(s.values[1], s.values[2]);
    if (std::isnan(first)) first = s.values[3];
    peak = std::max(peak, s.values[3]);
  }
  const auto d = ansatz::fit_power_law(pts);
  ResultRow fit{"fit", {NAN, NAN, NAN, peak, NAN, d.exponent}, tol, d.adequate() && d.exponent >= 1 - tol,
                "exponent of |beta| against dist to the boundary"};
  r.rows.push_back(fit);
  append(r.rows, std::move(samples));
  r.summary["exponent"] = d.exponent;
  r.summary["max_product"] = peak;
  return r;
}

// gamma-sum: |sum gamma_i - 1/eta| |eta| on I = {0..n}.
RunResult gamma_sum(const ExperimentConfig& c) {
  const int n = required_n(c, 3, 1, "gamma-sum");
  const QuadForm a = c.form(n);
  struct Job {
    int order;
    int idx;
    double tol;
  };
  std::vector<Job> jobs;
  const int n1 = static_cast<int>(c.param("points_n1", c.points_or(10)));
  const int n2 = n >= 2 ? static_cast<int>(c.param("points_n2", 3)) : 0;
  for (int i = 0; i < n1; ++i) jobs.push_back({1, i, c.param("tol_n1", 1e-3)});
  for (int i = 0; i < n2; ++i) jobs.push_back({2, i, c.param("tol_n2", 1e-2)});
  const holo::Gamma g1(a, 1, c.quad);
  std::optional<holo::Gamma> g2;
  if (n2 > 0) g2.emplace(a, 2, c.quad);
  auto name = [&](int k) { return tag("n" + std::to_string(jobs[k].order) + "/pt", jobs[k].idx); };
  RunResult r{"gamma-sum", {"n", "abs_eta", "gap"}};
  r.rows = rows_of(
      static_cast<int>(jobs.size()), 3,
      [&](int k) {
        const auto& j = jobs[k];
        auto rng = rng_for(c, 10 + j.order, j.idx);
        BasePoint p = random_point(rng, n, 1, 1);
        p.eta = j.order == 1 ? random_eta(rng, 0.5, 2) : random_eta(rng, 2, 3);
        const double gap = holo::gamma_sum_check(j.order == 1 ? g1 : *g2, p);
        return ResultRow{name(k), {double(j.order), std::abs(p.eta), gap}, j.tol, gap < j.tol};
      },
      name);
  return r;
}

// logz-growth: model-coordinate identity, log-coordinate product identity and
// path independence, the N = 1 closed form, and the growth-envelope fit.
RunResult logz_growth(const ExperimentConfig& c) {
  const int n = required_n(c, 3, 2, "logz-growth");
  const QuadForm a = c.form(n);
  const QuadForm a1 = c.A ? QuadForm(a.matrix().topLeftCorner(1, 1)) : c.form(1);
  const double tol_model = c.param("tol_model", 1e-12), tol_product = c.param("tol_product", 1e-6);
  const double tol_closed = c.param("tol_closed", 1e-8);
  const int paths = static_cast<int>(c.param("paths", 3));
  const holo::Gamma g1(a, 1, c.quad), g2(a, 2, c.quad), tn(a1, 1, c.quad);
  RunResult r{"logz-growth", {"value", "reference", "gap"}};

  auto model = rows_of(
      c.points_or(100), 3,
      [&](int k) {
        auto rng = rng_for(c, 20, k);
        const BasePoint p = random_point(rng, 1, 5, 5);
        const double cc = std::uniform_real_distribution<double>(-1, 1)(rng);
        const auto w = holo::model_coords(a1(0, 0), cc, p);
        const double gap = rel(w.w0 * w.w1, std::abs(p.eta));
        return ResultRow{tag("model/pt", k), {w.w0 * w.w1, std::abs(p.eta), gap}, tol_model, gap < tol_model};
      },
      [](int k) { return tag("model/pt", k); });
  append(r.rows, std::move(model));

  // Paths start near the stratum with |eta| bounded away from 0.
  auto endpoints = [&](std::mt19937_64& rng) {
    BasePoint s = random_point(rng, n, 1, 0), e = random_point(rng, n, 1, 0);
    s.eta = random_eta(rng, 0.8, 1.5), e.eta = random_eta(rng, 0.8, 1.5);
    return std::pair{s, e};
  };
  struct PathJob {
    int order, idx;
  };
  std::vector<PathJob> jobs;
  for (int o = 1; o <= 2; ++o)
    for (int k = 0; k < paths; ++k) jobs.push_back({o, k});
  auto pname = [&](int k) { return tag("path/n" + std::to_string(jobs[k].order) + "/", jobs[k].idx); };
  auto pathrows = rows_of(
      static_cast<int>(jobs.size()), 3,
      [&](int k) {
        auto rng = rng_for(c, 21 + jobs[k].order, jobs[k].idx);
        const auto [s, e] = endpoints(rng);
        BasePoint via1 = s, via2 = e;
        via1.mu = e.mu, via2.mu = s.mu;
        const auto& g = jobs[k].order == 1 ? g1 : g2;
        const auto l1 = holo::log_z(g, {s, via1, e});
        const auto l2 = holo::log_z(g, {s, via2, e});
        const double path_gap = (l1.log_abs - l2.log_abs).cwiseAbs().maxCoeff();
        const double gap = std::max({l1.product_gap, l2.product_gap, path_gap});
        return ResultRow{pname(k), {l1.log_abs.sum(), std::log(std::abs(e.eta)), gap}, tol_product,
                         gap < tol_product && l1.converged && l2.converged};
      },
      pname);
  append(r.rows, std::move(pathrows));

  auto closed = rows_of(
      paths, 3,
      [&](int k) {
        auto rng = rng_for(c, 24, k);
        BasePoint s = random_point(rng, 1, 1, 0), e = random_point(rng, 1, 1, 0);
        s.eta = random_eta(rng, 0.5, 1.5), e.eta = random_eta(rng, 0.5, 1.5);
        const auto l = holo::log_z(tn, {s, e});
        const auto lift = [&](const BasePoint& p) {
          const double rr = std::hypot(p.mu[0], std::abs(p.eta));
          return a1(0, 0) * p.mu[0] + 0.5 * std::log(p.mu[0] + rr);
        };
        const double want = lift(e) - lift(s);
        const double gap = std::abs(l.log_abs[1] - want);
        return ResultRow{tag("closed/n1/", k), {l.log_abs[1], want, gap}, tol_closed, gap < tol_closed && l.converged};
      },
      [](int k) { return tag("closed/n1/", k); });
  append(r.rows, std::move(closed));

  // Envelope K1 e^{K2 s} m <= |z| <= K3 e^{K4 s} m for the N = 1 model, s = |mu|.
  std::vector<holo::GrowthSample> gs;
  for (int k = 0; k < 200; ++k) {
    auto rng = rng_for(c, 25, k);
    const double rad = std::pow(10.0, std::uniform_real_distribution<double>(0.5, 2)(rng));
    const double th = std::uniform_real_distribution<double>(0.15, std::numbers::pi / 2 - 0.15)(rng);
    const BasePoint p(Vec::Constant(1, rad * std::cos(th)), rad * std::sin(th));
    const auto w = holo::model_coords(a1(0, 0), 0, p);
    gs.push_back({std::abs(p.mu[0]), anorm(a1, p), std::hypot(w.w0, w.w1)});
  }
  const auto fit = holo::growth_bound_check(gs, c.param("growth_floor", 1));
  r.rows.push_back(ResultRow{"growth/fit", {fit.K2, fit.K4, std::log(fit.K3 / fit.K1)}, 0, fit.holds && fit.used > 0,
                             "value=K2, reference=K4, gap=log(K3/K1)"});
  r.summary["growth"] = {{"K1", fit.K1}, {"K2", fit.K2}, {"K3", fit.K3}, {"K4", fit.K4}, {"used", fit.used}};
  return r;
}

// glue-regions: the gluing weight is 1 on B''_I and 0 on B_I \ B'_I.
RunResult glue_regions(const ExperimentConfig& c) {
  const int n = required_n(c, 3, 2, "glue-regions");
  const QuadForm a = c.form(n);
  const auto consts = c.constants(a);
  std::vector<int> mem;
  for (int k = 0; k < n; ++k) mem.push_back(k);
  const IndexSet I(mem, n);   // {0, 1, ..., N-1}; its stratum is the ray along e_N
  const int count = c.points_or(1000);
  const Vec axis = generator(n, n);
  RunResult r{"glue-regions", {"weight", "expected", "vec_mu", "dist_boundary"}};
  auto name = [&](int k) { return k < count ? tag("inner/pt", k) : tag("outer/pt", k - count); };
  r.rows = rows_of(
      2 * count, 4,
      [&](int k) {
        const bool inner = k < count;
        auto rng = rng_for(c, inner ? 30 : 31, inner ? k : k - count);
        std::uniform_real_distribution<double> ls(4, 6), lf(-6, 0), u(-1, 1);
        for (int attempt = 0; attempt < 100000; ++attempt) {
          const double s = std::pow(10.0, ls(rng));
          // Transverse offset, A-orthogonal to the stratum, of relative size f.
          Vec x(n + 2);
          for (int q = 0; q < n + 2; ++q) x[q] = u(rng);
          Vec m = x.head(n);
          m -= axis * (axis.dot(a.matrix() * m) / a.quad(axis));
          const double len = std::sqrt(a.quad(m) + a.det() * x.tail(2).squaredNorm());
          if (!(len > 0)) continue;
          const double f = std::pow(10.0, lf(rng)) * s * std::sqrt(a.quad(axis)) / len;
          const BasePoint p(s * axis + f * m, cplx(f * x[n], f * x[n + 1]));
          const auto reg = locus::region_membership(a, consts, p);
          const bool want = inner ? reg.in_B2(I) : (reg.in_B(I) && !reg.in_B1(I));
          if (!want) continue;
          const double db = locus::dist_boundary(a, I, p);
          if (!(db > consts.C_prime)) continue;
          const auto w = glue::glue_weight(a, I, consts, p);
          const double expect = inner ? 1 : 0;
          return ResultRow{name(k), {w.value, expect, w.vec_mu, db}, 0, w.value == expect};
        }
        throw std::runtime_error("no sample found in the target region");
      },
      name);
  r.summary["I"] = I.label();
  r.summary["C0"] = consts.C0;
  r.summary["C_prime"] = consts.C_prime;
  return r;
}

// extension-profile: the closed-form pieces by evaluation, the bridge joins, and the positivity margin.
RunResult extension_profile(const ExperimentConfig& c) {
  const double K = c.param("K", 1), M = c.param("M", 3), eps = c.param("eps", 0.1);
  const double R1 = c.param("R1", 1000 * M), C = c.param("growth_c", 1);
  const double small_R1 = c.param("small_R1", M + 1.5);
  const double tol = c.param("tol", 1e-12);
  const glue::ExtensionProfile prof(K, M, R1, eps);
  const double l2 = std::log(2.0);
  const auto h_hi = [&](double t) { return 2 * l2 * K / ((t - M + 2) * std::log(t - M + 2)); };
  const auto H_hi = [&](double t) { return K * M + 2 * l2 * K * std::log(std::log(t - M + 2)); };
  const auto f_hi = [&](double t) {
    const double L = std::log(t - M + 2);
    return K * M * std::log(t) + 2 * l2 * K * L * (std::log(L) - 1);
  };
  RunResult r{"extension-profile", {"t", "value", "reference", "gap"}};
  auto piece = [&](const std::string& label, double lo, double hi, const std::function<double(double)>& got,
                   const std::function<double(double)>& want) {
    for (int k = 0; k < 20; ++k) {
      const double t = lo + (hi - lo) * (k + 0.5) / 20;
      const double g = got(t), w = want(t);
      const double gap = std::abs(g - w) / std::max(1.0, std::abs(w));
      r.rows.push_back({tag(label + "/", k), {t, g, w, gap}, tol, gap < tol});
    }
  };
  piece("h_low", 0, M - 1, [&](double t) { return prof.h(t); }, [&](double) { return K; });
  piece("h_high", M + 1, M + 200, [&](double t) { return prof.h(t); }, h_hi);
  piece("H_low", 0, M - 1, [&](double t) { return prof.H(t); }, [&](double t) { return K * t; });
  piece("H_high", M + 1, M + 200, [&](double t) { return prof.H(t); }, H_hi);
  const double t0 = M + 1.5;
  piece("f_high", M + 1.5, M + 200, [&](double t) { return prof.f(t) - prof.f(t0); },
        [&](double t) { return f_hi(t) - f_hi(t0); });
  // f' = H / t > 0 and (t f')' = h > 0 on [1, 1e6].
  double worst = INFINITY;
  for (int k = 0; k <= 600; ++k) {
    const double t = std::pow(10.0, 6.0 * k / 600);
    worst = std::min({worst, prof.f_prime(t), prof.tf_prime_derivative(t)});
  }
  r.rows.push_back({"positivity", {NAN, worst, 0, NAN}, 0, worst > 0, "min of f' and (t f')' on [1, 1e6]"});
  for (double t : {M - 1, M + 1}) {
    const double e = 1e-7;
    const double jump = std::max({std::abs(prof.H(t + e) - prof.H(t - e)), std::abs(prof.h(t + e) - prof.h(t - e)),
                                  std::abs(prof.h_prime(t + e) - prof.h_prime(t - e))});
    r.rows.push_back({tag("join/", int(t)), {t, jump, 0, jump}, 1e-6, jump < 1e-6});
  }
  const double lo = std::log(R1), hi = 2 * C * R1;
  const auto big = glue::profile_condition_check(prof, C, lo, hi);
  r.rows.push_back({"margin/R1", {big.argmin_log_t, big.min_margin, 0, NAN}, 0, big.min_margin > 0,
                    "t h - |mu|^(-2(1-eps)) H^2 over log t in [log R1, 2 C R1]; t column holds log t"});
  const glue::ExtensionProfile weak(K, M, small_R1, eps);
  const auto small = glue::profile_condition_check(weak, C, std::log(small_R1), 2 * C * small_R1);
  r.rows.push_back({"margin/small_R1", {small.argmin_log_t, small.min_margin, 0, NAN}, 0, small.min_margin < 0,
                    "expected negative"});
  for (int k = 0; k < 20; ++k) {
    const double t = 1.05 + (M - 1 - 1.05) * k / 19.0;
    const double got = glue::proxy_margin(prof, C, t);
    const double want = K - C * K * K * t / std::pow(std::log(t), 2 * (1 - eps));
    const double gap = std::abs(got - want) / std::max(1.0, std::abs(want));
    r.rows.push_back({tag("proxy_linear/", k), {t, got, want, gap}, tol, gap < tol});
  }
  r.summary["min_margin"] = big.min_margin;
  r.summary["argmin_log_t"] = big.argmin_log_t;
  r.summary["small_R1_margin"] = small.min_margin;
  r.summary["bridge_min_h"] = [&] {
    double m = INFINITY;
    for (int k = 0; k <= 1000; ++k) m = std::min(m, prof.h(M - 1 + 2.0 * k / 1000));
    return m;
  }();
  return r;
}

}  // namespace

const std::map<std::string, Experiment>& experiments() {
  static const std::map<std::string, Experiment> reg = {
      {"flat-cy", flat_cy},
      {"taubnut-exact", taubnut_exact},
      {"kernel-closedform", kernel_closedform},
      {"commutativity", commutativity},
      {"harmonicity", harmonicity},
      {"weak-chern", weak_chern},
      {"pythagoras", pythagoras},
      {"eigen-interval", eigen_interval},
      {"decay-scan", decay_scan},
      {"beta-bounds", beta_bounds},
      {"gamma-sum", gamma_sum},
      {"logz-growth", logz_growth},
      {"glue-regions", glue_regions},
      {"extension-profile", extension_profile},
  };
  return reg;
}

RunResult run_experiment(const std::string& name, const ExperimentConfig& config) {
  const auto& reg = experiments();
  const auto it = reg.find(name);
  if (it == reg.end()) throw ConfigError("unknown experiment '" + name + "'");
  if (!config.experiment.empty() && config.experiment != name)
    throw ConfigError("config names experiment '" + config.experiment + "', not '" + name + "'");
  RunResult r = it->second(config);
  r.experiment = name;
  r.sort_rows();
  return r;
}

}  // namespace ghlab::cli
