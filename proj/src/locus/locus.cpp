#include "ghlab/locus/locus.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ghlab::locus {

namespace {

void check_dims(const QuadForm& a, const IndexSet& i, const BasePoint& p) {
  if (a.n() != p.dim() || i.N() != a.n()) throw std::invalid_argument("locus: dimension mismatch");
  i.require_stratum();
}

double with_eta(const QuadForm& a, double d2, const BasePoint& p) {
  return std::sqrt(std::max(d2, 0.0) + a.det() * std::norm(p.eta));
}

}  // namespace

Projection project(const QuadForm& a, const IndexSet& i, const BasePoint& p) {
  check_dims(a, i, p);
  Projection out;
  out.params = i.complement();
  const int n = a.n();
  if (out.params.empty()) {
    out.foot = BasePoint(Vec::Zero(n), 0.0);
    out.interior = true;
    out.nu = Vec(0);
    out.dist = anorm(a, p);
    return out;
  }
  const Mat b = generators(out.params, n);
  const Mat ab = a.matrix() * b;
  const Mat h = b.transpose() * ab;
  out.nu = h.llt().solve(ab.transpose() * p.mu);
  out.interior = out.nu.minCoeff() > 0;
  out.foot = BasePoint(b * out.nu, 0.0);
  const Vec r = p.mu - out.foot.mu;
  out.dist = with_eta(a, a.quad(r), p);
  return out;
}

double dist_closed_stratum(const QuadForm& a, const IndexSet& i, const BasePoint& p) {
  check_dims(a, i, p);
  const auto params = i.complement();
  if (params.empty()) return anorm(a, p);
  const auto cp = project_onto_cone(a.matrix(), generators(params, a.n()), p.mu);
  return with_eta(a, cp.dist2, p);
}

double dist_boundary(const QuadForm& a, const IndexSet& i, const BasePoint& p) {
  check_dims(a, i, p);
  double best = std::numeric_limits<double>::infinity();
  for (int k : i.complement())
    best = std::min(best, dist_closed_stratum(a, i.united(IndexSet({k}, i.N())), p));
  return best;
}

double dist_locus(const QuadForm& a, const BasePoint& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& i : index_sets(a.n(), 2, 2)) best = std::min(best, dist_closed_stratum(a, i, p));
  return best;
}

std::vector<double> all_stratum_distances(const QuadForm& a, const BasePoint& p) {
  const int n = a.n();
  std::vector<double> d(std::size_t{1} << (n + 1), std::numeric_limits<double>::quiet_NaN());
  for (const auto& i : index_sets(n, 2, n + 1)) d[i.mask()] = dist_closed_stratum(a, i, p);
  return d;
}

double sandwich_constant(const QuadForm& a) {
  const int n = a.n();
  double worst = 1.0;
  for (const auto& i : index_sets(n, 2, n)) {
    const Mat b = generators(i.complement(), n);
    const Mat h = b.transpose() * a.matrix() * b;
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    worst = std::max(worst, es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff());
  }
  return std::sqrt(worst);
}

RegionConstants RegionConstants::defaults(const QuadForm& a) {
  RegionConstants c;
  c.C0 = 32;
  c.C_hat = std::max(sandwich_constant(a), 1.25);
  double cs = 64;
  for (int s = 1; s <= a.n() - 1; ++s) {
    c.C_s.push_back(cs);
    cs *= 16;
  }
  c.C_prime = 4 * c.C0 * c.C0;
  return c;
}

void RegionConstants::validate() const {
  if (!(C_hat > 1) || !(C0 > C_hat)) throw std::invalid_argument("RegionConstants: need C0 > C_hat > 1");
  for (std::size_t s = 1; s < C_s.size(); ++s)
    if (!(C_s[s] > C_s[s - 1])) throw std::invalid_argument("RegionConstants: C_s must increase");
  if (!(C_prime > 0)) throw std::invalid_argument("RegionConstants: C_prime must be positive");
}

namespace {
bool has(const std::vector<IndexSet>& v, const IndexSet& i) { return std::find(v.begin(), v.end(), i) != v.end(); }
}  // namespace

bool RegionReport::in_B(const IndexSet& i) const { return has(B, i); }
bool RegionReport::in_B1(const IndexSet& i) const { return has(B1, i); }
bool RegionReport::in_B2(const IndexSet& i) const { return has(B2, i); }

std::vector<std::string> RegionReport::tags() const {
  std::vector<std::string> t;
  for (const auto& i : B) t.push_back("B" + i.label());
  for (const auto& i : B1) t.push_back("B'" + i.label());
  for (const auto& i : B2) t.push_back("B''" + i.label());
  if (Ba) t.push_back("Ba");
  for (int s : F) t.push_back("F" + std::to_string(s));
  for (const auto& [i, k] : H) t.push_back("H" + k.label() + "in" + i.label());
  return t;
}

RegionReport region_membership(const QuadForm& a, const RegionConstants& c, const BasePoint& p) {
  c.validate();
  const int n = a.n();
  if (p.dim() != n) throw std::invalid_argument("region_membership: dimension mismatch");
  const auto d = all_stratum_distances(a, p);
  auto boundary = [&](const IndexSet& i) {
    double best = std::numeric_limits<double>::infinity();
    for (int k : i.complement()) best = std::min(best, d[i.mask() | (std::uint64_t{1} << k)]);
    return best;
  };
  RegionReport r;
  const auto strata = index_sets(n, 2, n);
  for (const auto& i : strata) {
    const double di = d[i.mask()], db = boundary(i);
    if (c.C0 * di < db) r.B.push_back(i);
    if (2 * c.C0 * di < db) r.B1.push_back(i);
    if (4 * c.C_hat * c.C0 * di < db) r.B2.push_back(i);
  }
  double dl = std::numeric_limits<double>::infinity();
  for (const auto& i : index_sets(n, 2, 2)) dl = std::min(dl, d[i.mask()]);
  r.Ba = 2 * std::pow(c.C0, n - 1) * dl > anorm(a, p);
  for (int s = 1; s <= n - 1 && s <= static_cast<int>(c.C_s.size()); ++s) {
    bool all = true;
    for (const auto& i : index_sets(n, s + 2, s + 2)) all = all && d[i.mask()] > c.C_s[s - 1];
    if (all) r.F.push_back(s);
  }
  for (const auto& i : r.B) {
    for (const auto& k : strata) {
      if (!k.strict_subset_of(i) || !r.in_B(k)) continue;
      bool excluded = false;
      for (const auto& j : strata)
        if (k.strict_subset_of(j) && j.strict_subset_of(i) && r.in_B1(j)) excluded = true;
      if (!excluded) r.H.emplace_back(i, k);
    }
  }
  return r;
}

double rho_IJ(const QuadForm& a, const IndexSet& i, const IndexSet& j, const BasePoint& p) {
  if (!i.strict_subset_of(j)) throw std::invalid_argument("rho_IJ: need I strictly inside J");
  const auto pr = project(a, i, p);
  std::vector<int> kpos, rest;
  for (std::size_t c = 0; c < pr.params.size(); ++c) (j.contains(pr.params[c]) ? kpos : rest).push_back(static_cast<int>(c));
  if (kpos.empty()) throw std::invalid_argument("rho_IJ: K is empty");
  const Mat b = generators(pr.params, a.n());
  const Mat h = b.transpose() * a.matrix() * b;
  const Mat s = schur(h, kpos, rest);
  Vec nk(kpos.size());
  for (std::size_t c = 0; c < kpos.size(); ++c) nk[c] = pr.nu[kpos[c]];
  return std::sqrt(std::max(nk.dot(s * nk), 0.0));
}

}  // namespace ghlab::locus
