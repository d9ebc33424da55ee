#pragma once

#include "ghlab/core/geometry.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ghlab::locus {

/// The closure of D_I is the cone over generator(k), k in I'. Stratum
/// coordinates nu_k are the cone coefficients; for k >= 1 with 0 in I this is
/// mu_k at the foot, in general it is |z_k|^2 / 2 there.
struct Projection {
  BasePoint foot;
  bool interior = false;
  Vec nu;                    // indexed like I.complement()
  std::vector<int> params;   // I.complement()
  double dist = 0;           // distance from p to the span of D_I
};

/// Unconstrained A-orthogonal projection onto the span of D_I.
Projection project(const QuadForm& a, const IndexSet& i, const BasePoint& p);

/// Distance to the closure of D_I.
double dist_closed_stratum(const QuadForm& a, const IndexSet& i, const BasePoint& p);

/// Distance to the union of D_J over strict supersets J; +inf for the full set.
double dist_boundary(const QuadForm& a, const IndexSet& i, const BasePoint& p);

/// Distance to the whole discriminant locus.
double dist_locus(const QuadForm& a, const BasePoint& p);

/// Every closed-stratum distance, indexed by the bitmask of I (entries with |I| < 2 unused).
std::vector<double> all_stratum_distances(const QuadForm& a, const BasePoint& p);

struct RegionConstants {
  double C0 = 32;
  double C_hat = 2;
  std::vector<double> C_s;   // C_s[s-1] for s = 1..N-1
  double C_prime = 4 * 32.0 * 32.0;

  static RegionConstants defaults(const QuadForm& a);
  void validate() const;
};

/// sqrt of the largest condition number of the Gram matrices B^T A B of the
/// stratum cones; bounds dist(p_I, D_J) / rho_{I,J} from above.
double sandwich_constant(const QuadForm& a);

struct RegionReport {
  std::vector<IndexSet> B, B1, B2;   // B_I, B'_I, B''_I
  bool Ba = false;
  std::vector<int> F;                // s with p in F_s
  std::vector<std::pair<IndexSet, IndexSet>> H;   // (I, K) with p in H_K inside B_I

  bool in_B(const IndexSet& i) const;
  bool in_B1(const IndexSet& i) const;
  bool in_B2(const IndexSet& i) const;
  std::vector<std::string> tags() const;
};

RegionReport region_membership(const QuadForm& a, const RegionConstants& c, const BasePoint& p);

/// rho_{I,J} = sqrt(nu_K^T S nu_K), K = J \ I, with S the Schur complement onto K
/// of the stratum Gram matrix B^T A B of D_I.
double rho_IJ(const QuadForm& a, const IndexSet& i, const IndexSet& j, const BasePoint& p);

}  // namespace ghlab::locus
