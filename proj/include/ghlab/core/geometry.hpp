#pragma once

#include "ghlab/core/finite_diff.hpp"
#include "ghlab/core/types.hpp"

#include <cstdint>
#include <random>

namespace ghlab {

/// sqrt(mu^T A mu + det(A) |eta|^2).
double anorm(const QuadForm& a, const BasePoint& p);

/// G_I = A_I - A_{I I'} A_{I'}^{-1} A_{I' I} on the members of I that are >= 1.
QuadForm schur_complement(const QuadForm& a, const IndexSet& i);

/// Schur complement of h onto the index list `keep`, eliminating `drop`.
Mat schur(const Mat& h, const std::vector<int>& keep, const std::vector<int>& drop);

/// A^{-1}_{ij} u_{mu_i mu_j} + det(A)^{-1} (u_xx + u_yy).
double laplace_A(const QuadForm& a, const ScalarField& u, const BasePoint& p);
double laplace_A(const QuadForm& a, const Mat& hessian);

/// Delta_A f from central second differences along the eigenvectors of A^{-1}
/// and the two eta directions, with one Richardson level: 4 (N + 2) + 1 values.
/// `terms` (optional) receives the sum of the absolute directional terms, a
/// scale for relative comparisons.
double laplace_A_fd(const QuadForm& a, const std::function<double(const BasePoint&)>& f, const BasePoint& p,
                    double step, double* terms = nullptr);

/// Volume of the unit ball in R^k.
double ball_volume(int k);

/// Closest point of the cone {B u : u >= 0} to y in the metric m.
struct ConeProjection {
  Vec u;              // coefficients, all >= 0
  Vec residual;       // y - B u
  double dist2 = 0;   // residual^T m residual
  std::uint64_t support = 0;  // bit c set when u[c] > 0
};

/// Exhaustive enumeration of faces; exact for the small cones used here.
ConeProjection project_onto_cone(const Mat& m, const Mat& b, const Vec& y);

/// Random SPD matrix with spectrum drawn from [lo, hi]; lo and hi are both attained when n >= 2.
Mat random_spd(int n, double lo, double hi, std::mt19937_64& rng);

}  // namespace ghlab
