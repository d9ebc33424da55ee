#include "ghlab/glue/weight.hpp"

#include "ghlab/glue/cutoff.hpp"

#include <stdexcept>

namespace ghlab::glue {

GlueWeight glue_weight_unchecked(const QuadForm& a, const IndexSet& i, double C0, const BasePoint& p) {
  i.require_stratum();
  GlueWeight w;
  w.vec_mu = locus::project(a, i, p).dist;
  const Cutoff& chi = cutoff();
  for (const auto& j : index_sets(a.n(), i.size() + 1, a.n() + 1)) {
    if (!i.strict_subset_of(j)) continue;
    const double rho = locus::rho_IJ(a, i, j, p);
    double f;
    if (rho == 0) f = w.vec_mu > 0 ? 0.0 : 1.0;
    else f = chi(C0 * w.vec_mu / rho);
    if (f > 0 && f < 1) ++w.transition_factors;
    w.value *= f;
  }
  return w;
}

GlueWeight glue_weight(const QuadForm& a, const IndexSet& i, const locus::RegionConstants& c, const BasePoint& p) {
  c.validate();
  const auto r = locus::region_membership(a, c, p);
  if (!r.in_B(i)) throw std::domain_error("glue_weight: point outside B" + i.label());
  if (!(locus::dist_boundary(a, i, p) > c.C_prime))
    throw std::domain_error("glue_weight: point within C' of the boundary of D" + i.label());
  return glue_weight_unchecked(a, i, c.C0, p);
}

}  // namespace ghlab::glue
