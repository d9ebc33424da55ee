#pragma once

#include "ghlab/locus/locus.hpp"

namespace ghlab::glue {

struct GlueWeight {
  double value = 1;
  double vec_mu = 0;   // |vec mu_I|, distance from p to the span of D_I
  int transition_factors = 0;   // factors strictly between 0 and 1
};

/// f = prod over J strictly containing I of chi(C0 |vec mu_I| / rho_{I,J}).
/// rho = 0 gives 0 when |vec mu_I| > 0 and 1 when |vec mu_I| = 0.
/// Throws std::domain_error outside B_I or within C' of the boundary of D_I.
GlueWeight glue_weight(const QuadForm& a, const IndexSet& i, const locus::RegionConstants& c, const BasePoint& p);

/// Same product without the domain precondition.
GlueWeight glue_weight_unchecked(const QuadForm& a, const IndexSet& i, double C0, const BasePoint& p);

}  // namespace ghlab::glue
