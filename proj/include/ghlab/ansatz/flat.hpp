#pragma once

#include "ghlab/ansatz/field.hpp"

namespace ghlab::ansatz {

/// GH data of the flat metric on C^{N+1}, read off from the moment map
/// mu_i = (|z_i|^2 - |z_0|^2) / 2, eta = z_0 z_1 ... z_N.
struct FlatData {
  double x = 0;        // |z_0|^2
  Vec z2;              // |z_1|^2 .. |z_N|^2
  Mat V_inv, V;
  double W_inv = 0, W = 0;
  bool on_locus = false;   // two or more z vanish; V and W are then not defined
  double root_residual = 0;   // relative residual of x * prod(x + 2 mu_i) = |eta|^2
};

FlatData flat_field(const BasePoint& p);

/// The flat field as a GHField (finite-difference derivatives), off the locus.
GHField flat_ghfield(int n, FdOptions opt = {});

}  // namespace ghlab::ansatz
