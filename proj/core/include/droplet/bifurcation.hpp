#pragma once

// Closed-form bifurcation data on the trivial branch of circular drops:
// bifurcation speeds c_{mk} = sqrt(mk - 1/(mk)), kernel modes w^{mk+1},
// transversality products 2 c mk, and first-order branch seeds.

#include <utility>

#include "droplet/spectral.hpp"

namespace droplet {

struct BifurcationPoint {
  int m = 2;
  int k = 1;
  double c = 0.0;              // bifurcation speed c_{mk}
  LatticeCoeffs kernel;        // unit vector at lattice index k
  double transversality = 0.0; // 2 c_{mk} m k
};

/// c_{mk} = sqrt(mk - 1/(mk)); depends on m, k only through the product mk.
double bifurcation_speed(int m, int k);

/// Throws IndexError when k >= n_modes (the kernel must fit the truncation).
BifurcationPoint make_bifurcation_point(int m, int k, int n_modes);

/// First-order predictor (Z0 + s0 * kernel, c_{mk}); the speed increment is
/// zero because the branch leaves the trivial curve with c'(0) = 0.
/// Throws StepTooLargeError when |s0| > 0.05.
std::pair<LatticeCoeffs, double> branch_seed(const BifurcationPoint& bp,
                                             double s0);

}  // namespace droplet
