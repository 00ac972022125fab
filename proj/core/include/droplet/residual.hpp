#pragma once

// Traveling-wave residual of the rotating capillary drop in the conformal
// frame, its analytic and finite-difference Jacobians, and geometric /
// physical diagnostics of a candidate boundary map.
//
// Complex projected form (b = sigma = 1):
//   F(Z,c) = 2 C (Z_a/|Z_a|)_a - 2 i Z_a + c^2 C( Z H (|Z|^2)_a )
// Real pointwise form of the same equation:
//   -2 i Z_a + c^2 Z H(|Z|^2)_a + 2 (Z_a/|Z_a|)_a
//       - (i c^2 / 4) [conj(C (|Z|^2)_a)]^2 / conj(Z_a) = 0 on the circle,
// where C takes boundary values through the Plemelj formula.

#include <Eigen/Dense>
#include <complex>

#include "droplet/spectral.hpp"

namespace droplet {

struct Tolerances {
  double deriv_floor = kDefaultDerivFloor;  // nondegeneracy floor on |Z_alpha|
  double sym_tol = kDefaultSymTol;          // relative symmetry defect cap
};

struct ResidualReport {
  LatticeCoeffs residual;  // lattice projection of F(Z,c)
  double norm_complex = 0.0;  // sup of the projected residual on the grid
  double norm_real = 0.0;     // sup of the pointwise real-form left side
  SymmetryDefect defect;      // discarded mass of the unprojected residual
};

struct DiagnosticsReport {
  double curvature_min = 0.0;
  double curvature_max = 0.0;
  double chord_arc = 0.0;   // sup over node pairs of |tau1-tau2|/|Z1-Z2|
  double c1_norm = 0.0;     // sup|Z| + sup|Z_alpha|
  double decay_slope = 0.0; // LSQ slope of log|a_n| over the active tail
  double min_deriv = 0.0;   // min |Z_alpha| on the grid
};

struct PotentialReport {
  BoundaryGrid phi_alpha;   // boundary trace of Phi_alpha
  cplx bernoulli_avg;       // Avg (Phi_alpha)^2 / Z_alpha
};

/// Evaluate the projected residual. Throws DegenerateMapError when
/// min |Z_alpha| <= deriv_floor and SymmetryViolationError when the
/// discarded-mass defect exceeds sym_tol.
ResidualReport residual_complex(const LatticeCoeffs& z, double c, int grid_size,
                                const Tolerances& tol = {});

/// Evaluate the pointwise real form (fills norm_real; the projected fields
/// are computed alongside from the complex form).
ResidualReport residual_real(const LatticeCoeffs& z, double c, int grid_size,
                             const Tolerances& tol = {});

/// Directional derivative D_Z F(Z,c)[zeta], projected to the lattice.
LatticeCoeffs jacobian_apply(const LatticeCoeffs& z, double c,
                             const LatticeCoeffs& zeta, int grid_size,
                             const Tolerances& tol = {});

/// dF/dc, projected to the lattice.
LatticeCoeffs jacobian_c_column(const LatticeCoeffs& z, double c, int grid_size,
                                const Tolerances& tol = {});

/// Dense N x (N+1) Jacobian: columns 0..N-1 from jacobian_apply on the unit
/// lattice directions, column N from jacobian_c_column.
Eigen::MatrixXd jacobian_analytic(const LatticeCoeffs& z, double c,
                                  int grid_size, const Tolerances& tol = {});

/// Central-difference Jacobian of residual_complex; step must lie in
/// [1e-7, 1e-3].
Eigen::MatrixXd jacobian_fd(const LatticeCoeffs& z, double c, double step,
                            int grid_size, const Tolerances& tol = {});

/// Diagonal of D_Z F(Z0,c) on the lattice: entry 0 is 2, entry k >= 1 is
/// -(m^2 k^2 - c^2 m k - 1).
std::vector<double> trivial_linearization(int m, int n_modes, double c);

/// Curvature kappa = (1/(i Z_a)) (Z_a/|Z_a|)_a on the grid; real-valued.
/// Throws RealnessError if sup|Im kappa| > 1e-8 (1 + sup|kappa|).
BoundaryGrid curvature(const LatticeCoeffs& z, int grid_size,
                       const Tolerances& tol = {});

/// Max over ordered node pairs of |tau1 - tau2| / |Z(tau1) - Z(tau2)|;
/// diagonal pairs contribute 1/|Z_alpha|. Returns +infinity when an
/// off-diagonal denominator drops below 1e-14.
double chord_arc_constant(const LatticeCoeffs& z, int grid_size);

/// sup|Z| + sup|Z_alpha| over the grid.
double c1_norm(const LatticeCoeffs& z, int grid_size);

/// Least-squares slope of log|a_n| vs n over the upper half of the active
/// spectrum (modes above relative round-off). A spectrum that is all
/// round-off beyond the base mode reports log(1e-15), i.e. immediate decay.
double decay_slope(const LatticeCoeffs& z);

/// Boundary trace of Phi_alpha = -i c C((|Z|^2)_alpha) via Plemelj, and the
/// structural identity value Avg (Phi_alpha)^2 / Z_alpha (zero for every
/// nondegenerate map, converged or not).
PotentialReport potential_diagnostics(const LatticeCoeffs& z, double c,
                                      int grid_size, const Tolerances& tol = {});

/// Bundle of the geometric diagnostics at one candidate.
DiagnosticsReport diagnostics(const LatticeCoeffs& z, int grid_size,
                              const Tolerances& tol = {});

}  // namespace droplet
