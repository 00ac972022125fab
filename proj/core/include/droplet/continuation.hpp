#pragma once

// Newton correction and pseudo-arclength continuation of traveling-wave
// branches from each bifurcation point, with classification of the three
// terminal alternatives: C1 blow-up, chord-arc blow-up, closed loop.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "droplet/bifurcation.hpp"
#include "droplet/residual.hpp"

namespace droplet {

struct ContinuationConfig {
  int n_modes = 64;     // lattice truncation N
  int grid_size = 1024; // collocation grid M
  double tol_newton = 1e-11;
  int max_newton = 25;
  double ds_init = 0.01;
  double ds_min = 1e-5;
  double ds_max = 0.1;
  double c1_max = 100.0;
  double chord_arc_max = 100.0;
  double loop_eps = 1e-6;
  double loop_s_min = 0.5;
  int max_steps = 100;
  double deriv_floor = kDefaultDerivFloor;
  double sym_tol = kDefaultSymTol;

  Tolerances tolerances() const { return {deriv_floor, sym_tol}; }

  /// Throws ConfigError unless the step-size ordering holds, the tolerances
  /// are positive, and grid_size gives 4x oversampling of the lattice band.
  void validate(int m) const;
};

struct SolutionPoint {
  LatticeCoeffs z;
  double c = 0.0;
  double s = 0.0;  // accumulated pseudo-arclength
  DiagnosticsReport diagnostics;
  double norm_complex = 0.0;
  double norm_real = 0.0;
  int newton_iters = 0;
};

enum class BranchStatus {
  continuing,
  max_steps,
  c1_blowup,
  chord_arc_blowup,
  loop_closed,
  newton_failure,
};

std::string to_string(BranchStatus status);
BranchStatus branch_status_from_string(const std::string& name);

struct BranchRecord {
  int m = 2;
  int k = 1;
  int sign = 1;  // metadata for the +-c_{mk} pair
  std::vector<SolutionPoint> points;
  /// Unit tangents in R^{N+1}, parallel to points.
  std::vector<Eigen::VectorXd> tangents;
  BranchStatus status = BranchStatus::continuing;
};

/// Affine functional a . x - offset on the packed state x = (coeffs, c).
struct ArclengthConstraint {
  Eigen::VectorXd normal;
  double offset = 0.0;

  double value(const Eigen::VectorXd& x) const { return normal.dot(x) - offset; }

  /// Hyperplane through `through` orthogonal to `direction`.
  static ArclengthConstraint orthogonal(const Eigen::VectorXd& direction,
                                        const Eigen::VectorXd& through);
  /// Fixes coordinate `index` of the packed state to `target`.
  static ArclengthConstraint pin(int dim, int index, double target);
};

Eigen::VectorXd pack_state(const LatticeCoeffs& z, double c);
std::pair<LatticeCoeffs, double> unpack_state(const Eigen::VectorXd& x, int m);

/// Damped Newton for the bordered square system [F(z,c); constraint] = 0.
/// Throws NewtonFailureError (iteration cap, no decrease, or singular
/// bordered matrix) and DegenerateMapError (iterate lost nondegeneracy).
SolutionPoint newton_correct(const LatticeCoeffs& z0, double c0,
                             const ArclengthConstraint& constraint,
                             const ContinuationConfig& cfg);

/// Unit null direction of the N x (N+1) Jacobian at (z, c), oriented to
/// keep a positive inner product with `prev`. When the null space is
/// multi-dimensional (as at the bifurcation point itself, where the pure-c
/// direction is also null), returns the normalized projection of `prev`
/// onto it; throws RankDeficiencyError if that projection is negligible.
Eigen::VectorXd compute_tangent(const LatticeCoeffs& z, double c,
                                const Eigen::VectorXd& prev,
                                const ContinuationConfig& cfg);

/// Classify the latest point of the record against the terminal
/// alternatives; returns continuing when no threshold has been crossed.
BranchStatus classify_alternative(const BranchRecord& record,
                                  const ContinuationConfig& cfg);

/// Euler predictor / Newton corrector loop from a bifurcation point.
/// direction is +1 or -1 along the kernel mode. Newton failures terminate
/// the record with status newton_failure; they never propagate as errors.
/// `on_point` (optional) observes every accepted point for incremental
/// persistence.
BranchRecord continue_branch(
    const BifurcationPoint& bp, int direction, const ContinuationConfig& cfg,
    const std::function<void(const SolutionPoint&)>& on_point = {});

}  // namespace droplet
