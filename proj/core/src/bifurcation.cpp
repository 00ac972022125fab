#include "droplet/bifurcation.hpp"

#include <cmath>

namespace droplet {

double bifurcation_speed(int m, int k) {
  if (m < 2) throw ConfigError("bifurcation_speed: m must be >= 2");
  if (k < 1) throw ConfigError("bifurcation_speed: k must be >= 1");
  const double mk = static_cast<double>(m) * k;
  return std::sqrt(mk - 1.0 / mk);
}

BifurcationPoint make_bifurcation_point(int m, int k, int n_modes) {
  if (k >= n_modes) {
    throw IndexError("make_bifurcation_point: kernel index " +
                     std::to_string(k) + " needs n_modes > k");
  }
  BifurcationPoint bp;
  bp.m = m;
  bp.k = k;
  bp.c = bifurcation_speed(m, k);
  bp.kernel = LatticeCoeffs::unit_mode(m, n_modes, k);
  bp.transversality = 2.0 * bp.c * static_cast<double>(m) * k;
  return bp;
}

std::pair<LatticeCoeffs, double> branch_seed(const BifurcationPoint& bp,
                                             double s0) {
  if (std::abs(s0) > 0.05) {
    throw StepTooLargeError("branch_seed: |s0| = " + std::to_string(std::abs(s0)) +
                            " exceeds the local neighborhood bound 0.05");
  }
  LatticeCoeffs z = LatticeCoeffs::unit_disk(bp.m, bp.kernel.modes());
  z.a[static_cast<size_t>(bp.k)] += s0;
  return {std::move(z), bp.c};
}

}  // namespace droplet
