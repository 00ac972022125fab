#include "droplet/residual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace droplet {

namespace {

struct GridWork {
  BoundaryGrid z;        // Z on the grid
  BoundaryGrid z_a;      // Z_alpha
  BoundaryGrid unit_tan; // Z_alpha / |Z_alpha|
  BoundaryGrid mod_sq_a; // (|Z|^2)_alpha
  double min_deriv = 0.0;
};

GridWork prepare(const LatticeCoeffs& z, int grid_size, const Tolerances& tol) {
  GridWork w;
  w.z = to_grid(z, grid_size);
  w.z_a = d_alpha(w.z);
  w.min_deriv = min_abs(w.z_a);
  if (w.min_deriv <= tol.deriv_floor) {
    throw DegenerateMapError("min |Z_alpha| = " + std::to_string(w.min_deriv) +
                             " at or below floor " +
                             std::to_string(tol.deriv_floor));
  }
  w.unit_tan = div(w.z_a, abs(w.z_a), tol.deriv_floor);
  w.mod_sq_a = d_alpha(mul(w.z, conj(w.z)));
  return w;
}

/// Grid values of F(Z,c) before projection.
BoundaryGrid residual_grid(const GridWork& w, double c) {
  const BoundaryGrid term1 = cauchy_project(d_alpha(w.unit_tan));
  const BoundaryGrid term3 = cauchy_project(mul(w.z, hilbert(w.mod_sq_a)));
  BoundaryGrid out(w.z.size());
  const cplx two_i(0.0, 2.0);
  const double c_sq = c * c;
  for (int j = 0; j < out.size(); ++j) {
    out[j] = 2.0 * term1[j] - two_i * w.z_a[j] + c_sq * term3[j];
  }
  return out;
}

/// Boundary values of the Cauchy integral through the Plemelj formula:
/// C g = Avg g / 2 + g / 2 + (i/2) H g.
BoundaryGrid cauchy_plemelj(const BoundaryGrid& g) {
  const cplx avg = circle_average(g);
  const BoundaryGrid hg = hilbert(g);
  BoundaryGrid out(g.size());
  const cplx half_i(0.0, 0.5);
  for (int j = 0; j < out.size(); ++j) {
    out[j] = 0.5 * avg + 0.5 * g[j] + half_i * hg[j];
  }
  return out;
}

/// Grid values of the real-form left side (pointwise, no projection).
/// prepare() has already certified min |Z_alpha| > floor.
BoundaryGrid real_form_grid(const GridWork& w, double c) {
  const BoundaryGrid tension = d_alpha(w.unit_tan);
  const BoundaryGrid rotation = mul(w.z, hilbert(w.mod_sq_a));
  const BoundaryGrid cauchy_b = cauchy_plemelj(w.mod_sq_a);
  const double c_sq = c * c;
  const cplx two_i(0.0, 2.0);
  const cplx quart(0.0, c_sq / 4.0);
  BoundaryGrid out(w.z.size());
  for (int j = 0; j < out.size(); ++j) {
    const cplx cb = std::conj(cauchy_b[j]);
    out[j] = -two_i * w.z_a[j] + c_sq * rotation[j] + 2.0 * tension[j] -
             quart * cb * cb / std::conj(w.z_a[j]);
  }
  return out;
}

ResidualReport build_report(const LatticeCoeffs& z, double c, int grid_size,
                            const Tolerances& tol) {
  const GridWork w = prepare(z, grid_size, tol);
  const BoundaryGrid f = residual_grid(w, c);

  ResidualReport rep;
  auto [coeffs, defect] = to_coeffs(f, z.m, z.modes());
  rep.residual = std::move(coeffs);
  rep.defect = defect;
  rep.norm_complex = sup_norm(to_grid(rep.residual, grid_size));
  rep.norm_real = sup_norm(real_form_grid(w, c));
  if (rep.defect.relative > tol.sym_tol) {
    throw SymmetryViolationError(
        "residual symmetry defect " + std::to_string(rep.defect.relative) +
        " exceeds tolerance " + std::to_string(tol.sym_tol));
  }
  return rep;
}

}  // namespace

ResidualReport residual_complex(const LatticeCoeffs& z, double c, int grid_size,
                                const Tolerances& tol) {
  return build_report(z, c, grid_size, tol);
}

ResidualReport residual_real(const LatticeCoeffs& z, double c, int grid_size,
                             const Tolerances& tol) {
  return build_report(z, c, grid_size, tol);
}

LatticeCoeffs jacobian_apply(const LatticeCoeffs& z, double c,
                             const LatticeCoeffs& zeta, int grid_size,
                             const Tolerances& tol) {
  if (zeta.m != z.m || zeta.modes() != z.modes()) {
    throw ConfigError("jacobian_apply: direction lattice mismatch");
  }
  const GridWork w = prepare(z, grid_size, tol);
  const BoundaryGrid zg = to_grid(zeta, grid_size);
  const BoundaryGrid zg_a = d_alpha(zg);

  const BoundaryGrid mod = abs(w.z_a);
  BoundaryGrid lead(grid_size);
  // zeta_a / |Z_a| - Z_a^2 conj(zeta_a) / |Z_a|^3
  for (int j = 0; j < grid_size; ++j) {
    const double r = mod[j].real();
    lead[j] = zg_a[j] / r -
              w.z_a[j] * w.z_a[j] * std::conj(zg_a[j]) / (r * r * r);
  }
  const BoundaryGrid term1 = cauchy_project(d_alpha(lead));

  // zeta H(|Z|^2)_a + Z H( (zeta conj Z + conj zeta Z)_a )
  const BoundaryGrid h_mod = hilbert(w.mod_sq_a);
  BoundaryGrid bilinear(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    bilinear[j] = zg[j] * std::conj(w.z[j]) + std::conj(zg[j]) * w.z[j];
  }
  const BoundaryGrid h_bilinear = hilbert(d_alpha(bilinear));
  BoundaryGrid rot(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    rot[j] = zg[j] * h_mod[j] + w.z[j] * h_bilinear[j];
  }
  const BoundaryGrid term3 = cauchy_project(rot);

  BoundaryGrid out(grid_size);
  const cplx two_i(0.0, 2.0);
  const double c_sq = c * c;
  for (int j = 0; j < grid_size; ++j) {
    out[j] = term1[j] - two_i * zg_a[j] + c_sq * term3[j];
  }
  return to_coeffs(out, z.m, z.modes()).first;
}

LatticeCoeffs jacobian_c_column(const LatticeCoeffs& z, double c, int grid_size,
                                const Tolerances& tol) {
  const GridWork w = prepare(z, grid_size, tol);
  const BoundaryGrid term3 = cauchy_project(mul(w.z, hilbert(w.mod_sq_a)));
  BoundaryGrid out(grid_size);
  for (int j = 0; j < grid_size; ++j) out[j] = 2.0 * c * term3[j];
  return to_coeffs(out, z.m, z.modes()).first;
}

Eigen::MatrixXd jacobian_analytic(const LatticeCoeffs& z, double c,
                                  int grid_size, const Tolerances& tol) {
  const int n = z.modes();
  Eigen::MatrixXd jac(n, n + 1);
  for (int k = 0; k < n; ++k) {
    const LatticeCoeffs col =
        jacobian_apply(z, c, LatticeCoeffs::unit_mode(z.m, n, k), grid_size, tol);
    for (int i = 0; i < n; ++i) jac(i, k) = col.a[static_cast<size_t>(i)];
  }
  const LatticeCoeffs dc = jacobian_c_column(z, c, grid_size, tol);
  for (int i = 0; i < n; ++i) jac(i, n) = dc.a[static_cast<size_t>(i)];
  return jac;
}

Eigen::MatrixXd jacobian_fd(const LatticeCoeffs& z, double c, double step,
                            int grid_size, const Tolerances& tol) {
  if (step < 1e-7 || step > 1e-3) {
    throw ConfigError("jacobian_fd: step must lie in [1e-7, 1e-3]");
  }
  const int n = z.modes();
  Eigen::MatrixXd jac(n, n + 1);
  LatticeCoeffs probe = z;
  for (int k = 0; k < n; ++k) {
    const double saved = probe.a[static_cast<size_t>(k)];
    probe.a[static_cast<size_t>(k)] = saved + step;
    const ResidualReport plus = residual_complex(probe, c, grid_size, tol);
    probe.a[static_cast<size_t>(k)] = saved - step;
    const ResidualReport minus = residual_complex(probe, c, grid_size, tol);
    probe.a[static_cast<size_t>(k)] = saved;
    for (int i = 0; i < n; ++i) {
      jac(i, k) = (plus.residual.a[static_cast<size_t>(i)] -
                   minus.residual.a[static_cast<size_t>(i)]) /
                  (2.0 * step);
    }
  }
  const ResidualReport plus = residual_complex(z, c + step, grid_size, tol);
  const ResidualReport minus = residual_complex(z, c - step, grid_size, tol);
  for (int i = 0; i < n; ++i) {
    jac(i, n) = (plus.residual.a[static_cast<size_t>(i)] -
                 minus.residual.a[static_cast<size_t>(i)]) /
                (2.0 * step);
  }
  return jac;
}

std::vector<double> trivial_linearization(int m, int n_modes, double c) {
  std::vector<double> diag(static_cast<size_t>(n_modes), 0.0);
  diag[0] = 2.0;
  const double c_sq = c * c;
  for (int k = 1; k < n_modes; ++k) {
    const double mk = static_cast<double>(m) * k;
    diag[static_cast<size_t>(k)] = -(mk * mk - c_sq * mk - 1.0);
  }
  return diag;
}

BoundaryGrid curvature(const LatticeCoeffs& z, int grid_size,
                       const Tolerances& tol) {
  const GridWork w = prepare(z, grid_size, tol);
  const BoundaryGrid tension = d_alpha(w.unit_tan);
  BoundaryGrid kappa(grid_size);
  const cplx i_unit(0.0, 1.0);
  double max_im = 0.0;
  double max_abs = 0.0;
  for (int j = 0; j < grid_size; ++j) {
    const cplx value = tension[j] / (i_unit * w.z_a[j]);
    max_im = std::max(max_im, std::abs(value.imag()));
    max_abs = std::max(max_abs, std::abs(value));
    kappa[j] = value;
  }
  if (max_im > 1e-8 * (1.0 + max_abs)) {
    throw RealnessError("curvature: imaginary part " + std::to_string(max_im) +
                        " too large");
  }
  for (int j = 0; j < grid_size; ++j) kappa[j] = kappa[j].real();
  return kappa;
}

double chord_arc_constant(const LatticeCoeffs& z, int grid_size) {
  const BoundaryGrid zg = to_grid(z, grid_size);
  const BoundaryGrid zg_a = d_alpha(zg);

  double worst = 0.0;
  for (int j = 0; j < grid_size; ++j) {
    const double deriv = std::abs(zg_a[j]);
    if (deriv < 1e-14) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, 1.0 / deriv);
  }
  // |tau_j - tau_l| depends only on the index gap: 2 sin(pi (j-l) / M).
  std::vector<double> node_dist(static_cast<size_t>(grid_size), 0.0);
  for (int d = 1; d < grid_size; ++d) {
    node_dist[static_cast<size_t>(d)] =
        2.0 * std::sin(std::numbers::pi * d / grid_size);
  }
  for (int j = 0; j < grid_size; ++j) {
    for (int l = j + 1; l < grid_size; ++l) {
      const double den = std::abs(zg[j] - zg[l]);
      if (den < 1e-14) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, node_dist[static_cast<size_t>(l - j)] / den);
    }
  }
  return worst;
}

double c1_norm(const LatticeCoeffs& z, int grid_size) {
  const BoundaryGrid zg = to_grid(z, grid_size);
  return sup_norm(zg) + sup_norm(d_alpha(zg));
}

double decay_slope(const LatticeCoeffs& z) {
  const int n = z.modes();
  const double scale = std::max(1.0, sup_norm(z));
  const double noise_floor = 1e-15 * scale;

  int active_top = 0;  // largest index above the round-off floor
  for (int i = 1; i < n; ++i) {
    if (std::abs(z.a[static_cast<size_t>(i)]) > noise_floor) active_top = i;
  }
  if (active_top < 2) return std::log(1e-15);

  // LSQ of log|a_i| vs i over the upper half of the active band.
  const int lo = std::max(1, active_top / 2);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int i = lo; i <= active_top; ++i) {
    const double mag = std::abs(z.a[static_cast<size_t>(i)]);
    const double y = std::log(std::max(mag, noise_floor));
    sx += i;
    sy += y;
    sxx += static_cast<double>(i) * i;
    sxy += i * y;
    ++count;
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::log(1e-15);
  return (count * sxy - sx * sy) / denom;
}

PotentialReport potential_diagnostics(const LatticeCoeffs& z, double c,
                                      int grid_size, const Tolerances& tol) {
  const GridWork w = prepare(z, grid_size, tol);
  const BoundaryGrid cauchy_b = cauchy_plemelj(w.mod_sq_a);
  PotentialReport rep;
  rep.phi_alpha = BoundaryGrid(grid_size);
  const cplx minus_ic(0.0, -c);
  for (int j = 0; j < grid_size; ++j) {
    rep.phi_alpha[j] = minus_ic * cauchy_b[j];
  }
  BoundaryGrid integrand(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    integrand[j] = rep.phi_alpha[j] * rep.phi_alpha[j] / w.z_a[j];
  }
  rep.bernoulli_avg = circle_average(integrand);
  return rep;
}

DiagnosticsReport diagnostics(const LatticeCoeffs& z, int grid_size,
                              const Tolerances& tol) {
  DiagnosticsReport rep;
  const BoundaryGrid kappa = curvature(z, grid_size, tol);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const cplx& k : kappa.v) {
    lo = std::min(lo, k.real());
    hi = std::max(hi, k.real());
  }
  rep.curvature_min = lo;
  rep.curvature_max = hi;
  rep.chord_arc = chord_arc_constant(z, grid_size);
  rep.c1_norm = c1_norm(z, grid_size);
  rep.decay_slope = decay_slope(z);
  rep.min_deriv = min_abs(d_alpha(to_grid(z, grid_size)));
  return rep;
}

}  // namespace droplet
