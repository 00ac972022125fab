#pragma once

// Boundary calculus for disk-holomorphic functions sampled on the unit
// circle: transforms between symmetry-lattice coefficients and equispaced
// circle samples, plus the angular derivative, Cauchy (Szego) projection,
// circle Hilbert transform and circle average. All operator actions are
// exact Fourier mode actions computed through the full-spectrum FFT.

#include <complex>
#include <utility>
#include <vector>

#include "droplet/errors.hpp"

namespace droplet {

using cplx = std::complex<double>;

/// Default relative tolerance separating symmetry breaking from round-off.
inline constexpr double kDefaultSymTol = 1e-9;
/// Default magnitude floor for pointwise division / |Z_alpha| guards.
inline constexpr double kDefaultDerivFloor = 1e-10;

/// Z(w) = sum_n a[n] w^{m n + 1} with real a[n]; the lattice frequencies
/// m n + 1 encode the m-fold rotational and the reflection symmetry.
struct LatticeCoeffs {
  int m = 2;
  std::vector<double> a;

  LatticeCoeffs() = default;
  LatticeCoeffs(int multiplicity, std::vector<double> coeffs);

  int modes() const { return static_cast<int>(a.size()); }
  /// Highest lattice frequency m(N-1)+1 represented by this vector.
  int max_frequency() const { return m * (modes() - 1) + 1; }

  /// Coefficients of the unit circle Z0(w) = w.
  static LatticeCoeffs unit_disk(int multiplicity, int n_modes);
  /// Unit vector at lattice index k.
  static LatticeCoeffs unit_mode(int multiplicity, int n_modes, int k);
};

/// Samples of a boundary function at the M nodes tau_j = exp(2 pi i j / M).
struct BoundaryGrid {
  std::vector<cplx> v;

  BoundaryGrid() = default;
  explicit BoundaryGrid(int grid_size) : v(static_cast<size_t>(grid_size)) {}
  explicit BoundaryGrid(std::vector<cplx> values) : v(std::move(values)) {}

  int size() const { return static_cast<int>(v.size()); }
  cplx& operator[](int j) { return v[static_cast<size_t>(j)]; }
  const cplx& operator[](int j) const { return v[static_cast<size_t>(j)]; }
};

/// L2 distance of a grid function from the truncated symmetry lattice.
struct SymmetryDefect {
  double absolute = 0.0;
  double relative = 0.0;
};

/// Node angle 2 pi j / M.
double node_angle(int j, int grid_size);

/// Smallest M resolving the lattice band alias-free: 2(m(N-1)+1)+2.
int min_grid_size(int m, int n_modes);
/// Power-of-two grid with 4x oversampling of the lattice band, at least 16.
int oversampled_grid_size(int m, int n_modes);

/// Evaluate the truncated series on the M-point grid (exact on the band).
/// Throws GridTooSmallError if M < min_grid_size.
BoundaryGrid to_grid(const LatticeCoeffs& z, int grid_size);

/// Orthogonal projection onto the first n_modes lattice frequencies.
/// The defect collects the L2 mass of everything discarded: off-lattice
/// modes, imaginary parts on lattice modes, and the truncation tail.
/// In strict mode throws SymmetryViolationError when defect.relative
/// exceeds sym_tol.
std::pair<LatticeCoeffs, SymmetryDefect> to_coeffs(const BoundaryGrid& g,
                                                   int m, int n_modes,
                                                   bool strict = false,
                                                   double sym_tol = kDefaultSymTol);

/// Angular derivative: multiplies the full-spectrum mode tau^n by i n.
BoundaryGrid d_alpha(const BoundaryGrid& g);

/// Cauchy/Szego projection: keeps modes n >= 0, zeroes modes n < 0.
/// Boundary values of the Cauchy integral of g.
BoundaryGrid cauchy_project(const BoundaryGrid& g);

/// Circle Hilbert transform: tau^n -> -i sgn(n) tau^n, mean -> 0.
BoundaryGrid hilbert(const BoundaryGrid& g);

/// Mean of the samples; trapezoidal quadrature of (1/2pi) integral f dalpha,
/// exact for band-limited input.
cplx circle_average(const BoundaryGrid& g);

// Pointwise algebra. Grids must have equal size.
BoundaryGrid mul(const BoundaryGrid& a, const BoundaryGrid& b);
/// Throws DivisionFloorError if any |b_j| <= floor.
BoundaryGrid div(const BoundaryGrid& a, const BoundaryGrid& b,
                 double floor = kDefaultDerivFloor);
BoundaryGrid conj(const BoundaryGrid& g);
/// Real-valued magnitudes |g_j| (returned as a complex grid).
BoundaryGrid abs(const BoundaryGrid& g);
/// alpha * x + y.
BoundaryGrid axpy(cplx alpha, const BoundaryGrid& x, const BoundaryGrid& y);

double sup_norm(const BoundaryGrid& g);
double min_abs(const BoundaryGrid& g);
/// Discrete L2 norm sqrt((1/M) sum |g_j|^2).
double l2_norm(const BoundaryGrid& g);

double sup_norm(const LatticeCoeffs& z);
double max_abs_diff(const LatticeCoeffs& x, const LatticeCoeffs& y);

}  // namespace droplet
