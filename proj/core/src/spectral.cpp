#include "droplet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fft_engine.hpp"

namespace droplet {

using detail::forward_fft;
using detail::inverse_fft;
using detail::signed_frequency;

LatticeCoeffs::LatticeCoeffs(int multiplicity, std::vector<double> coeffs)
    : m(multiplicity), a(std::move(coeffs)) {
  if (m < 2) throw ConfigError("symmetry multiplicity m must be >= 2");
  if (a.empty()) throw ConfigError("LatticeCoeffs needs at least one mode");
  for (double x : a) {
    if (!std::isfinite(x)) throw ConfigError("LatticeCoeffs: non-finite coefficient");
  }
}

LatticeCoeffs LatticeCoeffs::unit_disk(int multiplicity, int n_modes) {
  std::vector<double> a(static_cast<size_t>(n_modes), 0.0);
  a[0] = 1.0;
  return LatticeCoeffs(multiplicity, std::move(a));
}

LatticeCoeffs LatticeCoeffs::unit_mode(int multiplicity, int n_modes, int k) {
  if (k < 0 || k >= n_modes) throw IndexError("unit_mode: index out of range");
  std::vector<double> a(static_cast<size_t>(n_modes), 0.0);
  a[static_cast<size_t>(k)] = 1.0;
  return LatticeCoeffs(multiplicity, std::move(a));
}

double node_angle(int j, int grid_size) {
  return 2.0 * std::numbers::pi * j / grid_size;
}

int min_grid_size(int m, int n_modes) {
  return 2 * (m * (n_modes - 1) + 1) + 2;
}

int oversampled_grid_size(int m, int n_modes) {
  const int band = m * (n_modes - 1) + 1;
  int grid = 16;
  while (grid < 4 * band) grid *= 2;
  return grid;
}

BoundaryGrid to_grid(const LatticeCoeffs& z, int grid_size) {
  if (grid_size < min_grid_size(z.m, z.modes())) {
    throw GridTooSmallError("to_grid: grid of size " + std::to_string(grid_size) +
                            " cannot hold frequency " +
                            std::to_string(z.max_frequency()) + " alias-free");
  }
  std::vector<cplx> spec(static_cast<size_t>(grid_size), cplx(0.0, 0.0));
  for (int n = 0; n < z.modes(); ++n) {
    spec[static_cast<size_t>(z.m * n + 1)] = z.a[static_cast<size_t>(n)];
  }
  return BoundaryGrid(inverse_fft(spec));
}

std::pair<LatticeCoeffs, SymmetryDefect> to_coeffs(const BoundaryGrid& g, int m,
                                                   int n_modes, bool strict,
                                                   double sym_tol) {
  const int grid = g.size();
  if (grid < min_grid_size(m, n_modes)) {
    throw GridTooSmallError("to_coeffs: grid of size " + std::to_string(grid) +
                            " cannot resolve frequency " +
                            std::to_string(m * (n_modes - 1) + 1) + " alias-free");
  }
  const auto spec = forward_fft(g.v);

  std::vector<double> a(static_cast<size_t>(n_modes), 0.0);
  std::vector<bool> kept(spec.size(), false);
  for (int n = 0; n < n_modes; ++n) {
    const size_t bin = static_cast<size_t>(m * n + 1);
    a[static_cast<size_t>(n)] = spec[bin].real();
    kept[bin] = true;
  }

  double discarded_sq = 0.0;
  double total_sq = 0.0;
  for (size_t bin = 0; bin < spec.size(); ++bin) {
    const double mag_sq = std::norm(spec[bin]);
    total_sq += mag_sq;
    if (kept[bin]) {
      const double im = spec[bin].imag();
      discarded_sq += im * im;
    } else {
      discarded_sq += mag_sq;
    }
  }

  SymmetryDefect defect;
  defect.absolute = std::sqrt(discarded_sq);
  defect.relative = defect.absolute / std::max(1.0, std::sqrt(total_sq));
  if (strict && defect.relative > sym_tol) {
    throw SymmetryViolationError(
        "to_coeffs: relative symmetry defect " + std::to_string(defect.relative) +
        " exceeds tolerance " + std::to_string(sym_tol));
  }
  return {LatticeCoeffs(m, std::move(a)), defect};
}

BoundaryGrid d_alpha(const BoundaryGrid& g) {
  auto spec = forward_fft(g.v);
  const int grid = g.size();
  for (int bin = 0; bin < grid; ++bin) {
    spec[static_cast<size_t>(bin)] *= cplx(0.0, signed_frequency(bin, grid));
  }
  return BoundaryGrid(inverse_fft(spec));
}

BoundaryGrid cauchy_project(const BoundaryGrid& g) {
  auto spec = forward_fft(g.v);
  const int grid = g.size();
  for (int bin = 0; bin < grid; ++bin) {
    if (signed_frequency(bin, grid) < 0) spec[static_cast<size_t>(bin)] = 0.0;
  }
  return BoundaryGrid(inverse_fft(spec));
}

BoundaryGrid hilbert(const BoundaryGrid& g) {
  auto spec = forward_fft(g.v);
  const int grid = g.size();
  for (int bin = 0; bin < grid; ++bin) {
    const int freq = signed_frequency(bin, grid);
    if (freq > 0) {
      spec[static_cast<size_t>(bin)] *= cplx(0.0, -1.0);
    } else if (freq < 0) {
      spec[static_cast<size_t>(bin)] *= cplx(0.0, 1.0);
    } else {
      spec[static_cast<size_t>(bin)] = 0.0;
    }
  }
  return BoundaryGrid(inverse_fft(spec));
}

cplx circle_average(const BoundaryGrid& g) {
  cplx sum(0.0, 0.0);
  for (const cplx& x : g.v) sum += x;
  return sum / static_cast<double>(g.size());
}

namespace {
void require_same_size(const BoundaryGrid& a, const BoundaryGrid& b) {
  if (a.size() != b.size()) {
    throw ConfigError("pointwise algebra requires equal grid sizes");
  }
}
}  // namespace

BoundaryGrid mul(const BoundaryGrid& a, const BoundaryGrid& b) {
  require_same_size(a, b);
  BoundaryGrid out(a.size());
  for (int j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

BoundaryGrid div(const BoundaryGrid& a, const BoundaryGrid& b, double floor) {
  require_same_size(a, b);
  BoundaryGrid out(a.size());
  for (int j = 0; j < a.size(); ++j) {
    if (std::abs(b[j]) <= floor) {
      throw DivisionFloorError("div: denominator magnitude " +
                               std::to_string(std::abs(b[j])) +
                               " at node " + std::to_string(j) +
                               " is below floor");
    }
    out[j] = a[j] / b[j];
  }
  return out;
}

BoundaryGrid conj(const BoundaryGrid& g) {
  BoundaryGrid out(g.size());
  for (int j = 0; j < g.size(); ++j) out[j] = std::conj(g[j]);
  return out;
}

BoundaryGrid abs(const BoundaryGrid& g) {
  BoundaryGrid out(g.size());
  for (int j = 0; j < g.size(); ++j) out[j] = std::abs(g[j]);
  return out;
}

BoundaryGrid axpy(cplx alpha, const BoundaryGrid& x, const BoundaryGrid& y) {
  require_same_size(x, y);
  BoundaryGrid out(x.size());
  for (int j = 0; j < x.size(); ++j) out[j] = alpha * x[j] + y[j];
  return out;
}

double sup_norm(const BoundaryGrid& g) {
  double s = 0.0;
  for (const cplx& x : g.v) s = std::max(s, std::abs(x));
  return s;
}

double min_abs(const BoundaryGrid& g) {
  double s = std::numeric_limits<double>::infinity();
  for (const cplx& x : g.v) s = std::min(s, std::abs(x));
  return s;
}

double l2_norm(const BoundaryGrid& g) {
  double s = 0.0;
  for (const cplx& x : g.v) s += std::norm(x);
  return std::sqrt(s / g.size());
}

double sup_norm(const LatticeCoeffs& z) {
  double s = 0.0;
  for (double x : z.a) s = std::max(s, std::abs(x));
  return s;
}

double max_abs_diff(const LatticeCoeffs& x, const LatticeCoeffs& y) {
  const int n = std::max(x.modes(), y.modes());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = i < x.modes() ? x.a[static_cast<size_t>(i)] : 0.0;
    const double yi = i < y.modes() ? y.a[static_cast<size_t>(i)] : 0.0;
    s = std::max(s, std::abs(xi - yi));
  }
  return s;
}

}  // namespace droplet
