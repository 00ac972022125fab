#include "droplet/continuation.hpp"

#include <algorithm>
#include <cmath>

namespace droplet {

void ContinuationConfig::validate(int m) const {
  if (n_modes < 2) throw ConfigError("config: n_modes must be >= 2");
  if (!(ds_min <= ds_init && ds_init <= ds_max)) {
    throw ConfigError("config: need ds_min <= ds_init <= ds_max");
  }
  if (tol_newton <= 0 || ds_min <= 0 || loop_eps <= 0 || loop_s_min <= 0 ||
      c1_max <= 0 || chord_arc_max <= 0 || deriv_floor <= 0 || sym_tol <= 0) {
    throw ConfigError("config: tolerances and thresholds must be positive");
  }
  if (max_newton < 1 || max_steps < 1) {
    throw ConfigError("config: iteration caps must be positive");
  }
  const int band = m * (n_modes - 1) + 1;
  if (grid_size < 4 * band) {
    throw ConfigError("config: grid_size " + std::to_string(grid_size) +
                      " is below 4x oversampling of the lattice band (need >= " +
                      std::to_string(4 * band) + ")");
  }
}

std::string to_string(BranchStatus status) {
  switch (status) {
    case BranchStatus::continuing: return "continuing";
    case BranchStatus::max_steps: return "max-steps";
    case BranchStatus::c1_blowup: return "c1-blowup";
    case BranchStatus::chord_arc_blowup: return "chord-arc-blowup";
    case BranchStatus::loop_closed: return "loop-closed";
    case BranchStatus::newton_failure: return "newton-failure";
  }
  return "unknown";
}

BranchStatus branch_status_from_string(const std::string& name) {
  for (BranchStatus s : {BranchStatus::continuing, BranchStatus::max_steps,
                         BranchStatus::c1_blowup, BranchStatus::chord_arc_blowup,
                         BranchStatus::loop_closed, BranchStatus::newton_failure}) {
    if (to_string(s) == name) return s;
  }
  throw ParseError("unknown branch status '" + name + "'");
}

ArclengthConstraint ArclengthConstraint::orthogonal(
    const Eigen::VectorXd& direction, const Eigen::VectorXd& through) {
  return {direction, direction.dot(through)};
}

ArclengthConstraint ArclengthConstraint::pin(int dim, int index, double target) {
  Eigen::VectorXd normal = Eigen::VectorXd::Zero(dim);
  normal(index) = 1.0;
  return {normal, target};
}

Eigen::VectorXd pack_state(const LatticeCoeffs& z, double c) {
  const int n = z.modes();
  Eigen::VectorXd x(n + 1);
  for (int i = 0; i < n; ++i) x(i) = z.a[static_cast<size_t>(i)];
  x(n) = c;
  return x;
}

std::pair<LatticeCoeffs, double> unpack_state(const Eigen::VectorXd& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<double> a(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) a[static_cast<size_t>(i)] = x(i);
  return {LatticeCoeffs(m, std::move(a)), x(n)};
}

namespace {

SolutionPoint make_point(const LatticeCoeffs& z, double c,
                         const ResidualReport& rep, int iters,
                         const ContinuationConfig& cfg) {
  SolutionPoint p;
  p.z = z;
  p.c = c;
  p.diagnostics = diagnostics(z, cfg.grid_size, cfg.tolerances());
  p.norm_complex = rep.norm_complex;
  p.norm_real = rep.norm_real;
  p.newton_iters = iters;
  return p;
}

}  // namespace

SolutionPoint newton_correct(const LatticeCoeffs& z0, double c0,
                             const ArclengthConstraint& constraint,
                             const ContinuationConfig& cfg) {
  const Tolerances tol = cfg.tolerances();
  const int n = z0.modes();
  if (constraint.normal.size() != n + 1) {
    throw ConfigError("newton_correct: constraint dimension mismatch");
  }

  Eigen::VectorXd x = pack_state(z0, c0);
  LatticeCoeffs z = z0;
  double c = c0;
  ResidualReport rep = residual_complex(z, c, cfg.grid_size, tol);
  double err = std::max(rep.norm_complex, std::abs(constraint.value(x)));
  if (err <= cfg.tol_newton) return make_point(z, c, rep, 0, cfg);

  for (int it = 1; it <= cfg.max_newton; ++it) {
    Eigen::MatrixXd bordered(n + 1, n + 1);
    bordered.topRows(n) = jacobian_analytic(z, c, cfg.grid_size, tol);
    bordered.row(n) = constraint.normal.transpose();

    Eigen::VectorXd rhs(n + 1);
    for (int i = 0; i < n; ++i) rhs(i) = -rep.residual.a[static_cast<size_t>(i)];
    rhs(n) = -constraint.value(x);

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(bordered);
    if (lu.rcond() < 1e-14) {
      throw NewtonFailureError(
          "bordered matrix condition estimate exceeds 1e14 at iteration " +
          std::to_string(it));
    }
    const Eigen::VectorXd delta = lu.solve(rhs);

    bool accepted = false;
    double damping = 1.0;
    for (int attempt = 0; attempt < 9; ++attempt, damping *= 0.5) {
      const Eigen::VectorXd x_try = x + damping * delta;
      LatticeCoeffs z_try = z;
      for (int i = 0; i < n; ++i) z_try.a[static_cast<size_t>(i)] = x_try(i);
      const double c_try = x_try(n);
      ResidualReport rep_try;
      try {
        rep_try = residual_complex(z_try, c_try, cfg.grid_size, tol);
      } catch (const Error&) {
        continue;  // iterate left the admissible set; shrink the step
      }
      const double err_try =
          std::max(rep_try.norm_complex, std::abs(constraint.value(x_try)));
      if (err_try < err) {
        x = x_try;
        z = std::move(z_try);
        c = c_try;
        rep = std::move(rep_try);
        err = err_try;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NewtonFailureError("no residual decrease at iteration " +
                               std::to_string(it) + " (error " +
                               std::to_string(err) + ")");
    }
    if (err <= cfg.tol_newton) return make_point(z, c, rep, it, cfg);
  }
  throw NewtonFailureError("no convergence within " +
                           std::to_string(cfg.max_newton) + " iterations");
}

Eigen::VectorXd compute_tangent(const LatticeCoeffs& z, double c,
                                const Eigen::VectorXd& prev,
                                const ContinuationConfig& cfg) {
  const Eigen::MatrixXd jac =
      jacobian_analytic(z, c, cfg.grid_size, cfg.tolerances());
  const int n = static_cast<int>(jac.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double rank_tol = 1e-6 * std::max(1.0, sigma(0));

  // The (N+1)-th right singular vector is always null; additional columns
  // join when J drops rank (the trivial bifurcation point has nullity 2:
  // kernel mode plus pure-c direction).
  std::vector<int> null_cols{n};
  for (int i = 0; i < n; ++i) {
    if (sigma(i) < rank_tol) null_cols.push_back(i);
  }

  Eigen::VectorXd projected = Eigen::VectorXd::Zero(n + 1);
  for (int idx : null_cols) {
    const Eigen::VectorXd v = svd.matrixV().col(idx);
    projected += v.dot(prev) * v;
  }
  const double norm = projected.norm();
  if (norm < 1e-3) {
    throw RankDeficiencyError(
        "tangent direction ambiguous: null space of dimension " +
        std::to_string(null_cols.size()) +
        " nearly orthogonal to the previous tangent");
  }
  return projected / norm;
}

BranchStatus classify_alternative(const BranchRecord& record,
                                  const ContinuationConfig& cfg) {
  if (record.points.empty()) return BranchStatus::continuing;
  const SolutionPoint& p = record.points.back();
  if (p.diagnostics.c1_norm > cfg.c1_max) return BranchStatus::c1_blowup;
  if (p.diagnostics.chord_arc > cfg.chord_arc_max) {
    return BranchStatus::chord_arc_blowup;
  }
  if (record.points.size() >= 2 && p.s > cfg.loop_s_min) {
    const SolutionPoint& ref = record.points[1];
    const double dist =
        (pack_state(p.z, p.c) - pack_state(ref.z, ref.c)).norm();
    if (dist < cfg.loop_eps && record.tangents.size() >= 2 &&
        record.tangents.size() == record.points.size()) {
      const double align = record.tangents.back().dot(record.tangents[1]);
      if (align > 0.99) return BranchStatus::loop_closed;
    }
  }
  return BranchStatus::continuing;
}

BranchRecord continue_branch(
    const BifurcationPoint& bp, int direction, const ContinuationConfig& cfg,
    const std::function<void(const SolutionPoint&)>& on_point) {
  cfg.validate(bp.m);
  if (direction != 1 && direction != -1) {
    throw ConfigError("continue_branch: direction must be +1 or -1");
  }
  if (bp.k >= cfg.n_modes) {
    throw IndexError("continue_branch: kernel index outside the truncation");
  }
  const Tolerances tol = cfg.tolerances();

  BranchRecord record;
  record.m = bp.m;
  record.k = bp.k;
  record.sign = direction;

  const LatticeCoeffs z0 = LatticeCoeffs::unit_disk(bp.m, cfg.n_modes);
  const ResidualReport rep0 = residual_complex(z0, bp.c, cfg.grid_size, tol);
  SolutionPoint start = make_point(z0, bp.c, rep0, 0, cfg);
  start.s = 0.0;

  Eigen::VectorXd seed = Eigen::VectorXd::Zero(cfg.n_modes + 1);
  seed(bp.k) = static_cast<double>(direction);
  Eigen::VectorXd tangent = compute_tangent(z0, bp.c, seed, cfg);

  record.points.push_back(std::move(start));
  record.tangents.push_back(tangent);
  if (on_point) on_point(record.points.back());

  double ds = cfg.ds_init;
  while (record.points.size() < static_cast<size_t>(cfg.max_steps)) {
    const SolutionPoint& cur = record.points.back();
    const Eigen::VectorXd x_pred = pack_state(cur.z, cur.c) + ds * tangent;
    const ArclengthConstraint constraint =
        ArclengthConstraint::orthogonal(tangent, x_pred);
    auto [z_pred, c_pred] = unpack_state(x_pred, bp.m);

    SolutionPoint next;
    try {
      next = newton_correct(z_pred, c_pred, constraint, cfg);
    } catch (const Error&) {
      if (ds <= cfg.ds_min) {
        record.status = BranchStatus::newton_failure;
        return record;
      }
      ds = std::max(0.5 * ds, cfg.ds_min);
      continue;
    }
    next.s = cur.s + ds;

    Eigen::VectorXd tangent_next;
    try {
      tangent_next = compute_tangent(next.z, next.c, tangent, cfg);
    } catch (const RankDeficiencyError&) {
      // Untreated secondary bifurcation: record the point and stop.
      record.points.push_back(std::move(next));
      record.tangents.push_back(tangent);
      if (on_point) on_point(record.points.back());
      record.status = BranchStatus::newton_failure;
      return record;
    }

    record.points.push_back(std::move(next));
    record.tangents.push_back(tangent_next);
    if (on_point) on_point(record.points.back());

    const BranchStatus status = classify_alternative(record, cfg);
    if (status != BranchStatus::continuing) {
      record.status = status;
      return record;
    }

    if (record.points.back().newton_iters <= 3) {
      ds = std::min(ds * 1.3, cfg.ds_max);
    }
    tangent = tangent_next;
  }
  record.status = BranchStatus::max_steps;
  return record;
}

}  // namespace droplet
