#include "rotasym/solver.hpp"

#include <algorithm>
#include <cmath>

#include "rotasym/bessel.hpp"

namespace rotasym {

// ---------------------------------------------------------------------------
// Nonlinearity

Nonlinearity::Nonlinearity(Preset kind, std::string name,
                           std::vector<double> params)
    : kind_(kind), name_(std::move(name)), params_(std::move(params)) {
  if (!params_.empty()) p0_ = params_[0];
  if (params_.size() > 1) p1_ = params_[1];
  if (params_.size() > 2) p2_ = params_[2];
}

Nonlinearity Nonlinearity::linear(double c) {
  return Nonlinearity(Preset::linear, "linear", {c});
}

Nonlinearity Nonlinearity::cubic(double a, double b) {
  return Nonlinearity(Preset::cubic, "cubic", {a, b});
}

Nonlinearity Nonlinearity::eigen_pump(double lambda) {
  return Nonlinearity(Preset::eigen_pump, "eigen_pump", {lambda});
}

Nonlinearity Nonlinearity::radial_weighted(double d) {
  return Nonlinearity(Preset::radial_weighted, "radial_weighted", {d});
}

Nonlinearity Nonlinearity::periodic(double lambda, double eps, double period) {
  if (!(period > 0.0))
    throw std::invalid_argument("Nonlinearity::periodic: period must be > 0");
  return Nonlinearity(Preset::periodic, "periodic", {lambda, eps, period});
}

double disk_lambda2() {
  static const double lam = [] {
    const double z = bessel_j_zero(1, 1);
    return z * z;
  }();
  return lam;
}

Nonlinearity Nonlinearity::from_preset(const std::string& name,
                                       const std::vector<double>& params) {
  auto want = [&](size_t n) {
    if (params.size() != n)
      throw std::invalid_argument("nonlinearity '" + name + "' takes " +
                                  std::to_string(n) + " parameter(s), got " +
                                  std::to_string(params.size()));
  };
  if (name == "linear") {
    want(1);
    return linear(params[0]);
  }
  if (name == "cubic") {
    want(2);
    return cubic(params[0], params[1]);
  }
  if (name == "eigen_pump") {
    if (params.empty()) return eigen_pump(disk_lambda2());
    want(1);
    return eigen_pump(params[0]);
  }
  if (name == "radial_weighted") {
    want(1);
    return radial_weighted(params[0]);
  }
  if (name == "periodic") {
    if (params.size() == 2) return periodic(disk_lambda2(), params[0], params[1]);
    want(3);
    return periodic(params[0], params[1], params[2]);
  }
  throw std::invalid_argument("unknown nonlinearity preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// Scheme

Scheme Scheme::imex(double dt, int reaction_order) {
  if (!(dt > 0.0)) throw std::invalid_argument("Scheme: dt must be > 0");
  if (reaction_order != 1 && reaction_order != 2)
    throw std::invalid_argument("Scheme: reaction_order must be 1 or 2");
  Scheme s;
  s.kind = Kind::imex_fourier;
  s.dt = dt;
  s.reaction_order = reaction_order;
  return s;
}

Scheme Scheme::backward(double dt, double lin_tol) {
  if (!(dt > 0.0)) throw std::invalid_argument("Scheme: dt must be > 0");
  if (!(lin_tol > 0.0)) throw std::invalid_argument("Scheme: lin_tol must be > 0");
  Scheme s;
  s.kind = Kind::backward_euler;
  s.dt = dt;
  s.reaction_order = 1;
  s.lin_tol = lin_tol;
  return s;
}

// ---------------------------------------------------------------------------
// Stencil / mode systems

namespace detail {

Stencil Stencil::build(const PolarGrid& g) {
  Stencil st;
  st.nr = g.nr;
  st.nt = g.ntheta;
  st.disk = g.is_disk();
  st.cm.resize(g.nr);
  st.cp.resize(g.nr);
  st.cphi.resize(g.nr);
  st.dd.resize(g.nr);
  const double dr2 = g.dr * g.dr;
  for (int i = 0; i < g.nr; ++i) {
    const double r = g.r[i];
    st.cp[i] = 1.0 / dr2 + 1.0 / (2.0 * r * g.dr);
    st.cm[i] = 1.0 / dr2 - 1.0 / (2.0 * r * g.dr);
    st.cphi[i] = 1.0 / (r * r * g.dphi * g.dphi);
    st.dd[i] = 2.0 / dr2 + 2.0 * st.cphi[i];
  }
  return st;
}

ModeSystems ModeSystems::build(const PolarGrid& g, const Stencil& st,
                               double c) {
  ModeSystems ms;
  ms.c = c;
  const int nr = g.nr, nt = g.ntheta;
  ms.factor.resize(nt);
  ms.mv_diag.assign(static_cast<size_t>(nr) * nt, 0.0);
  std::vector<double> sub(nr), diag(nr), sup(nr), diag_l(nr);
  for (int m = 0; m < nt; ++m) {
    // Discrete angular symbol of the second difference, so each mode solve
    // is algebraically identical to the physical five-point stencil.
    const double lam = -(2.0 - 2.0 * std::cos(kTwoPi * m / nt)) /
                       (g.dphi * g.dphi);
    for (int i = 0; i < nr; ++i)
      diag_l[i] = -2.0 / (g.dr * g.dr) + lam / (g.r[i] * g.r[i]);
    // Dirichlet mirror ghost at the outer rim (and inner rim of an annulus);
    // on the disk the origin closes through the antipodal column, a diagonal
    // parity term in mode space whose coefficient cm[0] is exactly zero.
    diag_l[nr - 1] -= st.cp[nr - 1];
    if (st.disk) {
      const double parity = (m % 2 == 0) ? 1.0 : -1.0;
      diag_l[0] += parity * st.cm[0];
    } else {
      diag_l[0] -= st.cm[0];
    }
    for (int i = 0; i < nr; ++i) {
      sub[i] = (i > 0) ? -c * st.cm[i] : 0.0;
      sup[i] = (i < nr - 1) ? -c * st.cp[i] : 0.0;
      diag[i] = 1.0 - c * diag_l[i];
      ms.mv_diag[static_cast<size_t>(i) * nt + m] = 1.0 + c * diag_l[i];
    }
    ms.factor[m].factor(sub, diag, sup);
  }
  return ms;
}

double backward_matrix_upper_bound(const PolarGrid& g, const Stencil& st,
                                   double dt) {
  double hi = 1.0;
  for (int i = 0; i < g.nr; ++i) {
    double diag = 1.0 + dt * st.dd[i];
    double off = dt * 2.0 * st.cphi[i];
    if (i < g.nr - 1)
      off += dt * st.cp[i];
    else
      diag += dt * st.cp[i];
    if (i > 0) {
      off += dt * st.cm[i];
    } else if (st.disk) {
      off += dt * std::abs(st.cm[0]);
    } else {
      diag += dt * st.cm[0];
    }
    hi = std::max(hi, diag + off);
  }
  return hi;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Laplacian

Field laplacian_apply(const Field& u) {
  const PolarGrid& g = *u.grid;
  const detail::Stencil st = detail::Stencil::build(g);
  Field out(u.grid, u.time);
  const int nr = g.nr, nt = g.ntheta;
  const double* v = u.values.data();
  double* o = out.values.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double uc = v[i * nt + j];
      const double ul = v[i * nt + g.wrap(j - 1)];
      const double ur = v[i * nt + g.wrap(j + 1)];
      const double um = (i > 0) ? v[(i - 1) * nt + j]
                                : (st.disk ? v[g.wrap(j + nt / 2)] : -uc);
      const double up = (i < nr - 1) ? v[(i + 1) * nt + j] : -uc;
      o[i * nt + j] =
          st.cm[i] * um + st.cp[i] * up + st.cphi[i] * (ul + ur) - st.dd[i] * uc;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stepper

Stepper::Stepper(GridPtr grid, Nonlinearity f, Scheme scheme, double dt)
    : grid_(std::move(grid)),
      f_(std::move(f)),
      scheme_(scheme),
      dt_(dt),
      st_(detail::Stencil::build(*grid_)) {
  if (!grid_) throw std::invalid_argument("Stepper: null grid");
  if (!(dt_ > 0.0)) throw std::invalid_argument("Stepper: dt must be > 0");
  const size_t n = grid_->cells();
  if (scheme_.kind == Scheme::Kind::imex_fourier) {
    plan_ = std::make_unique<DftPlan>(grid_->ntheta);
    const double c = (scheme_.reaction_order == 2) ? dt_ / 2.0 : dt_;
    modes_ = detail::ModeSystems::build(*grid_, st_, c);
    uhat_.resize(n);
    fhat_.resize(n);
    ghat_.resize(n);
    f0_.resize(n);
    uhalf_.resize(n);
  } else {
    cheb_lo_ = 1.0;
    cheb_hi_ = detail::backward_matrix_upper_bound(*grid_, st_, dt_);
    adiag_.resize(n);
    const int nr = grid_->nr, nt = grid_->ntheta;
    for (int i = 0; i < nr; ++i) {
      double diag = 1.0 + dt_ * st_.dd[i];
      if (i == nr - 1) diag += dt_ * st_.cp[i];
      if (i == 0 && !st_.disk) diag += dt_ * st_.cm[0];
      for (int j = 0; j < nt; ++j) adiag_[i * nt + j] = diag;
    }
    f0_.resize(n);
    uhalf_.resize(n);
    res_.resize(n);
    dir_.resize(n);
    adir_.resize(n);
  }
}

Field Stepper::advance(const Field& u) {
  if (u.grid.get() != grid_.get() && !grids_compatible(*u.grid, *grid_))
    throw std::invalid_argument("Stepper::advance: field on a different grid");
  Field out(grid_, u.time + dt_);
  if (scheme_.kind == Scheme::Kind::imex_fourier)
    advance_imex(u, out);
  else
    advance_backward(u, out);
  return out;
}

void Stepper::advance_imex(const Field& u, Field& out) {
  const int nr = grid_->nr, nt = grid_->ntheta;
  const double t = u.time;
  const double* v = u.values.data();
  const double* r = grid_->r.data();

#pragma omp parallel for schedule(static)
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) f0_[i * nt + j] = f_(t, r[i], v[i * nt + j]);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      uhat_[i * nt + j] = std::complex<double>(v[i * nt + j], 0.0);
      fhat_[i * nt + j] = std::complex<double>(f0_[i * nt + j], 0.0);
    }
    plan_->forward(&uhat_[static_cast<size_t>(i) * nt]);
    plan_->forward(&fhat_[static_cast<size_t>(i) * nt]);
  }

  if (scheme_.reaction_order == 2) {
    const double half = dt_ / 2.0;
    // Predictor: (I - (dt/2) L_m) u_half = u + (dt/2) f(t, u).
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
      for (int i = 0; i < nr; ++i)
        ghat_[i * nt + m] = uhat_[i * nt + m] + half * fhat_[i * nt + m];
      modes_.factor[m].solve(&ghat_[m], nt);
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nr; ++i) {
      plan_->inverse(&ghat_[static_cast<size_t>(i) * nt]);
      for (int j = 0; j < nt; ++j)
        uhalf_[i * nt + j] = ghat_[i * nt + j].real();
    }
    const double th = t + half;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nt; ++j)
        ghat_[i * nt + j] =
            std::complex<double>(f_(th, r[i], uhalf_[i * nt + j]), 0.0);
      plan_->forward(&ghat_[static_cast<size_t>(i) * nt]);
    }
    // Corrector: (I - (dt/2) L_m) u_new = (I + (dt/2) L_m) u + dt g_half,
    // reusing the predictor factorization.
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
      for (int i = 0; i < nr; ++i) {
        std::complex<double> z =
            modes_.mv_diag[static_cast<size_t>(i) * nt + m] * uhat_[i * nt + m];
        if (i < nr - 1) z += half * st_.cp[i] * uhat_[(i + 1) * nt + m];
        if (i > 0) z += half * st_.cm[i] * uhat_[(i - 1) * nt + m];
        fhat_[i * nt + m] = z + dt_ * ghat_[i * nt + m];
      }
      modes_.factor[m].solve(&fhat_[m], nt);
    }
  } else {
    // (I - dt L_m) u_new = u + dt f(t, u).
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
      for (int i = 0; i < nr; ++i)
        fhat_[i * nt + m] = uhat_[i * nt + m] + dt_ * fhat_[i * nt + m];
      modes_.factor[m].solve(&fhat_[m], nt);
    }
  }

  double* o = out.values.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nr; ++i) {
    plan_->inverse(&fhat_[static_cast<size_t>(i) * nt]);
    for (int j = 0; j < nt; ++j) o[i * nt + j] = fhat_[i * nt + j].real();
  }
}

void Stepper::apply_backward_matrix(const std::vector<double>& x,
                                    std::vector<double>& out) const {
  const int nr = grid_->nr, nt = grid_->ntheta;
  const double* v = x.data();
  double* o = out.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double uc = v[i * nt + j];
      const double ul = v[i * nt + grid_->wrap(j - 1)];
      const double ur = v[i * nt + grid_->wrap(j + 1)];
      const double um = (i > 0) ? v[(i - 1) * nt + j]
                                : (st_.disk ? v[grid_->wrap(j + nt / 2)] : -uc);
      const double up = (i < nr - 1) ? v[(i + 1) * nt + j] : -uc;
      const double lap = st_.cm[i] * um + st_.cp[i] * up +
                         st_.cphi[i] * (ul + ur) - st_.dd[i] * uc;
      o[i * nt + j] = uc - dt_ * lap;
    }
  }
}

void Stepper::solve_chebyshev(const std::vector<double>& b,
                              std::vector<double>& x, double t) {
  const int n = static_cast<int>(b.size());
  double bnorm = 0.0;
#pragma omp parallel for reduction(max : bnorm) schedule(static)
  for (int c = 0; c < n; ++c) bnorm = std::max(bnorm, std::abs(b[c]));
  bnorm = std::max(bnorm, 1e-300);

#pragma omp parallel for schedule(static)
  for (int c = 0; c < n; ++c) x[c] = b[c] / adiag_[c];
  apply_backward_matrix(x, adir_);
  double resid = 0.0;
#pragma omp parallel for reduction(max : resid) schedule(static)
  for (int c = 0; c < n; ++c) {
    res_[c] = b[c] - adir_[c];
    resid = std::max(resid, std::abs(res_[c]));
  }
  if (resid <= scheme_.lin_tol * bnorm) return;

  // Chebyshev iteration on [cheb_lo_, cheb_hi_]: scalar recurrences and
  // pointwise updates only, so the solve commutes exactly with index
  // permutations of the grid (rotations, lattice reflections).
  const double theta = (cheb_hi_ + cheb_lo_) / 2.0;
  const double delta = (cheb_hi_ - cheb_lo_) / 2.0;
  const double sigma1 = theta / delta;
  double rho = 1.0 / sigma1;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < n; ++c) dir_[c] = res_[c] / theta;

  for (int k = 0; k < scheme_.max_lin_iters; ++k) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < n; ++c) x[c] += dir_[c];
    apply_backward_matrix(dir_, adir_);
    resid = 0.0;
#pragma omp parallel for reduction(max : resid) schedule(static)
    for (int c = 0; c < n; ++c) {
      res_[c] -= adir_[c];
      resid = std::max(resid, std::abs(res_[c]));
    }
    if (resid <= scheme_.lin_tol * bnorm) return;
    const double rho_new = 1.0 / (2.0 * sigma1 - rho);
    const double c1 = rho_new * rho;
    const double c2 = 2.0 * rho_new / delta;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < n; ++c) dir_[c] = c1 * dir_[c] + c2 * res_[c];
    rho = rho_new;
  }
  throw SolverAbort("backward_euler linear solve stalled", t, resid);
}

void Stepper::advance_backward(const Field& u, Field& out) {
  const int nr = grid_->nr, nt = grid_->ntheta;
  const double t = u.time;
  const double* v = u.values.data();
  const double* r = grid_->r.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j)
      uhalf_[i * nt + j] = v[i * nt + j] + dt_ * f_(t, r[i], v[i * nt + j]);
  solve_chebyshev(uhalf_, out.values, t);
}

Field step(const Field& u, const Nonlinearity& f, const Scheme& scheme) {
  Stepper st(u.grid, f, scheme, scheme.dt);
  return st.advance(u);
}

// ---------------------------------------------------------------------------
// Trajectory integration

Trajectory integrate(const Field& u0, const Nonlinearity& f,
                     const Scheme& scheme, double t_end, double snapshot_every,
                     double blowup_guard) {
  if (!(t_end > 0.0))
    throw std::invalid_argument("integrate: t_end must be > 0");
  if (!(snapshot_every > 0.0))
    throw std::invalid_argument("integrate: snapshot_every must be > 0");

  const long nsteps =
      std::max(1L, static_cast<long>(std::ceil(t_end / scheme.dt - 1e-9)));
  const double dt_eff = t_end / static_cast<double>(nsteps);
  const double t0 = u0.time;

  Trajectory traj;
  traj.dt_eff = dt_eff;
  traj.snapshots.push_back(u0);
  traj.times.push_back(t0);
  const double sup0 = sup_norm(u0);
  traj.sup_history.push_back(sup0);
  traj.max_sup = sup0;

  Stepper stepper(u0.grid, f, scheme, dt_eff);
  Field u = u0;
  double next_snap = t0 + snapshot_every;
  const double teps = 1e-9 * dt_eff;

  for (long k = 1; k <= nsteps; ++k) {
    try {
      u = stepper.advance(u);
    } catch (const SolverAbort& e) {
      traj.aborted = true;
      traj.abort_reason = e.what();
      traj.abort_time = e.time;
      return traj;
    }
    const double t = t0 + t_end * (static_cast<double>(k) /
                                   static_cast<double>(nsteps));
    u.time = (k == nsteps) ? t0 + t_end : t;
    const double sup = sup_norm(u);
    traj.times.push_back(u.time);
    traj.sup_history.push_back(sup);
    traj.max_sup = std::max(traj.max_sup, sup);

    if (!std::isfinite(sup)) {
      traj.aborted = true;
      traj.abort_reason = "field stopped being finite";
      traj.abort_time = u.time;
      return traj;
    }
    if (sup > blowup_guard) {
      traj.aborted = true;
      traj.abort_reason = "sup norm exceeded blow-up guard";
      traj.abort_time = u.time;
      traj.snapshots.push_back(u);
      return traj;
    }

    bool record = false;
    while (next_snap <= u.time + teps) {
      next_snap += snapshot_every;
      record = true;
    }
    if (record) traj.snapshots.push_back(u);
  }
  if (traj.snapshots.back().time != u.time) traj.snapshots.push_back(u);
  return traj;
}

// ---------------------------------------------------------------------------
// Equilibrium

namespace {

double pde_residual(const Field& u, const Nonlinearity& f) {
  Field lap = laplacian_apply(u);
  const PolarGrid& g = *u.grid;
  const int nr = g.nr, nt = g.ntheta;
  double res = 0.0;
#pragma omp parallel for reduction(max : res) schedule(static)
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) {
      const double z =
          lap.values[i * nt + j] + f(u.time, g.r[i], u.values[i * nt + j]);
      res = std::max(res, std::abs(z));
    }
  return res;
}

}  // namespace

EquilibriumResult equilibrium_solve(const Field& u0, const Nonlinearity& f,
                                    const Scheme& scheme, double residual_tol,
                                    long max_steps) {
  if (f.time_dependent())
    throw std::invalid_argument(
        "equilibrium_solve: reaction term must not depend on t");
  if (!(residual_tol > 0.0))
    throw std::invalid_argument("equilibrium_solve: residual_tol must be > 0");

  EquilibriumResult best;
  best.field = u0;
  best.residual = pde_residual(u0, f);
  best.steps = 0;
  if (best.residual <= residual_tol) {
    best.converged = true;
    return best;
  }

  Stepper stepper(u0.grid, f, scheme, scheme.dt);
  Field u = u0;
  const long check_every = 10;
  for (long k = 1; k <= max_steps; ++k) {
    try {
      u = stepper.advance(u);
    } catch (const SolverAbort&) {
      return best;  // non-converged; best iterate so far
    }
    if (k % check_every == 0 || k == max_steps) {
      const double res = pde_residual(u, f);
      if (!std::isfinite(res) || sup_norm(u) > 1e6) return best;
      if (res < best.residual) {
        best.field = u;
        best.residual = res;
        best.steps = k;
      }
      if (res <= residual_tol) {
        best.converged = true;
        return best;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Eigenpair oracle

Eigenpair eigenpair_oracle(const GridPtr& grid, int m, int k) {
  if (!grid) throw std::invalid_argument("eigenpair_oracle: null grid");
  if (!grid->is_disk())
    throw std::invalid_argument("eigenpair_oracle: disk domains only");
  if (m < 0 || k < 1)
    throw std::invalid_argument("eigenpair_oracle: need m >= 0 and k >= 1");
  const double R = grid->domain.r_outer;
  const double z = bessel_j_zero(m, k);
  Eigenpair ep;
  ep.lambda = (z / R) * (z / R);
  ep.field = Field(grid, 0.0);
  const int nr = grid->nr, nt = grid->ntheta;
  for (int i = 0; i < nr; ++i) {
    const double radial = bessel_j(m, z * grid->r[i] / R);
    for (int j = 0; j < nt; ++j)
      ep.field.values[i * nt + j] = radial * std::cos(m * grid->phi[j]);
  }
  return ep;
}

}  // namespace rotasym
