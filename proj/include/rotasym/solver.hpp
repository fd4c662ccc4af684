#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotasym/dft.hpp"
#include "rotasym/geometry.hpp"
#include "rotasym/tridiag.hpp"

namespace rotasym {

// Reaction term f(t, r, u). Every preset is smooth, hence locally Lipschitz
// in u uniformly in (t, r); the Lipschitz bound on {|u| <= K} is noted per
// preset. f(t, r, 0) = 0 for all of them. Only `periodic` depends on t.
class Nonlinearity {
 public:
  enum class Preset { linear, cubic, eigen_pump, radial_weighted, periodic };

  // c * u                                   Lipschitz |c|
  static Nonlinearity linear(double c);
  // a * u - b * u^3                         Lipschitz |a| + 3|b| K^2
  static Nonlinearity cubic(double a, double b);
  // lambda * u - u^3                        Lipschitz |lambda| + 3 K^2
  static Nonlinearity eigen_pump(double lambda);
  // u - u^3 + d * r * u                     Lipschitz 1 + |d| r_outer + 3 K^2
  static Nonlinearity radial_weighted(double d);
  // (lambda + eps * sin(2 pi t / period)) * u - u^3
  //                                         Lipschitz |lambda| + |eps| + 3 K^2
  static Nonlinearity periodic(double lambda, double eps, double period);

  // Preset by name with positional parameters, for config files.
  //   linear: {c}   cubic: {a, b}   radial_weighted: {d}
  //   eigen_pump: {} or {lambda}, default lambda = lambda_2 of the unit disk
  //   periodic: {eps, period} or {lambda, eps, period}, same default
  static Nonlinearity from_preset(const std::string& name,
                                  const std::vector<double>& params);

  double operator()(double t, double r, double u) const {
    switch (kind_) {
      case Preset::linear:
        return p0_ * u;
      case Preset::cubic:
        return p0_ * u - p1_ * (u * u * u);
      case Preset::eigen_pump:
        return p0_ * u - u * u * u;
      case Preset::radial_weighted:
        return u - u * u * u + p0_ * r * u;
      case Preset::periodic:
        return (p0_ + p1_ * std::sin(kTwoPi * t / p2_)) * u - u * u * u;
    }
    return 0.0;
  }

  // Partial derivative f_u(t, r, u), for implicit-reaction experiments and
  // Lipschitz monitoring.
  double df_du(double t, double r, double u) const {
    switch (kind_) {
      case Preset::linear:
        return p0_;
      case Preset::cubic:
        return p0_ - 3.0 * p1_ * u * u;
      case Preset::eigen_pump:
        return p0_ - 3.0 * u * u;
      case Preset::radial_weighted:
        return 1.0 - 3.0 * u * u + p0_ * r;
      case Preset::periodic:
        return p0_ + p1_ * std::sin(kTwoPi * t / p2_) - 3.0 * u * u;
    }
    return 0.0;
  }

  bool time_dependent() const { return kind_ == Preset::periodic; }
  Preset kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& params() const { return params_; }

 private:
  Nonlinearity(Preset kind, std::string name, std::vector<double> params);

  Preset kind_;
  std::string name_;
  std::vector<double> params_;
  double p0_ = 0.0, p1_ = 0.0, p2_ = 1.0;
};

// Second Dirichlet eigenvalue of the unit disk, j_{1,1}^2: the default pump
// rate of the eigen_pump and periodic presets.
double disk_lambda2();

// Time-stepping scheme selector.
//   imex_fourier: diffusion integrated by Crank-Nicolson in a per-ring
//     Fourier basis (each angular mode reduces to a radial tridiagonal
//     solve); reaction handled explicitly, midpoint by default
//     (reaction_order 2) or forward Euler (reaction_order 1).
//   backward_euler: fully discrete implicit Euler for diffusion with
//     explicit reaction; the linear system is solved by Chebyshev
//     iteration, which uses no inner products and therefore commutes
//     bit-for-bit with grid rotations and lattice reflections.
struct Scheme {
  enum class Kind { imex_fourier, backward_euler };

  Kind kind = Kind::imex_fourier;
  double dt = 1e-3;
  int reaction_order = 2;   // imex_fourier only: 1 or 2
  double lin_tol = 1e-10;   // backward_euler: relative sup-norm residual
  int max_lin_iters = 200000;

  static Scheme imex(double dt, int reaction_order = 2);
  static Scheme backward(double dt, double lin_tol = 1e-10);
};

// Thrown when a step cannot be completed (blow-up guard, non-finite values,
// stalled linear solve). `time` is the simulation time of the failed step.
struct SolverAbort : std::runtime_error {
  double time;
  double value;
  SolverAbort(const std::string& what, double t, double v)
      : std::runtime_error(what), time(t), value(v) {}
};

namespace detail {

// Five-point polar Laplacian coefficients per ring:
//   lap(u)_{ij} = cm[i] u_{i-1,j} + cp[i] u_{i+1,j}
//              + cphi[i] (u_{i,j-1} + u_{i,j+1}) - dd[i] u_{ij}
// with Dirichlet mirror ghosts folded at physical boundaries (handled by
// the operators, not stored here) and the disk origin closed through the
// antipodal column, whose coefficient cm[0] vanishes identically on the
// cell-centered grid.
struct Stencil {
  int nr = 0, nt = 0;
  bool disk = false;
  std::vector<double> cm, cp, cphi, dd;

  static Stencil build(const PolarGrid& g);
};

// Per-mode radial systems for the imex_fourier scheme with weight c:
// factors of (I - c L_m) plus the matvec diagonal of (I + c L_m).
// lam_m is the discrete angular symbol -(2 - 2 cos(2 pi m / nt)) / dphi^2,
// so the Fourier path reproduces the physical stencil exactly.
struct ModeSystems {
  double c = 0.0;
  std::vector<TridiagFactor> factor;  // one per mode m = 0..nt-1
  std::vector<double> mv_diag;        // [i * nt + m], diagonal of I + c L_m

  static ModeSystems build(const PolarGrid& g, const Stencil& st, double c);
};

// Gershgorin bound for the spectrum of A = I - dt L (largest row sum of
// absolute values); the smallest eigenvalue is bounded below by 1.
double backward_matrix_upper_bound(const PolarGrid& g, const Stencil& st,
                                   double dt);

}  // namespace detail

// Discrete Laplacian of a field (parallel kernel).
Field laplacian_apply(const Field& u);

// One-step integrator with cached transforms and factorizations. Reusable
// across steps of fixed dt; not thread-safe (owns scratch buffers).
class Stepper {
 public:
  Stepper(GridPtr grid, Nonlinearity f, Scheme scheme, double dt);

  // Advance from u.time to u.time + dt. Throws SolverAbort if the linear
  // solver stalls or the state stops being finite.
  Field advance(const Field& u);

  double dt() const { return dt_; }
  const Scheme& scheme() const { return scheme_; }

 private:
  void advance_imex(const Field& u, Field& out);
  void advance_backward(const Field& u, Field& out);
  void apply_backward_matrix(const std::vector<double>& x,
                             std::vector<double>& out) const;
  void solve_chebyshev(const std::vector<double>& b, std::vector<double>& x,
                       double t);

  GridPtr grid_;
  Nonlinearity f_;
  Scheme scheme_;
  double dt_;
  detail::Stencil st_;

  // imex_fourier machinery
  std::unique_ptr<DftPlan> plan_;
  detail::ModeSystems modes_;
  std::vector<std::complex<double>> uhat_, fhat_, ghat_;
  std::vector<double> f0_, uhalf_;

  // backward_euler machinery
  double cheb_lo_ = 1.0, cheb_hi_ = 2.0;
  std::vector<double> adiag_;
  std::vector<double> res_, dir_, adir_;
};

// Single step without caching (constructs a Stepper internally).
Field step(const Field& u, const Nonlinearity& f, const Scheme& scheme);

// Result of integrate(): snapshots at the requested cadence (always
// including the initial and final states), the per-step sup-norm history,
// and abort bookkeeping. A trajectory that aborted keeps everything
// computed before the failure.
struct Trajectory {
  std::vector<Field> snapshots;
  std::vector<double> times;        // time after each completed step
  std::vector<double> sup_history;  // sup norm after each completed step
  double dt_eff = 0.0;
  bool aborted = false;
  std::string abort_reason;
  double abort_time = 0.0;
  double max_sup = 0.0;
};

// Integrate u0 over [u0.time, u0.time + t_end]. dt is adjusted downward to
// the nearest divisor of t_end (n = ceil(t_end / dt - 1e-9) steps,
// dt_eff = t_end / n) so the horizon is hit exactly. The run aborts (flag,
// not throw) when the sup norm exceeds blowup_guard or stops being finite.
Trajectory integrate(const Field& u0, const Nonlinearity& f,
                     const Scheme& scheme, double t_end, double snapshot_every,
                     double blowup_guard = 1e6);

struct EquilibriumResult {
  Field field;
  double residual = 0.0;  // sup norm of lap(u) + f(u)
  bool converged = false;
  long steps = 0;
};

// March an autonomous problem to steady state: step until the PDE residual
// sup|lap(u) + f(u)| falls below residual_tol (checked before the first
// step and every few steps after). Returns the best iterate seen when the
// step budget runs out. Throws std::invalid_argument for time-dependent f.
EquilibriumResult equilibrium_solve(const Field& u0, const Nonlinearity& f,
                                    const Scheme& scheme, double residual_tol,
                                    long max_steps = 2000000);

struct Eigenpair {
  double lambda = 0.0;
  Field field;
};

// Dirichlet Laplacian eigenpair on the disk of radius R: eigenvalue
// (j_{m,k} / R)^2 with eigenfunction J_m(j_{m,k} r / R) cos(m phi) sampled
// on the grid. Disk domains only.
Eigenpair eigenpair_oracle(const GridPtr& grid, int m, int k);

}  // namespace rotasym
