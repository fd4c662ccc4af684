#include "rotasym/reference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>

#include "rotasym/dft.hpp"
#include "rotasym/symmetry.hpp"
#include "rotasym/tridiag.hpp"

namespace rotasym::reference {

namespace {

int wrap_n(int j, int n) {
  j %= n;
  return j < 0 ? j + n : j;
}

int require_lattice(const Direction& e, int ntheta, const char* who) {
  auto k = lattice_index(e, ntheta);
  if (!k)
    throw std::invalid_argument(std::string(who) +
                                ": direction is not on the half-angle lattice");
  return *k;
}

bool column_in_half(int j, int k, int nt) {
  int m = (2 * j - k) % (2 * nt);
  if (m < 0) m += 2 * nt;
  return (m < nt / 2) || (m > 3 * nt / 2);
}

}  // namespace

Field laplacian_apply(const Field& u) {
  const PolarGrid& g = *u.grid;
  const detail::Stencil st = detail::Stencil::build(g);
  Field out(u.grid, u.time);
  const int nr = g.nr, nt = g.ntheta;
  const double* v = u.values.data();
  double* o = out.values.data();
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

Field reflect_field(const Field& u, const Direction& e) {
  const PolarGrid& g = *u.grid;
  const int nt = g.ntheta;
  const int k = require_lattice(e, nt, "reference::reflect_field");
  const int base = k + nt / 2;
  Field v(u.grid, u.time);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < nt; ++j)
      v.values[g.idx(i, j)] = u.values[g.idx(i, g.wrap(base - j))];
  return v;
}

Field rotate_field(const Field& u, int steps) {
  const PolarGrid& g = *u.grid;
  Field v(u.grid, u.time);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.ntheta; ++j)
      v.values[g.idx(i, j)] = u.values[g.idx(i, g.wrap(j - steps))];
  return v;
}

namespace {

Field step_imex(const Field& u, const Nonlinearity& f, const Scheme& scheme) {
  const PolarGrid& g = *u.grid;
  const int nr = g.nr, nt = g.ntheta;
  const double dt = scheme.dt;
  const double t = u.time;
  const detail::Stencil st = detail::Stencil::build(g);
  const double c = (scheme.reaction_order == 2) ? dt / 2.0 : dt;
  const detail::ModeSystems ms = detail::ModeSystems::build(g, st, c);
  DftPlan plan(nt);

  const double* v = u.values.data();
  const double* r = g.r.data();
  const size_t n = g.cells();
  std::vector<double> f0(n), uhalf(n);
  std::vector<std::complex<double>> uhat(n), fhat(n), ghat(n);

  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) f0[i * nt + j] = f(t, r[i], v[i * nt + j]);

  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      uhat[i * nt + j] = std::complex<double>(v[i * nt + j], 0.0);
      fhat[i * nt + j] = std::complex<double>(f0[i * nt + j], 0.0);
    }
    plan.forward(&uhat[static_cast<size_t>(i) * nt]);
    plan.forward(&fhat[static_cast<size_t>(i) * nt]);
  }

  if (scheme.reaction_order == 2) {
    const double half = dt / 2.0;
    for (int m = 0; m < nt; ++m) {
      for (int i = 0; i < nr; ++i)
        ghat[i * nt + m] = uhat[i * nt + m] + half * fhat[i * nt + m];
      ms.factor[m].solve(&ghat[m], nt);
    }
    for (int i = 0; i < nr; ++i) {
      plan.inverse(&ghat[static_cast<size_t>(i) * nt]);
      for (int j = 0; j < nt; ++j) uhalf[i * nt + j] = ghat[i * nt + j].real();
    }
    const double th = t + half;
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nt; ++j)
        ghat[i * nt + j] =
            std::complex<double>(f(th, r[i], uhalf[i * nt + j]), 0.0);
      plan.forward(&ghat[static_cast<size_t>(i) * nt]);
    }
    for (int m = 0; m < nt; ++m) {
      for (int i = 0; i < nr; ++i) {
        std::complex<double> z =
            ms.mv_diag[static_cast<size_t>(i) * nt + m] * uhat[i * nt + m];
        if (i < nr - 1) z += half * st.cp[i] * uhat[(i + 1) * nt + m];
        if (i > 0) z += half * st.cm[i] * uhat[(i - 1) * nt + m];
        fhat[i * nt + m] = z + dt * ghat[i * nt + m];
      }
      ms.factor[m].solve(&fhat[m], nt);
    }
  } else {
    for (int m = 0; m < nt; ++m) {
      for (int i = 0; i < nr; ++i)
        fhat[i * nt + m] = uhat[i * nt + m] + dt * fhat[i * nt + m];
      ms.factor[m].solve(&fhat[m], nt);
    }
  }

  Field out(u.grid, t + dt);
  double* o = out.values.data();
  for (int i = 0; i < nr; ++i) {
    plan.inverse(&fhat[static_cast<size_t>(i) * nt]);
    for (int j = 0; j < nt; ++j) o[i * nt + j] = fhat[i * nt + j].real();
  }
  return out;
}

void apply_backward_matrix(const PolarGrid& g, const detail::Stencil& st,
                           double dt, const std::vector<double>& x,
                           std::vector<double>& out) {
  const int nr = g.nr, nt = g.ntheta;
  const double* v = x.data();
  double* o = out.data();
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double uc = v[i * nt + j];
      const double ul = v[i * nt + g.wrap(j - 1)];
      const double ur = v[i * nt + g.wrap(j + 1)];
      const double um = (i > 0) ? v[(i - 1) * nt + j]
                                : (st.disk ? v[g.wrap(j + nt / 2)] : -uc);
      const double up = (i < nr - 1) ? v[(i + 1) * nt + j] : -uc;
      const double lap = st.cm[i] * um + st.cp[i] * up +
                         st.cphi[i] * (ul + ur) - st.dd[i] * uc;
      o[i * nt + j] = uc - dt * lap;
    }
  }
}

Field step_backward(const Field& u, const Nonlinearity& f, const Scheme& scheme) {
  const PolarGrid& g = *u.grid;
  const int nr = g.nr, nt = g.ntheta;
  const double dt = scheme.dt;
  const double t = u.time;
  const detail::Stencil st = detail::Stencil::build(g);
  const double cheb_lo = 1.0;
  const double cheb_hi = detail::backward_matrix_upper_bound(g, st, dt);

  const size_t n = g.cells();
  std::vector<double> adiag(n);
  for (int i = 0; i < nr; ++i) {
    double diag = 1.0 + dt * st.dd[i];
    if (i == nr - 1) diag += dt * st.cp[i];
    if (i == 0 && !st.disk) diag += dt * st.cm[0];
    for (int j = 0; j < nt; ++j) adiag[i * nt + j] = diag;
  }

  const double* v = u.values.data();
  const double* r = g.r.data();
  std::vector<double> b(n);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j)
      b[i * nt + j] = v[i * nt + j] + dt * f(t, r[i], v[i * nt + j]);

  Field out(u.grid, t + dt);
  std::vector<double>& x = out.values;
  std::vector<double> res(n), dir(n), adir(n);

  double bnorm = 0.0;
  for (size_t c = 0; c < n; ++c) bnorm = std::max(bnorm, std::abs(b[c]));
  bnorm = std::max(bnorm, 1e-300);

  for (size_t c = 0; c < n; ++c) x[c] = b[c] / adiag[c];
  apply_backward_matrix(g, st, dt, x, adir);
  double resid = 0.0;
  for (size_t c = 0; c < n; ++c) {
    res[c] = b[c] - adir[c];
    resid = std::max(resid, std::abs(res[c]));
  }
  if (resid <= scheme.lin_tol * bnorm) return out;

  const double theta = (cheb_hi + cheb_lo) / 2.0;
  const double delta = (cheb_hi - cheb_lo) / 2.0;
  const double sigma1 = theta / delta;
  double rho = 1.0 / sigma1;
  for (size_t c = 0; c < n; ++c) dir[c] = res[c] / theta;

  for (int k = 0; k < scheme.max_lin_iters; ++k) {
    for (size_t c = 0; c < n; ++c) x[c] += dir[c];
    apply_backward_matrix(g, st, dt, dir, adir);
    resid = 0.0;
    for (size_t c = 0; c < n; ++c) {
      res[c] -= adir[c];
      resid = std::max(resid, std::abs(res[c]));
    }
    if (resid <= scheme.lin_tol * bnorm) return out;
    const double rho_new = 1.0 / (2.0 * sigma1 - rho);
    const double c1 = rho_new * rho;
    const double c2 = 2.0 * rho_new / delta;
    for (size_t c = 0; c < n; ++c) dir[c] = c1 * dir[c] + c2 * res[c];
    rho = rho_new;
  }
  throw SolverAbort("backward_euler linear solve stalled", t, resid);
}

}  // namespace

Field step(const Field& u, const Nonlinearity& f, const Scheme& scheme) {
  if (scheme.kind == Scheme::Kind::imex_fourier) return step_imex(u, f, scheme);
  return step_backward(u, f, scheme);
}

Field fss_symmetrize(const Field& u, const Direction& p) {
  const PolarGrid& g = *u.grid;
  const int nt = g.ntheta;
  const int k = require_lattice(p, nt, "reference::fss_symmetrize");
  Field out(u.grid, u.time);
  for (int i = 0; i < g.nr; ++i) {
    std::vector<double> ring(u.values.begin() + static_cast<size_t>(i) * nt,
                             u.values.begin() + static_cast<size_t>(i + 1) * nt);
    std::vector<double> sym = symmetrize_ring(ring, k);
    std::copy(sym.begin(), sym.end(),
              out.values.begin() + static_cast<size_t>(i) * nt);
  }
  return out;
}

std::pair<double, double> reflection_minmax(const std::vector<Field>& fields,
                                            const Direction& e) {
  if (fields.empty())
    throw std::invalid_argument("reference::reflection_minmax: no fields");
  const PolarGrid& g = *fields.front().grid;
  const int nt = g.ntheta;
  const int k = require_lattice(e, nt, "reference::reflection_minmax");
  const int base = k + nt / 2;
  double w_min = std::numeric_limits<double>::infinity();
  double w_max = -std::numeric_limits<double>::infinity();
  for (const Field& f : fields) {
    const double* v = f.values.data();
    for (int j = 0; j < nt; ++j) {
      if (!column_in_half(j, k, nt)) continue;
      const int jr = wrap_n(base - j, nt);
      for (int i = 0; i < g.nr; ++i) {
        const double w = v[i * nt + j] - v[i * nt + jr];
        w_min = std::min(w_min, w);
        w_max = std::max(w_max, w);
      }
    }
  }
  return {w_min, w_max};
}

}  // namespace rotasym::reference
