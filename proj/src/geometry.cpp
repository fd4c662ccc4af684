#include "rotasym/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rotasym {

RadialDomain RadialDomain::disk(double r_outer) {
  if (!(r_outer > 0.0))
    throw std::invalid_argument("disk: r_outer must be positive");
  return RadialDomain{DomainKind::disk, 0.0, r_outer};
}

RadialDomain RadialDomain::annulus(double r_inner, double r_outer) {
  if (!(r_inner > 0.0))
    throw std::invalid_argument("annulus: r_inner must be positive");
  if (!(r_inner < r_outer))
    throw std::invalid_argument("annulus: need 0 < r_inner < r_outer");
  return RadialDomain{DomainKind::annulus, r_inner, r_outer};
}

GridPtr build_grid(const RadialDomain& domain, int nr, int ntheta) {
  if (domain.kind == DomainKind::disk && domain.r_inner != 0.0)
    throw std::invalid_argument("build_grid: disk requires r_inner == 0");
  if (domain.kind == DomainKind::annulus && !(domain.r_inner > 0.0))
    throw std::invalid_argument("build_grid: annulus requires r_inner > 0");
  if (!(domain.r_inner < domain.r_outer))
    throw std::invalid_argument("build_grid: need r_inner < r_outer");
  if (nr < 4) throw std::invalid_argument("build_grid: nr must be >= 4");
  if (ntheta < 8 || ntheta % 2 != 0)
    throw std::invalid_argument("build_grid: ntheta must be even and >= 8");

  auto g = std::make_shared<PolarGrid>();
  g->domain = domain;
  g->nr = nr;
  g->ntheta = ntheta;
  g->dr = (domain.r_outer - domain.r_inner) / nr;
  g->dphi = kTwoPi / ntheta;
  g->r.resize(nr);
  for (int i = 0; i < nr; ++i) g->r[i] = domain.r_inner + (i + 0.5) * g->dr;
  g->phi.resize(ntheta);
  for (int j = 0; j < ntheta; ++j) g->phi[j] = kTwoPi * j / ntheta;
  return g;
}

bool grids_compatible(const PolarGrid& a, const PolarGrid& b) {
  return a.domain.kind == b.domain.kind && a.domain.r_inner == b.domain.r_inner &&
         a.domain.r_outer == b.domain.r_outer && a.nr == b.nr && a.ntheta == b.ntheta;
}

Direction Direction::from_angle(double a) {
  double x = std::fmod(a, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  if (x >= kTwoPi) x = 0.0;  // fmod can land exactly on 2 pi after the shift
  return Direction{x};
}

Direction Direction::lattice(int k, int ntheta) {
  int m = k % (2 * ntheta);
  if (m < 0) m += 2 * ntheta;
  return Direction{m * kPi / ntheta};
}

Direction Direction::opposite() const { return from_angle(alpha + kPi); }

std::optional<int> lattice_index(const Direction& e, int ntheta) {
  const double x = e.alpha * ntheta / kPi;
  const double k = std::round(x);
  if (std::abs(x - k) > 1e-9 * ntheta) return std::nullopt;
  int m = static_cast<int>(k) % (2 * ntheta);
  if (m < 0) m += 2 * ntheta;
  return m;
}

Field::Field(GridPtr g, double t) : grid(std::move(g)), time(t) {
  values.assign(grid->cells(), 0.0);
}

double sup_norm(const Field& f) {
  // std::max drops NaN operands (max(0, nan) == 0), which would hide a
  // non-finite field from the solver's abort guard; propagate NaN instead.
  double m = 0.0;
  for (double v : f.values) {
    const double a = std::abs(v);
    if (std::isnan(a)) return a;
    m = std::max(m, a);
  }
  return m;
}

double sup_distance(const Field& a, const Field& b) {
  if (!grids_compatible(*a.grid, *b.grid))
    throw std::invalid_argument("sup_distance: fields live on different grids");
  double m = 0.0;
  for (std::size_t c = 0; c < a.values.size(); ++c) {
    const double d = std::abs(a.values[c] - b.values[c]);
    if (std::isnan(d)) return d;
    m = std::max(m, d);
  }
  return m;
}

Field reflect_field(const Field& u, const Direction& e) {
  const PolarGrid& g = *u.grid;
  const int nt = g.ntheta;
  Field v(u.grid, u.time);

  if (auto k = lattice_index(e, nt)) {
    // phi_j -> 2 alpha_perp - phi_j is the index map j -> k + nt/2 - j.
    const int base = *k + nt / 2;
#pragma omp parallel for
    for (int i = 0; i < g.nr; ++i)
      for (int j = 0; j < nt; ++j)
        v.values[g.idx(i, j)] = u.values[g.idx(i, g.wrap(base - j))];
    return v;
  }

  // Off-lattice direction: sample u at 2 alpha_perp - phi_j by periodic
  // linear interpolation.
  const double two_alpha_perp = 2.0 * e.alpha + kPi;
#pragma omp parallel for
  for (int j = 0; j < nt; ++j) {
    double x = (two_alpha_perp - g.phi[j]) / g.dphi;
    double fl = std::floor(x);
    double w = x - fl;
    int j0 = g.wrap(static_cast<int>(fl) % nt);
    int j1 = g.wrap(j0 + 1);
    for (int i = 0; i < g.nr; ++i)
      v.values[g.idx(i, j)] =
          (1.0 - w) * u.values[g.idx(i, j0)] + w * u.values[g.idx(i, j1)];
  }
  return v;
}

Field rotate_field(const Field& u, int steps) {
  const PolarGrid& g = *u.grid;
  Field v(u.grid, u.time);
#pragma omp parallel for
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.ntheta; ++j)
      v.values[g.idx(i, j)] = u.values[g.idx(i, g.wrap(j - steps))];
  return v;
}

std::vector<std::uint8_t> half_domain_mask(const PolarGrid& g, const Direction& e) {
  const int nt = g.ntheta;
  std::vector<std::uint8_t> mask(g.cells(), 0);

  if (auto k = lattice_index(e, nt)) {
    // Column j has angle offset (2j - k) pi / nt from e; the offset decides
    // the side for the whole column, exactly.
    for (int j = 0; j < nt; ++j) {
      int m = (2 * j - *k) % (2 * nt);
      if (m < 0) m += 2 * nt;
      bool in = (m < nt / 2) || (m > 3 * nt / 2);
      if (!in) continue;
      for (int i = 0; i < g.nr; ++i) mask[g.idx(i, j)] = 1;
    }
    return mask;
  }

  const double tol = 1e-12 * g.domain.r_outer;
  for (int j = 0; j < nt; ++j) {
    const double c = std::cos(g.phi[j] - e.alpha);
    for (int i = 0; i < g.nr; ++i) {
      const double s = g.r[i] * c;
      if (s > tol) mask[g.idx(i, j)] = 1;
    }
  }
  return mask;
}

}  // namespace rotasym
