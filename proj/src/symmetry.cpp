#include "rotasym/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace rotasym {

namespace {

int require_lattice(const Direction& e, int ntheta, const char* who) {
  auto k = lattice_index(e, ntheta);
  if (!k)
    throw std::invalid_argument(std::string(who) +
                                ": direction is not on the half-angle lattice");
  return *k;
}

int wrap_n(int j, int n) {
  j %= n;
  return j < 0 ? j + n : j;
}

// Columns of B(e) for lattice direction k: offset m = (2j - k) mod 2n decides
// the side exactly; m = n/2 and m = 3n/2 sit on H(e) and are excluded.
bool column_in_half(int j, int k, int nt) {
  int m = (2 * j - k) % (2 * nt);
  if (m < 0) m += 2 * nt;
  return (m < nt / 2) || (m > 3 * nt / 2);
}

}  // namespace

const char* to_string(ReflectionClass c) {
  switch (c) {
    case ReflectionClass::dominant_plus:
      return "dominant_plus";
    case ReflectionClass::dominant_minus:
      return "dominant_minus";
    case ReflectionClass::symmetric:
      return "symmetric";
    case ReflectionClass::mixed:
      return "mixed";
  }
  return "?";
}

ReflectionClass classify_reflection(double w_min, double w_max, double tol) {
  if (std::max(std::abs(w_min), std::abs(w_max)) <= tol)
    return ReflectionClass::symmetric;
  if (w_min >= -tol && w_max > tol) return ReflectionClass::dominant_plus;
  if (w_max <= tol && w_min < -tol) return ReflectionClass::dominant_minus;
  return ReflectionClass::mixed;
}

ReflectionReport reflection_report(const std::vector<Field>& fields,
                                   const Direction& e, double tol) {
  if (fields.empty())
    throw std::invalid_argument("reflection_report: no fields supplied");
  const PolarGrid& g = *fields.front().grid;
  for (const Field& f : fields)
    if (!grids_compatible(*f.grid, g))
      throw std::invalid_argument("reflection_report: fields on different grids");
  const int nt = g.ntheta;
  const int k = require_lattice(e, nt, "reflection_report");

  // An even ntheta >= 8 guarantees B(e) holds at least three full columns
  // for every lattice direction, so the extrema below are always attained.
  double w_min = std::numeric_limits<double>::infinity();
  double w_max = -std::numeric_limits<double>::infinity();
  const int base = k + nt / 2;
  for (const Field& f : fields) {
    const double* v = f.values.data();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
    for (int j = 0; j < nt; ++j) {
      if (!column_in_half(j, k, nt)) continue;
      const int jr = wrap_n(base - j, nt);
      for (int i = 0; i < g.nr; ++i) {
        const double w = v[i * nt + j] - v[i * nt + jr];
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
    }
    w_min = std::min(w_min, lo);
    w_max = std::max(w_max, hi);
  }

  ReflectionReport rep;
  rep.e = Direction::lattice(k, nt);
  rep.w_min = w_min;
  rep.w_max = w_max;
  rep.tol = tol;
  rep.cls = classify_reflection(w_min, w_max, tol);
  return rep;
}

ReflectionReport reflection_report(const Field& field, const Direction& e,
                                   double tol) {
  return reflection_report(std::vector<Field>{field}, e, tol);
}

bool check_U1(const Field& u0, const Direction& e, double tol) {
  return reflection_report(u0, e, tol).cls == ReflectionClass::dominant_plus;
}

// ---------------------------------------------------------------------------
// DirectionSet

int DirectionSet::count() const {
  int c = 0;
  for (auto m : member) c += m;
  return c;
}

bool DirectionSet::full() const { return count() == lattice_size(); }

bool DirectionSet::condition_33() const {
  const int n = ntheta;
  for (int k = 0; k < n; ++k)
    if (!member[k] && !member[k + n]) return false;
  return true;
}

const DirectionArc* DirectionSet::largest_arc() const {
  const DirectionArc* best = nullptr;
  int best_min_index = 0;
  for (const DirectionArc& a : arcs) {
    // Smallest lattice index contained in the arc: 0 if it wraps, else start.
    const int min_index = (a.start + a.len > lattice_size()) ? 0 : a.start;
    if (!best || a.len > best->len ||
        (a.len == best->len && min_index < best_min_index)) {
      best = &a;
      best_min_index = min_index;
    }
  }
  return best;
}

namespace {

std::vector<DirectionArc> arcs_of(const std::vector<std::uint8_t>& member) {
  const int n = static_cast<int>(member.size());
  std::vector<DirectionArc> arcs;
  int members = 0;
  for (auto m : member) members += m;
  if (members == 0) return arcs;
  if (members == n) {
    arcs.push_back({0, n});
    return arcs;
  }
  for (int k = 0; k < n; ++k) {
    if (!member[k] || member[wrap_n(k - 1, n)]) continue;
    int len = 1;
    while (member[wrap_n(k + len, n)]) ++len;
    arcs.push_back({k, len});
  }
  return arcs;
}

}  // namespace

DirectionSet compute_M(const std::vector<Field>& fields, double tol) {
  if (fields.empty()) throw std::invalid_argument("compute_M: no fields supplied");
  const int nt = fields.front().grid->ntheta;
  DirectionSet set;
  set.ntheta = nt;
  set.tol = tol;
  set.member.assign(2 * nt, 0);
  set.reports.resize(2 * nt);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < 2 * nt; ++k) {
    ReflectionReport rep = reflection_report(fields, Direction::lattice(k, nt), tol);
    set.reports[k] = rep;
    set.member[k] = (rep.cls == ReflectionClass::dominant_plus ||
                     rep.cls == ReflectionClass::symmetric)
                        ? 1
                        : 0;
  }
  set.arcs = arcs_of(set.member);
  return set;
}

// ---------------------------------------------------------------------------
// Reflection points and the dichotomy harness

std::vector<int> reflection_point_indices(const std::vector<double>& v,
                                          double tol) {
  const int n = static_cast<int>(v.size());
  if (n < 2)
    throw std::invalid_argument("reflection_point_indices: need >= 2 samples");
  std::vector<int> out;
  for (int k = 0; k < 2 * n; ++k) {
    double dev = 0.0;
    for (int j = 0; j < n; ++j)
      dev = std::max(dev, std::abs(v[j] - v[wrap_n(k - j, n)]));
    if (dev <= tol) out.push_back(k);
  }
  return out;
}

std::vector<double> reflection_points(const std::vector<double>& v, double tol) {
  const int n = static_cast<int>(v.size());
  std::vector<double> angles;
  for (int k : reflection_point_indices(v, tol)) angles.push_back(k * kPi / n);
  return angles;
}

bool check_geo4(const std::vector<double>& v, int k_eta, double tol) {
  const int n = static_cast<int>(v.size());
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("check_geo4: need an even number of samples");
  const int k = wrap_n(k_eta, 2 * n);
  bool strict = false;
  // Sampled offsets phi = q pi / n with q congruent to k mod 2, so that
  // eta +- phi both land on sample nodes.
  for (int q = k % 2; q <= n; q += 2) {
    const int a = wrap_n((k + q) / 2, n);
    const int b = wrap_n((k - q) / 2, n);
    const double d = v[a] - v[b];
    if (d < -tol) return false;
    if (d > tol) strict = true;
  }
  return strict;
}

bool check_geo4_angle(const std::vector<double>& v, double eta, double tol) {
  const int n = static_cast<int>(v.size());
  const double x = eta * n / kPi;
  const double k = std::round(x);
  if (std::abs(x - k) > 1e-9 * n)
    throw std::invalid_argument("check_geo4: eta is not on the half-angle lattice");
  return check_geo4(v, wrap_n(static_cast<int>(k), 2 * n), tol);
}

bool lemma1_conclusion(const std::vector<double>& v, double tol) {
  const int n = static_cast<int>(v.size());
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("lemma1_conclusion: need an even number of samples");
  double even_dev = 0.0;
  for (int j = 0; j < n; ++j)
    even_dev = std::max(even_dev, std::abs(v[j] - v[wrap_n(-j, n)]));
  if (even_dev > tol)
    throw std::invalid_argument("lemma1_conclusion: v is not even about 0");

  bool hypothesis = false;
  for (int k = 0; k < 2 * n && !hypothesis; ++k)
    if (check_geo4(v, k, tol)) hypothesis = true;
  if (!hypothesis) return true;  // vacuous

  const std::vector<int> pts = reflection_point_indices(v, tol);
  return pts.size() == 2 && pts[0] == 0 && pts[1] == n;
}

// ---------------------------------------------------------------------------
// Foliated-Schwarz symmetrization and deficits

std::vector<double> symmetrize_ring(const std::vector<double>& ring, int k_p) {
  const int n = static_cast<int>(ring.size());
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("symmetrize_ring: need an even number of samples");
  const int k = wrap_n(k_p, 2 * n);

  // Angular positions enumerated by increasing distance to the axis angle
  // k pi / n, the +theta member of each tie pair first.
  std::vector<int> order;
  order.reserve(n);
  if (k % 2 == 0) {
    const int jp = k / 2;
    order.push_back(wrap_n(jp, n));
    for (int q = 1; q < n / 2; ++q) {
      order.push_back(wrap_n(jp + q, n));
      order.push_back(wrap_n(jp - q, n));
    }
    order.push_back(wrap_n(jp + n / 2, n));
  } else {
    const int jplus = (k + 1) / 2;
    const int jminus = (k - 1) / 2;
    for (int q = 0; q < n / 2; ++q) {
      order.push_back(wrap_n(jplus + q, n));
      order.push_back(wrap_n(jminus - q, n));
    }
  }

  std::vector<double> sorted = ring;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[order[i]] = sorted[i];
  return out;
}

Field fss_symmetrize(const Field& u, const Direction& p) {
  const PolarGrid& g = *u.grid;
  const int nt = g.ntheta;
  const int k = require_lattice(p, nt, "fss_symmetrize");
  Field out(u.grid, u.time);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < g.nr; ++i) {
    std::vector<double> ring(u.values.begin() + static_cast<size_t>(i) * nt,
                             u.values.begin() + static_cast<size_t>(i + 1) * nt);
    std::vector<double> sym = symmetrize_ring(ring, k);
    std::copy(sym.begin(), sym.end(),
              out.values.begin() + static_cast<size_t>(i) * nt);
  }
  return out;
}

FssReport fss_deficit(const Field& u, const Direction& p, double tol) {
  const PolarGrid& g = *u.grid;
  const int nt = g.ntheta;
  const int k = require_lattice(p, nt, "fss_deficit");
  const double* v = u.values.data();

  double axial = 0.0, mono = 0.0;
  if (k % 2 == 0) {
    const int jp = k / 2;
#pragma omp parallel for schedule(static) reduction(max : axial) reduction(max : mono)
    for (int i = 0; i < g.nr; ++i) {
      const double* row = v + static_cast<size_t>(i) * nt;
      for (int q = 1; q < nt / 2; ++q)
        axial = std::max(axial, std::abs(row[wrap_n(jp + q, nt)] -
                                         row[wrap_n(jp - q, nt)]));
      double runmin = row[wrap_n(jp, nt)];
      for (int q = 1; q <= nt / 2; ++q) {
        const double m = row[wrap_n(jp + q, nt)];
        mono = std::max(mono, m - runmin);
        runmin = std::min(runmin, m);
      }
    }
  } else {
    const int jplus = (k + 1) / 2;
    const int jminus = (k - 1) / 2;
#pragma omp parallel for schedule(static) reduction(max : axial) reduction(max : mono)
    for (int i = 0; i < g.nr; ++i) {
      const double* row = v + static_cast<size_t>(i) * nt;
      for (int q = 0; q < nt / 2; ++q)
        axial = std::max(axial, std::abs(row[wrap_n(jplus + q, nt)] -
                                         row[wrap_n(jminus - q, nt)]));
      double runmin = row[wrap_n(jplus, nt)];
      for (int q = 1; q < nt / 2; ++q) {
        const double m = row[wrap_n(jplus + q, nt)];
        mono = std::max(mono, m - runmin);
        runmin = std::min(runmin, m);
      }
    }
  }

  FssReport rep;
  rep.p = Direction::lattice(k, nt);
  rep.axial_deficit = axial;
  rep.mono_deficit = mono;
  rep.tol = tol;
  rep.fss = axial <= tol && mono <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Axis detection and the rotating-plane sweep

bool AxisResult::all_fss() const {
  if (kind == Kind::none || reports.empty()) return false;
  for (const FssReport& r : reports)
    if (!r.fss) return false;
  return true;
}

AxisResult detect_axis(const DirectionSet& M, const std::vector<Field>& fields,
                       double tol) {
  AxisResult res;
  if (M.full()) {
    res.kind = AxisResult::Kind::radial;
    res.p = Direction::lattice(0, M.ntheta);
  } else if (!M.condition_33()) {
    res.kind = AxisResult::Kind::none;
    for (int k = 0; k < M.ntheta; ++k)
      if (!M.member[k] && !M.member[k + M.ntheta]) {
        res.diagnostics = "antipode condition fails: neither lattice direction " +
                          std::to_string(k) + " nor " +
                          std::to_string(k + M.ntheta) + " is dominant";
        break;
      }
    return res;
  } else {
    const DirectionArc* arc = M.largest_arc();
    if (!arc) {  // unreachable: condition_33 guarantees members
      res.kind = AxisResult::Kind::none;
      res.diagnostics = "empty dominance set";
      return res;
    }
    // Even-length arcs have two central directions; the floor pick keeps the
    // choice deterministic.
    const int k_mid = wrap_n(arc->start + (arc->len - 1) / 2, M.lattice_size());
    res.kind = AxisResult::Kind::axis;
    res.p = Direction::lattice(k_mid, M.ntheta);
  }
  res.reports.reserve(fields.size());
  for (const Field& f : fields) res.reports.push_back(fss_deficit(f, *res.p, tol));
  return res;
}

SweepResult rotating_plane_sweep(const std::vector<Field>& fields,
                                 const Direction& e_start, double tol) {
  if (fields.empty())
    throw std::invalid_argument("rotating_plane_sweep: no fields supplied");
  const int nt = fields.front().grid->ntheta;
  const int k0 = require_lattice(e_start, nt, "rotating_plane_sweep");
  const DirectionSet M = compute_M(fields, tol);
  if (!M.member[k0])
    throw std::invalid_argument(
        "rotating_plane_sweep: e_start is not in the dominance set (" +
        std::string(to_string(M.reports[k0].cls)) + ")");

  SweepResult sw;
  const int n2 = M.lattice_size();
  if (M.full()) {
    sw.full_rotation = true;
    sw.theta1 = kPi;
    sw.theta2 = -kPi;
    const int ka = wrap_n(k0 + nt, n2);
    sw.e_theta1 = Direction::lattice(ka, nt);
    sw.e_theta2 = Direction::lattice(ka, nt);
    sw.boundary1 = M.reports[ka];
    sw.boundary2 = M.reports[ka];
  } else {
    int s1 = 0;
    while (M.member[wrap_n(k0 + s1 + 1, n2)]) ++s1;
    int s2 = 0;
    while (M.member[wrap_n(k0 - s2 - 1, n2)]) ++s2;
    sw.theta1 = s1 * kPi / nt;
    sw.theta2 = -(s2 * kPi / nt);
    const int k1 = wrap_n(k0 + s1, n2);
    const int k2 = wrap_n(k0 - s2, n2);
    sw.e_theta1 = Direction::lattice(k1, nt);
    sw.e_theta2 = Direction::lattice(k2, nt);
    sw.boundary1 = M.reports[k1];
    sw.boundary2 = M.reports[k2];
  }
  sw.boundary_symmetric = sw.boundary1.cls == ReflectionClass::symmetric &&
                          sw.boundary2.cls == ReflectionClass::symmetric;
  return sw;
}

}  // namespace rotasym
