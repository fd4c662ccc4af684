#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace rotasym {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class DomainKind { disk, annulus };

struct RadialDomain {
  DomainKind kind = DomainKind::disk;
  double r_inner = 0.0;
  double r_outer = 1.0;

  static RadialDomain disk(double r_outer);
  static RadialDomain annulus(double r_inner, double r_outer);
};

// Cell-centered polar grid: r_i = r_inner + (i + 1/2) dr, phi_j = 2 pi j / ntheta.
// Cell centers never hit r = 0, so the polar stencil coefficients stay finite.
struct PolarGrid {
  RadialDomain domain;
  int nr = 0;
  int ntheta = 0;
  double dr = 0.0;
  double dphi = 0.0;
  std::vector<double> r;    // ring radii, size nr
  std::vector<double> phi;  // angular nodes, size ntheta

  int cells() const { return nr * ntheta; }
  int idx(int i, int j) const { return i * ntheta + j; }
  int wrap(int j) const {
    j %= ntheta;
    return j < 0 ? j + ntheta : j;
  }
  bool is_disk() const { return domain.kind == DomainKind::disk; }
};

using GridPtr = std::shared_ptr<const PolarGrid>;

// Validates nr >= 4, ntheta >= 8 and even, and domain radii.
GridPtr build_grid(const RadialDomain& domain, int nr, int ntheta);

bool grids_compatible(const PolarGrid& a, const PolarGrid& b);

// Unit direction e = (cos alpha, sin alpha). Directions with alpha on the
// half-angle lattice {k pi / ntheta} admit exact index arithmetic for
// reflections and half-domain masks; everything angle-indexed runs there.
struct Direction {
  double alpha = 0.0;  // normalized to [0, 2 pi)

  static Direction from_angle(double a);
  static Direction lattice(int k, int ntheta);
  double ex() const { return std::cos(alpha); }
  double ey() const { return std::sin(alpha); }
  Direction opposite() const;
};

// Half-angle lattice index k with alpha = k pi / ntheta, if e is grid-aligned
// (within 1e-9 of a lattice angle); nullopt otherwise.
std::optional<int> lattice_index(const Direction& e, int ntheta);

struct Field {
  GridPtr grid;
  std::vector<double> values;  // row-major by ring: values[i * ntheta + j]
  double time = 0.0;

  Field() = default;
  explicit Field(GridPtr g, double t = 0.0);
  double& at(int i, int j) { return values[grid->idx(i, j)]; }
  double at(int i, int j) const { return values[grid->idx(i, j)]; }
};

double sup_norm(const Field& f);
double sup_distance(const Field& a, const Field& b);

// v(r, phi) = u(r, 2 alpha_perp - phi), the pullback of u under the
// reflection across the line H(e) = {x . e = 0}. Exact index permutation for
// lattice directions, periodic linear interpolation otherwise.
Field reflect_field(const Field& u, const Direction& e);

// v(r, phi_j) = u(r, phi_{j - steps}); pure cyclic index shift.
Field rotate_field(const Field& u, int steps);

// 1 on cells with x . e > 0; 0 on H(e) and on the opposite side. Lattice
// directions are decided by exact integer arithmetic; otherwise cells with
// |x . e| < 1e-12 r_outer count as lying on H(e).
std::vector<std::uint8_t> half_domain_mask(const PolarGrid& g, const Direction& e);

}  // namespace rotasym
