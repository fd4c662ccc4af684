#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotasym/geometry.hpp"

namespace rotasym {

// Sign classification of w_e = u - u o sigma_e on the open half domain B(e):
//   dominant_plus   w_min >= -tol and w_max > tol
//   dominant_minus  w_max <= tol and w_min < -tol
//   symmetric       max(|w_min|, |w_max|) <= tol
//   mixed           everything else
enum class ReflectionClass { dominant_plus, dominant_minus, symmetric, mixed };

const char* to_string(ReflectionClass c);

ReflectionClass classify_reflection(double w_min, double w_max, double tol);

// Extrema of w_e over B(e), aggregated jointly over a set of fields, plus the
// resulting classification.
struct ReflectionReport {
  Direction e;
  double w_min = 0.0;
  double w_max = 0.0;
  double tol = 0.0;
  ReflectionClass cls = ReflectionClass::symmetric;
};

// e must lie on the half-angle lattice, where the reflection is an exact
// index permutation; off-lattice directions are rejected.
ReflectionReport reflection_report(const std::vector<Field>& fields,
                                   const Direction& e, double tol);
ReflectionReport reflection_report(const Field& field, const Direction& e,
                                   double tol);

// Initial-dominance hypothesis: u0 strictly dominates its reflection across
// H(e) on B(e), i.e. the report is dominant_plus.
bool check_U1(const Field& u0, const Direction& e, double tol);

// Maximal circular run of consecutive member directions: lattice indices
// start, start+1, ..., start+len-1 (mod 2 ntheta).
struct DirectionArc {
  int start = 0;
  int len = 0;
};

// Membership of every half-angle lattice direction k pi / ntheta
// (k = 0..2*ntheta-1) in the dominance set: member iff the joint report is
// dominant_plus or symmetric.
struct DirectionSet {
  int ntheta = 0;
  double tol = 0.0;
  std::vector<std::uint8_t> member;       // size 2 * ntheta
  std::vector<ReflectionReport> reports;  // size 2 * ntheta, index = k
  std::vector<DirectionArc> arcs;         // disjoint, maximal, ascending start

  int lattice_size() const { return 2 * ntheta; }
  int count() const;
  bool full() const;
  // Every direction or its antipode (k vs k + ntheta) is a member.
  bool condition_33() const;
  // Largest arc; ties go to the arc containing the smallest lattice index.
  // Null when there are no members.
  const DirectionArc* largest_arc() const;
};

// Joint dominance set over all supplied fields (all on one grid).
DirectionSet compute_M(const std::vector<Field>& fields, double tol);

// Half-angle lattice indices k (angle k pi / n, k = 0..2n-1) about which the
// periodic sample vector v is reflection-symmetric within tol:
// max_j |v[j] - v[(k - j) mod n]| <= tol.
std::vector<int> reflection_point_indices(const std::vector<double>& v,
                                          double tol);
// Same points as angles k pi / n in [0, 2 pi).
std::vector<double> reflection_points(const std::vector<double>& v, double tol);

// One-sided dominance about the half-angle lattice index k_eta:
// v(eta + phi) >= v(eta - phi) - tol for every sampled phi in [0, pi], with
// strict excess > tol for at least one phi.
bool check_geo4(const std::vector<double>& v, int k_eta, double tol);
// Angle interface; eta must lie on the half-angle lattice of v's sampling.
bool check_geo4_angle(const std::vector<double>& v, double eta, double tol);

// Harness for the reflection-point dichotomy: for v even about 0 (within
// tol; rejected otherwise), if some lattice eta satisfies check_geo4 then
// the reflection points of v must be exactly {0, pi}. Returns the truth of
// that implication; vacuously true when no eta qualifies.
bool lemma1_conclusion(const std::vector<double>& v, double tol);

// Decreasing rearrangement of one ring about the half-angle lattice
// direction k_p: values sorted in decreasing order are reassigned to angular
// positions enumerated by increasing angular distance to the axis, the +theta
// position before the -theta position on ties. n must be even.
std::vector<double> symmetrize_ring(const std::vector<double>& ring, int k_p);

// Per-ring decreasing rearrangement of the whole field about p (grid-aligned).
// Idempotent; preserves each ring's multiset of values.
Field fss_symmetrize(const Field& u, const Direction& p);

// Quantified foliated-Schwarz deficits about a candidate axis p:
//   axial_deficit  sup over cells of |u(r, phi_p + theta) - u(r, phi_p - theta)|
//   mono_deficit   largest increase of theta -> u(r, phi_p + theta) over
//                  theta in [0, pi], maximized across rings
struct FssReport {
  Direction p;
  double axial_deficit = 0.0;
  double mono_deficit = 0.0;
  double tol = 0.0;
  bool fss = false;  // both deficits <= tol
};

FssReport fss_deficit(const Field& u, const Direction& p, double tol);

// Axis detection from a dominance set:
//   radial  M is the full lattice; any axis works, p is the canonical phi=0.
//   axis    p = midpoint of the largest arc of M.
//   none    the antipode condition fails; diagnostics name a failing pair.
// For radial and axis outcomes every supplied field is certified via
// fss_deficit about p.
struct AxisResult {
  enum class Kind { axis, radial, none };
  Kind kind = Kind::none;
  std::optional<Direction> p;
  std::vector<FssReport> reports;  // one per supplied field
  std::string diagnostics;

  bool all_fss() const;
};

AxisResult detect_axis(const DirectionSet& M, const std::vector<Field>& fields,
                       double tol);

// Rotating-plane sweep: from a member direction e_start, walk the half-angle
// lattice both ways while membership in the joint dominance set persists.
//   theta1 >= 0 and theta2 <= 0 are the maximal swept angles;
//   e_theta1 / e_theta2 are the outermost member directions reached, and
//   boundary1 / boundary2 their reflection reports (at the symmetry planes
//   these classify as symmetric);
//   full_rotation is set when every lattice direction is a member
//   (theta1 - theta2 = 2 pi).
// Throws std::invalid_argument when e_start is off-lattice or not a member.
struct SweepResult {
  double theta1 = 0.0;
  double theta2 = 0.0;
  Direction e_theta1, e_theta2;
  ReflectionReport boundary1, boundary2;
  bool boundary_symmetric = false;
  bool full_rotation = false;
};

SweepResult rotating_plane_sweep(const std::vector<Field>& fields,
                                 const Direction& e_start, double tol);

}  // namespace rotasym
