#pragma once

#include <utility>
#include <vector>

#include "rotasym/geometry.hpp"
#include "rotasym/solver.hpp"

namespace rotasym::reference {

// Serial counterparts of the parallel kernels, kept for testing and
// benchmarking: identical arithmetic and identical per-element expressions,
// no threading. The parity suite asserts the production kernels reproduce
// these bit for bit.

Field laplacian_apply(const Field& u);

// Lattice directions only (the permutation path).
Field reflect_field(const Field& u, const Direction& e);

Field rotate_field(const Field& u, int steps);

// One time step with either scheme, serial throughout.
Field step(const Field& u, const Nonlinearity& f, const Scheme& scheme);

Field fss_symmetrize(const Field& u, const Direction& p);

// (w_min, w_max) of u - u o sigma_e over B(e), aggregated over fields.
std::pair<double, double> reflection_minmax(const std::vector<Field>& fields,
                                            const Direction& e);

}  // namespace rotasym::reference
