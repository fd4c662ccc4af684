#pragma once

#include <vector>

#include "rotasym/geometry.hpp"
#include "rotasym/solver.hpp"

namespace rotasym {

// Finite approximation of the omega limit set: the trajectory's late-window
// snapshots, their pairwise sup-distances, and a greedy epsilon-net of
// representatives at the dedup tolerance. Every window snapshot lies within
// tol of some representative.
struct OmegaEstimate {
  double t_lo = 0.0, t_hi = 0.0;
  double tol = 0.0;
  std::vector<Field> snapshots;        // window snapshots in time order
  std::vector<double> pairwise;        // row-major size() x size() distances
  double diameter = 0.0;               // max pairwise sup-distance
  std::vector<Field> representatives;  // greedy net, time order

  int size() const { return static_cast<int>(snapshots.size()); }
  double pair(int a, int b) const { return pairwise[a * size() + b]; }
};

// Estimate from the last window_fraction of the trajectory's time span
// (default shape: 0.2). The window is widened to hold at least 5 snapshots
// when the cadence is too coarse (all of them if the trajectory is shorter).
// Requires a trajectory with >= 2 snapshots.
OmegaEstimate collect_omega(const Trajectory& traj, double window_fraction,
                            double tol);

// min over representatives of the sup-distance to the field.
double dist_to_estimate(const Field& field, const OmegaEstimate& est);

}  // namespace rotasym
