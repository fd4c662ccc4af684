#include "rotasym/omega.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rotasym {

OmegaEstimate collect_omega(const Trajectory& traj, double window_fraction,
                            double tol) {
  const int total = static_cast<int>(traj.snapshots.size());
  if (total < 2)
    throw std::invalid_argument("collect_omega: trajectory needs >= 2 snapshots");
  if (!(window_fraction > 0.0) || window_fraction > 1.0)
    throw std::invalid_argument("collect_omega: window_fraction must be in (0, 1]");
  if (!(tol >= 0.0))
    throw std::invalid_argument("collect_omega: tol must be >= 0");

  const double t0 = traj.snapshots.front().time;
  const double t1 = traj.snapshots.back().time;
  const double span = t1 - t0;
  double t_lo = t1 - window_fraction * span;
  const double teps = 1e-12 * std::max(span, 1.0);

  int first = total - 1;
  while (first > 0 && traj.snapshots[first - 1].time >= t_lo - teps) --first;
  // Widen a too-coarse window to at least 5 snapshots (or the whole run).
  const int min_count = std::min(5, total);
  if (total - first < min_count) first = total - min_count;
  t_lo = traj.snapshots[first].time;

  OmegaEstimate est;
  est.t_lo = t_lo;
  est.t_hi = t1;
  est.tol = tol;
  est.snapshots.assign(traj.snapshots.begin() + first, traj.snapshots.end());

  const int m = est.size();
  est.pairwise.assign(static_cast<size_t>(m) * m, 0.0);
#pragma omp parallel for schedule(static)
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const double d = sup_distance(est.snapshots[a], est.snapshots[b]);
      est.pairwise[a * m + b] = d;
      est.pairwise[b * m + a] = d;
    }
  double diam = 0.0;
  for (double d : est.pairwise) diam = std::max(diam, d);
  est.diameter = diam;

  for (const Field& s : est.snapshots) {
    bool covered = false;
    for (const Field& rep : est.representatives)
      if (sup_distance(s, rep) <= tol) {
        covered = true;
        break;
      }
    if (!covered) est.representatives.push_back(s);
  }
  return est;
}

double dist_to_estimate(const Field& field, const OmegaEstimate& est) {
  if (est.representatives.empty())
    throw std::invalid_argument("dist_to_estimate: estimate has no representatives");
  double best = sup_distance(field, est.representatives.front());
  for (size_t i = 1; i < est.representatives.size(); ++i)
    best = std::min(best, sup_distance(field, est.representatives[i]));
  return best;
}

}  // namespace rotasym
