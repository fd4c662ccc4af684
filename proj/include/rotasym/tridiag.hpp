#pragma once

#include <stdexcept>
#include <vector>

namespace rotasym {

// Thomas factorization of a tridiagonal system. No pivoting: every matrix
// this project assembles is strictly diagonally dominant. Factor once per
// (grid, dt, mode), then solve many right-hand sides, real or complex,
// optionally strided so mode-major storage can be solved in place.
struct TridiagFactor {
  int n = 0;
  std::vector<double> w;   // elimination multipliers, w[0] unused
  std::vector<double> bt;  // pivots after elimination
  std::vector<double> c;   // superdiagonal, c[n-1] unused

  void factor(const std::vector<double>& sub, const std::vector<double>& diag,
              const std::vector<double>& sup) {
    n = static_cast<int>(diag.size());
    if (static_cast<int>(sub.size()) != n || static_cast<int>(sup.size()) != n)
      throw std::invalid_argument("TridiagFactor: band size mismatch");
    w.assign(n, 0.0);
    bt.assign(n, 0.0);
    c = sup;
    bt[0] = diag[0];
    for (int i = 1; i < n; ++i) {
      w[i] = sub[i] / bt[i - 1];
      bt[i] = diag[i] - w[i] * c[i - 1];
    }
  }

  template <typename T>
  void solve(T* x, int stride = 1) const {
    for (int i = 1; i < n; ++i) x[i * stride] -= w[i] * x[(i - 1) * stride];
    x[(n - 1) * stride] /= bt[n - 1];
    for (int i = n - 2; i >= 0; --i)
      x[i * stride] = (x[i * stride] - c[i] * x[(i + 1) * stride]) / bt[i];
  }
};

}  // namespace rotasym
