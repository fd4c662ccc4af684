#include "rotasym/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace rotasym {

double bessel_j(int m, double x) {
  if (m < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
  if (x < 0.0) throw std::invalid_argument("bessel_j: argument must be >= 0");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;

  // J_m(x) = sum_s (-1)^s / (s! (s+m)!) (x/2)^(m+2s)
  const double h = 0.5 * x;
  double term = 1.0;
  for (int s = 1; s <= m; ++s) term *= h / s;  // (x/2)^m / m!
  double sum = term;
  const double h2 = h * h;
  for (int s = 1; s <= 200; ++s) {
    term *= -h2 / (static_cast<double>(s) * (s + m));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300) && s > h) break;
  }
  return sum;
}

double bessel_j_zero(int m, int k) {
  if (k < 1) throw std::invalid_argument("bessel_j_zero: k must be >= 1");

  // J_m > 0 on (0, j_{m,1}); consecutive zeros are at least ~pi apart, so a
  // 0.05 scan cannot skip one.
  const double step = 0.05;
  double a = m == 0 ? 0.5 * step : static_cast<double>(m);
  double fa = bessel_j(m, a);
  int found = 0;
  const double limit = m + (k + 2) * 3.5 + 10.0;
  for (double b = a + step; b < limit; b += step) {
    double fb = bessel_j(m, b);
    if ((fa < 0.0) != (fb < 0.0)) {
      ++found;
      if (found == k) {
        double lo = b - step, hi = b;
        double flo = fa;
        while (hi - lo > 1e-10) {
          double mid = 0.5 * (lo + hi);
          double fmid = bessel_j(m, mid);
          if ((flo < 0.0) != (fmid < 0.0))
            hi = mid;
          else {
            lo = mid;
            flo = fmid;
          }
        }
        return 0.5 * (lo + hi);
      }
    }
    a = b;
    fa = fb;
  }
  throw std::runtime_error("bessel_j_zero: scan exhausted without finding the zero");
}

}  // namespace rotasym
