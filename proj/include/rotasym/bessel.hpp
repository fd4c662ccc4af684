#pragma once

namespace rotasym {

// Bessel function of the first kind, integer order m >= 0, by power series.
// The alternating series cancels, so absolute accuracy degrades like
// 1e-16 e^x / sqrt(2 pi x): ~1e-12 at x = 10, ~1e-10 at x = 15. The zeros
// this project asks for sit below x = 9, well inside full precision.
double bessel_j(int m, double x);

// k-th positive zero of J_m (k >= 1): bracketed by a sign scan, then bisected
// to an interval width of 1e-10.
double bessel_j_zero(int m, int k);

}  // namespace rotasym
