#pragma once

#include <complex>
#include <vector>

namespace rotasym {

// In-place DFT of a fixed length n: radix-2 Cooley-Tukey when n is a power of
// two, the O(n^2) direct sum otherwise. Twiddles are precomputed once so a
// plan can be shared across rings; forward/inverse on a plan are reentrant.
class DftPlan {
 public:
  explicit DftPlan(int n);

  int size() const { return n_; }
  bool radix2() const { return pow2_; }

  // X_k = sum_j x_j exp(-2 pi i j k / n)
  void forward(std::complex<double>* data) const;
  // x_j = (1/n) sum_k X_k exp(+2 pi i j k / n)
  void inverse(std::complex<double>* data) const;

 private:
  void transform(std::complex<double>* data, bool inv) const;

  int n_;
  bool pow2_;
  std::vector<std::complex<double>> w_;     // w_[j] = exp(-2 pi i j / n)
  std::vector<int> bitrev_;                 // radix-2 only
};

}  // namespace rotasym
