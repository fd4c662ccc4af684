#include "rotasym/dft.hpp"

#include <cmath>
#include <stdexcept>

namespace rotasym {

namespace {
constexpr double kTau = 6.28318530717958647692;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

DftPlan::DftPlan(int n) : n_(n), pow2_(is_pow2(n)) {
  if (n < 2) throw std::invalid_argument("DftPlan: length must be >= 2");
  w_.resize(n_);
  for (int j = 0; j < n_; ++j)
    w_[j] = std::complex<double>(std::cos(kTau * j / n_), -std::sin(kTau * j / n_));
  if (pow2_) {
    bitrev_.resize(n_);
    int bits = 0;
    while ((1 << bits) < n_) ++bits;
    for (int i = 0; i < n_; ++i) {
      int rev = 0;
      for (int b = 0; b < bits; ++b)
        if (i & (1 << b)) rev |= 1 << (bits - 1 - b);
      bitrev_[i] = rev;
    }
  }
}

void DftPlan::forward(std::complex<double>* data) const { transform(data, false); }

void DftPlan::inverse(std::complex<double>* data) const {
  transform(data, true);
  const double s = 1.0 / n_;
  for (int j = 0; j < n_; ++j) data[j] *= s;
}

void DftPlan::transform(std::complex<double>* data, bool inv) const {
  if (pow2_) {
    for (int i = 0; i < n_; ++i) {
      int j = bitrev_[i];
      if (i < j) std::swap(data[i], data[j]);
    }
    for (int len = 2; len <= n_; len <<= 1) {
      const int stride = n_ / len;
      for (int start = 0; start < n_; start += len) {
        for (int k = 0; k < len / 2; ++k) {
          std::complex<double> w = w_[static_cast<std::size_t>(k) * stride];
          if (inv) w = std::conj(w);
          const std::complex<double> a = data[start + k];
          const std::complex<double> b = data[start + k + len / 2] * w;
          data[start + k] = a + b;
          data[start + k + len / 2] = a - b;
        }
      }
    }
    return;
  }

  std::vector<std::complex<double>> out(n_);
  for (int k = 0; k < n_; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int j = 0; j < n_; ++j) {
      std::complex<double> w = w_[(static_cast<long long>(j) * k) % n_];
      if (inv) w = std::conj(w);
      acc += data[j] * w;
    }
    out[k] = acc;
  }
  for (int k = 0; k < n_; ++k) data[k] = out[k];
}

}  // namespace rotasym
