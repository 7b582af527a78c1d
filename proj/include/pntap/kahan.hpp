#pragma once

#include <cmath>
#include <complex>

namespace pntap {

// Neumaier's variant of Kahan summation.
template <typename T>
class compensated_sum;

template <>
class compensated_sum<double> {
public:
  compensated_sum() = default;

  compensated_sum& operator+=(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      correction_ += (sum_ - t) + v;
    else
      correction_ += (v - t) + sum_;
    sum_ = t;
    return *this;
  }
  compensated_sum& operator-=(double v) { return *this += -v; }

  double get() const { return sum_ + correction_; }

private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

template <>
class compensated_sum<std::complex<double>> {
public:
  compensated_sum() = default;

  compensated_sum& operator+=(std::complex<double> v) {
    re_ += v.real();
    im_ += v.imag();
    return *this;
  }
  compensated_sum& operator-=(std::complex<double> v) { return *this += -v; }

  std::complex<double> get() const { return {re_.get(), im_.get()}; }

private:
  compensated_sum<double> re_;
  compensated_sum<double> im_;
};

} // namespace pntap
