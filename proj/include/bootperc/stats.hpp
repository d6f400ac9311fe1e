#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace bootperc {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct SampleMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased, 0 for fewer than two samples
  double stderr_mean = 0.0;
};

/// Two-pass compensated mean and variance. Deterministic in the order of
/// `values`.
inline SampleMoments sample_moments(std::span<const double> values) {
  SampleMoments m;
  m.count = values.size();
  if (values.empty()) return m;
  CompensatedSum total;
  for (double v : values) total.add(v);
  m.mean = total.value() / static_cast<double>(m.count);
  if (m.count > 1) {
    CompensatedSum squares;
    for (double v : values) squares.add((v - m.mean) * (v - m.mean));
    m.variance = squares.value() / static_cast<double>(m.count - 1);
    m.stderr_mean = std::sqrt(m.variance / static_cast<double>(m.count));
  }
  return m;
}

/// Standard error of a proportion observed at rate `rate` over `trials`.
inline double binomial_stderr(double rate, std::size_t trials) {
  return trials == 0 ? 0.0 : std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
}

}  // namespace bootperc
