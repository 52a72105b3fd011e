#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "shiftlab/operators.hpp"
#include "shiftlab/vectors.hpp"

namespace shiftlab {

// Sum of doubles held as an exact scaled 128-bit integer (every finite double
// is m * 2^e, so any double can be absorbed exactly while the dynamic range
// fits). Saturates to Neumaier-compensated floating point on range overflow
// and continues from the exact value reached.
class ExactDyadicSum {
 public:
  void add(double v);
  double value() const;
  bool exact() const { return !saturated_; }
  // Exact zero test; meaningful only while exact().
  bool is_zero() const { return !saturated_ && mantissa_ == 0; }

 private:
  void saturate();

  __int128 mantissa_ = 0;
  std::int32_t scale_ = 0;
  bool saturated_ = false;
  double float_sum_ = 0.0;
  double float_comp_ = 0.0;
};

// Running Cesaro statistics of an orbit: partial sums S_n = sum_{i<=n}
// ||T^i x||, averages A_n = S_n / n, and extrema of A_n over the tail window
// [N-W+1, N]. `exact` marks exactly accumulated partial sums; norm_exponents
// mirrors NormSequence (present when every nonzero norm is a power of two).
struct CesaroSeries {
  std::int64_t horizon = 0;
  std::int64_t window = 0;
  std::vector<double> norms;
  std::vector<double> partial_sums;
  std::vector<double> averages;
  std::vector<std::int64_t> norm_exponents;
  bool exact = false;
  double tail_window_min = 0.0;
  double tail_window_max = 0.0;
  // Smallest n attaining each extremum (deterministic tie-break).
  std::int64_t tail_argmin = 0;
  std::int64_t tail_argmax = 0;

  bool has_exponents() const { return !norm_exponents.empty(); }
};

CesaroSeries cesaro_series(const ShiftOperator& T, const SupportedVector& x, const SpaceTag& space,
                           std::int64_t horizon, std::int64_t window);

// Max over n <= N-q of |S_{n+q}(x) - S_q(x) - S_n(T^q x)| / max(1, S_{n+q}(x)).
// Computed over exact accumulators (result exactly 0) when both orbits are
// exact; literal floating evaluation otherwise.
double tail_shift_identity_check(const ShiftOperator& T, const SupportedVector& x,
                                 const SpaceTag& space, std::int64_t q, std::int64_t horizon);

// Exact prefix counts of a subset of {1..N} with windowed density estimates:
// udens/ldens are the max/min of count/n over the tail window [N-W+1, N].
struct DensityEstimate {
  std::int64_t horizon = 0;
  std::int64_t window = 0;
  std::vector<std::int64_t> count_prefix;  // count_prefix[n-1] = #(A cap [1, n])
  double udens_estimate = 0.0;
  double ldens_estimate = 0.0;
};

// Explicit members, strictly increasing, all >= 1 (members beyond N ignored).
DensityEstimate density(const std::vector<std::int64_t>& sorted_members, std::int64_t horizon,
                        std::int64_t window);
DensityEstimate density(const std::function<bool(std::int64_t)>& member, std::int64_t horizon,
                        std::int64_t window);

// Densities of the exceedance set {n <= N : ||T^n x|| >= epsilon} plus the
// induced bound liminf A_n >= epsilon * ldens.
struct ExceedanceReport {
  double epsilon = 0.0;
  DensityEstimate densities;
  double liminf_lower_bound = 0.0;
};

ExceedanceReport exceedance_density(const ShiftOperator& T, const SupportedVector& x,
                                    const SpaceTag& space, double epsilon, std::int64_t horizon,
                                    std::int64_t window);

}  // namespace shiftlab
