#pragma once

#include <cstdint>
#include <vector>

#include "shiftlab/seqcore.hpp"
#include "shiftlab/vectors.hpp"

namespace shiftlab {

// Weighted backward shift: bilaterally B e_j = w_j e_{j-1}; unilaterally
// B e_1 = 0 and B e_k = w_k e_{k-1} for k >= 2. Immutable.
class ShiftOperator {
 public:
  explicit ShiftOperator(WeightSpec weights) : weights_(std::move(weights)) {}

  const WeightSpec& weights() const { return weights_; }
  Side side() const { return weights_.side(); }

 private:
  WeightSpec weights_;
};

// Formal right inverse S e_k = e_{k+1} / w_{k+1}; applying the shift after S
// restores the input on every finitely supported vector. No boundedness is
// implied (S is unbounded for block-dyadic weights).
class RightInverse {
 public:
  explicit RightInverse(ShiftOperator op) : op_(std::move(op)) {}

  const ShiftOperator& of() const { return op_; }

 private:
  ShiftOperator op_;
};

SupportedVector apply(const ShiftOperator& T, const SupportedVector& v);
SupportedVector right_inverse_apply(const RightInverse& S, const SupportedVector& v);

// Orbit norms ||T^i v|| for i = 1..horizon. `exact` marks sequences whose
// values are exact doubles (single-support vector under an all-dyadic weight
// spec); `exponents` is filled when additionally every nonzero norm is a pure
// power of two (entries are meaningful only where values[i] > 0).
struct NormSequence {
  std::vector<double> values;
  bool exact = false;
  std::vector<std::int64_t> exponents;

  bool has_exponents() const { return !exponents.empty(); }
};

// Single-support vectors ride an incremental product cursor (O(horizon),
// exact in integer exponents for dyadic specs); general vectors fall back to
// repeated apply with a per-step norm. CapacityError (with the step index)
// when an exact exponent leaves the representable double range.
NormSequence iterate_norms(const ShiftOperator& T, const SupportedVector& v, const SpaceTag& space,
                           std::int64_t horizon);

// Brute-force oracle: builds the dense matrix of T restricted to the window
// [-K, K] (bilateral) or [1, K] (unilateral) and applies it `power` times.
// TruncationError if the initial support lies outside the window or orbit
// mass would cross the bottom edge of a bilateral window.
SupportedVector truncated_matrix_apply_power(const ShiftOperator& T, const SupportedVector& v,
                                             std::int64_t power, std::int64_t truncation_radius);

// Same dense core, recording the norm after each of the `horizon` steps.
std::vector<double> truncated_matrix_norm_sequence(const ShiftOperator& T,
                                                   const SupportedVector& v, const SpaceTag& space,
                                                   std::int64_t horizon,
                                                   std::int64_t truncation_radius);

}  // namespace shiftlab
