#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "shiftlab/errors.hpp"

namespace shiftlab {

enum class Side { Unilateral, Bilateral };

std::string to_string(Side side);

// True iff v is an exact power of two (positive, finite, mantissa 1).
bool is_power_of_two(double v);

// floor(log2(t)) for t >= 1.
int floor_log2(std::uint64_t t);

// A weight product in log2 domain. While every absorbed factor is an exact
// power of two the product is carried as an integer exponent; otherwise it
// degrades to a floating log2 value. float_log2 is always the log2 of the
// represented value (exactly equal to `exponent` while `exact`).
struct DyadicLog {
  std::int64_t exponent = 0;
  bool exact = true;
  double float_log2 = 0.0;

  static DyadicLog one();
  static DyadicLog from_exponent(std::int64_t e);
  static DyadicLog from_positive_value(double v);  // DomainError unless v > 0 and finite

  // 2^float_log2. Saturates to 0 / +inf when the exponent leaves double range.
  double value() const;

  DyadicLog& operator*=(const DyadicLog& rhs);  // CapacityError on exact-exponent overflow
  friend DyadicLog operator*(DyadicLog a, const DyadicLog& b) {
    a *= b;
    return a;
  }
};

// Block i of the block-dyadic weight family: a = 2^(2+i), b = a + 2i - 1,
// c = b + 2i. Blocks never overlap (c <= 2^(3+i) = a_{i+1}).
struct BlockBounds {
  std::int64_t i = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
};

// Largest supported block index; a_i for i beyond this would leave the range
// the library treats as desk-scale (horizons past 2^42).
inline constexpr std::int64_t kMaxBlockIndex = 40;

BlockBounds block_bounds(std::int64_t i);  // DomainError i <= 0, CapacityError i > kMaxBlockIndex

// A positive weight sequence over Z (bilateral) or {1, 2, ...} (unilateral).
// Immutable after construction; all accessors are pure and thread-safe.
class WeightSpec {
 public:
  enum class Kind { Constant, Rolewicz, PaperBlocks, RatioPower, Table, ProductProfileDyadic };

  // w_j = lambda for all j; lambda > 0.
  static WeightSpec constant(double lambda, Side side);
  // Scalar multiple of the unilateral backward shift; |lambda| > 1. Weights
  // are |lambda| (signs do not affect orbit norms); lambda echoed as given.
  static WeightSpec rolewicz(double lambda);
  // The bilateral block-dyadic family: w_j = 2 for j > 0; on the negative
  // side, w_{-t} = 1/2 for a_i+1 <= t <= b_i, 2 for b_i+1 <= t <= c_i, and 1
  // otherwise (including w_0 = 1).
  static WeightSpec paper_blocks();
  // w_k = ((k+1)/k)^(1/p), p > 1, unilateral.
  static WeightSpec ratio_power(double p);
  // Explicit positive entries with a positive default elsewhere.
  static WeightSpec table(std::map<std::int64_t, double> entries, double default_value, Side side);
  // Weights given by dyadic exponents: w_j = 2^(exponents[j]), default 2^0.
  static WeightSpec product_profile_dyadic(std::map<std::int64_t, std::int64_t> exponents,
                                           Side side);

  Kind kind() const { return kind_; }
  Side side() const { return side_; }
  // True iff every weight of this family is an exact power of two.
  bool dyadic() const { return dyadic_; }
  // lambda for constant/rolewicz, p for ratio_power; 0 otherwise.
  double parameter() const { return param_; }
  const std::map<std::int64_t, double>& table_entries() const { return table_; }
  double table_default() const { return default_; }
  const std::map<std::int64_t, std::int64_t>& profile_exponents() const { return profile_; }

  bool in_domain(std::int64_t j) const;
  void require_in_domain(std::int64_t j) const;  // DomainError when outside

  double weight(std::int64_t j) const;
  DyadicLog weight_log(std::int64_t j) const;

 private:
  WeightSpec() = default;

  Kind kind_ = Kind::Constant;
  Side side_ = Side::Bilateral;
  bool dyadic_ = true;
  double param_ = 0.0;
  std::map<std::int64_t, double> table_;
  std::map<std::int64_t, std::int64_t> profile_;
  double default_ = 1.0;
};

// Incremental product over a contiguous index window, extended one index per
// advance() call. Down cursors grow the window [pos, anchor] downward from an
// empty product; Up cursors grow [anchor, pos] upward. Exact integer exponents
// while all absorbed weights are powers of two; Neumaier-compensated log2
// accumulation afterwards. Single-owner object, not shareable across threads.
class ProductCursor {
 public:
  enum class Direction { Down, Up };

  ProductCursor(const WeightSpec& spec, std::int64_t anchor, Direction direction);

  DyadicLog current() const;
  // Index the next advance() will absorb.
  std::int64_t next_index() const { return next_; }
  // Number of weights absorbed so far.
  std::int64_t length() const { return length_; }
  DyadicLog advance();

 private:
  const WeightSpec* spec_;
  Direction direction_;
  std::int64_t next_ = 0;
  std::int64_t length_ = 0;
  bool exact_ = true;
  std::int64_t exponent_ = 0;
  double log_sum_ = 0.0;
  double log_comp_ = 0.0;
};

// Product over [j_lo, j_hi]; the empty range is permitted via j_lo == j_hi + 1
// and yields 1. Exact integer exponent when every weight in range is a power
// of two, compensated floating log2 otherwise.
DyadicLog product_range(const WeightSpec& spec, std::int64_t j_lo, std::int64_t j_hi);

}  // namespace shiftlab
