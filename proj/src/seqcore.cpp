#include "shiftlab/seqcore.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <utility>

namespace shiftlab {

namespace {

// Neumaier variant of Kahan summation: accumulates into (sum, comp).
void compensated_add(double& sum, double& comp, double term) {
  const double t = sum + term;
  if (!std::isfinite(t)) {
    // Saturated: the correction term would be inf - inf. Keep the signed
    // infinity (or NaN for opposing infinities) and drop the compensation.
    sum = t;
    comp = 0.0;
    return;
  }
  if (std::abs(sum) >= std::abs(term)) {
    comp += (sum - t) + term;
  } else {
    comp += (term - t) + sum;
  }
  sum = t;
}

std::int64_t checked_exponent_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw CapacityError("exact product exponent overflows the 64-bit accumulator");
  }
  return out;
}

}  // namespace

std::string to_string(Side side) {
  return side == Side::Unilateral ? "unilateral" : "bilateral";
}

bool is_power_of_two(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return false;
  int exp = 0;
  return std::frexp(v, &exp) == 0.5;
}

int floor_log2(std::uint64_t t) {
  return std::bit_width(t) - 1;
}

DyadicLog DyadicLog::one() { return DyadicLog{}; }

DyadicLog DyadicLog::from_exponent(std::int64_t e) {
  DyadicLog out;
  out.exponent = e;
  out.exact = true;
  out.float_log2 = static_cast<double>(e);
  return out;
}

DyadicLog DyadicLog::from_positive_value(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError("DyadicLog requires a positive finite value");
  }
  DyadicLog out;
  if (is_power_of_two(v)) {
    out.exponent = std::ilogb(v);
    out.exact = true;
    out.float_log2 = static_cast<double>(out.exponent);
  } else {
    out.exact = false;
    out.exponent = 0;
    out.float_log2 = std::log2(v);
  }
  return out;
}

double DyadicLog::value() const {
  if (exact) {
    if (exponent < -1100) return 0.0;
    if (exponent > 1100) return std::numeric_limits<double>::infinity();
    return std::ldexp(1.0, static_cast<int>(exponent));
  }
  return std::exp2(float_log2);
}

DyadicLog& DyadicLog::operator*=(const DyadicLog& rhs) {
  if (exact && rhs.exact) {
    exponent = checked_exponent_add(exponent, rhs.exponent);
    float_log2 = static_cast<double>(exponent);
    return *this;
  }
  exact = false;
  float_log2 = float_log2 + rhs.float_log2;
  exponent = 0;
  return *this;
}

BlockBounds block_bounds(std::int64_t i) {
  if (i <= 0) throw DomainError("block index must be >= 1");
  if (i > kMaxBlockIndex) {
    throw CapacityError("block index " + std::to_string(i) + " exceeds the supported cap " +
                        std::to_string(kMaxBlockIndex));
  }
  BlockBounds out;
  out.i = i;
  out.a = std::int64_t{1} << (2 + i);
  out.b = out.a + 2 * i - 1;
  out.c = out.b + 2 * i;
  return out;
}

WeightSpec WeightSpec::constant(double lambda, Side side) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("constant weight requires lambda > 0");
  }
  WeightSpec w;
  w.kind_ = Kind::Constant;
  w.side_ = side;
  w.param_ = lambda;
  w.dyadic_ = is_power_of_two(lambda);
  return w;
}

WeightSpec WeightSpec::rolewicz(double lambda) {
  if (!(std::abs(lambda) > 1.0) || !std::isfinite(lambda)) {
    throw DomainError("rolewicz requires |lambda| > 1");
  }
  WeightSpec w;
  w.kind_ = Kind::Rolewicz;
  w.side_ = Side::Unilateral;
  w.param_ = lambda;
  w.dyadic_ = is_power_of_two(std::abs(lambda));
  return w;
}

WeightSpec WeightSpec::paper_blocks() {
  WeightSpec w;
  w.kind_ = Kind::PaperBlocks;
  w.side_ = Side::Bilateral;
  w.dyadic_ = true;
  return w;
}

WeightSpec WeightSpec::ratio_power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("ratio_power requires p > 1");
  }
  WeightSpec w;
  w.kind_ = Kind::RatioPower;
  w.side_ = Side::Unilateral;
  w.param_ = p;
  w.dyadic_ = false;
  return w;
}

WeightSpec WeightSpec::table(std::map<std::int64_t, double> entries, double default_value,
                             Side side) {
  if (!(default_value > 0.0) || !std::isfinite(default_value)) {
    throw DomainError("table default weight must be > 0");
  }
  WeightSpec w;
  w.kind_ = Kind::Table;
  w.side_ = side;
  w.default_ = default_value;
  w.dyadic_ = is_power_of_two(default_value);
  for (const auto& [j, v] : entries) {
    if (side == Side::Unilateral && j < 1) {
      throw DomainError("table entry index " + std::to_string(j) +
                        " outside the unilateral domain");
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("table weight at index " + std::to_string(j) + " must be > 0");
    }
    w.dyadic_ = w.dyadic_ && is_power_of_two(v);
  }
  w.table_ = std::move(entries);
  return w;
}

WeightSpec WeightSpec::product_profile_dyadic(std::map<std::int64_t, std::int64_t> exponents,
                                              Side side) {
  WeightSpec w;
  w.kind_ = Kind::ProductProfileDyadic;
  w.side_ = side;
  w.dyadic_ = true;
  for (const auto& [j, e] : exponents) {
    if (side == Side::Unilateral && j < 1) {
      throw DomainError("exponent entry index " + std::to_string(j) +
                        " outside the unilateral domain");
    }
    if (e < -1000 || e > 1000) {
      throw DomainError("dyadic exponent at index " + std::to_string(j) +
                        " outside [-1000, 1000]");
    }
  }
  w.profile_ = std::move(exponents);
  return w;
}

bool WeightSpec::in_domain(std::int64_t j) const {
  return side_ == Side::Bilateral || j >= 1;
}

void WeightSpec::require_in_domain(std::int64_t j) const {
  if (!in_domain(j)) {
    throw DomainError("index " + std::to_string(j) + " outside the " + to_string(side_) +
                      " weight domain");
  }
}

namespace {

// Blockwise weight of the paper_blocks family at index j,
// returned as the dyadic exponent (-1, 0 or 1).
int paper_blocks_exponent(std::int64_t j) {
  if (j > 0) return 1;
  // Modular negation: well-defined even for the most negative index.
  const std::uint64_t t = std::uint64_t{0} - static_cast<std::uint64_t>(j);
  if (t < 9) return 0;                                     // below a_1 + 1
  const std::int64_t i = floor_log2(t) - 2;
  if (i > kMaxBlockIndex) {
    throw CapacityError("paper_blocks weight index " + std::to_string(j) +
                        " lies beyond the supported block cap");
  }
  const BlockBounds bb = block_bounds(i);
  const std::int64_t ti = static_cast<std::int64_t>(t);
  if (ti >= bb.a + 1 && ti <= bb.b) return -1;
  if (ti >= bb.b + 1 && ti <= bb.c) return 1;
  return 0;
}

}  // namespace

double WeightSpec::weight(std::int64_t j) const {
  require_in_domain(j);
  switch (kind_) {
    case Kind::Constant:
      return param_;
    case Kind::Rolewicz:
      return std::abs(param_);
    case Kind::PaperBlocks:
      return std::ldexp(1.0, paper_blocks_exponent(j));
    case Kind::RatioPower:
      return std::pow((static_cast<double>(j) + 1.0) / static_cast<double>(j), 1.0 / param_);
    case Kind::Table: {
      auto it = table_.find(j);
      return it == table_.end() ? default_ : it->second;
    }
    case Kind::ProductProfileDyadic: {
      auto it = profile_.find(j);
      return it == profile_.end() ? 1.0 : std::ldexp(1.0, static_cast<int>(it->second));
    }
  }
  throw Error("unreachable weight kind");
}

DyadicLog WeightSpec::weight_log(std::int64_t j) const {
  require_in_domain(j);
  switch (kind_) {
    case Kind::PaperBlocks:
      return DyadicLog::from_exponent(paper_blocks_exponent(j));
    case Kind::ProductProfileDyadic: {
      auto it = profile_.find(j);
      return DyadicLog::from_exponent(it == profile_.end() ? 0 : it->second);
    }
    default:
      return DyadicLog::from_positive_value(weight(j));
  }
}

ProductCursor::ProductCursor(const WeightSpec& spec, std::int64_t anchor, Direction direction)
    : spec_(&spec), direction_(direction), next_(anchor) {}

DyadicLog ProductCursor::current() const {
  if (exact_) return DyadicLog::from_exponent(exponent_);
  DyadicLog out;
  out.exact = false;
  out.exponent = 0;
  out.float_log2 = log_sum_ + log_comp_;
  return out;
}

DyadicLog ProductCursor::advance() {
  const std::int64_t j = next_;
  const DyadicLog w = spec_->weight_log(j);
  if (exact_ && w.exact) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(exponent_, w.exponent, &out)) {
      throw CapacityError("product exponent overflow while absorbing index " + std::to_string(j));
    }
    exponent_ = out;
  } else {
    if (exact_) {
      log_sum_ = static_cast<double>(exponent_);
      log_comp_ = 0.0;
      exact_ = false;
    }
    compensated_add(log_sum_, log_comp_, w.float_log2);
  }
  next_ += direction_ == Direction::Down ? -1 : 1;
  ++length_;
  return current();
}

DyadicLog product_range(const WeightSpec& spec, std::int64_t j_lo, std::int64_t j_hi) {
  if (j_lo == j_hi + 1) return DyadicLog::one();
  if (j_lo > j_hi) {
    throw DomainError("product_range requires j_lo <= j_hi (or j_lo == j_hi + 1 for empty)");
  }
  spec.require_in_domain(j_lo);
  spec.require_in_domain(j_hi);
  ProductCursor cursor(spec, j_hi, ProductCursor::Direction::Down);
  while (cursor.next_index() >= j_lo) cursor.advance();
  return cursor.current();
}

}  // namespace shiftlab
