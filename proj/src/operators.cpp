#include "shiftlab/operators.hpp"

#include <cmath>
#include <string>

namespace shiftlab {

namespace {

void require_same_side(const ShiftOperator& T, const SupportedVector& v, const char* op_name) {
  if (T.side() != v.side()) {
    throw DomainError(std::string(op_name) + " requires the vector side to match the operator");
  }
}

// Norm of c * e_j given the exact windowed weight product 2^exponent.
// Guards the ldexp range so exact values never denormalize or overflow.
double exact_scaled_norm(double coefficient_abs, std::int64_t exponent, std::int64_t step) {
  const std::int64_t coeff_exp = coefficient_abs == 0.0 ? 0 : std::ilogb(coefficient_abs);
  if (exponent + coeff_exp > 1020 || exponent + coeff_exp < -1020) {
    throw CapacityError("exact orbit-norm exponent leaves double range at step " +
                        std::to_string(step));
  }
  return std::ldexp(coefficient_abs, static_cast<int>(exponent));
}

}  // namespace

SupportedVector apply(const ShiftOperator& T, const SupportedVector& v) {
  require_same_side(T, v, "apply");
  const WeightSpec& w = T.weights();
  SupportedVector out(v.side());
  for (const auto& [j, c] : v.entries()) {
    if (v.side() == Side::Unilateral && j == 1) continue;  // B e_1 = 0
    out.set(j - 1, w.weight(j) * c);
  }
  return out;
}

SupportedVector right_inverse_apply(const RightInverse& S, const SupportedVector& v) {
  const ShiftOperator& T = S.of();
  require_same_side(T, v, "right_inverse_apply");
  const WeightSpec& w = T.weights();
  SupportedVector out(v.side());
  for (const auto& [j, c] : v.entries()) {
    out.set(j + 1, c / w.weight(j + 1));
  }
  return out;
}

NormSequence iterate_norms(const ShiftOperator& T, const SupportedVector& v, const SpaceTag& space,
                           std::int64_t horizon) {
  if (horizon < 1) throw ConfigError("iterate_norms requires horizon >= 1");
  require_same_side(T, v, "iterate_norms");

  NormSequence out;
  out.values.reserve(static_cast<std::size_t>(horizon));

  if (v.empty()) {
    out.values.assign(static_cast<std::size_t>(horizon), 0.0);
    out.exact = true;
    return out;
  }

  if (v.support_size() == 1) {
    // T^i (c e_j) = c * (prod_{m=j-i+1}^{j} w_m) e_{j-i}; a Down cursor
    // anchored at j absorbs exactly that window one factor per step.
    const std::int64_t j = v.entries().begin()->first;
    const double c_abs = std::abs(v.entries().begin()->second);
    const bool pure_power = c_abs == 1.0 && T.weights().dyadic();
    out.exact = T.weights().dyadic();
    if (pure_power) out.exponents.reserve(static_cast<std::size_t>(horizon));

    ProductCursor cursor(T.weights(), j, ProductCursor::Direction::Down);
    bool dead = false;
    for (std::int64_t i = 1; i <= horizon; ++i) {
      // Unilateral: T^i e_j lands on e_{j-i}, which must stay >= 1.
      if (!dead && v.side() == Side::Unilateral && j - i < 1) dead = true;
      if (dead) {
        out.values.push_back(0.0);
        if (pure_power) out.exponents.push_back(0);
        continue;
      }
      const DyadicLog prod = cursor.advance();
      if (prod.exact) {
        out.values.push_back(exact_scaled_norm(c_abs, prod.exponent, i));
        if (pure_power) out.exponents.push_back(prod.exponent);
      } else {
        out.exact = false;
        out.values.push_back(c_abs * std::exp2(prod.float_log2));
      }
    }
    if (!out.exact) out.exponents.clear();
    return out;
  }

  // General path: repeated apply with a per-step norm.
  SupportedVector u = v;
  for (std::int64_t i = 1; i <= horizon; ++i) {
    if (u.empty()) {
      out.values.resize(static_cast<std::size_t>(horizon), 0.0);
      break;
    }
    u = apply(T, u);
    out.values.push_back(norm(u, space));
  }
  out.values.resize(static_cast<std::size_t>(horizon), 0.0);
  out.exact = false;
  return out;
}

namespace {

struct DenseWindow {
  std::int64_t radius = 0;
  Side side = Side::Bilateral;

  std::int64_t dim() const { return side == Side::Bilateral ? 2 * radius + 1 : radius; }
  std::int64_t to_slot(std::int64_t j) const { return side == Side::Bilateral ? j + radius : j - 1; }
  std::int64_t to_index(std::int64_t slot) const {
    return side == Side::Bilateral ? slot - radius : slot + 1;
  }
  bool contains(std::int64_t j) const {
    return side == Side::Bilateral ? (j >= -radius && j <= radius) : (j >= 1 && j <= radius);
  }
};

class DenseOracle {
 public:
  DenseOracle(const ShiftOperator& T, const SupportedVector& v, std::int64_t truncation_radius)
      : window_{truncation_radius, T.side()} {
    if (truncation_radius < 1) throw ConfigError("truncation radius must be >= 1");
    require_same_side(T, v, "truncated matrix oracle");
    const std::int64_t d = window_.dim();
    matrix_.assign(static_cast<std::size_t>(d * d), 0.0);
    // Column j feeds row j-1 with weight w_j; the unilateral column 1 is
    // empty (annihilation), and the bilateral column -K has no in-window row.
    for (std::int64_t j = window_.to_index(0) + 1; j <= window_.to_index(d - 1); ++j) {
      matrix_[static_cast<std::size_t>(window_.to_slot(j - 1) * d + window_.to_slot(j))] =
          T.weights().weight(j);
    }
    state_.assign(static_cast<std::size_t>(d), 0.0);
    for (const auto& [j, c] : v.entries()) {
      if (!window_.contains(j)) {
        throw TruncationError("initial support index " + std::to_string(j) +
                              " lies outside the truncation window");
      }
      state_[static_cast<std::size_t>(window_.to_slot(j))] = c;
    }
  }

  void step(std::int64_t step_number) {
    const std::int64_t d = window_.dim();
    if (window_.side == Side::Bilateral && state_[0] != 0.0) {
      throw TruncationError("orbit mass reaches the window edge at step " +
                            std::to_string(step_number) + "; enlarge the truncation radius");
    }
    std::vector<double> next(static_cast<std::size_t>(d), 0.0);
    for (std::int64_t r = 0; r < d; ++r) {
      double acc = 0.0;
      const double* row = matrix_.data() + r * d;
      for (std::int64_t c = 0; c < d; ++c) acc += row[c] * state_[static_cast<std::size_t>(c)];
      next[static_cast<std::size_t>(r)] = acc;
    }
    state_ = std::move(next);
  }

  SupportedVector to_vector() const {
    SupportedVector out(window_.side);
    for (std::int64_t slot = 0; slot < window_.dim(); ++slot) {
      const double c = state_[static_cast<std::size_t>(slot)];
      if (c != 0.0) out.set(window_.to_index(slot), c);
    }
    return out;
  }

  double state_norm(const SpaceTag& space) const { return norm(to_vector(), space); }

 private:
  DenseWindow window_;
  std::vector<double> matrix_;
  std::vector<double> state_;
};

}  // namespace

SupportedVector truncated_matrix_apply_power(const ShiftOperator& T, const SupportedVector& v,
                                             std::int64_t power, std::int64_t truncation_radius) {
  if (power < 0) throw ConfigError("power must be >= 0");
  DenseOracle oracle(T, v, truncation_radius);
  for (std::int64_t i = 1; i <= power; ++i) oracle.step(i);
  return oracle.to_vector();
}

std::vector<double> truncated_matrix_norm_sequence(const ShiftOperator& T,
                                                   const SupportedVector& v, const SpaceTag& space,
                                                   std::int64_t horizon,
                                                   std::int64_t truncation_radius) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  DenseOracle oracle(T, v, truncation_radius);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t i = 1; i <= horizon; ++i) {
    oracle.step(i);
    out.push_back(oracle.state_norm(space));
  }
  return out;
}

}  // namespace shiftlab
