#include "shiftlab/orbitstats.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace shiftlab {

namespace {

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

// Absolute value headroom guard for the 128-bit mantissa: keeping magnitudes
// below 2^110 leaves room for both the running sum and any single addend.
const __int128 kMantissaLimit = static_cast<__int128>(1) << 110;

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

int bit_length_128(__int128 v) {
  const unsigned __int128 u = static_cast<unsigned __int128>(abs128(v));
  const std::uint64_t hi = static_cast<std::uint64_t>(u >> 64);
  const std::uint64_t lo = static_cast<std::uint64_t>(u);
  if (hi != 0) return 64 + std::bit_width(hi);
  return std::bit_width(lo);
}

// v << shift while staying strictly below kMantissaLimit; false on overflow.
bool shift_within_limit(__int128& v, std::int64_t shift) {
  if (v == 0) return true;
  if (shift + bit_length_128(v) > 110) return false;
  v <<= shift;
  return true;
}

}  // namespace

void ExactDyadicSum::saturate() {
  if (saturated_) return;
  float_sum_ = value();
  float_comp_ = 0.0;
  saturated_ = true;
}

void ExactDyadicSum::add(double v) {
  if (v == 0.0) return;
  if (!std::isfinite(v)) {
    saturate();
    compensated_add(float_sum_, float_comp_, v);
    return;
  }
  if (saturated_) {
    compensated_add(float_sum_, float_comp_, v);
    return;
  }
  int e = 0;
  const double f = std::frexp(v, &e);          // v = f * 2^e, |f| in [0.5, 1)
  const double m_d = std::ldexp(f, 53);        // 53-bit integer, exact
  const std::int64_t m = static_cast<std::int64_t>(m_d);
  const std::int32_t s = static_cast<std::int32_t>(e) - 53;

  if (mantissa_ == 0) {
    mantissa_ = m;
    scale_ = s;
    return;
  }
  __int128 addend = m;
  if (s >= scale_) {
    if (!shift_within_limit(addend, static_cast<std::int64_t>(s) - scale_)) {
      saturate();
      compensated_add(float_sum_, float_comp_, v);
      return;
    }
  } else {
    if (!shift_within_limit(mantissa_, static_cast<std::int64_t>(scale_) - s)) {
      saturate();
      compensated_add(float_sum_, float_comp_, v);
      return;
    }
    scale_ = s;
  }
  mantissa_ += addend;  // both sides < 2^110, no overflow at 127 bits
}

double ExactDyadicSum::value() const {
  if (saturated_) return float_sum_ + float_comp_;
  // One correctly-rounded conversion, then an exact scale.
  return std::ldexp(static_cast<double>(mantissa_), scale_);
}

CesaroSeries cesaro_series(const ShiftOperator& T, const SupportedVector& x, const SpaceTag& space,
                           std::int64_t horizon, std::int64_t window) {
  if (horizon < 1 || window < 1 || window > horizon) {
    throw ConfigError("cesaro_series requires horizon >= window >= 1");
  }
  NormSequence ns = iterate_norms(T, x, space, horizon);

  CesaroSeries out;
  out.horizon = horizon;
  out.window = window;
  out.norms = std::move(ns.values);
  out.norm_exponents = std::move(ns.exponents);
  out.partial_sums.reserve(static_cast<std::size_t>(horizon));
  out.averages.reserve(static_cast<std::size_t>(horizon));

  ExactDyadicSum exact_acc;
  double float_sum = 0.0;
  double float_comp = 0.0;
  const bool use_exact = ns.exact;

  out.tail_window_min = std::numeric_limits<double>::infinity();
  out.tail_window_max = -std::numeric_limits<double>::infinity();
  const std::int64_t tail_start = horizon - window + 1;

  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double norm_n = out.norms[static_cast<std::size_t>(n - 1)];
    double s = 0.0;
    if (use_exact) {
      exact_acc.add(norm_n);
      s = exact_acc.value();
    } else {
      compensated_add(float_sum, float_comp, norm_n);
      s = float_sum + float_comp;
    }
    const double a = s / static_cast<double>(n);
    out.partial_sums.push_back(s);
    out.averages.push_back(a);
    if (n >= tail_start) {
      if (a < out.tail_window_min) {
        out.tail_window_min = a;
        out.tail_argmin = n;
      }
      if (a > out.tail_window_max) {
        out.tail_window_max = a;
        out.tail_argmax = n;
      }
    }
  }
  out.exact = use_exact && exact_acc.exact();
  return out;
}

double tail_shift_identity_check(const ShiftOperator& T, const SupportedVector& x,
                                 const SpaceTag& space, std::int64_t q, std::int64_t horizon) {
  if (q < 1 || q >= horizon) {
    throw ConfigError("tail_shift_identity_check requires 1 <= q < horizon");
  }
  const NormSequence nx = iterate_norms(T, x, space, horizon);
  SupportedVector y = x;
  for (std::int64_t i = 0; i < q; ++i) y = apply(T, y);
  const NormSequence ny = iterate_norms(T, y, space, horizon - q);

  if (nx.exact && ny.exact) {
    // Stream the rearranged difference sum_{i=q+1}^{q+n} ||T^i x|| -
    // sum_{i=1}^{n} ||T^i y|| in one exact accumulator; the identity holds
    // exactly iff it stays at zero.
    ExactDyadicSum diff;
    ExactDyadicSum s_total;
    for (std::int64_t i = 1; i <= q; ++i) s_total.add(nx.values[static_cast<std::size_t>(i - 1)]);
    double worst = 0.0;
    for (std::int64_t n = 1; n <= horizon - q; ++n) {
      diff.add(nx.values[static_cast<std::size_t>(q + n - 1)]);
      diff.add(-ny.values[static_cast<std::size_t>(n - 1)]);
      s_total.add(nx.values[static_cast<std::size_t>(q + n - 1)]);
      if (diff.exact() && diff.is_zero()) continue;
      const double denom = std::max(1.0, s_total.value());
      worst = std::max(worst, std::abs(diff.value()) / denom);
    }
    return worst;
  }

  // Literal floating evaluation of the defining identity on compensated prefixes.
  std::vector<double> sx(static_cast<std::size_t>(horizon) + 1, 0.0);
  std::vector<double> sy(static_cast<std::size_t>(horizon - q) + 1, 0.0);
  double sum = 0.0;
  double comp = 0.0;
  for (std::int64_t i = 1; i <= horizon; ++i) {
    compensated_add(sum, comp, nx.values[static_cast<std::size_t>(i - 1)]);
    sx[static_cast<std::size_t>(i)] = sum + comp;
  }
  sum = 0.0;
  comp = 0.0;
  for (std::int64_t i = 1; i <= horizon - q; ++i) {
    compensated_add(sum, comp, ny.values[static_cast<std::size_t>(i - 1)]);
    sy[static_cast<std::size_t>(i)] = sum + comp;
  }
  double worst = 0.0;
  for (std::int64_t n = 1; n <= horizon - q; ++n) {
    const double lhs = sx[static_cast<std::size_t>(n + q)];
    const double d = lhs - sx[static_cast<std::size_t>(q)] - sy[static_cast<std::size_t>(n)];
    worst = std::max(worst, std::abs(d) / std::max(1.0, lhs));
  }
  return worst;
}

namespace {

DensityEstimate finish_density(std::vector<std::int64_t> prefix, std::int64_t horizon,
                               std::int64_t window) {
  DensityEstimate out;
  out.horizon = horizon;
  out.window = window;
  out.count_prefix = std::move(prefix);
  out.udens_estimate = 0.0;
  out.ldens_estimate = std::numeric_limits<double>::infinity();
  for (std::int64_t n = horizon - window + 1; n <= horizon; ++n) {
    const double ratio = static_cast<double>(out.count_prefix[static_cast<std::size_t>(n - 1)]) /
                         static_cast<double>(n);
    out.udens_estimate = std::max(out.udens_estimate, ratio);
    out.ldens_estimate = std::min(out.ldens_estimate, ratio);
  }
  return out;
}

void require_density_dims(std::int64_t horizon, std::int64_t window) {
  if (horizon < 1 || window < 1 || window > horizon) {
    throw ConfigError("density requires horizon >= window >= 1");
  }
}

}  // namespace

DensityEstimate density(const std::vector<std::int64_t>& sorted_members, std::int64_t horizon,
                        std::int64_t window) {
  require_density_dims(horizon, window);
  std::int64_t previous = 0;
  for (const std::int64_t m : sorted_members) {
    if (m < 1) throw DomainError("density members must be >= 1");
    if (m <= previous) throw DomainError("density members must be strictly increasing");
    previous = m;
  }
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(horizon), 0);
  std::int64_t count = 0;
  std::size_t at = 0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    if (at < sorted_members.size() && sorted_members[at] == n) {
      ++count;
      ++at;
    }
    prefix[static_cast<std::size_t>(n - 1)] = count;
  }
  return finish_density(std::move(prefix), horizon, window);
}

DensityEstimate density(const std::function<bool(std::int64_t)>& member, std::int64_t horizon,
                        std::int64_t window) {
  require_density_dims(horizon, window);
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(horizon), 0);
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    if (member(n)) ++count;
    prefix[static_cast<std::size_t>(n - 1)] = count;
  }
  return finish_density(std::move(prefix), horizon, window);
}

ExceedanceReport exceedance_density(const ShiftOperator& T, const SupportedVector& x,
                                    const SpaceTag& space, double epsilon, std::int64_t horizon,
                                    std::int64_t window) {
  if (!(epsilon > 0.0)) throw ConfigError("exceedance_density requires epsilon > 0");
  require_density_dims(horizon, window);
  const NormSequence ns = iterate_norms(T, x, space, horizon);
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(horizon), 0);
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    if (ns.values[static_cast<std::size_t>(n - 1)] >= epsilon) ++count;
    prefix[static_cast<std::size_t>(n - 1)] = count;
  }
  ExceedanceReport out;
  out.epsilon = epsilon;
  out.densities = finish_density(std::move(prefix), horizon, window);
  out.liminf_lower_bound = epsilon * out.densities.ldens_estimate;
  return out;
}

}  // namespace shiftlab
