#include "shiftlab/kernels.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shiftlab::kernels {

namespace {

// Exceptions may not leave an OpenMP region; capture the first one and
// rethrow it on the calling thread.
class ExceptionCollector {
 public:
  template <typename Fn>
  void run(Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      const std::lock_guard<std::mutex> lock(mutex_);
      if (!first_) first_ = std::current_exception();
    }
  }

  void rethrow_if_any() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr first_;
};

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

// Index absorbed at profile step n (n >= 1): -n bilaterally, n unilaterally.
std::int64_t step_index(const WeightSpec& spec, std::int64_t n) {
  return spec.side() == Side::Bilateral ? -n : n;
}

std::int64_t base_exponent(const WeightSpec& spec) {
  // Bilateral profiles start at the single factor w_0; unilateral at the
  // empty product.
  return spec.side() == Side::Bilateral ? spec.weight_log(0).exponent : 0;
}

void require_profile_args(const WeightSpec& spec, std::int64_t n_max) {
  if (!spec.dyadic()) {
    throw DomainError("exponent profiles are defined only for all-dyadic weight specs");
  }
  if (n_max < 0) throw ConfigError("exponent profile requires n_max >= 0");
}

}  // namespace

std::vector<std::int64_t> exponent_profile_serial(const WeightSpec& spec, std::int64_t n_max) {
  require_profile_args(spec, n_max);
  std::vector<std::int64_t> out(static_cast<std::size_t>(n_max) + 1, 0);
  std::int64_t acc = base_exponent(spec);
  out[0] = acc;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    acc += spec.weight_log(step_index(spec, n)).exponent;
    out[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

std::vector<std::int64_t> exponent_profile(const WeightSpec& spec, std::int64_t n_max) {
  require_profile_args(spec, n_max);
  std::vector<std::int64_t> out(static_cast<std::size_t>(n_max) + 1, 0);
  out[0] = base_exponent(spec);
  if (n_max == 0) return out;

  const int threads = std::max(1, max_threads());
  const std::int64_t chunk = (n_max + threads - 1) / threads;
  std::vector<std::int64_t> block_sum(static_cast<std::size_t>(threads), 0);

  // Pass 1: per-chunk local prefix sums of weight exponents.
  ExceptionCollector errors;
#pragma omp parallel for schedule(static)
  for (int t = 0; t < threads; ++t) {
    errors.run([&, t] {
      const std::int64_t lo = 1 + static_cast<std::int64_t>(t) * chunk;
      const std::int64_t hi = std::min(n_max, lo + chunk - 1);
      std::int64_t acc = 0;
      for (std::int64_t n = lo; n <= hi; ++n) {
        acc += spec.weight_log(step_index(spec, n)).exponent;
        out[static_cast<std::size_t>(n)] = acc;
      }
      if (lo <= hi) block_sum[static_cast<std::size_t>(t)] = acc;
    });
  }
  errors.rethrow_if_any();

  // Pass 2: exclusive scan of chunk totals (short, serial).
  std::vector<std::int64_t> offset(static_cast<std::size_t>(threads), 0);
  std::int64_t running = out[0];
  for (int t = 0; t < threads; ++t) {
    offset[static_cast<std::size_t>(t)] = running;
    running += block_sum[static_cast<std::size_t>(t)];
  }

  // Pass 3: add chunk offsets.
#pragma omp parallel for schedule(static)
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = 1 + static_cast<std::int64_t>(t) * chunk;
    const std::int64_t hi = std::min(n_max, lo + chunk - 1);
    for (std::int64_t n = lo; n <= hi; ++n) {
      out[static_cast<std::size_t>(n)] += offset[static_cast<std::size_t>(t)];
    }
  }
  return out;
}

std::vector<std::int64_t> count_prefix_serial(const std::function<bool(std::int64_t)>& member,
                                              std::int64_t horizon) {
  if (horizon < 1) throw ConfigError("count_prefix requires horizon >= 1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(horizon), 0);
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    if (member(n)) ++count;
    out[static_cast<std::size_t>(n - 1)] = count;
  }
  return out;
}

std::vector<std::int64_t> count_prefix(const std::function<bool(std::int64_t)>& member,
                                       std::int64_t horizon) {
  if (horizon < 1) throw ConfigError("count_prefix requires horizon >= 1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(horizon), 0);
  const int threads = std::max(1, max_threads());
  const std::int64_t chunk = (horizon + threads - 1) / threads;
  std::vector<std::int64_t> block_sum(static_cast<std::size_t>(threads), 0);

  ExceptionCollector errors;
#pragma omp parallel for schedule(static)
  for (int t = 0; t < threads; ++t) {
    errors.run([&, t] {
      const std::int64_t lo = 1 + static_cast<std::int64_t>(t) * chunk;
      const std::int64_t hi = std::min(horizon, lo + chunk - 1);
      std::int64_t acc = 0;
      for (std::int64_t n = lo; n <= hi; ++n) {
        if (member(n)) ++acc;
        out[static_cast<std::size_t>(n - 1)] = acc;
      }
      if (lo <= hi) block_sum[static_cast<std::size_t>(t)] = acc;
    });
  }
  errors.rethrow_if_any();

  std::vector<std::int64_t> offset(static_cast<std::size_t>(threads), 0);
  std::int64_t running = 0;
  for (int t = 0; t < threads; ++t) {
    offset[static_cast<std::size_t>(t)] = running;
    running += block_sum[static_cast<std::size_t>(t)];
  }

#pragma omp parallel for schedule(static)
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = 1 + static_cast<std::int64_t>(t) * chunk;
    const std::int64_t hi = std::min(horizon, lo + chunk - 1);
    for (std::int64_t n = lo; n <= hi; ++n) {
      out[static_cast<std::size_t>(n - 1)] += offset[static_cast<std::size_t>(t)];
    }
  }
  return out;
}

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
  ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    errors.run([&] { fn(i); });
  }
  errors.rethrow_if_any();
}

}  // namespace shiftlab::kernels
