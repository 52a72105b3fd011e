// Compares the serial reference kernels against the OpenMP versions and
// prints median-of-5 wall times. Outputs are checked for equality so the
// benchmark doubles as a smoke test.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <vector>

#include "shiftlab/kernels.hpp"
#include "shiftlab/seqcore.hpp"

using namespace shiftlab;

namespace {

double time_once(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

double median_of_5(const std::function<void()>& fn) {
  std::vector<double> times;
  for (int i = 0; i < 5; ++i) times.push_back(time_once(fn));
  std::sort(times.begin(), times.end());
  return times[2];
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, match ? "outputs match" : "OUTPUTS DIFFER");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", kernels::max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const WeightSpec pb = WeightSpec::paper_blocks();
  const std::int64_t profile_n = std::int64_t{1} << 22;
  std::vector<std::int64_t> profile_serial, profile_parallel;
  const double t1s =
      median_of_5([&] { profile_serial = kernels::exponent_profile_serial(pb, profile_n); });
  const double t1p =
      median_of_5([&] { profile_parallel = kernels::exponent_profile(pb, profile_n); });
  report("exponent_profile 2^22", t1s, t1p, profile_serial == profile_parallel);

  const auto member = [](std::int64_t n) {
    return floor_log2(static_cast<std::uint64_t>(n)) % 2 == 0;
  };
  const std::int64_t count_n = std::int64_t{1} << 22;
  std::vector<std::int64_t> count_serial, count_parallel;
  const double t2s = median_of_5([&] { count_serial = kernels::count_prefix_serial(member, count_n); });
  const double t2p = median_of_5([&] { count_parallel = kernels::count_prefix(member, count_n); });
  report("count_prefix 2^22", t2s, t2p, count_serial == count_parallel);

  // Per-index sweep: every slot holds the floating log of a product whose
  // length varies with the index, mimicking a batched classification pass.
  const std::int64_t sweep_n = std::int64_t{1} << 13;
  std::vector<double> sweep_serial(static_cast<std::size_t>(sweep_n));
  std::vector<double> sweep_parallel(static_cast<std::size_t>(sweep_n));
  const auto slot_work = [&pb](std::int64_t i) {
    return product_range(pb, -(i % 4096), 0).float_log2;
  };
  const double t3s = median_of_5([&] {
    for (std::int64_t i = 0; i < sweep_n; ++i) {
      sweep_serial[static_cast<std::size_t>(i)] = slot_work(i);
    }
  });
  const double t3p = median_of_5([&] {
    kernels::parallel_for(sweep_n, [&](std::int64_t i) {
      sweep_parallel[static_cast<std::size_t>(i)] = slot_work(i);
    });
  });
  report("product sweep 2^13 slots", t3s, t3p, sweep_serial == sweep_parallel);
  return 0;
}
