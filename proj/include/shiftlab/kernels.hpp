#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "shiftlab/seqcore.hpp"

namespace shiftlab::kernels {

int max_threads();

// Exponent profile of an all-dyadic spec: out[n] is the integer exponent of
// the product over the first n indices of the orbit window — bilaterally
// prod_{j=-n}^{0} w_j, unilaterally prod_{j=1}^{n} w_j — for n = 0..n_max
// (out[0] covers the single factor w_0 bilaterally, the empty product
// unilaterally). DomainError for non-dyadic specs.
std::vector<std::int64_t> exponent_profile_serial(const WeightSpec& spec, std::int64_t n_max);
// OpenMP two-pass prefix scan; bit-identical to the serial reference.
std::vector<std::int64_t> exponent_profile(const WeightSpec& spec, std::int64_t n_max);

// Exact prefix counts of {1..horizon} under a pure predicate.
std::vector<std::int64_t> count_prefix_serial(const std::function<bool(std::int64_t)>& member,
                                              std::int64_t horizon);
// OpenMP chunked count + offset scan; bit-identical to the serial reference.
std::vector<std::int64_t> count_prefix(const std::function<bool(std::int64_t)>& member,
                                       std::int64_t horizon);

// Runs fn(i) for i = 0..count-1, fanning out across threads. Results must be
// written to per-index slots; with that discipline outputs are deterministic.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace shiftlab::kernels
