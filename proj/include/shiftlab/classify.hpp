#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftlab/operators.hpp"
#include "shiftlab/orbitstats.hpp"

namespace shiftlab {

enum class Verdict { MeanToZero, MeanIrregular, MeanDivergent, Inconclusive };

std::string to_string(Verdict v);

struct Thresholds {
  double tol_zero = 1e-3;
  double tol_inf = 1e3;
};

// Attached to every emitted trichotomy verdict: no finite computation
// certifies a limit, so verdicts are diagnostics at the stated horizon only.
inline constexpr const char* kHorizonCaveat =
    "finite-horizon diagnostic; verdict is valid only at the reported horizon, window and "
    "thresholds";

// Finite-horizon trichotomy evidence. The verdict is a pure function of the
// evidence and thresholds:
//   MeanToZero     tail_window_max < tol_zero and A_N <= A_{floor(N/2)}
//   MeanDivergent  tail_window_min > tol_inf  and A_N >= A_{floor(N/2)}
//   MeanIrregular  tail_window_min < tol_zero and tail_window_max > tol_inf
//   Inconclusive   otherwise
struct TrichotomyReport {
  Verdict verdict = Verdict::Inconclusive;
  std::int64_t horizon = 0;
  std::int64_t window = 0;
  Thresholds thresholds;
  double a_final = 0.0;
  double a_half = 0.0;
  double growth_ratio = 0.0;  // a_final / a_half (1 when both vanish)
  double tail_window_min = 0.0;
  double tail_window_max = 0.0;
};

TrichotomyReport classify_orbit(const ShiftOperator& T, const SupportedVector& x,
                                const SpaceTag& space, std::int64_t horizon, std::int64_t window,
                                const Thresholds& thresholds);

// Majority (plurality; ties -> Inconclusive) verdict over a deterministic
// sample: basis vectors e_{-3}..e_3 (bilateral) or e_1..e_7 (unilateral) plus
// `random_samples` seeded Gaussian vectors with seeds seed+1..seed+samples.
// This is sampled evidence, not a genericity statement.
struct OperatorClassification {
  std::vector<std::pair<std::string, TrichotomyReport>> per_vector;
  Verdict majority = Verdict::Inconclusive;
};

OperatorClassification classify_operator_sampled(const ShiftOperator& T, const SpaceTag& space,
                                                 std::int64_t horizon, std::int64_t window,
                                                 const Thresholds& thresholds, std::uint64_t seed,
                                                 std::int64_t random_samples);

// C_hat = max over samples x and n <= N of A_n(x)/||x||: a lower bound for
// the absolute Cesaro bound, with the arg-max witness. cap_exceeded flags
// unboundedness evidence against the configured cap.
struct CesaroBoundEstimate {
  double c_hat = 0.0;
  std::size_t witness_index = 0;
  std::int64_t witness_n = 0;
  double cap = 0.0;
  bool cap_exceeded = false;
};

CesaroBoundEstimate abs_cesaro_bound_estimate(const ShiftOperator& T, const SpaceTag& space,
                                              const std::vector<SupportedVector>& samples,
                                              std::int64_t horizon, double cap = 1e6);

// Product pair at a center k and power n along the proof schema:
// backward over [k-n, k], forward over [k+1, k+n].
struct CriterionWitness {
  std::int64_t k = 0;
  std::int64_t n = 0;
  DyadicLog backward_product;
  DyadicLog forward_product;
  bool ok = false;
};

struct CriterionReport {
  bool pass = false;
  std::int64_t center_radius = 0;
  double epsilon = 0.0;
  double big = 0.0;
  // One witness per center k = -K..K: the first power satisfying
  // backward < epsilon and forward > big, else the best backward seen.
  std::vector<CriterionWitness> witnesses;
};

// Bilateral-only product check: pass iff every |k| <= center_radius has some
// n in `powers` with backward_product < epsilon and forward_product > big.
CriterionReport hypercyclicity_criterion_check(const ShiftOperator& T, std::int64_t center_radius,
                                               const std::vector<std::int64_t>& powers,
                                               double epsilon, double big);

// Default power schedule: the block ends b_1..b_count for the block-dyadic
// family, 2^1..2^count otherwise.
std::vector<std::int64_t> default_power_sequence(const WeightSpec& spec, std::size_t count);

// Norm trace ||T^k x|| or ||S^k y|| for k = 1..k_max with a decay flag: the
// max over the last quarter lies strictly below the max over the first, or
// the last quarter is identically zero (the orbit already died).
struct DecayTrace {
  std::vector<double> norms;
  bool decays = false;
};

struct PeriodicPointCheck {
  std::int64_t period = 1;
  double residual = 0.0;  // ||T^period x - x||
};

struct KitaiReport {
  bool inverse_law_ok = false;  // apply(T, S y) == y exactly on every y sample
  std::vector<DecayTrace> forward_decay;
  std::vector<DecayTrace> backward_decay;
  bool forward_all_decay = false;
  bool backward_all_decay = false;
  std::optional<PeriodicPointCheck> periodic_point;
};

KitaiReport kitai_witness_check(
    const ShiftOperator& T, const std::vector<SupportedVector>& x_samples,
    const std::vector<SupportedVector>& y_samples, std::int64_t k_max,
    const SpaceTag& space = SpaceTag::l2(),
    const std::optional<std::pair<SupportedVector, std::int64_t>>& periodic_candidate =
        std::nullopt);

// Tail-window extrema of the pair statistic D_n(x, y) = (1/n) sum ||T^i x -
// T^i y||, computed as the Cesaro series of x - y (linearity).
struct PairMeanStat {
  std::int64_t horizon = 0;
  std::int64_t window = 0;
  double tail_window_min = 0.0;
  double tail_window_max = 0.0;
};

PairMeanStat mean_liyorke_stat(const ShiftOperator& T, const SupportedVector& x,
                               const SupportedVector& y, const SpaceTag& space,
                               std::int64_t horizon, std::int64_t window);

}  // namespace shiftlab
