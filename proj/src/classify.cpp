#include "shiftlab/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "shiftlab/kernels.hpp"

namespace shiftlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::MeanToZero:
      return "MeanToZero";
    case Verdict::MeanIrregular:
      return "MeanIrregular";
    case Verdict::MeanDivergent:
      return "MeanDivergent";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

TrichotomyReport classify_orbit(const ShiftOperator& T, const SupportedVector& x,
                                const SpaceTag& space, std::int64_t horizon, std::int64_t window,
                                const Thresholds& thresholds) {
  if (horizon < 2 || window < 2 || window > horizon) {
    throw ConfigError("classify_orbit requires horizon >= window >= 2");
  }
  if (!(thresholds.tol_zero > 0.0) || !(thresholds.tol_zero < thresholds.tol_inf)) {
    throw ConfigError("classify_orbit requires 0 < tol_zero < tol_inf");
  }
  const CesaroSeries series = cesaro_series(T, x, space, horizon, window);

  TrichotomyReport out;
  out.horizon = horizon;
  out.window = window;
  out.thresholds = thresholds;
  out.a_final = series.averages[static_cast<std::size_t>(horizon - 1)];
  out.a_half = series.averages[static_cast<std::size_t>(horizon / 2 - 1)];
  out.tail_window_min = series.tail_window_min;
  out.tail_window_max = series.tail_window_max;
  if (out.a_half > 0.0) {
    out.growth_ratio = out.a_final / out.a_half;
  } else {
    out.growth_ratio = out.a_final == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }

  if (out.tail_window_max < thresholds.tol_zero && out.a_final <= out.a_half) {
    out.verdict = Verdict::MeanToZero;
  } else if (out.tail_window_min > thresholds.tol_inf && out.a_final >= out.a_half) {
    out.verdict = Verdict::MeanDivergent;
  } else if (out.tail_window_min < thresholds.tol_zero &&
             out.tail_window_max > thresholds.tol_inf) {
    out.verdict = Verdict::MeanIrregular;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

OperatorClassification classify_operator_sampled(const ShiftOperator& T, const SpaceTag& space,
                                                 std::int64_t horizon, std::int64_t window,
                                                 const Thresholds& thresholds, std::uint64_t seed,
                                                 std::int64_t random_samples) {
  if (random_samples < 0) throw ConfigError("random sample count must be >= 0");
  std::vector<std::pair<std::string, SupportedVector>> sample_set;
  if (T.side() == Side::Bilateral) {
    for (std::int64_t j = -3; j <= 3; ++j) {
      sample_set.emplace_back("e" + std::to_string(j), SupportedVector::basis(j, T.side()));
    }
  } else {
    for (std::int64_t j = 1; j <= 7; ++j) {
      sample_set.emplace_back("e" + std::to_string(j), SupportedVector::basis(j, T.side()));
    }
  }
  constexpr std::int64_t kSampleRadius = 16;
  for (std::int64_t i = 1; i <= random_samples; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    sample_set.emplace_back("sample:" + std::to_string(s),
                            sample_vector(s, T.side(), kSampleRadius, Envelope::flat()));
  }

  OperatorClassification out;
  out.per_vector.resize(sample_set.size());
  kernels::parallel_for(static_cast<std::int64_t>(sample_set.size()), [&](std::int64_t i) {
    const auto& [label, vec] = sample_set[static_cast<std::size_t>(i)];
    out.per_vector[static_cast<std::size_t>(i)] = {
        label, classify_orbit(T, vec, space, horizon, window, thresholds)};
  });

  std::map<Verdict, std::int64_t> tally;
  for (const auto& [label, report] : out.per_vector) ++tally[report.verdict];
  Verdict best = Verdict::Inconclusive;
  std::int64_t best_count = 0;
  bool tie = false;
  for (const auto& [verdict, count] : tally) {
    if (count > best_count) {
      best = verdict;
      best_count = count;
      tie = false;
    } else if (count == best_count) {
      tie = true;
    }
  }
  out.majority = tie ? Verdict::Inconclusive : best;
  return out;
}

CesaroBoundEstimate abs_cesaro_bound_estimate(const ShiftOperator& T, const SpaceTag& space,
                                              const std::vector<SupportedVector>& samples,
                                              std::int64_t horizon, double cap) {
  if (samples.empty()) throw DomainError("abs_cesaro_bound_estimate requires samples");
  if (horizon < 1) throw ConfigError("abs_cesaro_bound_estimate requires horizon >= 1");
  for (const SupportedVector& s : samples) {
    if (s.empty()) throw DomainError("abs_cesaro_bound_estimate rejects the zero vector");
  }

  struct PerSample {
    double best = -std::numeric_limits<double>::infinity();
    std::int64_t best_n = 0;
  };
  std::vector<PerSample> per(samples.size());
  kernels::parallel_for(static_cast<std::int64_t>(samples.size()), [&](std::int64_t i) {
    const SupportedVector& x = samples[static_cast<std::size_t>(i)];
    const double nx = norm(x, space);
    const CesaroSeries series = cesaro_series(T, x, space, horizon, /*window=*/1);
    PerSample& slot = per[static_cast<std::size_t>(i)];
    for (std::int64_t n = 1; n <= horizon; ++n) {
      const double ratio = series.averages[static_cast<std::size_t>(n - 1)] / nx;
      if (ratio > slot.best) {
        slot.best = ratio;
        slot.best_n = n;
      }
    }
  });

  CesaroBoundEstimate out;
  out.cap = cap;
  out.c_hat = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < per.size(); ++i) {
    if (per[i].best > out.c_hat) {
      out.c_hat = per[i].best;
      out.witness_index = i;
      out.witness_n = per[i].best_n;
    }
  }
  out.cap_exceeded = out.c_hat > cap;
  return out;
}

CriterionReport hypercyclicity_criterion_check(const ShiftOperator& T, std::int64_t center_radius,
                                               const std::vector<std::int64_t>& powers,
                                               double epsilon, double big) {
  if (T.side() != Side::Bilateral) {
    throw DomainError("the product criterion is the bilateral characterization");
  }
  if (powers.empty()) throw ConfigError("criterion requires a nonempty power list");
  for (const std::int64_t n : powers) {
    if (n < 1) throw ConfigError("criterion powers must be >= 1");
  }
  if (center_radius < 0) throw ConfigError("center radius must be >= 0");
  if (!(epsilon > 0.0) || !(big > 0.0)) throw ConfigError("epsilon and big must be > 0");

  std::vector<std::int64_t> schedule = powers;
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());

  const double log_eps = std::log2(epsilon);
  const double log_big = std::log2(big);

  CriterionReport out;
  out.center_radius = center_radius;
  out.epsilon = epsilon;
  out.big = big;
  out.witnesses.resize(static_cast<std::size_t>(2 * center_radius + 1));

  kernels::parallel_for(2 * center_radius + 1, [&](std::int64_t slot) {
    const std::int64_t k = slot - center_radius;
    // Both windows extend monotonically with n, so one cursor per direction
    // serves the whole (ascending) power schedule without re-scanning.
    ProductCursor backward(T.weights(), k, ProductCursor::Direction::Down);
    backward.advance();  // absorb w_k: the window is [k-n, k]
    ProductCursor forward(T.weights(), k + 1, ProductCursor::Direction::Up);
    CriterionWitness best;
    best.k = k;
    double best_backward = std::numeric_limits<double>::infinity();
    for (const std::int64_t n : schedule) {
      while (backward.length() < n + 1) backward.advance();
      while (forward.length() < n) forward.advance();
      const DyadicLog b = backward.current();
      const DyadicLog f = forward.current();
      if (b.float_log2 < log_eps && f.float_log2 > log_big) {
        best.n = n;
        best.backward_product = b;
        best.forward_product = f;
        best.ok = true;
        break;
      }
      if (b.float_log2 < best_backward) {
        best_backward = b.float_log2;
        best.n = n;
        best.backward_product = b;
        best.forward_product = f;
        best.ok = false;
      }
    }
    out.witnesses[static_cast<std::size_t>(slot)] = best;
  });

  out.pass = std::all_of(out.witnesses.begin(), out.witnesses.end(),
                         [](const CriterionWitness& w) { return w.ok; });
  return out;
}

std::vector<std::int64_t> default_power_sequence(const WeightSpec& spec, std::size_t count) {
  std::vector<std::int64_t> out;
  out.reserve(count);
  if (spec.kind() == WeightSpec::Kind::PaperBlocks) {
    for (std::size_t i = 1; i <= count; ++i) {
      out.push_back(block_bounds(static_cast<std::int64_t>(i)).b);
    }
  } else {
    if (count > 40) throw ConfigError("power-of-two schedule supports at most 40 terms");
    for (std::size_t m = 1; m <= count; ++m) {
      out.push_back(std::int64_t{1} << m);
    }
  }
  return out;
}

namespace {

bool quarter_decay(const std::vector<double>& norms) {
  if (norms.empty()) return false;
  const std::size_t q = std::max<std::size_t>(1, norms.size() / 4);
  double first = 0.0;
  for (std::size_t i = 0; i < q; ++i) first = std::max(first, norms[i]);
  double last = 0.0;
  for (std::size_t i = norms.size() - q; i < norms.size(); ++i) last = std::max(last, norms[i]);
  // A tail that is identically zero has finished decaying even when the head
  // is zero too (orbits of short-lived basis vectors die in finitely many
  // steps); otherwise require strict head-to-tail decrease.
  return last == 0.0 || last < first;
}

}  // namespace

KitaiReport kitai_witness_check(
    const ShiftOperator& T, const std::vector<SupportedVector>& x_samples,
    const std::vector<SupportedVector>& y_samples, std::int64_t k_max, const SpaceTag& space,
    const std::optional<std::pair<SupportedVector, std::int64_t>>& periodic_candidate) {
  if (k_max < 1) throw ConfigError("kitai_witness_check requires k_max >= 1");
  const RightInverse S(T);

  KitaiReport out;
  out.inverse_law_ok = true;
  for (const SupportedVector& y : y_samples) {
    if (!(apply(T, right_inverse_apply(S, y)) == y)) {
      out.inverse_law_ok = false;
      break;
    }
  }

  out.forward_decay.reserve(x_samples.size());
  for (const SupportedVector& x : x_samples) {
    DecayTrace trace;
    trace.norms = iterate_norms(T, x, space, k_max).values;
    trace.decays = quarter_decay(trace.norms);
    out.forward_decay.push_back(std::move(trace));
  }
  out.backward_decay.reserve(y_samples.size());
  for (const SupportedVector& y : y_samples) {
    DecayTrace trace;
    trace.norms.reserve(static_cast<std::size_t>(k_max));
    SupportedVector u = y;
    for (std::int64_t k = 1; k <= k_max; ++k) {
      u = right_inverse_apply(S, u);
      trace.norms.push_back(norm(u, space));
    }
    trace.decays = quarter_decay(trace.norms);
    out.backward_decay.push_back(std::move(trace));
  }
  out.forward_all_decay =
      !out.forward_decay.empty() &&
      std::all_of(out.forward_decay.begin(), out.forward_decay.end(),
                  [](const DecayTrace& t) { return t.decays; });
  out.backward_all_decay =
      !out.backward_decay.empty() &&
      std::all_of(out.backward_decay.begin(), out.backward_decay.end(),
                  [](const DecayTrace& t) { return t.decays; });

  if (periodic_candidate) {
    const auto& [candidate, period] = *periodic_candidate;
    if (period < 1) throw ConfigError("periodic point period must be >= 1");
    SupportedVector u = candidate;
    for (std::int64_t i = 0; i < period; ++i) u = apply(T, u);
    PeriodicPointCheck check;
    check.period = period;
    check.residual = norm(combine(u, candidate, 1.0, -1.0), space);
    out.periodic_point = check;
  }
  return out;
}

PairMeanStat mean_liyorke_stat(const ShiftOperator& T, const SupportedVector& x,
                               const SupportedVector& y, const SpaceTag& space,
                               std::int64_t horizon, std::int64_t window) {
  const SupportedVector difference = combine(x, y, 1.0, -1.0);
  const CesaroSeries series = cesaro_series(T, difference, space, horizon, window);
  PairMeanStat out;
  out.horizon = horizon;
  out.window = window;
  out.tail_window_min = series.tail_window_min;
  out.tail_window_max = series.tail_window_max;
  return out;
}

}  // namespace shiftlab
