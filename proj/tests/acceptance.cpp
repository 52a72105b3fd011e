// Acceptance harness: one PASS/FAIL line per criterion, diagnostics on
// failure, exit code = number of failed criteria. The CLI binary path is
// expected in argv[1] (used by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shiftlab/classify.hpp"
#include "shiftlab/kernels.hpp"
#include "spawn.hpp"

using namespace shiftlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const SpaceTag kL2 = SpaceTag::l2();

// ---- 1: exact product identities at block ends -----------------------------

bool criterion_1(std::string& notes) {
  const auto start = Clock::now();
  const WeightSpec pb = WeightSpec::paper_blocks();
  for (std::int64_t i = 1; i <= 18; ++i) {
    const BlockBounds blk = block_bounds(i);
    const DyadicLog at_b = product_range(pb, -blk.b, 0);
    if (!at_b.exact || at_b.exponent != -i) {
      notes = "product down to -" + std::to_string(blk.b) + " has exponent " +
              std::to_string(at_b.exponent) + ", expected " + std::to_string(-i);
      return false;
    }
    for (const std::int64_t n : {blk.c, block_bounds(i + 1).a}) {
      const DyadicLog prod = product_range(pb, -n, 0);
      if (!prod.exact || prod.exponent != i) {
        notes = "product down to -" + std::to_string(n) + " has exponent " +
                std::to_string(prod.exponent) + ", expected " + std::to_string(i);
        return false;
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 1.0) {
    notes = "identities hold but took " + std::to_string(elapsed) + " s (budget 1 s)";
    return false;
  }
  return true;
}

// ---- 2: monotone product shape inside blocks --------------------------------

bool criterion_2(std::string& notes) {
  const WeightSpec pb = WeightSpec::paper_blocks();
  const std::int64_t n_max = block_bounds(13).a;
  const std::vector<std::int64_t> profile = kernels::exponent_profile(pb, n_max);
  const auto at = [&profile](std::int64_t n) { return profile[static_cast<std::size_t>(n)]; };
  for (std::int64_t i = 1; i <= 12; ++i) {
    const BlockBounds blk = block_bounds(i);
    for (std::int64_t n = blk.a + 1; n <= blk.b; ++n) {
      if (!(at(n) < at(n - 1))) {
        notes = "profile not strictly decreasing at n=" + std::to_string(n);
        return false;
      }
    }
    for (std::int64_t n = blk.b + 1; n <= blk.c; ++n) {
      if (!(at(n) > at(n - 1))) {
        notes = "profile not strictly increasing at n=" + std::to_string(n);
        return false;
      }
    }
    for (std::int64_t n = blk.c + 1; n <= block_bounds(i + 1).a; ++n) {
      if (at(n) != at(n - 1)) {
        notes = "profile not constant between blocks at n=" + std::to_string(n);
        return false;
      }
    }
  }
  return true;
}

// ---- 3: orbit norms match the dense-matrix oracle ----------------------------

bool criterion_3(std::string& notes) {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const SupportedVector e0 = SupportedVector::basis(0, Side::Bilateral);
  const NormSequence fast = iterate_norms(pb, e0, kL2, 200);
  const std::vector<double> dense = truncated_matrix_norm_sequence(pb, e0, kL2, 200, 256);
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (fast.values[i] != dense[i]) {
      notes = "dyadic norms differ at step " + std::to_string(i + 1);
      return false;
    }
  }
  SupportedVector sparse = e0;
  for (int step = 0; step < 200; ++step) sparse = apply(pb, sparse);
  if (!(truncated_matrix_apply_power(pb, e0, 200, 256) == sparse)) {
    notes = "dyadic power-200 states differ";
    return false;
  }

  const ShiftOperator rp(WeightSpec::ratio_power(2.0));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SupportedVector x = sample_vector(seed, Side::Unilateral, 12, Envelope::flat());
    const NormSequence direct = iterate_norms(rp, x, kL2, 150);
    const std::vector<double> oracle = truncated_matrix_norm_sequence(rp, x, kL2, 150, 64);
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      const double scale = std::max(1.0, std::abs(oracle[i]));
      if (std::abs(direct.values[i] - oracle[i]) > 1e-12 * scale) {
        notes = "seed " + std::to_string(seed) + " diverges from the oracle at step " +
                std::to_string(i + 1);
        return false;
      }
    }
  }
  return true;
}

// ---- 4: mean divergence at block-end horizons --------------------------------

bool criterion_4(std::string& notes) {
  const auto start = Clock::now();
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const std::int64_t horizon = block_bounds(16).c;
  const CesaroSeries series =
      cesaro_series(pb, SupportedVector::basis(0, Side::Bilateral), kL2, horizon, 2);
  const auto average = [&series](std::int64_t n) {
    return series.averages[static_cast<std::size_t>(n - 1)];
  };

  for (std::int64_t i = 2; i <= 16; ++i) {
    const std::int64_t a_i = block_bounds(i).a;
    const std::int64_t c_i = block_bounds(i).c;
    const std::int64_t c_prev = block_bounds(i - 1).c;
    const double lower = std::ldexp(1.0, static_cast<int>(i - 1)) *
                         static_cast<double>(a_i - c_prev) / static_cast<double>(c_i);
    if (!(average(c_i) >= lower)) {
      notes = "average at the end of block " + std::to_string(i) + " is " +
              std::to_string(average(c_i)) + ", below the bound " + std::to_string(lower);
      return false;
    }
  }

  const auto window_min = [&](std::int64_t i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t n = block_bounds(i).c; n <= block_bounds(i + 1).c; ++n) {
      best = std::min(best, average(n));
    }
    return best;
  };
  double previous = window_min(2);
  for (std::int64_t i = 3; i <= 14; ++i) {
    const double current = window_min(i);
    if (!(current > previous)) {
      notes = "windowed minimum fails to increase from block " + std::to_string(i - 1) + " to " +
              std::to_string(i);
      return false;
    }
    previous = current;
  }

  for (std::int64_t j = -20; j <= 20; ++j) {
    const TrichotomyReport rep = classify_orbit(pb, SupportedVector::basis(j, Side::Bilateral),
                                                kL2, horizon, horizon / 2, Thresholds{});
    if (rep.verdict != Verdict::MeanDivergent) {
      notes = "e_" + std::to_string(j) + " classifies as " + to_string(rep.verdict) +
              " at the block-16 horizon";
      return false;
    }
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 30.0) {
    notes = "checks hold but took " + std::to_string(elapsed) + " s (budget 30 s)";
    return false;
  }
  return true;
}

// ---- 5: near-fixed point and inverse law of the doubling shift ----------------

bool criterion_5(std::string& notes) {
  const ShiftOperator T(WeightSpec::rolewicz(2.0));
  const RightInverse S(T);

  SupportedVector x(Side::Unilateral);
  double coefficient = 1.0;
  for (std::int64_t k = 1; k <= 60; ++k) {
    coefficient /= 2.0;
    x.set(k, coefficient);
  }
  const double residual = norm(combine(apply(T, x), x, 1.0, -1.0), kL2);
  if (!(residual <= std::ldexp(1.0, -59))) {
    notes = "fixed-point residual " + std::to_string(residual) + " exceeds 2^-59";
    return false;
  }
  if (residual != std::ldexp(1.0, -60)) {
    notes = "fixed-point residual is not exactly the truncation tail 2^-60";
    return false;
  }

  for (std::int64_t k = 1; k <= 50; ++k) {
    const SupportedVector e = SupportedVector::basis(k, Side::Unilateral);
    if (!(apply(T, right_inverse_apply(S, e)) == e)) {
      notes = "inverse law fails on e_" + std::to_string(k);
      return false;
    }
  }

  SupportedVector u = SupportedVector::basis(1, Side::Unilateral);
  for (std::int64_t k = 1; k <= 30; ++k) {
    u = right_inverse_apply(S, u);
    if (norm(u, kL2) != std::ldexp(1.0, -static_cast<int>(k))) {
      notes = "inverse-orbit norm at step " + std::to_string(k) + " is not exactly 2^-" +
              std::to_string(k);
      return false;
    }
  }
  return true;
}

// ---- 6: tail-shift identity of partial sums -----------------------------------

bool criterion_6(std::string& notes) {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const SupportedVector e0 = SupportedVector::basis(0, Side::Bilateral);
  for (std::int64_t q = 1; q <= 50; ++q) {
    const double worst = tail_shift_identity_check(pb, e0, kL2, q, 10000);
    if (worst != 0.0) {
      notes = "dyadic discrepancy " + std::to_string(worst) + " at shift q=" + std::to_string(q);
      return false;
    }
  }
  const ShiftOperator rolewicz(WeightSpec::rolewicz(2.0));
  for (std::uint64_t seed = 101; seed <= 110; ++seed) {
    const SupportedVector x = sample_vector(seed, Side::Unilateral, 8, Envelope::flat());
    const double worst = tail_shift_identity_check(rolewicz, x, kL2, 5, 2000);
    if (!(worst <= 1e-10)) {
      notes = "floating discrepancy " + std::to_string(worst) + " for seed " +
              std::to_string(seed);
      return false;
    }
  }
  return true;
}

// ---- 7: windowed densities of reference sets ------------------------------------

bool criterion_7(std::string& notes) {
  const std::int64_t n_even = 1000000;
  const DensityEstimate evens =
      density([](std::int64_t n) { return n % 2 == 0; }, n_even, n_even / 2);
  const double tol = 1.0 / static_cast<double>(n_even);
  if (std::abs(evens.udens_estimate - 0.5) > tol || std::abs(evens.ldens_estimate - 0.5) > tol) {
    notes = "even-set estimates stray beyond 1/N of one half";
    return false;
  }
  for (std::int64_t n = 1; n <= n_even; ++n) {
    if (evens.count_prefix[static_cast<std::size_t>(n - 1)] != n / 2) {
      notes = "even-set prefix count wrong at n=" + std::to_string(n);
      return false;
    }
  }

  const std::int64_t n_blocky = std::int64_t{1} << 20;
  const DensityEstimate blocky = density(
      [](std::int64_t n) { return floor_log2(static_cast<std::uint64_t>(n)) % 2 == 0; }, n_blocky,
      n_blocky / 2);
  if (std::abs(blocky.udens_estimate - 2.0 / 3.0) > 0.05) {
    notes = "blocky upper estimate " + std::to_string(blocky.udens_estimate) +
            " is not within 0.05 of 2/3";
    return false;
  }
  if (std::abs(blocky.ldens_estimate - 1.0 / 3.0) > 0.05) {
    notes = "blocky lower estimate " + std::to_string(blocky.ldens_estimate) +
            " is not within 0.05 of 1/3";
    return false;
  }
  // Independent brute-force membership: track the current power-of-two level
  // without calling the library's bit helpers.
  std::int64_t level = 0;
  std::int64_t next_boundary = 2;
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= n_blocky; ++n) {
    if (n == next_boundary) {
      ++level;
      next_boundary *= 2;
    }
    if (level % 2 == 0) ++count;
    if (blocky.count_prefix[static_cast<std::size_t>(n - 1)] != count) {
      notes = "blocky prefix count differs from brute force at n=" + std::to_string(n);
      return false;
    }
  }
  return true;
}

// ---- 8: absolute Cesaro bound estimates -------------------------------------------

bool criterion_8(std::string& notes) {
  const ShiftOperator flat(WeightSpec::constant(1.0, Side::Bilateral));
  std::vector<SupportedVector> flat_samples;
  for (std::int64_t j = -5; j <= 5; ++j) {
    flat_samples.push_back(SupportedVector::basis(j, Side::Bilateral));
  }
  const CesaroBoundEstimate fb = abs_cesaro_bound_estimate(flat, kL2, flat_samples, 200);
  if (fb.c_hat != 1.0 || fb.cap_exceeded) {
    notes = "flat-shift bound estimate is not exactly 1";
    return false;
  }

  const ShiftOperator rolewicz(WeightSpec::rolewicz(2.0));
  const std::vector<SupportedVector> rs = {SupportedVector::basis(1, Side::Unilateral),
                                           SupportedVector::basis(10, Side::Unilateral),
                                           SupportedVector::basis(40, Side::Unilateral)};
  const CesaroBoundEstimate rb = abs_cesaro_bound_estimate(rolewicz, kL2, rs, 100);
  if (!(rb.c_hat > 1e10) || rb.witness_index != 2 || !rb.cap_exceeded) {
    notes = "doubling-shift estimate misses the e_40 blow-up witness";
    return false;
  }

  const ShiftOperator rp(WeightSpec::ratio_power(2.0));
  std::vector<SupportedVector> ps;
  for (std::int64_t j = 1; j <= 50; ++j) {
    ps.push_back(SupportedVector::basis(j, Side::Unilateral));
  }
  for (std::uint64_t seed = 201; seed <= 220; ++seed) {
    ps.push_back(sample_vector(seed, Side::Unilateral, 30, Envelope::flat()));
  }
  const CesaroBoundEstimate pe = abs_cesaro_bound_estimate(rp, kL2, ps, 10000);
  if (!(pe.c_hat <= 4.0)) {
    notes = "ratio-weight estimate " + std::to_string(pe.c_hat) + " exceeds 4";
    return false;
  }
  return true;
}

// ---- 9: product-criterion witnesses at radius 8 --------------------------------------

bool criterion_9(std::string& notes) {
  const auto start = Clock::now();
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const std::vector<std::int64_t> powers = default_power_sequence(pb.weights(), 18);
  const CriterionReport wide = hypercyclicity_criterion_check(pb, 8, powers, 1e-3, 1e6);

  const ShiftOperator flat(WeightSpec::constant(1.0, Side::Bilateral));
  const CriterionReport flat_report =
      hypercyclicity_criterion_check(flat, 8, default_power_sequence(flat.weights(), 18), 1e-3, 1e6);
  const double elapsed = seconds_since(start);

  bool ok = true;
  if (!wide.pass) {
    std::ostringstream oss;
    oss << "block-dyadic check does not pass at radius 8: centers";
    for (const CriterionWitness& w : wide.witnesses) {
      if (!w.ok) oss << " k=" << w.k << " (best backward 2^" << w.backward_product.exponent << ")";
    }
    oss << " never reach backward < 0.001 along the 18 block-end powers";
    notes = oss.str();
    ok = false;
  }
  if (flat_report.pass) {
    notes += (notes.empty() ? "" : "; ");
    notes += "flat shift unexpectedly passes";
    ok = false;
  }
  if (elapsed >= 5.0) {
    notes += (notes.empty() ? "" : "; ");
    notes += "runtime " + std::to_string(elapsed) + " s (budget 5 s)";
    ok = false;
  }
  return ok;
}

// ---- 10: pairwise mean statistics -------------------------------------------------------

bool criterion_10(std::string& notes) {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  SupportedVector x(Side::Bilateral);
  x.set(-2, 0.3);
  x.set(5, -1.2);
  const PairMeanStat self = mean_liyorke_stat(pb, x, x, kL2, 2000, 1000);
  if (self.tail_window_min != 0.0 || self.tail_window_max != 0.0) {
    notes = "self-distance statistic is not exactly zero";
    return false;
  }

  const SupportedVector e0 = SupportedVector::basis(0, Side::Bilateral);
  const PairMeanStat vs_zero =
      mean_liyorke_stat(pb, e0, SupportedVector(Side::Bilateral), kL2, 2000, 1000);
  const CesaroSeries series = cesaro_series(pb, e0, kL2, 2000, 1000);
  if (std::abs(vs_zero.tail_window_min - series.tail_window_min) > 1e-12 ||
      std::abs(vs_zero.tail_window_max - series.tail_window_max) > 1e-12) {
    notes = "distance to zero does not reproduce the plain running average";
    return false;
  }

  const SupportedVector e1 = SupportedVector::basis(1, Side::Bilateral);
  const PairMeanStat ab = mean_liyorke_stat(pb, e0, e1, kL2, 4096, 2048);
  const PairMeanStat ba = mean_liyorke_stat(pb, e1, e0, kL2, 4096, 2048);
  if (ab.tail_window_min != ba.tail_window_min || ab.tail_window_max != ba.tail_window_max) {
    notes = "pair statistic is not symmetric";
    return false;
  }

  const std::int64_t n = std::int64_t{1} << 18;
  const PairMeanStat far = mean_liyorke_stat(pb, e0, e1, kL2, n, n / 2);
  if (!(far.tail_window_min > 1.0)) {
    notes = "pair (e_0, e_1) tail minimum " + std::to_string(far.tail_window_min) +
            " fails to exceed 1";
    return false;
  }
  return true;
}

// ---- 11: byte-identical reruns of the CLI ------------------------------------------------

bool criterion_11(const std::string& cli, std::string& notes) {
  if (cli.empty()) {
    notes = "no CLI binary path was supplied in argv[1]";
    return false;
  }
  const std::vector<std::string> invocations = {
      "orbit --operator paper-blocks --vector e0 --horizon 3000 --window 100 --stride 7",
      "orbit --operator paper-blocks --vector e0 --horizon 2048 --format records",
      "classify --operator paper-blocks --horizon 4096 --samples 6 --seed 777",
      "classify --operator rolewicz:2.0 --horizon 2000 --seed 42 --format records",
      "products --operator paper-blocks --to 3000",
      "density --set blocky --horizon 65536 --stride 97 --format records",
      "criterion --operator paper-blocks --kmax 6",
      "kitai --operator rolewicz:2.0 --format records",
      "liyorke --operator paper-blocks --vector e0 --vector2 e1 --horizon 4096 --stride 13",
  };
  for (std::size_t i = 0; i < invocations.size(); ++i) {
    const std::string file_a = "/tmp/shiftlab_accept_a_" + std::to_string(i) + ".out";
    const std::string file_b = "/tmp/shiftlab_accept_b_" + std::to_string(i) + ".out";
    const CommandResult a = run_command(cli, invocations[i] + " --output " + file_a);
    const CommandResult b = run_command(cli, invocations[i] + " --output " + file_b);
    const std::string data_a = slurp_file(file_a);
    const std::string data_b = slurp_file(file_b);
    std::remove(file_a.c_str());
    std::remove(file_b.c_str());
    if (a.exit_code != 0 || b.exit_code != 0) {
      notes = "invocation \"" + invocations[i] + "\" exits " + std::to_string(a.exit_code) + "/" +
              std::to_string(b.exit_code);
      return false;
    }
    if (data_a != data_b || a.out != b.out || a.err != b.err) {
      notes = "invocation \"" + invocations[i] + "\" is not byte-identical across reruns";
      return false;
    }
    if (data_a.empty()) {
      notes = "invocation \"" + invocations[i] + "\" produced no output";
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  struct Entry {
    int number;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Entry> criteria = {
      {1, "exact product identities at block ends", criterion_1},
      {2, "monotone product shape inside blocks", criterion_2},
      {3, "orbit norms match the dense-matrix oracle", criterion_3},
      {4, "mean divergence at block-end horizons", criterion_4},
      {5, "near-fixed point and inverse law of the doubling shift", criterion_5},
      {6, "tail-shift identity of partial sums", criterion_6},
      {7, "windowed densities of reference sets", criterion_7},
      {8, "absolute Cesaro bound estimates", criterion_8},
      {9, "product-criterion witnesses at radius 8", criterion_9},
      {10, "pairwise mean statistics", criterion_10},
      {11, "byte-identical reruns of the CLI",
       [&cli](std::string& notes) { return criterion_11(cli, notes); }},
  };

  int failed = 0;
  for (const Entry& entry : criteria) {
    std::string notes;
    bool ok = false;
    try {
      ok = entry.run(notes);
    } catch (const std::exception& e) {
      notes = std::string("unexpected exception: ") + e.what();
      ok = false;
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << entry.number << ": " << entry.name
              << '\n';
    if (!ok && !notes.empty()) std::cout << "  note: " << notes << '\n';
    if (!ok) ++failed;
  }
  if (failed != 0) {
    std::cout << failed << " criterion(s) failed\n";
  } else {
    std::cout << "all criteria passed\n";
  }
  return failed;
}
