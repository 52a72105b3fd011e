#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "shiftlab/classify.hpp"

using namespace shiftlab;

namespace {

const SpaceTag kL2 = SpaceTag::l2();

}  // namespace

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::MeanToZero) == "MeanToZero");
  CHECK(to_string(Verdict::MeanIrregular) == "MeanIrregular");
  CHECK(to_string(Verdict::MeanDivergent) == "MeanDivergent");
  CHECK(to_string(Verdict::Inconclusive) == "Inconclusive");
}

TEST_CASE("block-dyadic central orbit classifies as mean divergent") {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const std::int64_t horizon = block_bounds(16).c;
  const TrichotomyReport rep = classify_orbit(pb, SupportedVector::basis(0, Side::Bilateral), kL2,
                                              horizon, horizon / 2, Thresholds{});
  CHECK(rep.verdict == Verdict::MeanDivergent);
  CHECK(rep.tail_window_min > 1e3);
  CHECK(rep.a_final >= rep.a_half);
  CHECK(rep.growth_ratio > 1.0);
}

TEST_CASE("a dying orbit needs a long horizon before the mean is small enough") {
  const ShiftOperator rolewicz(WeightSpec::rolewicz(2.0));
  const SupportedVector e7 = SupportedVector::basis(7, Side::Unilateral);
  const TrichotomyReport at_1e4 = classify_orbit(rolewicz, e7, kL2, 10000, 5000, Thresholds{});
  CHECK(at_1e4.verdict == Verdict::Inconclusive);  // tail max 126/5001 still > tol_zero
  CHECK(at_1e4.a_final == 126.0 / 10000.0);
  const TrichotomyReport at_1e6 = classify_orbit(rolewicz, e7, kL2, 1000000, 500000, Thresholds{});
  CHECK(at_1e6.verdict == Verdict::MeanToZero);
  CHECK(at_1e6.tail_window_max == 126.0 / 500001.0);
}

TEST_CASE("the flat shift is inconclusive") {
  const ShiftOperator flat(WeightSpec::constant(1.0, Side::Bilateral));
  const TrichotomyReport rep = classify_orbit(flat, SupportedVector::basis(0, Side::Bilateral),
                                              kL2, 10000, 5000, Thresholds{});
  CHECK(rep.verdict == Verdict::Inconclusive);
  CHECK(rep.a_final == 1.0);
  CHECK(rep.growth_ratio == 1.0);
}

TEST_CASE("a hand-built profile produces the irregular verdict") {
  // Collapse by 2^-70 over the first forty steps, idle for a long stretch,
  // then one huge recovery factor: the tail window sees both extremes.
  std::map<std::int64_t, std::int64_t> exponents;
  exponents[0] = -30;
  for (std::int64_t t = 1; t <= 40; ++t) exponents[-t] = -1;
  exponents[-1500] = 100;
  const ShiftOperator T(WeightSpec::product_profile_dyadic(exponents, Side::Bilateral));
  const TrichotomyReport rep = classify_orbit(T, SupportedVector::basis(0, Side::Bilateral), kL2,
                                              2000, 1000, Thresholds{});
  CHECK(rep.verdict == Verdict::MeanIrregular);
  CHECK(rep.tail_window_min < 1e-3);
  CHECK(rep.tail_window_max > 1e3);
}

TEST_CASE("classification validates its arguments") {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const SupportedVector e0 = SupportedVector::basis(0, Side::Bilateral);
  CHECK_THROWS_AS(classify_orbit(pb, e0, kL2, 100, 1, Thresholds{}), ConfigError);
  CHECK_THROWS_AS(classify_orbit(pb, e0, kL2, 100, 101, Thresholds{}), ConfigError);
  CHECK_THROWS_AS(classify_orbit(pb, e0, kL2, 100, 50, Thresholds{0.0, 1e3}), ConfigError);
  CHECK_THROWS_AS(classify_orbit(pb, e0, kL2, 100, 50, Thresholds{1e3, 1e-3}), ConfigError);
  CHECK_THROWS_AS(classify_operator_sampled(pb, kL2, 100, 50, Thresholds{}, 1, -1), ConfigError);
}

TEST_CASE("sampled operator classification is deterministic") {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const OperatorClassification a =
      classify_operator_sampled(pb, kL2, 4096, 2048, Thresholds{}, 12345, 3);
  const OperatorClassification b =
      classify_operator_sampled(pb, kL2, 4096, 2048, Thresholds{}, 12345, 3);
  REQUIRE(a.per_vector.size() == 10);  // e_-3..e_3 plus three seeded samples
  CHECK(a.majority == b.majority);
  CHECK(a.per_vector[0].first == "e-3");
  CHECK(a.per_vector[6].first == "e3");
  CHECK(a.per_vector[7].first == "sample:12346");
  CHECK(a.per_vector[9].first == "sample:12348");
  for (std::size_t i = 0; i < a.per_vector.size(); ++i) {
    CHECK(a.per_vector[i].first == b.per_vector[i].first);
    CHECK(a.per_vector[i].second.verdict == b.per_vector[i].second.verdict);
    CHECK(a.per_vector[i].second.a_final == b.per_vector[i].second.a_final);
    CHECK(a.per_vector[i].second.tail_window_max == b.per_vector[i].second.tail_window_max);
  }

  const ShiftOperator rolewicz(WeightSpec::rolewicz(2.0));
  const OperatorClassification u =
      classify_operator_sampled(rolewicz, kL2, 1000, 500, Thresholds{}, 7, 0);
  REQUIRE(u.per_vector.size() == 7);  // e_1..e_7, no random samples
  CHECK(u.per_vector[0].first == "e1");
}

TEST_CASE("cesaro bound estimates") {
  const ShiftOperator flat(WeightSpec::constant(1.0, Side::Bilateral));
  std::vector<SupportedVector> basis;
  for (std::int64_t j = -2; j <= 2; ++j) basis.push_back(SupportedVector::basis(j, Side::Bilateral));
  const CesaroBoundEstimate fb = abs_cesaro_bound_estimate(flat, kL2, basis, 200);
  CHECK(fb.c_hat == 1.0);
  CHECK(fb.witness_n == 1);  // every average is 1; the first n wins
  CHECK_FALSE(fb.cap_exceeded);

  const ShiftOperator rolewicz(WeightSpec::rolewicz(2.0));
  const std::vector<SupportedVector> rs = {SupportedVector::basis(1, Side::Unilateral),
                                           SupportedVector::basis(10, Side::Unilateral),
                                           SupportedVector::basis(40, Side::Unilateral)};
  const CesaroBoundEstimate rb = abs_cesaro_bound_estimate(rolewicz, kL2, rs, 100);
  CHECK(rb.c_hat == (std::ldexp(1.0, 40) - 2.0) / 39.0);
  CHECK(rb.witness_index == 2);
  CHECK(rb.witness_n == 39);
  CHECK(rb.cap_exceeded);  // far beyond the default 1e6 cap

  const ShiftOperator rp(WeightSpec::ratio_power(2.0));
  std::vector<SupportedVector> ps;
  for (std::int64_t j = 1; j <= 30; ++j) ps.push_back(SupportedVector::basis(j, Side::Unilateral));
  const CesaroBoundEstimate pe = abs_cesaro_bound_estimate(rp, kL2, ps, 10000);
  CHECK(pe.c_hat <= 4.0);
  CHECK(pe.c_hat > 1.0);
  CHECK_FALSE(pe.cap_exceeded);

  CHECK_THROWS_AS(abs_cesaro_bound_estimate(flat, kL2, {}, 100), DomainError);
  CHECK_THROWS_AS(abs_cesaro_bound_estimate(flat, kL2, {SupportedVector(Side::Bilateral)}, 100),
                  DomainError);
  CHECK_THROWS_AS(abs_cesaro_bound_estimate(flat, kL2, basis, 0), ConfigError);
}

TEST_CASE("product criterion at a single center") {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const CriterionReport rep = hypercyclicity_criterion_check(pb, 0, {37}, 0.2, 1e6);
  CHECK(rep.pass);
  REQUIRE(rep.witnesses.size() == 1);
  CHECK(rep.witnesses[0].k == 0);
  CHECK(rep.witnesses[0].n == 37);
  CHECK(rep.witnesses[0].ok);
  CHECK(rep.witnesses[0].backward_product.exact);
  CHECK(rep.witnesses[0].backward_product.exponent == -3);
  CHECK(rep.witnesses[0].backward_product.value() == 0.125);
  CHECK(rep.witnesses[0].forward_product.exponent == 37);
}

TEST_CASE("product criterion across center radii") {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const std::vector<std::int64_t> powers = default_power_sequence(pb.weights(), 18);
  CHECK(hypercyclicity_criterion_check(pb, 4, powers, 1e-3, 1e6).pass);

  const CriterionReport wide = hypercyclicity_criterion_check(pb, 8, powers, 1e-3, 1e6);
  CHECK_FALSE(wide.pass);
  std::set<std::int64_t> failing;
  for (const CriterionWitness& w : wide.witnesses) {
    if (!w.ok) failing.insert(w.k);
  }
  CHECK(failing == std::set<std::int64_t>{5, 6, 7, 8});

  const ShiftOperator flat(WeightSpec::constant(1.0, Side::Bilateral));
  CHECK_FALSE(hypercyclicity_criterion_check(flat, 2, {2, 4, 8}, 1e-3, 1e6).pass);
}

TEST_CASE("product criterion validation") {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const ShiftOperator uni(WeightSpec::rolewicz(2.0));
  CHECK_THROWS_AS(hypercyclicity_criterion_check(uni, 2, {2}, 1e-3, 1e6), DomainError);
  CHECK_THROWS_AS(hypercyclicity_criterion_check(pb, 2, {}, 1e-3, 1e6), ConfigError);
  CHECK_THROWS_AS(hypercyclicity_criterion_check(pb, 2, {0}, 1e-3, 1e6), ConfigError);
  CHECK_THROWS_AS(hypercyclicity_criterion_check(pb, -1, {2}, 1e-3, 1e6), ConfigError);
  CHECK_THROWS_AS(hypercyclicity_criterion_check(pb, 2, {2}, 0.0, 1e6), ConfigError);
  CHECK_THROWS_AS(hypercyclicity_criterion_check(pb, 2, {2}, 1e-3, 0.0), ConfigError);
}

TEST_CASE("default power schedules") {
  const std::vector<std::int64_t> pb = default_power_sequence(WeightSpec::paper_blocks(), 3);
  CHECK(pb == std::vector<std::int64_t>{9, 19, 37});
  const std::vector<std::int64_t> dy = default_power_sequence(WeightSpec::rolewicz(2.0), 3);
  CHECK(dy == std::vector<std::int64_t>{2, 4, 8});
  CHECK_THROWS_AS(default_power_sequence(WeightSpec::rolewicz(2.0), 41), ConfigError);
}

TEST_CASE("kitai witnesses for the doubling shift") {
  const ShiftOperator rolewicz(WeightSpec::rolewicz(2.0));
  std::vector<SupportedVector> xs;
  std::vector<SupportedVector> ys;
  for (std::int64_t j = 1; j <= 3; ++j) {
    xs.push_back(SupportedVector::basis(j, Side::Unilateral));
    ys.push_back(SupportedVector::basis(j, Side::Unilateral));
  }
  SupportedVector candidate(Side::Unilateral);
  double coefficient = 1.0;
  for (std::int64_t k = 1; k <= 60; ++k) {
    coefficient /= 2.0;
    candidate.set(k, coefficient);
  }
  const KitaiReport rep =
      kitai_witness_check(rolewicz, xs, ys, 12, kL2, std::make_pair(candidate, std::int64_t{1}));
  CHECK(rep.inverse_law_ok);
  CHECK(rep.forward_all_decay);   // each basis orbit dies in finitely many steps
  CHECK(rep.backward_all_decay);  // the inverse halves the norm each step
  REQUIRE(rep.backward_decay.size() == 3);
  for (std::int64_t k = 1; k <= 12; ++k) {
    CHECK(rep.backward_decay[0].norms[static_cast<std::size_t>(k - 1)] ==
          std::ldexp(1.0, -static_cast<int>(k)));
  }
  REQUIRE(rep.periodic_point.has_value());
  CHECK(rep.periodic_point->period == 1);
  CHECK(rep.periodic_point->residual == std::ldexp(1.0, -60));
  CHECK(rep.periodic_point->residual <= std::ldexp(1.0, -59));
}

TEST_CASE("kitai forward decay fails where orbits grow") {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const std::vector<SupportedVector> xs = {SupportedVector::basis(0, Side::Bilateral)};
  const std::vector<SupportedVector> ys = {SupportedVector::basis(0, Side::Bilateral)};
  const KitaiReport rep = kitai_witness_check(pb, xs, ys, 30, kL2);
  CHECK_FALSE(rep.forward_decay[0].decays);  // the central orbit grows blockwise
  CHECK_FALSE(rep.forward_all_decay);
  CHECK(rep.inverse_law_ok);
  CHECK_FALSE(rep.periodic_point.has_value());
}

TEST_CASE("kitai validation") {
  const ShiftOperator rolewicz(WeightSpec::rolewicz(2.0));
  const std::vector<SupportedVector> xs = {SupportedVector::basis(1, Side::Unilateral)};
  CHECK_THROWS_AS(kitai_witness_check(rolewicz, xs, xs, 0), ConfigError);
  CHECK_THROWS_AS(kitai_witness_check(rolewicz, xs, xs, 10, kL2,
                                      std::make_pair(xs[0], std::int64_t{0})),
                  ConfigError);
}

TEST_CASE("pairwise mean statistics") {
  const ShiftOperator pb(WeightSpec::paper_blocks());
  const SupportedVector e0 = SupportedVector::basis(0, Side::Bilateral);
  const SupportedVector e1 = SupportedVector::basis(1, Side::Bilateral);

  const PairMeanStat self = mean_liyorke_stat(pb, e0, e0, kL2, 1000, 500);
  CHECK(self.tail_window_min == 0.0);
  CHECK(self.tail_window_max == 0.0);

  const PairMeanStat ab = mean_liyorke_stat(pb, e0, e1, kL2, 5000, 2500);
  const PairMeanStat ba = mean_liyorke_stat(pb, e1, e0, kL2, 5000, 2500);
  CHECK(ab.tail_window_min == ba.tail_window_min);  // norms ignore the sign
  CHECK(ab.tail_window_max == ba.tail_window_max);

  // Against the zero vector the pair statistic is the plain Cesaro average.
  const PairMeanStat vs_zero = mean_liyorke_stat(pb, e0, SupportedVector(Side::Bilateral), kL2,
                                                 2000, 1000);
  const CesaroSeries series = cesaro_series(pb, e0, kL2, 2000, 1000);
  CHECK(vs_zero.tail_window_min == series.tail_window_min);
  CHECK(vs_zero.tail_window_max == series.tail_window_max);

  const std::int64_t n = std::int64_t{1} << 18;
  const PairMeanStat far = mean_liyorke_stat(pb, e0, e1, kL2, n, n / 2);
  CHECK(far.tail_window_min > 1.0);
  CHECK(far.tail_window_min == doctest::Approx(24386.42932866469).epsilon(1e-9));
}
