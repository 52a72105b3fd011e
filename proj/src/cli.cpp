#include "shiftlab/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "shiftlab/classify.hpp"
#include "shiftlab/errors.hpp"
#include "shiftlab/io.hpp"
#include "shiftlab/kernels.hpp"
#include "shiftlab/operators.hpp"
#include "shiftlab/orbitstats.hpp"
#include "shiftlab/seqcore.hpp"
#include "shiftlab/vectors.hpp"

namespace shiftlab::cli {

namespace {

using io::format_number;
using io::ordered_json;

constexpr const char* kAppDescription =
    "shiftlab: finite-horizon orbit statistics for weighted backward shift operators";

constexpr const char* kOperatorHelp =
    "operator designation: paper-blocks | rolewicz:<lambda> | ratio-power:<p> | "
    "constant:<lambda>:<side> | @<weight-spec file> (see list-builtins)";
constexpr const char* kVectorHelp =
    "starting vector: e<j> basis shorthand | inline JSON | @<vector file>";
constexpr const char* kSpaceHelp = "norm: l1 | l2 | lp:<p> | c0 (default: l2)";
constexpr const char* kHorizonHelp =
    "horizon N (default: 1048647 for paper-blocks, 10000 otherwise)";
constexpr const char* kWindowHelp =
    "tail window W for running-average extrema (default: half the horizon)";
constexpr const char* kStrideHelp =
    "emit only rows with n divisible by stride; the final row is always emitted (default: 1)";
constexpr const char* kOutputHelp = "write data rows to this file instead of stdout";
constexpr const char* kFormatHelp = "csv (default) or records (one JSON object per line)";

// Beyond this many rows a product table stops being a desk-scale artifact.
constexpr std::int64_t kMaxProductRows = std::int64_t{1} << 24;

std::int64_t parse_int64(const std::string& text, const std::string& what) {
  std::int64_t out = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError(what + ": bad integer \"" + text + "\"");
  }
  return out;
}

std::vector<std::int64_t> parse_power_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::string piece;
  std::istringstream in(text);
  while (std::getline(in, piece, ',')) out.push_back(parse_int64(piece, "--powers"));
  if (out.empty()) throw ConfigError("--powers: empty power list");
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

const char* csv_bool(bool b) { return b ? "1" : "0"; }

std::int64_t resolve_horizon(const RunConfig& c, const WeightSpec& spec,
                             std::int64_t fallback = 10000) {
  if (c.horizon != 0) return c.horizon;
  if (spec.kind() == WeightSpec::Kind::PaperBlocks) return block_bounds(18).c;
  return fallback;
}

std::int64_t resolve_window(const RunConfig& c, std::int64_t horizon, std::int64_t floor_value) {
  if (c.window != 0) return c.window;
  return std::max(floor_value, horizon / 2);
}

bool emit_row(std::int64_t n, std::int64_t stride, std::int64_t last) {
  return n % stride == 0 || n == last;
}

// ---- series (orbit / liyorke) ---------------------------------------------

void emit_series_rows(std::ostream& os, const std::string& format, const char* row_record,
                      const CesaroSeries& s, std::int64_t stride) {
  const bool exps = s.has_exponents();
  if (format == "csv") {
    os << "n,norm,partial_sum,cesaro_avg";
    if (exps) os << ",norm_exp2";
    os << '\n';
    for (std::int64_t n = 1; n <= s.horizon; ++n) {
      if (!emit_row(n, stride, s.horizon)) continue;
      const auto i = static_cast<std::size_t>(n - 1);
      os << n << ',' << format_number(s.norms[i]) << ',' << format_number(s.partial_sums[i]) << ','
         << format_number(s.averages[i]);
      if (exps) {
        os << ',';
        if (s.norms[i] > 0.0) os << s.norm_exponents[i];
      }
      os << '\n';
    }
    return;
  }
  for (std::int64_t n = 1; n <= s.horizon; ++n) {
    if (!emit_row(n, stride, s.horizon)) continue;
    const auto i = static_cast<std::size_t>(n - 1);
    ordered_json j;
    j["record"] = row_record;
    j["n"] = n;
    j["norm"] = s.norms[i];
    j["partial_sum"] = s.partial_sums[i];
    j["cesaro_avg"] = s.averages[i];
    if (exps && s.norms[i] > 0.0) j["norm_exp2"] = s.norm_exponents[i];
    os << j.dump() << '\n';
  }
}

void emit_series_summary(std::ostream& os, std::ostream& err, const std::string& format,
                         const char* summary_record, const char* heading, const CesaroSeries& s) {
  if (format == "csv") {
    err << heading << ": horizon=" << s.horizon << " window=" << s.window
        << " exact=" << csv_bool(s.exact) << " tail_window_min=" << format_number(s.tail_window_min)
        << " (n=" << s.tail_argmin << ") tail_window_max=" << format_number(s.tail_window_max)
        << " (n=" << s.tail_argmax << ")\n"
        << "note: " << kHorizonCaveat << '\n';
    return;
  }
  ordered_json j;
  j["record"] = summary_record;
  j["horizon"] = s.horizon;
  j["window"] = s.window;
  j["exact"] = s.exact;
  j["tail_window_min"] = s.tail_window_min;
  j["tail_argmin"] = s.tail_argmin;
  j["tail_window_max"] = s.tail_window_max;
  j["tail_argmax"] = s.tail_argmax;
  j["caveat"] = kHorizonCaveat;
  os << j.dump() << '\n';
}

// ---- subcommands -----------------------------------------------------------

void run_orbit(const RunConfig& c, std::ostream& data, std::ostream& err) {
  const WeightSpec spec = io::parse_operator_designation(c.operator_designation);
  const ShiftOperator T(spec);
  const SupportedVector x = io::parse_vector_designation(c.vector_designation, spec.side());
  const SpaceTag space = io::parse_space(c.space);
  const std::int64_t horizon = resolve_horizon(c, spec);
  const std::int64_t window = resolve_window(c, horizon, 1);
  const CesaroSeries series = cesaro_series(T, x, space, horizon, window);
  emit_series_rows(data, c.format, "orbit_row", series, c.stride);
  emit_series_summary(data, err, c.format, "orbit_summary", "orbit", series);
}

void run_liyorke(const RunConfig& c, std::ostream& data, std::ostream& err) {
  const WeightSpec spec = io::parse_operator_designation(c.operator_designation);
  const ShiftOperator T(spec);
  const SupportedVector x = io::parse_vector_designation(c.vector_designation, spec.side());
  const SupportedVector y = io::parse_vector_designation(c.vector2_designation, spec.side());
  const SpaceTag space = io::parse_space(c.space);
  const std::int64_t horizon = resolve_horizon(c, spec);
  const std::int64_t window = resolve_window(c, horizon, 1);
  // The pair statistic D_n(x, y) is the Cesaro series of the difference
  // orbit, so the emitted table is that series; `norm` is ||T^i x - T^i y||.
  const CesaroSeries series = cesaro_series(T, combine(x, y, 1.0, -1.0), space, horizon, window);
  emit_series_rows(data, c.format, "liyorke_row", series, c.stride);
  emit_series_summary(data, err, c.format, "liyorke_summary", "liyorke", series);
}

ordered_json trichotomy_record(const std::string& label, const TrichotomyReport& r) {
  ordered_json j;
  j["record"] = "trichotomy";
  j["label"] = label;
  j["verdict"] = to_string(r.verdict);
  j["horizon"] = r.horizon;
  j["window"] = r.window;
  j["tol_zero"] = r.thresholds.tol_zero;
  j["tol_inf"] = r.thresholds.tol_inf;
  j["a_final"] = r.a_final;
  j["a_half"] = r.a_half;
  j["growth_ratio"] = r.growth_ratio;
  j["tail_window_min"] = r.tail_window_min;
  j["tail_window_max"] = r.tail_window_max;
  j["caveat"] = kHorizonCaveat;
  return j;
}

void emit_trichotomy_csv_row(std::ostream& os, const std::string& label,
                             const TrichotomyReport& r) {
  os << csv_field(label) << ',' << to_string(r.verdict) << ',' << r.horizon << ',' << r.window
     << ',' << format_number(r.thresholds.tol_zero) << ',' << format_number(r.thresholds.tol_inf)
     << ',' << format_number(r.a_final) << ',' << format_number(r.a_half) << ','
     << format_number(r.growth_ratio) << ',' << format_number(r.tail_window_min) << ','
     << format_number(r.tail_window_max) << '\n';
}

void run_classify(const RunConfig& c, std::ostream& data, std::ostream& err) {
  const WeightSpec spec = io::parse_operator_designation(c.operator_designation);
  const ShiftOperator T(spec);
  const SpaceTag space = io::parse_space(c.space);
  const std::int64_t horizon = resolve_horizon(c, spec);
  const std::int64_t window = resolve_window(c, horizon, 2);
  const Thresholds thresholds{c.tol_zero, c.tol_inf};
  const bool csv = c.format == "csv";
  if (csv) {
    data << "label,verdict,horizon,window,tol_zero,tol_inf,a_final,a_half,growth_ratio,"
            "tail_window_min,tail_window_max\n";
  }
  if (!c.vector_designation.empty()) {
    const SupportedVector x = io::parse_vector_designation(c.vector_designation, spec.side());
    const TrichotomyReport report = classify_orbit(T, x, space, horizon, window, thresholds);
    if (csv) {
      emit_trichotomy_csv_row(data, c.vector_designation, report);
      err << "classify: verdict=" << to_string(report.verdict) << '\n'
          << "note: " << kHorizonCaveat << '\n';
    } else {
      data << trichotomy_record(c.vector_designation, report).dump() << '\n';
    }
    return;
  }
  const std::int64_t samples = c.samples >= 0 ? c.samples : 8;
  const OperatorClassification result =
      classify_operator_sampled(T, space, horizon, window, thresholds, c.seed, samples);
  if (csv) {
    for (const auto& [label, report] : result.per_vector) {
      emit_trichotomy_csv_row(data, label, report);
    }
    data << "majority," << to_string(result.majority) << ',' << horizon << ',' << window << ','
         << format_number(thresholds.tol_zero) << ',' << format_number(thresholds.tol_inf)
         << ",,,,,\n";
    err << "classify: majority=" << to_string(result.majority) << " over "
        << result.per_vector.size() << " vectors\n"
        << "note: " << kHorizonCaveat << '\n';
    return;
  }
  for (const auto& [label, report] : result.per_vector) {
    data << trichotomy_record(label, report).dump() << '\n';
  }
  ordered_json j;
  j["record"] = "classification_summary";
  j["majority"] = to_string(result.majority);
  j["vectors"] = result.per_vector.size();
  j["caveat"] = kHorizonCaveat;
  data << j.dump() << '\n';
}

void run_products(const RunConfig& c, std::ostream& data, std::ostream& err) {
  const WeightSpec spec = io::parse_operator_designation(c.operator_designation);
  if (c.to < 0) throw ConfigError("--to must be >= 0");
  if (c.to > kMaxProductRows) {
    throw CapacityError("--to beyond " + std::to_string(kMaxProductRows) +
                        " exceeds the supported product-table size");
  }
  const bool csv = c.format == "csv";
  const bool dyadic = spec.dyadic();
  if (csv) {
    data << "n,product";
    if (dyadic) data << ",product_exp2";
    data << '\n';
  }
  const auto emit = [&](std::int64_t n, double value, std::int64_t exp2, bool have_exp) {
    if (!emit_row(n, c.stride, c.to)) return;
    if (csv) {
      data << n << ',' << format_number(value);
      if (dyadic) {
        data << ',';
        if (have_exp) data << exp2;
      }
      data << '\n';
      return;
    }
    ordered_json j;
    j["record"] = "product";
    j["n"] = n;
    j["product"] = value;
    if (have_exp) j["product_exp2"] = exp2;
    data << j.dump() << '\n';
  };
  if (dyadic) {
    const std::vector<std::int64_t> exps = kernels::exponent_profile(spec, c.to);
    for (std::int64_t n = 0; n <= c.to; ++n) {
      const std::int64_t e = exps[static_cast<std::size_t>(n)];
      emit(n, DyadicLog::from_exponent(e).value(), e, true);
    }
  } else {
    const bool bilateral = spec.side() == Side::Bilateral;
    ProductCursor cursor(spec, bilateral ? 0 : 1,
                         bilateral ? ProductCursor::Direction::Down : ProductCursor::Direction::Up);
    if (bilateral) cursor.advance();  // row 0 carries the single factor w_0
    emit(0, bilateral ? cursor.current().value() : 1.0, 0, false);
    for (std::int64_t n = 1; n <= c.to; ++n) {
      cursor.advance();
      emit(n, cursor.current().value(), 0, false);
    }
  }
  if (csv) {
    err << "products: side=" << to_string(spec.side()) << " rows=0.." << c.to
        << (dyadic ? " (exact dyadic exponents)" : "") << '\n';
  }
}

void run_density(const RunConfig& c, std::ostream& data, std::ostream& err) {
  const bool set_mode = !c.set_name.empty();
  const bool exceed_mode = !c.operator_designation.empty();
  if (set_mode == exceed_mode) {
    throw ConfigError(
        "density needs exactly one of --set <name> or --operator/--vector (exceedance set)");
  }
  DensityEstimate estimate;
  std::optional<ExceedanceReport> exceedance;
  if (set_mode) {
    if (!c.vector_designation.empty() || c.eps != 0.0) {
      throw ConfigError("--vector/--eps apply only to the exceedance mode of density");
    }
    std::function<bool(std::int64_t)> member;
    if (c.set_name == "evens") {
      member = [](std::int64_t n) { return n % 2 == 0; };
    } else if (c.set_name == "odds") {
      member = [](std::int64_t n) { return n % 2 == 1; };
    } else if (c.set_name == "all") {
      member = [](std::int64_t) { return true; };
    } else if (c.set_name == "blocky") {
      member = [](std::int64_t n) { return floor_log2(static_cast<std::uint64_t>(n)) % 2 == 0; };
    } else {
      throw ConfigError("unknown --set \"" + c.set_name +
                        "\" (expected evens | odds | all | blocky)");
    }
    const std::int64_t horizon = c.horizon != 0 ? c.horizon : (std::int64_t{1} << 20);
    const std::int64_t window = resolve_window(c, horizon, 1);
    estimate = density(member, horizon, window);
  } else {
    if (c.vector_designation.empty()) {
      throw ConfigError("density exceedance mode needs --vector");
    }
    const WeightSpec spec = io::parse_operator_designation(c.operator_designation);
    const ShiftOperator T(spec);
    const SupportedVector x = io::parse_vector_designation(c.vector_designation, spec.side());
    const SpaceTag space = io::parse_space(c.space);
    const std::int64_t horizon = resolve_horizon(c, spec);
    const std::int64_t window = resolve_window(c, horizon, 1);
    const double eps = c.eps != 0.0 ? c.eps : 1.0;
    exceedance = exceedance_density(T, x, space, eps, horizon, window);
    estimate = exceedance->densities;
  }
  const bool csv = c.format == "csv";
  if (csv) data << "n,count,ratio\n";
  for (std::int64_t n = 1; n <= estimate.horizon; ++n) {
    if (!emit_row(n, c.stride, estimate.horizon)) continue;
    const std::int64_t count = estimate.count_prefix[static_cast<std::size_t>(n - 1)];
    const double ratio = static_cast<double>(count) / static_cast<double>(n);
    if (csv) {
      data << n << ',' << count << ',' << format_number(ratio) << '\n';
    } else {
      ordered_json j;
      j["record"] = "density_row";
      j["n"] = n;
      j["count"] = count;
      j["ratio"] = ratio;
      data << j.dump() << '\n';
    }
  }
  if (csv) {
    err << "density: horizon=" << estimate.horizon << " window=" << estimate.window
        << " udens_estimate=" << format_number(estimate.udens_estimate)
        << " ldens_estimate=" << format_number(estimate.ldens_estimate);
    if (exceedance) {
      err << " epsilon=" << format_number(exceedance->epsilon)
          << " liminf_lower_bound=" << format_number(exceedance->liminf_lower_bound);
    }
    err << '\n';
    return;
  }
  ordered_json j;
  j["record"] = "density_summary";
  j["horizon"] = estimate.horizon;
  j["window"] = estimate.window;
  j["udens_estimate"] = estimate.udens_estimate;
  j["ldens_estimate"] = estimate.ldens_estimate;
  if (exceedance) {
    j["epsilon"] = exceedance->epsilon;
    j["liminf_lower_bound"] = exceedance->liminf_lower_bound;
  }
  data << j.dump() << '\n';
}

void run_criterion(const RunConfig& c, std::ostream& data, std::ostream& err) {
  const WeightSpec spec = io::parse_operator_designation(c.operator_designation);
  const ShiftOperator T(spec);
  const std::int64_t radius = c.kmax >= 0 ? c.kmax : 8;
  const std::vector<std::int64_t> powers =
      c.powers.empty() ? default_power_sequence(spec, 18) : parse_power_list(c.powers);
  const double eps = c.eps != 0.0 ? c.eps : 1e-3;
  const CriterionReport report = hypercyclicity_criterion_check(T, radius, powers, eps, c.big);
  const bool csv = c.format == "csv";
  const bool dyadic = spec.dyadic();
  if (csv) {
    data << "k,n,backward_product,forward_product";
    if (dyadic) data << ",backward_exp2,forward_exp2";
    data << ",ok\n";
  }
  for (const CriterionWitness& w : report.witnesses) {
    if (csv) {
      data << w.k << ',' << w.n << ',' << format_number(w.backward_product.value()) << ','
           << format_number(w.forward_product.value());
      if (dyadic) {
        data << ',';
        if (w.backward_product.exact) data << w.backward_product.exponent;
        data << ',';
        if (w.forward_product.exact) data << w.forward_product.exponent;
      }
      data << ',' << csv_bool(w.ok) << '\n';
      continue;
    }
    ordered_json j;
    j["record"] = "criterion_witness";
    j["k"] = w.k;
    j["n"] = w.n;
    j["backward_product"] = w.backward_product.value();
    j["forward_product"] = w.forward_product.value();
    if (w.backward_product.exact) j["backward_exp2"] = w.backward_product.exponent;
    if (w.forward_product.exact) j["forward_exp2"] = w.forward_product.exponent;
    j["ok"] = w.ok;
    data << j.dump() << '\n';
  }
  std::string powers_text;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (i > 0) powers_text += ',';
    powers_text += std::to_string(powers[i]);
  }
  if (csv) {
    err << "criterion: " << (report.pass ? "PASS" : "FAIL")
        << " center_radius=" << report.center_radius << " epsilon=" << format_number(report.epsilon)
        << " big=" << format_number(report.big) << " powers=" << powers_text << '\n';
    return;
  }
  ordered_json j;
  j["record"] = "criterion_summary";
  j["pass"] = report.pass;
  j["center_radius"] = report.center_radius;
  j["epsilon"] = report.epsilon;
  j["big"] = report.big;
  j["powers"] = powers;
  data << j.dump() << '\n';
}

void run_kitai(const RunConfig& c, std::ostream& data, std::ostream& err) {
  const WeightSpec spec = io::parse_operator_designation(c.operator_designation);
  const ShiftOperator T(spec);
  const SpaceTag space = io::parse_space(c.space);
  const std::int64_t k_max = c.kmax >= 0 ? c.kmax : 30;
  const std::int64_t samples = c.samples >= 0 ? c.samples : 5;
  if (samples < 1) throw ConfigError("kitai needs --samples >= 1");

  std::vector<SupportedVector> basis_samples;
  std::vector<std::string> labels;
  if (spec.side() == Side::Unilateral) {
    for (std::int64_t k = 1; k <= samples; ++k) {
      basis_samples.push_back(SupportedVector::basis(k, spec.side()));
      labels.push_back("e" + std::to_string(k));
    }
  } else {
    basis_samples.push_back(SupportedVector::basis(0, spec.side()));
    labels.emplace_back("e0");
    for (std::int64_t k = 1; std::ssize(basis_samples) < samples; ++k) {
      basis_samples.push_back(SupportedVector::basis(k, spec.side()));
      labels.push_back("e" + std::to_string(k));
      if (std::ssize(basis_samples) < samples) {
        basis_samples.push_back(SupportedVector::basis(-k, spec.side()));
        labels.push_back("e-" + std::to_string(k));
      }
    }
  }

  std::optional<std::pair<SupportedVector, std::int64_t>> candidate;
  if (!c.vector_designation.empty()) {
    candidate.emplace(io::parse_vector_designation(c.vector_designation, spec.side()), 1);
  } else if (spec.side() == Side::Unilateral &&
             (spec.kind() == WeightSpec::Kind::Rolewicz ||
              (spec.kind() == WeightSpec::Kind::Constant && spec.parameter() > 1.0))) {
    // Truncated geometric fixed point of the constant-weight shift: with
    // w = |lambda| > 1, x = sum_{k<=60} w^-k e_k satisfies Tx = x up to the
    // truncation tail w^-60.
    const double w = std::abs(spec.parameter());
    SupportedVector x(Side::Unilateral);
    double coefficient = 1.0;
    for (std::int64_t k = 1; k <= 60; ++k) {
      coefficient /= w;
      x.set(k, coefficient);
    }
    candidate.emplace(std::move(x), 1);
  }

  const KitaiReport report =
      kitai_witness_check(T, basis_samples, basis_samples, k_max, space, candidate);
  const bool csv = c.format == "csv";
  const auto emit_check = [&](const std::string& check, const std::string& subject, bool ok) {
    if (csv) {
      data << check << ',' << csv_field(subject) << ',' << csv_bool(ok) << '\n';
      return;
    }
    ordered_json j;
    j["record"] = "kitai_check";
    j["check"] = check;
    j["subject"] = subject;
    j["ok"] = ok;
    data << j.dump() << '\n';
  };
  if (csv) data << "check,subject,value\n";
  emit_check("inverse_law", "all", report.inverse_law_ok);
  for (std::size_t i = 0; i < report.forward_decay.size(); ++i) {
    emit_check("forward_decay", labels[i], report.forward_decay[i].decays);
  }
  for (std::size_t i = 0; i < report.backward_decay.size(); ++i) {
    emit_check("backward_decay", labels[i], report.backward_decay[i].decays);
  }
  emit_check("forward_all_decay", "all", report.forward_all_decay);
  emit_check("backward_all_decay", "all", report.backward_all_decay);
  if (report.periodic_point) {
    if (csv) {
      data << "periodic_residual,period=" << report.periodic_point->period << ','
           << format_number(report.periodic_point->residual) << '\n';
    } else {
      ordered_json j;
      j["record"] = "kitai_check";
      j["check"] = "periodic_residual";
      j["period"] = report.periodic_point->period;
      j["residual"] = report.periodic_point->residual;
      data << j.dump() << '\n';
    }
  }
  if (csv) {
    err << "kitai: inverse_law_ok=" << csv_bool(report.inverse_law_ok)
        << " forward_all_decay=" << csv_bool(report.forward_all_decay)
        << " backward_all_decay=" << csv_bool(report.backward_all_decay);
    if (report.periodic_point) {
      err << " periodic_residual=" << format_number(report.periodic_point->residual);
    }
    err << '\n';
    return;
  }
  ordered_json j;
  j["record"] = "kitai_summary";
  j["inverse_law_ok"] = report.inverse_law_ok;
  j["forward_all_decay"] = report.forward_all_decay;
  j["backward_all_decay"] = report.backward_all_decay;
  j["kmax"] = k_max;
  j["samples"] = samples;
  if (report.periodic_point) {
    j["periodic_period"] = report.periodic_point->period;
    j["periodic_residual"] = report.periodic_point->residual;
  }
  data << j.dump() << '\n';
}

void run_list_builtins(std::ostream& data) {
  data << "builtin operator designations:\n"
          "  paper-blocks               bilateral block-dyadic backward shift (forward weights 2;"
          " repeating 1/2, 2, 1 block pattern on the negative side)\n"
          "  rolewicz:<lambda>          unilateral lambda * backward shift, |lambda| > 1"
          " (example: rolewicz:2.0)\n"
          "  ratio-power:<p>            unilateral w_k = ((k+1)/k)^(1/p), p > 1"
          " (example: ratio-power:2.0)\n"
          "  constant:<lambda>:<side>   constant weight lambda > 0, side unilateral | bilateral\n"
          "  @<file>                    JSON weight-spec file; kinds: paper_blocks | rolewicz |"
          " constant | ratio_power | table\n"
          "spaces: l1 | l2 | lp:<p> | c0\n"
          "vectors: e<j> basis shorthand | inline JSON {\"side\": ..., \"entries\": {...}} |"
          " @<file>\n";
}

// ---- app wiring ------------------------------------------------------------

void build_app(CLI::App& app, RunConfig& c,
               std::vector<std::pair<std::string, CLI::App*>>& subs) {
  app.require_subcommand(1);

  const auto add_operator = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--operator", c.operator_designation, kOperatorHelp);
    if (required) opt->required();
  };
  const auto add_vector = [&](CLI::App* s, bool required, const char* help = nullptr) {
    auto* opt = s->add_option("--vector", c.vector_designation, help ? help : kVectorHelp);
    if (required) opt->required();
  };
  const auto add_space = [&](CLI::App* s) { s->add_option("--space", c.space, kSpaceHelp); };
  const auto add_horizon = [&](CLI::App* s, const char* help = nullptr) {
    s->add_option("--horizon", c.horizon, help ? help : kHorizonHelp);
  };
  const auto add_window = [&](CLI::App* s) { s->add_option("--window", c.window, kWindowHelp); };
  const auto add_stride = [&](CLI::App* s) { s->add_option("--stride", c.stride, kStrideHelp); };
  const auto add_output = [&](CLI::App* s) { s->add_option("--output", c.output_path, kOutputHelp); };
  const auto add_format = [&](CLI::App* s) {
    s->add_option("--format", c.format, kFormatHelp)->check(CLI::IsMember({"csv", "records"}));
  };

  CLI::App* orbit = app.add_subcommand(
      "orbit", "emit the orbit-norm and running-average table for one starting vector");
  add_operator(orbit, true);
  add_vector(orbit, true);
  add_space(orbit);
  add_horizon(orbit);
  add_window(orbit);
  add_stride(orbit);
  add_output(orbit);
  add_format(orbit);
  subs.emplace_back("orbit", orbit);

  CLI::App* classify = app.add_subcommand(
      "classify",
      "trichotomy verdict for one vector (--vector) or a deterministic sample of vectors");
  add_operator(classify, true);
  add_vector(classify, false,
             "vector to classify; omitted: classify a basis sweep plus seeded random samples");
  add_space(classify);
  add_horizon(classify);
  add_window(classify);
  classify->add_option("--tol-zero", c.tol_zero,
                       "mean-to-zero threshold on the tail window (default: 1e-3)");
  classify->add_option("--tol-inf", c.tol_inf,
                       "mean-divergence threshold on the tail window (default: 1e3)");
  classify->add_option("--seed", c.seed, "base seed for the random samples (default: 12345)");
  classify->add_option("--samples", c.samples,
                       "number of seeded random vectors in sampled mode (default: 8)");
  add_output(classify);
  add_format(classify);
  subs.emplace_back("classify", classify);

  CLI::App* products = app.add_subcommand(
      "products", "weight-product profile: bilaterally the product over [-n, 0], unilaterally "
                  "over [1, n], for n = 0..--to");
  add_operator(products, true);
  products->add_option("--to", c.to, "largest n in the table (default: 64)");
  add_stride(products);
  add_output(products);
  add_format(products);
  subs.emplace_back("products", products);

  CLI::App* density = app.add_subcommand(
      "density", "prefix counts and windowed density estimates of an index set: either a named "
                 "set (--set) or the orbit exceedance set {n : ||T^n x|| >= eps}");
  density->add_option("--set", c.set_name,
                      "named set: evens | odds | all | blocky (default horizon: 1048576)");
  add_operator(density, false);
  add_vector(density, false);
  add_space(density);
  density->add_option("--eps", c.eps, "exceedance threshold, > 0 (default: 1.0)");
  add_horizon(density);
  add_window(density);
  add_stride(density);
  add_output(density);
  add_format(density);
  subs.emplace_back("density", density);

  CLI::App* criterion = app.add_subcommand(
      "criterion", "product criterion sweep: every center |k| <= kmax needs a power n with "
                   "backward product < eps and forward product > big");
  add_operator(criterion, true);
  criterion->add_option("--kmax", c.kmax, "center radius K (default: 8)");
  criterion->add_option("--powers", c.powers,
                        "comma-separated powers n to try (default: operator-adapted schedule of "
                        "18 terms: block ends for paper-blocks, powers of two otherwise)");
  criterion->add_option("--eps", c.eps, "backward-product smallness target (default: 1e-3)");
  criterion->add_option("--big", c.big, "forward-product largeness target (default: 1e6)");
  add_output(criterion);
  add_format(criterion);
  subs.emplace_back("criterion", criterion);

  CLI::App* kitai = app.add_subcommand(
      "kitai", "inverse-law and norm-decay witnesses over basis samples, plus a periodic-point "
               "residual when a candidate exists");
  add_operator(kitai, true);
  add_vector(kitai, false,
             "explicit periodic-point candidate (period 1); default: truncated geometric fixed "
             "point for unilateral constant-weight operators with weight > 1");
  add_space(kitai);
  kitai->add_option("--kmax", c.kmax, "power depth for decay traces (default: 30)");
  kitai->add_option("--samples", c.samples, "number of basis vectors sampled (default: 5)");
  add_output(kitai);
  add_format(kitai);
  subs.emplace_back("kitai", kitai);

  CLI::App* liyorke = app.add_subcommand(
      "liyorke", "pair statistic: running average of ||T^i x - T^i y|| with tail-window extrema");
  add_operator(liyorke, true);
  add_vector(liyorke, true);
  liyorke->add_option("--vector2", c.vector2_designation, "second vector of the pair")->required();
  add_space(liyorke);
  add_horizon(liyorke);
  add_window(liyorke);
  add_stride(liyorke);
  add_output(liyorke);
  add_format(liyorke);
  subs.emplace_back("liyorke", liyorke);

  CLI::App* list = app.add_subcommand("list-builtins",
                                      "print the operator/space/vector designation grammar");
  add_output(list);
  subs.emplace_back("list-builtins", list);
}

void dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.stride < 1) throw ConfigError("--stride must be >= 1");
  std::ofstream file;
  std::ostream* data = &out;
  if (!c.output_path.empty()) {
    file.open(c.output_path, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot open output file \"" + c.output_path + "\"");
    data = &file;
  }
  if (c.subcommand == "orbit") {
    run_orbit(c, *data, err);
  } else if (c.subcommand == "classify") {
    run_classify(c, *data, err);
  } else if (c.subcommand == "products") {
    run_products(c, *data, err);
  } else if (c.subcommand == "density") {
    run_density(c, *data, err);
  } else if (c.subcommand == "criterion") {
    run_criterion(c, *data, err);
  } else if (c.subcommand == "kitai") {
    run_kitai(c, *data, err);
  } else if (c.subcommand == "liyorke") {
    run_liyorke(c, *data, err);
  } else if (c.subcommand == "list-builtins") {
    run_list_builtins(*data);
  } else {
    throw ConfigError("no subcommand selected");
  }
  data->flush();
  if (!*data) throw ConfigError("write failure on the output stream");
}

}  // namespace

std::vector<std::string> RunConfig::to_argv() const {
  std::vector<std::string> argv{subcommand};
  const auto add = [&argv](const char* flag, const std::string& value) {
    argv.emplace_back(flag);
    argv.push_back(value);
  };
  if (!operator_designation.empty()) add("--operator", operator_designation);
  if (!vector_designation.empty()) add("--vector", vector_designation);
  if (!vector2_designation.empty()) add("--vector2", vector2_designation);
  if (space != "l2") add("--space", space);
  if (horizon != 0) add("--horizon", std::to_string(horizon));
  if (window != 0) add("--window", std::to_string(window));
  if (tol_zero != 1e-3) add("--tol-zero", io::format_number(tol_zero));
  if (tol_inf != 1e3) add("--tol-inf", io::format_number(tol_inf));
  if (eps != 0.0) add("--eps", io::format_number(eps));
  if (big != 1e6) add("--big", io::format_number(big));
  if (kmax != -1) add("--kmax", std::to_string(kmax));
  if (!powers.empty()) add("--powers", powers);
  if (seed != 12345) add("--seed", std::to_string(seed));
  if (samples != -1) add("--samples", std::to_string(samples));
  if (stride != 1) add("--stride", std::to_string(stride));
  if (to != 64) add("--to", std::to_string(to));
  if (!set_name.empty()) add("--set", set_name);
  if (!output_path.empty()) add("--output", output_path);
  if (format != "csv") add("--format", format);
  return argv;
}

RunConfig parse_cli(const std::vector<std::string>& args) {
  RunConfig config;
  CLI::App app{kAppDescription, "shiftlab"};
  std::vector<std::pair<std::string, CLI::App*>> subs;
  build_app(app, config, subs);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("usage: ") + e.what());
  }
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) config.subcommand = name;
  }
  return config;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{kAppDescription, "shiftlab"};
  std::vector<std::pair<std::string, CLI::App*>> subs;
  build_app(app, config, subs);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) config.subcommand = name;
  }
  try {
    dispatch(config, out, err);
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace shiftlab::cli
