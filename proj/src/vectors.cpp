#include "shiftlab/vectors.hpp"

#include <cmath>
#include <random>

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

}  // namespace

SpaceTag SpaceTag::l1() { return SpaceTag{Kind::Lp, 1.0}; }
SpaceTag SpaceTag::l2() { return SpaceTag{Kind::Lp, 2.0}; }

SpaceTag SpaceTag::lp(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError("lp space requires p >= 1");
  }
  return SpaceTag{Kind::Lp, p};
}

SpaceTag SpaceTag::c0() { return SpaceTag{Kind::C0, 0.0}; }

SupportedVector SupportedVector::basis(std::int64_t j, Side side, double coefficient) {
  SupportedVector v(side);
  v.set(j, coefficient);
  return v;
}

std::int64_t SupportedVector::min_index() const {
  if (entries_.empty()) throw DomainError("empty vector has no support");
  return entries_.begin()->first;
}

std::int64_t SupportedVector::max_index() const {
  if (entries_.empty()) throw DomainError("empty vector has no support");
  return entries_.rbegin()->first;
}

double SupportedVector::at(std::int64_t j) const {
  auto it = entries_.find(j);
  return it == entries_.end() ? 0.0 : it->second;
}

void SupportedVector::set(std::int64_t j, double coefficient) {
  if (side_ == Side::Unilateral && j < 1) {
    throw DomainError("index " + std::to_string(j) + " outside the unilateral domain");
  }
  if (!std::isfinite(coefficient)) {
    throw DomainError("vector coefficients must be finite");
  }
  if (coefficient == 0.0) {
    entries_.erase(j);
  } else {
    entries_[j] = coefficient;
  }
}

double norm(const SupportedVector& v, const SpaceTag& space) {
  if (v.empty()) return 0.0;
  if (space.kind == SpaceTag::Kind::C0) {
    double best = 0.0;
    for (const auto& [j, c] : v.entries()) best = std::max(best, std::abs(c));
    return best;
  }
  double sum = 0.0;
  double comp = 0.0;
  if (space.p == 1.0) {
    for (const auto& [j, c] : v.entries()) compensated_add(sum, comp, std::abs(c));
    return sum + comp;
  }
  if (space.p == 2.0) {
    for (const auto& [j, c] : v.entries()) compensated_add(sum, comp, c * c);
    return std::sqrt(sum + comp);
  }
  for (const auto& [j, c] : v.entries()) {
    compensated_add(sum, comp, std::pow(std::abs(c), space.p));
  }
  return std::pow(sum + comp, 1.0 / space.p);
}

SupportedVector combine(const SupportedVector& v, const SupportedVector& w, double alpha,
                        double beta) {
  if (v.side() != w.side()) {
    throw DomainError("combine requires vectors on the same side");
  }
  SupportedVector out(v.side());
  for (const auto& [j, c] : v.entries()) out.set(j, alpha * c);
  for (const auto& [j, c] : w.entries()) out.set(j, out.at(j) + beta * c);
  return out;
}

Envelope Envelope::flat() { return Envelope{Kind::Flat, 0.0}; }

Envelope Envelope::geometric(double rho) {
  if (!(rho > 0.0) || !(rho < 1.0)) {
    throw DomainError("geometric envelope requires 0 < rho < 1");
  }
  return Envelope{Kind::Geometric, rho};
}

double Envelope::factor(std::int64_t abs_k) const {
  if (kind == Kind::Flat) return 1.0;
  double out = 1.0;
  for (std::int64_t i = 0; i < abs_k; ++i) out *= rho;
  return out;
}

namespace {

// Box-Muller from two 53-bit uniforms; fixed here (rather than
// std::normal_distribution) so sampled bytes are stable across toolchains.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double next() {
    const double u1 = 1.0 - unit();  // in (0, 1]; keeps log() finite
    const double u2 = unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 gen_;
};

}  // namespace

SupportedVector sample_vector(std::uint64_t seed, Side side, std::int64_t support_radius,
                              const Envelope& envelope) {
  if (support_radius < 1) {
    throw DomainError("sample_vector requires support radius >= 1");
  }
  NormalSampler sampler(seed);
  SupportedVector out(side);
  const std::int64_t lo = side == Side::Unilateral ? 1 : -support_radius;
  for (std::int64_t k = lo; k <= support_radius; ++k) {
    const double z = sampler.next();
    const double c = z * envelope.factor(k < 0 ? -k : k);
    if (c != 0.0) out.set(k, c);
  }
  return out;
}

}  // namespace shiftlab
