#pragma once

#include <cstdint>
#include <map>

#include "shiftlab/errors.hpp"
#include "shiftlab/seqcore.hpp"

namespace shiftlab {

// Norm selector: lp (p >= 1) or the c0 sup-norm.
struct SpaceTag {
  enum class Kind { Lp, C0 };
  Kind kind = Kind::Lp;
  double p = 2.0;

  static SpaceTag l1();
  static SpaceTag l2();
  static SpaceTag lp(double p);  // DomainError unless p >= 1 and finite
  static SpaceTag c0();
};

// Finitely supported coefficient map over Z (bilateral) or {1, 2, ...}
// (unilateral). Zero coefficients are never stored; all coefficients are
// finite reals. Immutable in spirit: operations return fresh values.
class SupportedVector {
 public:
  explicit SupportedVector(Side side = Side::Bilateral) : side_(side) {}

  static SupportedVector basis(std::int64_t j, Side side, double coefficient = 1.0);

  Side side() const { return side_; }
  const std::map<std::int64_t, double>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  std::int64_t min_index() const;  // DomainError when empty
  std::int64_t max_index() const;  // DomainError when empty

  double at(std::int64_t j) const;
  // coefficient == 0 erases; indices must respect the side; non-finite
  // coefficients are rejected.
  void set(std::int64_t j, double coefficient);

  bool operator==(const SupportedVector&) const = default;

 private:
  Side side_;
  std::map<std::int64_t, double> entries_;
};

// (sum |x_k|^p)^(1/p) for lp; max |x_k| for c0; 0 for the empty vector.
double norm(const SupportedVector& v, const SpaceTag& space);

// alpha*v + beta*w with exact-zero entries pruned. DomainError on side mismatch.
SupportedVector combine(const SupportedVector& v, const SupportedVector& w, double alpha,
                        double beta);

// Magnitude envelope applied to sampled coefficients at distance |k|.
struct Envelope {
  enum class Kind { Flat, Geometric };
  Kind kind = Kind::Flat;
  double rho = 0.5;

  static Envelope flat();
  static Envelope geometric(double rho);  // DomainError unless 0 < rho < 1

  // rho^|k| by repeated multiplication (exact for dyadic rho); 1 for flat.
  double factor(std::int64_t abs_k) const;
};

// Deterministic Gaussian sample: coefficients i.i.d. standard normal
// (mt19937_64 + Box-Muller, fixed across platforms), multiplied by
// envelope(|k|); support within radius K (indices [-K, K] bilateral,
// [1, K] unilateral). Same seed -> identical vector.
SupportedVector sample_vector(std::uint64_t seed, Side side, std::int64_t support_radius,
                              const Envelope& envelope);

}  // namespace shiftlab
