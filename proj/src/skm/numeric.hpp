#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace skm {

using Rat = mpq_class;
using Int = mpz_class;

// Parses "p/q", "-3", "1.25" (decimals are exact). Throws Errc::parse.
Rat rat_from_string(const std::string& tok);
// Canonical form: reduced, positive denominator, "/1" omitted.
std::string rat_to_string(const Rat& q);
double rat_to_double(const Rat& q);

// If q = (a/b)^2 for rationals, returns true and stores the nonnegative root.
bool is_perfect_square(const Rat& q, Rat* root = nullptr);

Int floor_rat(const Rat& q);
Int ceil_rat(const Rat& q);

inline Rat rat_of_u64(unsigned long long v) {
  return Rat(Int(static_cast<unsigned long>(v)));
}
// Smallest integer >= m * sqrt(q), q >= 0 rational. Exact.
Int ceil_mul_sqrt(const Int& m, const Rat& q);

// A nonnegative real stored either as a plain rational or as sqrt of a
// rational radicand. sqrt_of() folds perfect squares back to rational form,
// so the representation is canonical and equality is structural.
struct Scalar {
  Rat v;                  // the value itself, or the radicand in sqrt form
  bool sqrt_form = false;

  Scalar() : v(0) {}

  static Scalar rational(const Rat& r);
  static Scalar sqrt_of(const Rat& radicand);

  Rat square() const { return sqrt_form ? v : Rat(v * v); }
  bool is_zero() const { return v == 0; }
  bool is_rational() const { return !sqrt_form; }

  int compare(const Scalar& o) const;
  bool operator<(const Scalar& o) const { return compare(o) < 0; }
  bool operator>(const Scalar& o) const { return compare(o) > 0; }
  bool operator<=(const Scalar& o) const { return compare(o) <= 0; }
  bool operator>=(const Scalar& o) const { return compare(o) >= 0; }
  bool operator==(const Scalar& o) const { return compare(o) == 0; }
  bool operator!=(const Scalar& o) const { return compare(o) != 0; }

  Scalar scaled(const Rat& s) const;       // s >= 0
  Scalar times(const Scalar& s) const;     // closed: products of radicals stay radicals

  double approx() const;
  std::string str() const;                 // "p/q" or "sqrt(p/q)"
};

// Exact element of the ring of finite sums  sum_i coeff_i * sqrt(radicand_i)
// with integer radicands reduced by small-prime square extraction. Structural
// cancellation plus integer-sqrt interval refinement decides signs exactly for
// every value this project constructs.
class RadicalSum {
public:
  RadicalSum() = default;
  explicit RadicalSum(const Rat& r);
  static RadicalSum of(const Scalar& s, const Rat& mult = Rat(1));

  bool is_zero() const { return terms_.empty(); }
  bool is_rational(Rat* out = nullptr) const;

  void add_term(const Rat& coeff, const Rat& radicand);
  void add_scaled(const Scalar& s, const Rat& mult);

  RadicalSum& operator+=(const RadicalSum& o);
  RadicalSum& operator-=(const RadicalSum& o);
  RadicalSum operator+(const RadicalSum& o) const;
  RadicalSum operator-(const RadicalSum& o) const;
  RadicalSum operator*(const RadicalSum& o) const;
  RadicalSum scaled(const Rat& s) const;

  int sign() const;
  int compare(const RadicalSum& o) const;
  bool operator<(const RadicalSum& o) const { return compare(o) < 0; }
  bool operator<=(const RadicalSum& o) const { return compare(o) <= 0; }
  bool operator==(const RadicalSum& o) const { return terms_ == o.terms_; }
  bool operator!=(const RadicalSum& o) const { return !(*this == o); }

  // Rigorous rational enclosure at the given precision.
  std::pair<Rat, Rat> bounds(unsigned prec_bits) const;
  double approx() const;
  std::string str() const;

  const std::vector<std::pair<Int, Rat>>& terms() const { return terms_; }

  // Batched construction: append raw (coeff, rational radicand) pairs, then
  // normalize once. Cheaper than repeated sorted insertion on hot paths.
  struct Builder {
    std::vector<std::pair<Int, Rat>> raw;
    void add(const Rat& coeff, const Scalar& s, const Rat& mult);
    RadicalSum take();
  };

private:
  // sorted by radicand, radicands canonical (square part extracted), no zeros
  std::vector<std::pair<Int, Rat>> terms_;
  void normalize_merge(std::vector<std::pair<Int, Rat>>&& raw);
};

// Canonicalizes coeff*sqrt(radicand): returns (integer radicand, new coeff).
// radicand rational >= 0; result radicand has no square factor with a prime
// divisor <= 1000 and is not itself a perfect square.
std::pair<Int, Rat> canonical_radical(const Rat& radicand, const Rat& coeff);

// Rational lower/upper bound on sqrt(r) for integer r >= 0 at 2^-prec_bits.
void sqrt_bounds(const Int& r, unsigned prec_bits, Rat& lo, Rat& hi);

}  // namespace skm
