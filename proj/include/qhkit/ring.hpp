#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace qhkit {

using Scalar = mpq_class;
using Integer = mpz_class;

// Base ring of every computation: Q, F_p or Z. All three are PIDs with
// trivial Picard group, so "finitely generated projective" means "free".
class GroundRing {
 public:
  enum class Kind { Rationals, PrimeField, Integers };

  static GroundRing rationals() { return GroundRing(Kind::Rationals, 0); }
  static GroundRing integers() { return GroundRing(Kind::Integers, 0); }
  static GroundRing prime_field(long p);

  // "Q", "Z", "F5", ...; inverse of name().
  static GroundRing parse(const std::string& descriptor);

  Kind kind() const noexcept { return kind_; }
  long characteristic() const noexcept { return p_; }
  bool is_field() const noexcept { return kind_ != Kind::Integers; }
  bool is_integers() const noexcept { return kind_ == Kind::Integers; }
  bool is_prime_field() const noexcept { return kind_ == Kind::PrimeField; }

  // Canonical representative. Throws std::domain_error when x is not an
  // element of the ring (non-integer over Z, denominator divisible by p).
  Scalar reduce(const Scalar& x) const;
  void reduce_in_place(Scalar& x) const;
  bool contains(const Scalar& x) const;

  bool is_unit(const Scalar& x) const;
  Scalar inverse(const Scalar& x) const;

  std::string name() const;

  friend bool operator==(const GroundRing&, const GroundRing&) = default;

 private:
  GroundRing(Kind k, long p) : kind_(k), p_(p) {}

  Kind kind_;
  long p_;
};

bool is_prime(long n);

// Distinct prime factors of |n| in increasing order (n != 0).
std::vector<long> prime_factors(const Integer& n);

}  // namespace qhkit
