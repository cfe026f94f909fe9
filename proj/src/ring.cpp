#include "qhkit/ring.hpp"

#include <vector>

namespace qhkit {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<long> prime_factors(const Integer& n) {
  Integer m = abs(n);
  std::vector<long> out;
  if (m == 0) return out;
  for (long d = 2; Integer(d) * d <= m; ++d) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(d))) {
      out.push_back(d);
      while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(d))) m /= d;
    }
  }
  if (m > 1) {
    if (!m.fits_slong_p()) throw std::overflow_error("prime factor does not fit in a machine word");
    out.push_back(m.get_si());
  }
  return out;
}

GroundRing GroundRing::prime_field(long p) {
  if (!is_prime(p)) throw std::invalid_argument("F_p requires p prime, got " + std::to_string(p));
  return GroundRing(Kind::PrimeField, p);
}

GroundRing GroundRing::parse(const std::string& d) {
  if (d == "Q" || d == "QQ") return rationals();
  if (d == "Z" || d == "ZZ") return integers();
  if (d.size() > 1 && (d[0] == 'F' || d[0] == 'f')) {
    std::size_t used = 0;
    long p = std::stol(d.substr(1), &used);
    if (used + 1 != d.size()) throw std::invalid_argument("bad ring descriptor '" + d + "'");
    return prime_field(p);
  }
  throw std::invalid_argument("bad ring descriptor '" + d + "'");
}

std::string GroundRing::name() const {
  switch (kind_) {
    case Kind::Rationals: return "Q";
    case Kind::Integers: return "Z";
    case Kind::PrimeField: return "F" + std::to_string(p_);
  }
  return "?";
}

void GroundRing::reduce_in_place(Scalar& x) const {
  switch (kind_) {
    case Kind::Rationals: return;
    case Kind::Integers:
      if (x.get_den() != 1) throw std::domain_error("non-integral scalar " + x.get_str() + " over Z");
      return;
    case Kind::PrimeField: {
      Integer p(p_);
      if (x.get_den() == 1) {
        if (sgn(x.get_num()) >= 0 && x.get_num() < p) return;
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), x.get_num_mpz_t(), p.get_mpz_t());
        x = Scalar(r);
        return;
      }
      Integer den;
      mpz_fdiv_r(den.get_mpz_t(), x.get_den_mpz_t(), p.get_mpz_t());
      if (den == 0) throw std::domain_error("denominator of " + x.get_str() + " vanishes mod " + std::to_string(p_));
      Integer inv;
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
      Integer r = x.get_num() * inv;
      mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
      x = Scalar(r);
      return;
    }
  }
}

Scalar GroundRing::reduce(const Scalar& x) const {
  Scalar y = x;
  reduce_in_place(y);
  return y;
}

bool GroundRing::contains(const Scalar& x) const {
  switch (kind_) {
    case Kind::Rationals: return true;
    case Kind::Integers: return x.get_den() == 1;
    case Kind::PrimeField: return !mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(p_));
  }
  return false;
}

bool GroundRing::is_unit(const Scalar& x) const {
  if (kind_ == Kind::Integers) return x == 1 || x == -1;
  return reduce(x) != 0;
}

Scalar GroundRing::inverse(const Scalar& x) const {
  if (!is_unit(x)) throw std::domain_error(x.get_str() + " is not a unit in " + name());
  if (kind_ == Kind::Integers) return x;
  return reduce(Scalar(1) / reduce(x));
}

}  // namespace qhkit
