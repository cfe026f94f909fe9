#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qhkit/matrix.hpp"
#include "qhkit/ring.hpp"

namespace qhkit {

// U * A * V = diag(d_1, ..., d_r, 0, ...), d_i | d_{i+1}, U and V invertible
// over the ring (unimodular over Z). Over a field every d_i is 1.
struct SmithData {
  Matrix U, V;
  Matrix U_inv, V_inv;
  std::vector<Integer> divisors;

  std::size_t rank() const noexcept { return divisors.size(); }
};

SmithData smith_form(const Matrix& a, const GroundRing& ring);
// Divisors only; skips the transform bookkeeping.
std::vector<Integer> elementary_divisors(const Matrix& a, const GroundRing& ring);

struct EchelonForm {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

// Reduced row echelon form over the fraction field of the ring (Q for Z).
EchelonForm rref(const Matrix& a, const GroundRing& ring);

// Row-style Hermite normal form over Z; only the nonzero rows are returned.
Matrix hermite_form(const Matrix& a);

std::size_t rank(const Matrix& a, const GroundRing& ring);

// Columns form a basis of {x : a x = 0}; over Z a basis of the full
// (automatically saturated) kernel lattice.
Matrix kernel_basis(const Matrix& a, const GroundRing& ring);

// Some x with a x = b (integral over Z), or nullopt.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b, const GroundRing& ring);

// Basis of the R-span of the columns (HNF basis over Z, not saturated).
Matrix column_span_basis(const Matrix& s, const GroundRing& ring);

// Basis of {v : k v in span(s) for some k != 0}.
Matrix saturation(const Matrix& s, const GroundRing& ring);

bool is_saturated(const Matrix& s, const GroundRing& ring);

// Column spans equal as R-lattices.
bool same_span(const Matrix& a, const Matrix& b, const GroundRing& ring);

// Fraction-free (Bareiss) determinant over Q and Z; plain elimination over F_p.
Scalar determinant(const Matrix& a, const GroundRing& ring);

// Inverse over the ring (nullopt when singular or, over Z, not unimodular).
std::optional<Matrix> inverse(const Matrix& a, const GroundRing& ring);

// A saturated sublattice L of R^n together with a complementary basis, so
// that [basis | complement] is invertible with inverse [coords ; quotient].
struct Sublattice {
  Matrix basis;       // n x r
  Matrix complement;  // n x (n - r)
  Matrix coords;      // r x n
  Matrix quotient;    // (n - r) x n

  std::size_t rank() const noexcept { return basis.cols(); }
  std::size_t ambient() const noexcept { return basis.rows(); }
};

// Saturation of span(s) with a complement.
Sublattice complete_basis(const Matrix& s, const GroundRing& ring);

struct CokernelInvariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // nonunit elementary divisors

  bool is_zero() const noexcept { return free_rank == 0 && torsion.empty(); }
};

// Structure of R^rows / span(columns of a).
CokernelInvariants cokernel_invariants(const Matrix& a, const GroundRing& ring);

// Coordinates with respect to a fixed full-column-rank basis.
class CoordinateSolver {
 public:
  CoordinateSolver(const Matrix& basis, const GroundRing& ring);

  // Unique c with basis * c = v and c over the ring, or nullopt.
  std::optional<Matrix> coordinates(const Matrix& v) const;

  std::size_t dimension() const noexcept { return basis_.cols(); }

 private:
  GroundRing ring_;
  Matrix basis_;
  std::vector<std::size_t> pivot_rows_;
  Matrix pivot_inverse_;
};

}  // namespace qhkit
