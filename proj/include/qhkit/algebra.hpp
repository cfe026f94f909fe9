#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qhkit/linalg.hpp"

namespace qhkit {

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

// Element of e_target A e_source used to test intertwining; together with the
// designated idempotents these generate A over the fraction field.
struct BlockGenerator {
  Matrix element;  // d x 1 coefficient vector
  std::size_t source = 0;
  std::size_t target = 0;
};

// Free rank-d R-algebra given by structure constants. left(i) is the matrix
// of left multiplication by b_i, so column j of left(i) is b_i * b_j.
class Algebra : public std::enable_shared_from_this<Algebra> {
 public:
  // Throws std::invalid_argument naming the first failed axiom when
  // validate is set (associativity, unit, idempotents).
  static AlgebraPtr create(GroundRing ring, std::vector<Matrix> left_mult, Matrix unit,
                           std::vector<Matrix> idempotents, std::vector<std::string> labels = {},
                           bool validate = true);
  static AlgebraPtr ground(const GroundRing& ring);

  const GroundRing& ring() const noexcept { return ring_; }
  std::size_t rank() const noexcept { return left_.size(); }
  const Matrix& left(std::size_t i) const { return left_[i]; }
  const std::vector<Matrix>& left_matrices() const noexcept { return left_; }
  const Matrix& unit() const noexcept { return unit_; }
  std::size_t num_idempotents() const noexcept { return idempotents_.size(); }
  const Matrix& idempotent(std::size_t a) const { return idempotents_[a]; }
  const std::vector<Matrix>& idempotents() const noexcept { return idempotents_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  Matrix basis_vector(std::size_t i) const { return Matrix::unit_vector(rank(), i); }
  Matrix multiply(const Matrix& x, const Matrix& y) const;
  // Left multiplication by x as a d x d matrix.
  Matrix left_action(const Matrix& x) const;
  // Right multiplication by x: column j is b_j * x.
  Matrix right_action(const Matrix& x) const;
  // Structure constant c_{ij}^k.
  const Scalar& constant(std::size_t i, std::size_t j, std::size_t k) const { return left_[i](k, j); }

  // Basis of e_c A e_a (columns in A coordinates), saturated.
  const Matrix& block_basis(std::size_t c, std::size_t a) const;
  // Basis of the left ideal A e_a.
  const Matrix& projective_basis(std::size_t a) const;
  const std::vector<BlockGenerator>& generators() const;

  AlgebraPtr opposite() const;
  bool same_structure(const Algebra& other) const;

  // Every coefficient of x lies in the ring.
  bool contains(const Matrix& x) const { return entries_in(ring_, x); }

 private:
  Algebra() = default;
  void compute_blocks() const;

  GroundRing ring_ = GroundRing::rationals();
  std::vector<Matrix> left_;
  Matrix unit_;
  std::vector<Matrix> idempotents_;
  std::vector<std::string> labels_;

  mutable std::once_flag blocks_once_;
  mutable std::vector<std::vector<Matrix>> blocks_;
  mutable std::vector<Matrix> projective_bases_;
  mutable std::vector<BlockGenerator> generators_;

  mutable std::mutex op_mutex_;
  mutable std::shared_ptr<const Algebra> op_;
  mutable std::weak_ptr<const Algebra> op_of_;
};

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

// Throws std::invalid_argument on the first violated axiom.
void check_algebra(const Algebra& a);

// A / J for a two-sided ideal J (saturated lattice, columns in A coordinates).
struct QuotientAlgebra {
  AlgebraPtr algebra;
  Matrix projection;  // rank(A/J) x rank(A)
  Matrix section;     // rank(A) x rank(A/J), projection * section = I
};
QuotientAlgebra quotient_algebra(const AlgebraPtr& a, const Matrix& ideal);

AlgebraPtr tensor_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

// Reduction of an integral algebra modulo p.
AlgebraPtr reduce_algebra(const AlgebraPtr& a, long p);

// Algebra with basis change b'_i = sum_j g(j, i) b_j (g invertible over R).
AlgebraPtr change_basis(const AlgebraPtr& a, const Matrix& g);

}  // namespace qhkit
