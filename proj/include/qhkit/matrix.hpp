#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "qhkit/ring.hpp"

namespace qhkit {

// Dense row-major matrix of exact scalars. Arithmetic here is plain exact
// rational arithmetic; ring-aware wrappers (mul/reduce below) bring results
// back to canonical representatives over F_p.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix column(const std::vector<Scalar>& v);
  // n x 1 unit vector.
  static Matrix unit_vector(std::size_t n, std::size_t i);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix col(std::size_t j) const;
  Matrix row(std::size_t i) const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  Matrix cols_range(std::size_t c0, std::size_t nc) const { return block(0, c0, rows_, nc); }
  Matrix rows_range(std::size_t r0, std::size_t nr) const { return block(r0, 0, nr, cols_); }
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  Matrix select_cols(const std::vector<std::size_t>& idx) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  Matrix transpose() const;
  // Column-major flattening into an (rows*cols) x 1 vector.
  Matrix vectorize() const;
  static Matrix unvectorize(const Matrix& v, std::size_t rows, std::size_t cols);

  bool is_zero() const;
  bool is_integral() const;
  bool is_square() const noexcept { return rows_ == cols_; }

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Scalar& s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Scalar& s) { return a *= s; }
  friend Matrix operator*(const Scalar& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator-(Matrix a);
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

Matrix hcat(const Matrix& a, const Matrix& b);
Matrix vcat(const Matrix& a, const Matrix& b);
Matrix hcat(const std::vector<Matrix>& parts, std::size_t rows);
Matrix vcat(const std::vector<Matrix>& parts, std::size_t cols);
Matrix block_diagonal(const std::vector<Matrix>& blocks);
// Kronecker product a (x) b.
Matrix kronecker(const Matrix& a, const Matrix& b);

Matrix reduce(const GroundRing& ring, Matrix m);
Matrix mul(const GroundRing& ring, const Matrix& a, const Matrix& b);
Matrix add(const GroundRing& ring, const Matrix& a, const Matrix& b);
Matrix sub(const GroundRing& ring, const Matrix& a, const Matrix& b);
// Every entry is a valid element of the ring.
bool entries_in(const GroundRing& ring, const Matrix& m);

}  // namespace qhkit
