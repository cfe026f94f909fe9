#include "qhkit/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace qhkit {

namespace {

GroundRing fraction_field(const GroundRing& ring) {
  return ring.is_integers() ? GroundRing::rationals() : ring;
}

// Elementary operations on D with optional tracking of U, U^{-1}, V, V^{-1}.
class SmithWorker {
 public:
  SmithWorker(const Matrix& a, const GroundRing& ring, bool track)
      : ring_(ring), track_(track), d_(reduce(ring, a)) {
    if (track_) {
      u_ = ui_ = Matrix::identity(a.rows());
      v_ = vi_ = Matrix::identity(a.cols());
    }
  }

  SmithData run() {
    const std::size_t m = d_.rows(), n = d_.cols();
    std::vector<Integer> divisors;
    std::size_t r = 0;
    while (r < std::min(m, n)) {
      if (!place_pivot(r)) break;
      if (ring_.is_field())
        eliminate_field(r);
      else
        eliminate_integer(r);
      divisors.push_back(ring_.is_field() ? Integer(1) : Integer(d_(r, r).get_num()));
      ++r;
    }
    SmithData out;
    out.divisors = std::move(divisors);
    if (track_) {
      out.U = std::move(u_);
      out.U_inv = std::move(ui_);
      out.V = std::move(v_);
      out.V_inv = std::move(vi_);
    }
    return out;
  }

 private:
  void fix(Scalar& x) const {
    if (ring_.is_prime_field()) ring_.reduce_in_place(x);
  }

  // row_i += c * row_k
  void row_add(std::size_t i, std::size_t k, const Scalar& c) {
    if (sgn(c) == 0) return;
    axpy_row(d_, i, k, c);
    if (track_) {
      axpy_row(u_, i, k, c);
      axpy_col(ui_, k, i, -c);
    }
  }

  // col_j += c * col_k
  void col_add(std::size_t j, std::size_t k, const Scalar& c) {
    if (sgn(c) == 0) return;
    axpy_col(d_, j, k, c);
    if (track_) {
      axpy_col(v_, j, k, c);
      axpy_row(vi_, k, j, -c);
    }
  }

  void row_swap(std::size_t a, std::size_t b) {
    if (a == b) return;
    d_.swap_rows(a, b);
    if (track_) {
      u_.swap_rows(a, b);
      ui_.swap_cols(a, b);
    }
  }

  void col_swap(std::size_t a, std::size_t b) {
    if (a == b) return;
    d_.swap_cols(a, b);
    if (track_) {
      v_.swap_cols(a, b);
      vi_.swap_rows(a, b);
    }
  }

  void row_scale(std::size_t i, const Scalar& c) {
    const Scalar ci = ring_.inverse(c);
    scale_row(d_, i, c);
    if (track_) {
      scale_row(u_, i, c);
      scale_col(ui_, i, ci);
    }
  }

  void axpy_row(Matrix& m, std::size_t i, std::size_t k, const Scalar& c) const {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (sgn(m(k, j)) == 0) continue;
      m(i, j) += c * m(k, j);
      fix(m(i, j));
    }
  }

  void axpy_col(Matrix& m, std::size_t j, std::size_t k, const Scalar& c) const {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (sgn(m(i, k)) == 0) continue;
      m(i, j) += c * m(i, k);
      fix(m(i, j));
    }
  }

  void scale_row(Matrix& m, std::size_t i, const Scalar& c) const {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      m(i, j) *= c;
      fix(m(i, j));
    }
  }

  void scale_col(Matrix& m, std::size_t j, const Scalar& c) const {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      m(i, j) *= c;
      fix(m(i, j));
    }
  }

  // Moves a nonzero entry of the trailing block to (r, r); over Z the one of
  // least absolute value.
  bool place_pivot(std::size_t r) {
    const std::size_t m = d_.rows(), n = d_.cols();
    std::size_t pi = m, pj = n;
    Integer best;
    for (std::size_t j = r; j < n; ++j) {
      for (std::size_t i = r; i < m; ++i) {
        if (sgn(d_(i, j)) == 0) continue;
        if (ring_.is_field()) {
          pi = i;
          pj = j;
          break;
        }
        Integer v = abs(d_(i, j).get_num());
        if (pi == m || v < best) {
          best = v;
          pi = i;
          pj = j;
          if (best == 1) break;
        }
      }
      if (pi != m && (ring_.is_field() || best == 1)) break;
    }
    if (pi == m) return false;
    row_swap(r, pi);
    col_swap(r, pj);
    return true;
  }

  void eliminate_field(std::size_t r) {
    const std::size_t m = d_.rows(), n = d_.cols();
    if (d_(r, r) != 1) row_scale(r, ring_.inverse(d_(r, r)));
    for (std::size_t i = r + 1; i < m; ++i)
      if (sgn(d_(i, r)) != 0) row_add(i, r, -d_(i, r));
    for (std::size_t j = r + 1; j < n; ++j)
      if (sgn(d_(r, j)) != 0) col_add(j, r, -d_(r, j));
  }

  void eliminate_integer(std::size_t r) {
    const std::size_t m = d_.rows(), n = d_.cols();
    while (true) {
      bool clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (sgn(d_(i, r)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), d_(i, r).get_num_mpz_t(), d_(r, r).get_num_mpz_t());
        row_add(i, r, Scalar(-q));
        if (sgn(d_(i, r)) != 0) clean = false;
      }
      for (std::size_t j = r + 1; j < n; ++j) {
        if (sgn(d_(r, j)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), d_(r, j).get_num_mpz_t(), d_(r, r).get_num_mpz_t());
        col_add(j, r, Scalar(-q));
        if (sgn(d_(r, j)) != 0) clean = false;
      }
      if (!clean) {
        // Remainders are strictly smaller than the pivot; promote the least.
        Integer best = abs(d_(r, r).get_num());
        std::size_t bi = r, bj = r;
        for (std::size_t i = r + 1; i < m; ++i)
          if (sgn(d_(i, r)) != 0 && abs(d_(i, r).get_num()) < best) {
            best = abs(d_(i, r).get_num());
            bi = i;
            bj = r;
          }
        for (std::size_t j = r + 1; j < n; ++j)
          if (sgn(d_(r, j)) != 0 && abs(d_(r, j).get_num()) < best) {
            best = abs(d_(r, j).get_num());
            bi = r;
            bj = j;
          }
        row_swap(r, bi);
        col_swap(r, bj);
        continue;
      }
      bool divisible = true;
      for (std::size_t i = r + 1; i < m && divisible; ++i)
        for (std::size_t j = r + 1; j < n; ++j) {
          if (sgn(d_(i, j)) == 0) continue;
          if (!mpz_divisible_p(d_(i, j).get_num_mpz_t(), d_(r, r).get_num_mpz_t())) {
            row_add(r, i, Scalar(1));
            divisible = false;
            break;
          }
        }
      if (divisible) break;
    }
    if (sgn(d_(r, r)) < 0) row_scale(r, Scalar(-1));
  }

  const GroundRing& ring_;
  bool track_;
  Matrix d_, u_, ui_, v_, vi_;
};

}  // namespace

SmithData smith_form(const Matrix& a, const GroundRing& ring) { return SmithWorker(a, ring, true).run(); }

std::vector<Integer> elementary_divisors(const Matrix& a, const GroundRing& ring) {
  return SmithWorker(a, ring, false).run().divisors;
}

EchelonForm rref(const Matrix& a, const GroundRing& ring) {
  const GroundRing field = fraction_field(ring);
  const bool modp = field.is_prime_field();
  Matrix m = reduce(field, a);
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  Scalar t;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (sgn(m(i, c)) != 0) {
        p = i;
        break;
      }
    if (p == rows) continue;
    m.swap_rows(r, p);
    if (m(r, c) != 1) {
      const Scalar inv = field.inverse(m(r, c));
      for (std::size_t j = c; j < cols; ++j) {
        if (sgn(m(r, j)) == 0) continue;
        m(r, j) *= inv;
        if (modp) field.reduce_in_place(m(r, j));
      }
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      const Scalar f = m(i, c);
      for (std::size_t j = c; j < cols; ++j) {
        if (sgn(m(r, j)) == 0) continue;
        t = f * m(r, j);
        m(i, j) -= t;
        if (modp) field.reduce_in_place(m(i, j));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

Matrix hermite_form(const Matrix& a) {
  Matrix h = a;
  const std::size_t rows = h.rows(), cols = h.cols();
  auto row_sub = [&](std::size_t i, std::size_t k, const Integer& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols; ++j)
      if (sgn(h(k, j)) != 0) h(i, j) -= Scalar(q) * h(k, j);
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    while (true) {
      std::size_t p = rows;
      Integer best;
      for (std::size_t i = r; i < rows; ++i) {
        if (sgn(h(i, c)) == 0) continue;
        Integer v = abs(h(i, c).get_num());
        if (p == rows || v < best) {
          best = v;
          p = i;
        }
      }
      if (p == rows) break;
      h.swap_rows(r, p);
      bool done = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (sgn(h(i, c)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_num_mpz_t(), h(r, c).get_num_mpz_t());
        row_sub(i, r, q);
        if (sgn(h(i, c)) != 0) done = false;
      }
      if (done) break;
    }
    if (r < rows && sgn(h(r, c)) != 0) {
      if (sgn(h(r, c)) < 0)
        for (std::size_t j = 0; j < cols; ++j) h(r, j) = -h(r, j);
      for (std::size_t i = 0; i < r; ++i) {
        if (sgn(h(i, c)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_num_mpz_t(), h(r, c).get_num_mpz_t());
        row_sub(i, r, q);
      }
      ++r;
    }
  }
  return h.rows_range(0, r);
}

std::size_t rank(const Matrix& a, const GroundRing& ring) { return rref(a, ring).pivots.size(); }

namespace {

Matrix rational_kernel(const Matrix& a, const GroundRing& ring) {
  const EchelonForm e = rref(a, ring);
  const std::size_t n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free.push_back(j);
  const GroundRing field = fraction_field(ring);
  Matrix k(n, free.size());
  for (std::size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], f) = field.reduce(-e.reduced(r, free[f]));
  }
  return k;
}

// Clears denominators column by column.
Matrix integral_columns(Matrix k) {
  for (std::size_t j = 0; j < k.cols(); ++j) {
    Integer l = 1;
    for (std::size_t i = 0; i < k.rows(); ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), k(i, j).get_den_mpz_t());
    if (l == 1) continue;
    for (std::size_t i = 0; i < k.rows(); ++i) k(i, j) *= l;
  }
  return k;
}

}  // namespace

Matrix kernel_basis(const Matrix& a, const GroundRing& ring) {
  Matrix k = rational_kernel(a, ring);
  if (!ring.is_integers() || k.cols() == 0) return k;
  return saturation(integral_columns(std::move(k)), ring);
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b, const GroundRing& ring) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
  const std::size_t n = a.cols(), s = b.cols();
  if (ring.is_field()) {
    const EchelonForm e = rref(hcat(a, b), ring);
    Matrix x(n, s);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      if (e.pivots[r] >= n) return std::nullopt;
      for (std::size_t t = 0; t < s; ++t) x(e.pivots[r], t) = e.reduced(r, n + t);
    }
    return x;
  }
  if (!a.is_integral() || !b.is_integral()) throw std::domain_error("solve over Z needs integral input");
  const SmithData sd = smith_form(a, ring);
  const Matrix y = sd.U * b;
  Matrix z(n, s);
  for (std::size_t t = 0; t < s; ++t) {
    for (std::size_t i = 0; i < y.rows(); ++i) {
      if (i < sd.rank()) {
        if (!mpz_divisible_p(y(i, t).get_num_mpz_t(), sd.divisors[i].get_mpz_t())) return std::nullopt;
        z(i, t) = y(i, t) / Scalar(sd.divisors[i]);
      } else if (sgn(y(i, t)) != 0) {
        return std::nullopt;
      }
    }
  }
  return sd.V * z;
}

Matrix column_span_basis(const Matrix& s, const GroundRing& ring) {
  if (s.cols() == 0) return Matrix(s.rows(), 0);
  if (ring.is_integers()) return hermite_form(s.transpose()).transpose();
  const EchelonForm e = rref(s.transpose(), ring);
  return e.reduced.rows_range(0, e.pivots.size()).transpose();
}

Matrix saturation(const Matrix& s, const GroundRing& ring) {
  if (s.cols() == 0) return Matrix(s.rows(), 0);
  if (!ring.is_integers()) return column_span_basis(s, ring);
  const SmithData sd = smith_form(s, ring);
  return hermite_form(sd.U_inv.cols_range(0, sd.rank()).transpose()).transpose();
}

bool is_saturated(const Matrix& s, const GroundRing& ring) {
  if (ring.is_field()) return true;
  for (const auto& d : elementary_divisors(s, ring))
    if (d != 1) return false;
  return true;
}

bool same_span(const Matrix& a, const Matrix& b, const GroundRing& ring) {
  if (a.rows() != b.rows()) return false;
  return column_span_basis(a, ring) == column_span_basis(b, ring);
}

Scalar determinant(const Matrix& a, const GroundRing& ring) {
  if (!a.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return Scalar(1);
  if (ring.is_prime_field()) {
    Matrix m = reduce(ring, a);
    Scalar det = 1;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = n;
      for (std::size_t i = k; i < n; ++i)
        if (sgn(m(i, k)) != 0) {
          p = i;
          break;
        }
      if (p == n) return Scalar(0);
      if (p != k) {
        m.swap_rows(p, k);
        det = -det;
      }
      det = ring.reduce(det * m(k, k));
      const Scalar inv = ring.inverse(m(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        if (sgn(m(i, k)) == 0) continue;
        const Scalar f = ring.reduce(m(i, k) * inv);
        for (std::size_t j = k; j < n; ++j) m(i, j) = ring.reduce(m(i, j) - f * m(k, j));
      }
    }
    return det;
  }
  // Bareiss: every intermediate division is exact.
  Matrix m = a;
  Scalar prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t p = n;
      for (std::size_t i = k + 1; i < n; ++i)
        if (sgn(m(i, k)) != 0) {
          p = i;
          break;
        }
      if (p == n) return Scalar(0);
      m.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::optional<Matrix> inverse(const Matrix& a, const GroundRing& ring) {
  if (!a.is_square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = a.rows();
  const EchelonForm e = rref(hcat(a, Matrix::identity(n)), ring);
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  Matrix inv = e.reduced.block(0, n, n, n);
  if (ring.is_integers() && !inv.is_integral()) return std::nullopt;
  return inv;
}

Sublattice complete_basis(const Matrix& s, const GroundRing& ring) {
  const std::size_t n = s.rows();
  Sublattice out;
  if (s.cols() == 0) {
    out.basis = Matrix(n, 0);
    out.complement = Matrix::identity(n);
    out.coords = Matrix(0, n);
    out.quotient = Matrix::identity(n);
    return out;
  }
  const SmithData sd = smith_form(s, ring);
  const std::size_t r = sd.rank();
  out.basis = sd.U_inv.cols_range(0, r);
  out.complement = sd.U_inv.cols_range(r, n - r);
  out.coords = sd.U.rows_range(0, r);
  out.quotient = sd.U.rows_range(r, n - r);
  return out;
}

CokernelInvariants cokernel_invariants(const Matrix& a, const GroundRing& ring) {
  const auto d = elementary_divisors(a, ring);
  CokernelInvariants out;
  out.free_rank = a.rows() - d.size();
  if (ring.is_integers())
    for (const auto& x : d)
      if (x != 1) out.torsion.push_back(x);
  return out;
}

CoordinateSolver::CoordinateSolver(const Matrix& basis, const GroundRing& ring) : ring_(ring), basis_(basis) {
  if (basis.cols() == 0) return;
  const EchelonForm e = rref(basis.transpose(), ring);
  if (e.pivots.size() != basis.cols()) throw std::invalid_argument("CoordinateSolver: basis is not independent");
  pivot_rows_ = e.pivots;
  auto inv = inverse(basis.select_rows(pivot_rows_), fraction_field(ring));
  pivot_inverse_ = std::move(*inv);
}

std::optional<Matrix> CoordinateSolver::coordinates(const Matrix& v) const {
  if (v.rows() != basis_.rows()) throw std::invalid_argument("CoordinateSolver: shape mismatch");
  if (basis_.cols() == 0) {
    if (!reduce(ring_, v).is_zero()) return std::nullopt;
    return Matrix(0, v.cols());
  }
  Matrix c = mul(fraction_field(ring_), pivot_inverse_, v.select_rows(pivot_rows_));
  if (!entries_in(ring_, c)) return std::nullopt;
  c = reduce(ring_, c);
  if (mul(ring_, basis_, c) != reduce(ring_, v)) return std::nullopt;
  return c;
}

}  // namespace qhkit
