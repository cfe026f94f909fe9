#include "qhkit/algebra.hpp"

#include <stdexcept>

namespace qhkit {

namespace {

GroundRing fraction_field_of(const GroundRing& r) { return r.is_integers() ? GroundRing::rationals() : r; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Span of the subalgebra generated by the idempotents and gens, over the
// fraction field, as a column basis.
Matrix subalgebra_closure(const Algebra& a, const std::vector<Matrix>& gens) {
  const GroundRing f = fraction_field_of(a.ring());
  std::vector<Matrix> parts = a.idempotents();
  parts.insert(parts.end(), gens.begin(), gens.end());
  Matrix w = column_span_basis(hcat(parts, a.rank()), f);
  std::vector<Matrix> lefts;
  for (const auto& g : gens) lefts.push_back(a.left_action(g));
  while (true) {
    std::vector<Matrix> grow{w};
    for (const auto& l : lefts) grow.push_back(mul(f, l, w));
    Matrix next = column_span_basis(hcat(grow, a.rank()), f);
    if (next.cols() == w.cols()) return w;
    w = std::move(next);
  }
}

}  // namespace

AlgebraPtr Algebra::create(GroundRing ring, std::vector<Matrix> left_mult, Matrix unit, std::vector<Matrix> idempotents,
                           std::vector<std::string> labels, bool validate) {
  const std::size_t d = left_mult.size();
  require(unit.rows() == d && unit.cols() == 1, "unit vector has wrong shape");
  for (std::size_t i = 0; i < d; ++i)
    require(left_mult[i].rows() == d && left_mult[i].cols() == d, "multiplication matrix " + std::to_string(i) + " has wrong shape");
  for (std::size_t a = 0; a < idempotents.size(); ++a)
    require(idempotents[a].rows() == d && idempotents[a].cols() == 1, "idempotent " + std::to_string(a) + " has wrong shape");
  auto check_entries = [&](const Matrix& m, const std::string& what) {
    require(entries_in(ring, m), what + " has coefficients outside " + ring.name());
  };
  for (std::size_t i = 0; i < d; ++i) check_entries(left_mult[i], "multiplication matrix " + std::to_string(i));
  check_entries(unit, "unit");
  for (std::size_t a = 0; a < idempotents.size(); ++a) check_entries(idempotents[a], "idempotent " + std::to_string(a));

  std::shared_ptr<Algebra> alg(new Algebra());
  alg->ring_ = ring;
  for (auto& m : left_mult) alg->left_.push_back(reduce(ring, std::move(m)));
  alg->unit_ = reduce(ring, std::move(unit));
  if (idempotents.empty() && d > 0) idempotents.push_back(alg->unit_);
  for (auto& e : idempotents) alg->idempotents_.push_back(reduce(ring, std::move(e)));
  if (labels.empty())
    for (std::size_t i = 0; i < d; ++i) labels.push_back("b" + std::to_string(i));
  require(labels.size() == d, "label count differs from rank");
  alg->labels_ = std::move(labels);
  if (validate) check_algebra(*alg);
  return alg;
}

AlgebraPtr Algebra::ground(const GroundRing& ring) {
  return create(ring, {Matrix::identity(1)}, Matrix{{1}}, {Matrix{{1}}}, {"1"});
}

Matrix Algebra::left_action(const Matrix& x) const {
  Matrix out(rank(), rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    if (sgn(x(i, 0)) == 0) continue;
    out += left_[i] * x(i, 0);
  }
  return reduce(ring_, std::move(out));
}

Matrix Algebra::right_action(const Matrix& x) const {
  Matrix out(rank(), rank());
  for (std::size_t j = 0; j < rank(); ++j) out.set_block(0, j, mul(ring_, left_[j], x));
  return out;
}

Matrix Algebra::multiply(const Matrix& x, const Matrix& y) const { return mul(ring_, left_action(x), y); }

void Algebra::compute_blocks() const {
  std::call_once(blocks_once_, [this] {
    const std::size_t t = idempotents_.size();
    std::vector<Matrix> lefts, rights;
    for (const auto& e : idempotents_) {
      lefts.push_back(left_action(e));
      rights.push_back(right_action(e));
    }
    blocks_.assign(t, std::vector<Matrix>(t));
    for (std::size_t c = 0; c < t; ++c)
      for (std::size_t a = 0; a < t; ++a) blocks_[c][a] = saturation(mul(ring_, lefts[c], rights[a]), ring_);
    projective_bases_.resize(t);
    for (std::size_t a = 0; a < t; ++a) {
      std::vector<Matrix> parts;
      for (std::size_t c = 0; c < t; ++c) parts.push_back(blocks_[c][a]);
      projective_bases_[a] = hcat(parts, rank());
    }

    std::vector<BlockGenerator> candidates;
    for (std::size_t c = 0; c < t; ++c)
      for (std::size_t a = 0; a < t; ++a)
        for (std::size_t k = 0; k < blocks_[c][a].cols(); ++k) candidates.push_back({blocks_[c][a].col(k), a, c});
    std::vector<BlockGenerator> chosen;
    auto elements = [](const std::vector<BlockGenerator>& g) {
      std::vector<Matrix> out;
      for (const auto& x : g) out.push_back(x.element);
      return out;
    };
    const GroundRing f = fraction_field_of(ring_);
    Matrix closure = subalgebra_closure(*this, {});
    for (const auto& cand : candidates) {
      if (closure.cols() == rank()) break;
      if (qhkit::rank(hcat(closure, cand.element), f) == closure.cols()) continue;
      chosen.push_back(cand);
      closure = subalgebra_closure(*this, elements(chosen));
    }
    for (std::size_t k = chosen.size(); k-- > 0;) {
      auto trial = chosen;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
      if (subalgebra_closure(*this, elements(trial)).cols() == rank()) chosen = std::move(trial);
    }
    generators_ = std::move(chosen);
  });
}

const Matrix& Algebra::block_basis(std::size_t c, std::size_t a) const {
  compute_blocks();
  return blocks_.at(c).at(a);
}

const Matrix& Algebra::projective_basis(std::size_t a) const {
  compute_blocks();
  return projective_bases_.at(a);
}

const std::vector<BlockGenerator>& Algebra::generators() const {
  compute_blocks();
  return generators_;
}

AlgebraPtr Algebra::opposite() const {
  std::lock_guard<std::mutex> lock(op_mutex_);
  if (auto back = op_of_.lock()) return back;
  if (op_) return op_;
  const std::size_t d = rank();
  std::vector<Matrix> lefts(d, Matrix(d, d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) lefts[i](k, j) = left_[j](k, i);
  AlgebraPtr op = create(ring_, std::move(lefts), unit_, idempotents_, labels_, false);
  op->op_of_ = shared_from_this();
  op_ = op;
  return op_;
}

bool Algebra::same_structure(const Algebra& o) const {
  return ring_ == o.ring_ && left_ == o.left_ && unit_ == o.unit_ && idempotents_ == o.idempotents_;
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->same_structure(*b);
}

void check_algebra(const Algebra& a) {
  const std::size_t d = a.rank();
  const GroundRing& r = a.ring();
  require(a.left_action(a.unit()) == Matrix::identity(d), "unit fails as a left identity");
  for (std::size_t i = 0; i < d; ++i)
    require(mul(r, a.left(i), a.unit()) == a.basis_vector(i), "unit fails on basis " + std::to_string(i));

  // L_i L_j = sum_k c_{ij}^k L_k encodes (b_i b_j) b_m = b_i (b_j b_m).
  for (std::size_t i = 0; i < d; ++i) {
    if (a.left(i).is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) {
      Matrix lhs = mul(r, a.left(i), a.left(j));
      Matrix rhs = a.left_action(a.left(i).col(j));
      if (lhs != rhs)
        throw std::invalid_argument("associativity fails on basis triple involving (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
    }
  }

  Matrix total(d, 1);
  for (std::size_t x = 0; x < a.num_idempotents(); ++x) {
    total += a.idempotent(x);
    for (std::size_t y = 0; y < a.num_idempotents(); ++y) {
      Matrix p = a.multiply(a.idempotent(x), a.idempotent(y));
      Matrix expect = x == y ? a.idempotent(x) : Matrix(d, 1);
      if (p != expect)
        throw std::invalid_argument(x == y ? "idempotent " + std::to_string(x) + " is not idempotent"
                                           : "idempotents " + std::to_string(x) + " and " + std::to_string(y) +
                                                 " are not orthogonal");
    }
  }
  require(reduce(r, total) == a.unit(), "idempotents do not sum to the unit");
}

QuotientAlgebra quotient_algebra(const AlgebraPtr& a, const Matrix& ideal) {
  const GroundRing& r = a->ring();
  if (!is_saturated(ideal, r)) throw std::invalid_argument("quotient by a non-saturated ideal");
  const Sublattice sub = complete_basis(ideal, r);
  const Matrix& q = sub.quotient;
  const Matrix& s = sub.complement;
  const std::size_t n = s.cols();
  std::vector<Matrix> lefts;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    lefts.push_back(mul(r, mul(r, q, a->left_action(s.col(i))), s));
    labels.push_back("q" + std::to_string(i));
  }
  std::vector<Matrix> idem;
  for (const auto& e : a->idempotents()) idem.push_back(mul(r, q, e));
  QuotientAlgebra out;
  out.algebra = Algebra::create(r, std::move(lefts), mul(r, q, a->unit()), std::move(idem), std::move(labels));
  out.projection = q;
  out.section = s;
  return out;
}

AlgebraPtr tensor_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (!(a->ring() == b->ring())) throw std::invalid_argument("tensor_algebra: ring mismatch");
  std::vector<Matrix> lefts;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < a->rank(); ++i)
    for (std::size_t j = 0; j < b->rank(); ++j) {
      lefts.push_back(kronecker(a->left(i), b->left(j)));
      labels.push_back(a->labels()[i] + "*" + b->labels()[j]);
    }
  std::vector<Matrix> idem;
  for (const auto& e : a->idempotents())
    for (const auto& f : b->idempotents()) idem.push_back(kronecker(e, f));
  return Algebra::create(a->ring(), std::move(lefts), kronecker(a->unit(), b->unit()), std::move(idem), std::move(labels));
}

AlgebraPtr reduce_algebra(const AlgebraPtr& a, long p) {
  if (!a->ring().is_integers()) throw std::invalid_argument("reduction mod p needs an algebra over Z");
  return Algebra::create(GroundRing::prime_field(p), a->left_matrices(), a->unit(), a->idempotents(), a->labels());
}

AlgebraPtr change_basis(const AlgebraPtr& a, const Matrix& g) {
  const GroundRing& r = a->ring();
  auto gi = inverse(g, r);
  if (!gi) throw std::invalid_argument("change_basis: matrix not invertible over " + r.name());
  std::vector<Matrix> lefts;
  for (std::size_t i = 0; i < a->rank(); ++i) lefts.push_back(mul(r, mul(r, *gi, a->left_action(g.col(i))), g));
  std::vector<Matrix> idem;
  for (const auto& e : a->idempotents()) idem.push_back(mul(r, *gi, e));
  return Algebra::create(r, std::move(lefts), mul(r, *gi, a->unit()), std::move(idem));
}

}  // namespace qhkit
