#include "qhkit/module.hpp"

#include <random>
#include <stdexcept>

namespace qhkit {

namespace {

void require_same_algebra(const AModule& m, const AModule& n, const char* what) {
  if (!same_algebra(m.algebra(), n.algebra())) throw std::invalid_argument(std::string(what) + ": algebra mismatch");
}

AModule with_actions(const AlgebraPtr& a, std::vector<Matrix> action) { return AModule(a, std::move(action)); }

}  // namespace

AModule::AModule(AlgebraPtr algebra, std::vector<Matrix> action) : d_(std::make_shared<Data>()) {
  if (action.size() != algebra->rank()) throw std::invalid_argument("module needs one action matrix per basis element");
  d_->rank = action.empty() ? 0 : action.front().rows();
  for (auto& m : action) {
    if (m.rows() != d_->rank || m.cols() != d_->rank) throw std::invalid_argument("action matrices must be square of equal size");
    if (!entries_in(algebra->ring(), m)) throw std::invalid_argument("action has coefficients outside " + algebra->ring().name());
    d_->action.push_back(reduce(algebra->ring(), std::move(m)));
  }
  d_->algebra = std::move(algebra);
}

AModule AModule::zero(const AlgebraPtr& algebra) { return AModule(algebra, std::vector<Matrix>(algebra->rank(), Matrix())); }

Matrix AModule::act(const Matrix& x) const {
  Matrix out(rank(), rank());
  for (std::size_t i = 0; i < x.rows(); ++i)
    if (sgn(x(i, 0)) != 0) out += action(i) * x(i, 0);
  return reduce(ring(), std::move(out));
}

void AModule::compute_adapted() const {
  std::call_once(d_->once, [this] {
    const auto& alg = *d_->algebra;
    const GroundRing& r = alg.ring();
    const std::size_t t = alg.num_idempotents();
    d_->blocks.resize(t);
    d_->offsets.resize(t + 1, 0);
    for (std::size_t a = 0; a < t; ++a) {
      Matrix e = act(alg.idempotent(a));
      d_->blocks[a] = rank() == 0 ? Matrix(0, 0) : saturation(e, r);
      d_->offsets[a + 1] = d_->offsets[a] + d_->blocks[a].cols();
    }
    if (d_->offsets[t] != rank()) throw std::logic_error("idempotent blocks do not decompose the module");
    d_->adapted = hcat(d_->blocks, rank());
    auto inv = inverse(d_->adapted, r);
    if (!inv) throw std::logic_error("idempotent blocks do not decompose the module over the ring");
    d_->adapted_inv = std::move(*inv);
    for (const auto& g : alg.generators()) {
      Matrix full = mul(r, mul(r, d_->adapted_inv, act(g.element)), d_->adapted);
      d_->gen_blocks.push_back(full.block(d_->offsets[g.target], d_->offsets[g.source], d_->blocks[g.target].cols(),
                                          d_->blocks[g.source].cols()));
    }
  });
}

const Matrix& AModule::block_basis(std::size_t a) const {
  compute_adapted();
  return d_->blocks.at(a);
}

const Matrix& AModule::adapted_basis() const {
  compute_adapted();
  return d_->adapted;
}

const Matrix& AModule::adapted_inverse() const {
  compute_adapted();
  return d_->adapted_inv;
}

std::size_t AModule::block_offset(std::size_t a) const {
  compute_adapted();
  return d_->offsets.at(a);
}

const std::vector<Matrix>& AModule::generator_blocks() const {
  compute_adapted();
  return d_->gen_blocks;
}

void check_module(const AModule& m) {
  const auto& a = *m.algebra();
  const GroundRing& r = a.ring();
  const std::size_t n = m.rank();
  if (m.act(a.unit()) != Matrix::identity(n)) throw std::invalid_argument("unit does not act as the identity");
  for (std::size_t i = 0; i < a.rank(); ++i)
    for (std::size_t j = 0; j < a.rank(); ++j) {
      if (mul(r, m.action(i), m.action(j)) != m.act(a.left(i).col(j)))
        throw std::invalid_argument("representation relation fails for basis pair (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
    }
}

bool Morphism::is_intertwiner() const {
  const GroundRing& r = source.ring();
  if (matrix.rows() != target.rank() || matrix.cols() != source.rank()) return false;
  for (std::size_t i = 0; i < source.algebra()->rank(); ++i)
    if (mul(r, matrix, source.action(i)) != mul(r, target.action(i), matrix)) return false;
  return true;
}

Morphism compose(const Morphism& g, const Morphism& f) {
  if (g.source.rank() != f.target.rank()) throw std::invalid_argument("compose: shape mismatch");
  return {f.source, g.target, mul(f.source.ring(), g.matrix, f.matrix)};
}

Morphism identity_morphism(const AModule& m) { return {m, m, Matrix::identity(m.rank())}; }

Morphism zero_morphism(const AModule& s, const AModule& t) { return {s, t, Matrix(t.rank(), s.rank())}; }

AModule regular_module(const AlgebraPtr& a) { return with_actions(a, a->left_matrices()); }

AModule projective_module(const AlgebraPtr& a, std::size_t idempotent) {
  const Matrix& basis = a->projective_basis(idempotent);
  const GroundRing& r = a->ring();
  std::vector<Matrix> action;
  if (basis.cols() == 0) return AModule::zero(a);
  CoordinateSolver cs(basis, r);
  for (std::size_t i = 0; i < a->rank(); ++i) action.push_back(*cs.coordinates(mul(r, a->left(i), basis)));
  return with_actions(a, std::move(action));
}

AModule direct_sum(const std::vector<AModule>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum of nothing");
  const AlgebraPtr& a = parts.front().algebra();
  std::vector<Matrix> action;
  for (std::size_t i = 0; i < a->rank(); ++i) {
    std::vector<Matrix> blocks;
    for (const auto& p : parts) {
      if (!same_algebra(p.algebra(), a)) throw std::invalid_argument("direct_sum: algebra mismatch");
      blocks.push_back(p.action(i));
    }
    action.push_back(block_diagonal(blocks));
  }
  return with_actions(a, std::move(action));
}

AModule direct_sum(const AModule& a, const AModule& b) { return direct_sum(std::vector<AModule>{a, b}); }

AModule tensor_with_free(const AModule& m, std::size_t copies) {
  if (copies == 0) return AModule::zero(m.algebra());
  return direct_sum(std::vector<AModule>(copies, m));
}

Submodule submodule(const AModule& m, const Matrix& s) {
  const GroundRing& r = m.ring();
  const Matrix basis = column_span_basis(s, r);
  std::vector<Matrix> action;
  if (basis.cols() == 0) {
    AModule z = AModule::zero(m.algebra());
    return {z, {z, m, Matrix(m.rank(), 0)}};
  }
  CoordinateSolver cs(basis, r);
  for (std::size_t i = 0; i < m.algebra()->rank(); ++i) {
    auto c = cs.coordinates(mul(r, m.action(i), basis));
    if (!c) throw std::invalid_argument("submodule: lattice is not stable under basis element " + std::to_string(i));
    action.push_back(std::move(*c));
  }
  AModule sub = with_actions(m.algebra(), std::move(action));
  return {sub, {sub, m, basis}};
}

Submodule generated_submodule(const AModule& m, const Matrix& g) {
  const GroundRing& r = m.ring();
  Matrix span = column_span_basis(g, r);
  while (true) {
    std::vector<Matrix> parts{span};
    for (std::size_t i = 0; i < m.algebra()->rank(); ++i) parts.push_back(mul(r, m.action(i), span));
    Matrix next = column_span_basis(hcat(parts, m.rank()), r);
    if (next == span) break;
    span = std::move(next);
  }
  return submodule(m, span);
}

QuotientModule quotient(const AModule& m, const Matrix& s) {
  const GroundRing& r = m.ring();
  if (!is_saturated(s, r)) throw std::invalid_argument("quotient: submodule lattice is not saturated");
  Sublattice sub = complete_basis(s, r);
  std::vector<Matrix> action;
  for (std::size_t i = 0; i < m.algebra()->rank(); ++i) {
    if (!mul(r, mul(r, sub.quotient, m.action(i)), sub.basis).is_zero())
      throw std::invalid_argument("quotient: lattice is not stable under basis element " + std::to_string(i));
    action.push_back(mul(r, mul(r, sub.quotient, m.action(i)), sub.complement));
  }
  AModule q = sub.complement.cols() == 0 ? AModule::zero(m.algebra()) : with_actions(m.algebra(), std::move(action));
  Morphism proj{m, q, sub.quotient};
  return {q, proj, std::move(sub)};
}

Submodule kernel(const Morphism& f) { return submodule(f.source, kernel_basis(f.matrix, f.source.ring())); }

Submodule image(const Morphism& f) { return submodule(f.target, f.matrix); }

QuotientModule cokernel(const Morphism& f) {
  return quotient(f.target, column_span_basis(f.matrix, f.source.ring()));
}

AModule inflate(const AModule& m, const AlgebraPtr& big, const QuotientAlgebra& q) {
  if (!same_algebra(m.algebra(), q.algebra)) throw std::invalid_argument("inflate: module is not over the quotient");
  std::vector<Matrix> action;
  for (std::size_t i = 0; i < big->rank(); ++i) action.push_back(m.act(q.projection.col(i)));
  return with_actions(big, std::move(action));
}

std::optional<AModule> deflate(const AModule& m, const QuotientAlgebra& q, const Matrix& ideal) {
  for (std::size_t j = 0; j < ideal.cols(); ++j)
    if (!m.act(ideal.col(j)).is_zero()) return std::nullopt;
  std::vector<Matrix> action;
  for (std::size_t i = 0; i < q.algebra->rank(); ++i) action.push_back(m.act(q.section.col(i)));
  return with_actions(q.algebra, std::move(action));
}

AModule dual_module(const AModule& m) {
  std::vector<Matrix> action;
  for (const auto& x : m.actions()) action.push_back(x.transpose());
  return with_actions(m.algebra()->opposite(), std::move(action));
}

Morphism dual_morphism(const Morphism& f) {
  return {dual_module(f.target), dual_module(f.source), f.matrix.transpose()};
}

AModule reduce_module(const AModule& m, const AlgebraPtr& reduced) {
  if (!m.ring().is_integers() || reduced->rank() != m.algebra()->rank())
    throw std::invalid_argument("reduce_module: needs a module over Z and the reduced algebra");
  return with_actions(reduced, m.actions());
}

AModule change_module_basis(const AModule& m, const Matrix& g) {
  const GroundRing& r = m.ring();
  auto gi = inverse(g, r);
  if (!gi) throw std::invalid_argument("change_module_basis: matrix not invertible over " + r.name());
  std::vector<Matrix> action;
  for (const auto& x : m.actions()) action.push_back(mul(r, mul(r, *gi, x), g));
  return with_actions(m.algebra(), std::move(action));
}

std::vector<Morphism> hom_space(const AModule& m, const AModule& n) {
  require_same_algebra(m, n, "hom_space");
  const auto& alg = *m.algebra();
  const GroundRing& r = alg.ring();
  const std::size_t t = alg.num_idempotents();
  if (m.rank() == 0 || n.rank() == 0) return {};

  // Unknowns: one block X_a : e_a M -> e_a N per idempotent, column-major.
  std::vector<std::size_t> off(t + 1, 0);
  for (std::size_t a = 0; a < t; ++a) off[a + 1] = off[a] + n.block_rank(a) * m.block_rank(a);
  const std::size_t unknowns = off[t];
  if (unknowns == 0) return {};
  auto var = [&](std::size_t a, std::size_t p, std::size_t q) { return off[a] + q * n.block_rank(a) + p; };

  const auto& gens = alg.generators();
  std::size_t eqs = 0;
  for (const auto& g : gens) eqs += n.block_rank(g.target) * m.block_rank(g.source);
  Matrix sys(eqs, unknowns);
  std::size_t row = 0;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const std::size_t a = gens[k].source, c = gens[k].target;
    const Matrix& gm = m.generator_blocks()[k];  // m_c x m_a
    const Matrix& gn = n.generator_blocks()[k];  // n_c x n_a
    // (X_c gm - gn X_a)(p, q) = 0
    for (std::size_t q = 0; q < m.block_rank(a); ++q)
      for (std::size_t p = 0; p < n.block_rank(c); ++p, ++row) {
        for (std::size_t s = 0; s < m.block_rank(c); ++s)
          if (sgn(gm(s, q)) != 0) sys(row, var(c, p, s)) += gm(s, q);
        for (std::size_t s = 0; s < n.block_rank(a); ++s)
          if (sgn(gn(p, s)) != 0) sys(row, var(a, s, q)) -= gn(p, s);
      }
  }
  const Matrix ker = kernel_basis(reduce(r, std::move(sys)), r);

  std::vector<Morphism> out;
  for (std::size_t k = 0; k < ker.cols(); ++k) {
    Matrix x(n.rank(), m.rank());
    for (std::size_t a = 0; a < t; ++a)
      for (std::size_t q = 0; q < m.block_rank(a); ++q)
        for (std::size_t p = 0; p < n.block_rank(a); ++p)
          x(n.block_offset(a) + p, m.block_offset(a) + q) = ker(var(a, p, q), k);
    out.push_back({m, n, mul(r, mul(r, n.adapted_basis(), x), m.adapted_inverse())});
  }
  return out;
}

std::size_t hom_rank(const AModule& m, const AModule& n) { return hom_space(m, n).size(); }

Matrix vectorized(const std::vector<Morphism>& basis, std::size_t rows, std::size_t cols) {
  Matrix out(rows * cols, basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) out.set_block(0, k, basis[k].matrix.vectorize());
  return out;
}

std::optional<Morphism> find_isomorphism(const AModule& m, const AModule& n, std::uint64_t seed) {
  require_same_algebra(m, n, "find_isomorphism");
  if (m.rank() != n.rank()) return std::nullopt;
  if (m.rank() == 0) return Morphism{m, n, Matrix(0, 0)};
  const GroundRing& r = m.ring();
  const auto basis = hom_space(m, n);
  const std::size_t k = basis.size();
  if (k == 0) return std::nullopt;
  auto invertible = [&](const Matrix& f) {
    Scalar det = determinant(f, r);
    return r.is_integers() ? (det == 1 || det == -1) : sgn(det) != 0;
  };
  auto combine = [&](const std::vector<long>& c) {
    Matrix f(n.rank(), m.rank());
    for (std::size_t i = 0; i < k; ++i)
      if (c[i] != 0) f += basis[i].matrix * Scalar(c[i]);
    return reduce(r, std::move(f));
  };

  for (const auto& b : basis)
    if (invertible(b.matrix)) return b;

  std::mt19937_64 rng(seed);
  const long span = r.is_prime_field() ? r.characteristic() : 7;
  std::uniform_int_distribution<long> dist(r.is_prime_field() ? 0 : -3, r.is_prime_field() ? span - 1 : 3);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<long> c(k);
    for (auto& x : c) x = dist(rng);
    Matrix f = combine(c);
    if (invertible(f)) return Morphism{m, n, f};
  }

  // Exhaustive sweep over a small coefficient box.
  const long lo = r.is_prime_field() ? 0 : -2;
  const long hi = r.is_prime_field() ? span - 1 : 2;
  double total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= static_cast<double>(hi - lo + 1);
  if (total > 65536) return std::nullopt;
  std::vector<long> c(k, lo);
  while (true) {
    Matrix f = combine(c);
    if (invertible(f)) return Morphism{m, n, f};
    std::size_t i = 0;
    while (i < k && c[i] == hi) c[i++] = lo;
    if (i == k) break;
    ++c[i];
  }
  return std::nullopt;
}

TraceMap trace_map(const AModule& l, const AModule& m) {
  TraceMap out;
  out.homs = hom_space(l, m);
  const std::size_t h = out.homs.size();
  AModule src = tensor_with_free(l, h);
  Matrix tau(m.rank(), l.rank() * h);
  for (std::size_t k = 0; k < h; ++k) tau.set_block(0, k * l.rank(), out.homs[k].matrix);
  out.tau = {src, m, tau};
  const GroundRing& r = m.ring();
  out.image = column_span_basis(tau, r);
  out.injective = out.image.cols() == l.rank() * h;
  out.saturated = is_saturated(out.image, r);
  return out;
}

std::optional<Morphism> section_of(const Morphism& f) {
  const GroundRing& r = f.source.ring();
  const std::size_t n = f.target.rank();
  if (n == 0) return Morphism{f.target, f.source, Matrix(f.source.rank(), 0)};
  const auto basis = hom_space(f.target, f.source);
  if (basis.empty()) return std::nullopt;
  Matrix sys(n * n, basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) sys.set_block(0, k, mul(r, f.matrix, basis[k].matrix).vectorize());
  auto c = solve(sys, Matrix::identity(n).vectorize(), r);
  if (!c) return std::nullopt;
  Matrix s(f.source.rank(), n);
  for (std::size_t k = 0; k < basis.size(); ++k) s += basis[k].matrix * (*c)(k, 0);
  return Morphism{f.target, f.source, reduce(r, std::move(s))};
}

}  // namespace qhkit
