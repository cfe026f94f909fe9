#include "qhkit/homology.hpp"

#include <stdexcept>

namespace qhkit {

namespace {

// [rho(b_0) v | rho(b_1) v | ...]: multiplying by a coefficient vector y gives y.v.
Matrix orbit_matrix(const AModule& m, const Matrix& v) {
  const std::size_t d = m.algebra()->rank();
  Matrix out(m.rank(), d);
  for (std::size_t i = 0; i < d; ++i) out.set_block(0, i, mul(m.ring(), m.action(i), v));
  return out;
}

// Columns: images of the basis of A e_a under x -> x.v.
Matrix cover_columns(const AModule& m, std::size_t a, const Matrix& v) {
  return mul(m.ring(), orbit_matrix(m, v), m.algebra()->projective_basis(a));
}

}  // namespace

FreeModule free_module(const AlgebraPtr& a, const std::vector<std::size_t>& slots) {
  FreeModule out;
  out.slots = slots;
  std::vector<AModule> parts;
  std::size_t off = 0;
  for (auto s : slots) {
    out.offsets.push_back(off);
    parts.push_back(projective_module(a, s));
    off += parts.back().rank();
  }
  out.module = parts.empty() ? AModule::zero(a) : direct_sum(parts);
  return out;
}

Presentation presentation(const AModule& m) {
  const AlgebraPtr& alg = m.algebra();
  const GroundRing& r = m.ring();
  Presentation out;
  out.module = m;
  // Greedy generating set among the adapted basis vectors, then pruned to
  // an irredundant one.
  std::vector<std::size_t> slots;
  auto span_of = [&](const std::vector<std::size_t>& sl, const std::vector<Matrix>& vs) {
    std::vector<Matrix> cols;
    for (std::size_t s = 0; s < sl.size(); ++s) cols.push_back(cover_columns(m, sl[s], vs[s]));
    return hcat(cols, m.rank());
  };
  auto covers = [&](const std::vector<std::size_t>& sl, const std::vector<Matrix>& vs) {
    return cokernel_invariants(span_of(sl, vs), r).is_zero();
  };
  for (std::size_t a = 0; a < alg->num_idempotents(); ++a)
    for (std::size_t k = 0; k < m.block_rank(a); ++k) {
      Matrix v = m.block_basis(a).col(k);
      if (!slots.empty() && solve(span_of(slots, out.slot_vectors), v, r)) continue;
      slots.push_back(a);
      out.slot_vectors.push_back(std::move(v));
    }
  for (std::size_t s = slots.size(); s-- > 0;) {
    auto sl = slots;
    auto vs = out.slot_vectors;
    sl.erase(sl.begin() + static_cast<std::ptrdiff_t>(s));
    vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(s));
    if (covers(sl, vs)) {
      slots = std::move(sl);
      out.slot_vectors = std::move(vs);
    }
  }
  out.p0 = free_module(alg, slots);
  const AModule& p0 = out.p0.module;
  Matrix d0(m.rank(), p0.rank());
  for (std::size_t s = 0; s < slots.size(); ++s)
    d0.set_block(0, out.p0.offsets[s], cover_columns(m, slots[s], out.slot_vectors[s]));
  out.d0 = {p0, m, d0};
  out.kernel = complete_basis(kernel_basis(d0, r), r);
  const Sublattice& k = out.kernel;
  if (k.rank() == 0) {
    out.syzygy = AModule::zero(alg);
  } else {
    std::vector<Matrix> action;
    for (std::size_t i = 0; i < alg->rank(); ++i) action.push_back(mul(r, mul(r, k.coords, p0.action(i)), k.basis));
    out.syzygy = AModule(alg, std::move(action));
  }
  out.inclusion = {out.syzygy, p0, k.basis};
  return out;
}

AModule syzygy(const AModule& m, std::size_t times) {
  AModule cur = m;
  for (std::size_t i = 0; i < times; ++i) cur = presentation(cur).syzygy;
  return cur;
}

ExtGroup ext(const AModule& m, const AModule& n, std::size_t degree) {
  if (degree == 0) throw std::invalid_argument("ext: degree 0 is hom_space");
  if (!same_algebra(m.algebra(), n.algebra())) throw std::invalid_argument("ext: algebra mismatch");
  const GroundRing& r = m.ring();
  ExtGroup g;
  g.degree = degree;
  g.target = n;
  g.pres = presentation(degree == 1 ? m : syzygy(m, degree - 1));
  const Presentation& p = g.pres;
  const AModule& omega = p.syzygy;
  g.cocycle_basis = hom_space(omega, n);
  const std::size_t h = g.cocycle_basis.size();
  if (h == 0) {
    g.coboundaries = Matrix(0, 0);
    return g;
  }

  // Restrictions to Omega of the basis of Hom(P_0, N).
  const Matrix& kb = p.kernel.basis;
  std::vector<Matrix> restricted;
  for (std::size_t s = 0; s < p.p0.slots.size(); ++s) {
    const std::size_t a = p.p0.slots[s];
    const std::size_t width = m.algebra()->projective_basis(a).cols();
    const Matrix krows = kb.rows_range(p.p0.offsets[s], width);
    for (std::size_t j = 0; j < n.block_rank(a); ++j)
      restricted.push_back(mul(r, cover_columns(n, a, n.block_basis(a).col(j)), krows));
  }
  CoordinateSolver cs(vectorized(g.cocycle_basis, n.rank(), omega.rank()), r);
  g.coboundaries = Matrix(h, restricted.size());
  for (std::size_t k = 0; k < restricted.size(); ++k) {
    auto c = cs.coordinates(restricted[k].vectorize());
    if (!c) throw std::logic_error("ext: restricted map is not an intertwiner");
    g.coboundaries.set_block(0, k, *c);
  }

  SmithData sd = smith_form(g.coboundaries, r);
  g.divisors = sd.divisors;
  g.U = sd.U;
  for (std::size_t i = 0; i < h; ++i) {
    Integer order = 0;
    if (i < sd.rank()) {
      if (sd.divisors[i] == 1) continue;
      order = sd.divisors[i];
      g.torsion.push_back(order);
    } else {
      ++g.free_rank;
    }
    Matrix f(n.rank(), omega.rank());
    for (std::size_t j = 0; j < h; ++j)
      if (sgn(sd.U_inv(j, i)) != 0) f += g.cocycle_basis[j].matrix * sd.U_inv(j, i);
    g.generators.push_back({omega, n, reduce(r, std::move(f))});
    g.orders.push_back(order);
  }
  return g;
}

std::vector<Integer> ExtGroup::class_of(const Morphism& phi) const {
  const GroundRing& r = target.ring();
  std::vector<Integer> out;
  const std::size_t h = cocycle_basis.size();
  if (h == 0) return out;
  CoordinateSolver cs(vectorized(cocycle_basis, target.rank(), pres.syzygy.rank()), r);
  auto x = cs.coordinates(phi.matrix.vectorize());
  if (!x) throw std::invalid_argument("class_of: map is not a cocycle of this group");
  Matrix y = mul(r, U, *x);
  const std::size_t rk = divisors.size();
  for (std::size_t i = 0; i < h; ++i) {
    if (i < rk && divisors[i] == 1) continue;
    Integer v = y(i, 0).get_num();
    if (i < rk) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), divisors[i].get_mpz_t());
    out.push_back(v);
  }
  return out;
}

bool ExtGroup::is_coboundary(const Morphism& phi) const {
  for (const auto& v : class_of(phi))
    if (v != 0) return false;
  return true;
}

Extension extension_from_cocycles(const ExtGroup& e, const std::vector<Morphism>& cocycles) {
  if (e.degree != 1) throw std::invalid_argument("extensions need a degree-one group");
  const Presentation& p = e.pres;
  const AModule& n = e.target;
  const AModule& m = p.module;
  const GroundRing& r = n.ring();
  const std::size_t k = cocycles.size();
  const std::size_t nn = n.rank(), np = p.p0.module.rank(), no = p.syzygy.rank();
  for (const auto& c : cocycles)
    if (c.matrix.rows() != nn || c.matrix.cols() != no || !c.is_intertwiner())
      throw std::invalid_argument("cocycle not from the stated Ext group");

  std::vector<AModule> parts{n};
  for (std::size_t j = 0; j < k; ++j) parts.push_back(p.p0.module);
  AModule big = direct_sum(parts);
  // Relations (phi_j(w), 0, .., -w, .., 0) for w in Omega, one block per j.
  Matrix rel(nn + k * np, k * no);
  for (std::size_t j = 0; j < k; ++j) {
    rel.set_block(0, j * no, cocycles[j].matrix);
    rel.set_block(nn + j * np, j * no, -p.kernel.basis);
  }
  QuotientModule q = quotient(big, rel);

  Extension out;
  out.copies = k;
  out.middle = q.module;
  Matrix inj(nn + k * np, nn);
  inj.set_block(0, 0, Matrix::identity(nn));
  out.iota = {n, q.module, mul(r, q.projection.matrix, inj)};
  Matrix cover(k * m.rank(), nn + k * np);
  for (std::size_t j = 0; j < k; ++j) cover.set_block(j * m.rank(), nn + j * np, p.d0.matrix);
  out.pi = {q.module, tensor_with_free(m, k), mul(r, cover, q.lattice.complement)};
  return out;
}

Extension extension_from_cocycle(const ExtGroup& e, const Morphism& cocycle) {
  return extension_from_cocycles(e, {cocycle});
}

Morphism connecting_cocycle(const ExtGroup& e, const Morphism& iota, const Morphism& pi) {
  const Presentation& p = e.pres;
  const AModule& y = iota.target;
  const GroundRing& r = y.ring();
  Matrix h(y.rank(), p.p0.module.rank());
  for (std::size_t s = 0; s < p.p0.slots.size(); ++s) {
    const std::size_t a = p.p0.slots[s];
    auto lift = solve(pi.matrix, p.slot_vectors[s], r);
    if (!lift) throw std::invalid_argument("connecting_cocycle: pi is not surjective");
    Matrix v = mul(r, y.act(y.algebra()->idempotent(a)), *lift);
    h.set_block(0, p.p0.offsets[s], cover_columns(y, a, v));
  }
  auto phi = solve(iota.matrix, mul(r, h, p.kernel.basis), r);
  if (!phi) throw std::invalid_argument("connecting_cocycle: sequence is not exact");
  return {p.syzygy, iota.source, reduce(r, std::move(*phi))};
}

namespace {

// X (x)_A P for a free module P: blocks X e_{a_s}.
struct TensorFree {
  std::vector<std::size_t> offsets;
  std::size_t rank = 0;
};

TensorFree tensor_free(const AModule& x, const FreeModule& p) {
  TensorFree t;
  for (auto a : p.slots) {
    t.offsets.push_back(t.rank);
    t.rank += x.block_rank(a);
  }
  return t;
}

// X (x) f for f : P -> Q sending the generator of slot s of P to images[s]
// (Q coordinates).
Matrix tensor_map(const AModule& x, const FreeModule& p, const TensorFree& tp, const FreeModule& q,
                  const TensorFree& tq, const std::vector<Matrix>& images) {
  const GroundRing& r = x.ring();
  const auto& alg = *q.module.algebra();
  Matrix out(tq.rank, tp.rank);
  for (std::size_t s = 0; s < p.slots.size(); ++s) {
    const Matrix& src = x.block_basis(p.slots[s]);
    for (std::size_t t = 0; t < q.slots.size(); ++t) {
      const std::size_t b = q.slots[t];
      const Matrix& pb = alg.projective_basis(b);
      Matrix coeff = images[s].rows_range(q.offsets[t], pb.cols());
      if (coeff.is_zero()) continue;
      Matrix y = mul(r, pb, coeff);
      Matrix moved = mul(r, x.act(y), src);
      Matrix coords = mul(r, x.adapted_inverse().rows_range(x.block_offset(b), x.block_rank(b)), moved);
      out.set_block(tq.offsets[t], tp.offsets[s], coords);
    }
  }
  return out;
}

std::vector<Matrix> images_in(const Presentation& p, const Matrix& inclusion) {
  std::vector<Matrix> out;
  for (const auto& v : p.slot_vectors) out.push_back(mul(p.module.ring(), inclusion, v));
  return out;
}

}  // namespace

TorResult tor1_and_tensor(const AModule& x, const AModule& m) {
  if (!same_algebra(x.algebra(), m.algebra()->opposite()))
    throw std::invalid_argument("tor1_and_tensor: first argument must be a module over the opposite algebra");
  const GroundRing& r = m.ring();
  const Presentation p0 = presentation(m);
  const Presentation p1 = presentation(p0.syzygy);
  const Presentation p2 = presentation(p1.syzygy);
  const TensorFree t0 = tensor_free(x, p0.p0), t1 = tensor_free(x, p1.p0), t2 = tensor_free(x, p2.p0);
  const Matrix d1 = tensor_map(x, p1.p0, t1, p0.p0, t0, images_in(p1, p0.kernel.basis));
  const Matrix d2 = tensor_map(x, p2.p0, t2, p1.p0, t1, images_in(p2, p1.kernel.basis));

  TorResult out;
  out.tensor = cokernel_invariants(d1, r);
  const Matrix z = kernel_basis(d1, r);
  if (z.cols() > 0) {
    CoordinateSolver cs(z, r);
    Matrix rel(z.cols(), d2.cols());
    for (std::size_t j = 0; j < d2.cols(); ++j) {
      auto c = cs.coordinates(d2.col(j));
      if (!c) throw std::logic_error("tor1_and_tensor: complex does not square to zero");
      rel.set_block(0, j, *c);
    }
    out.tor1 = cokernel_invariants(rel, r);
  }
  return out;
}

}  // namespace qhkit
