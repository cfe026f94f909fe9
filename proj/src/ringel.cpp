#include "qhkit/ringel.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qhkit {

namespace {

Matrix stack_vectorized(const std::vector<Matrix>& ms, std::size_t rows) {
  std::vector<Matrix> cols;
  for (const auto& m : ms) cols.push_back(m.vectorize());
  return hcat(cols, rows);
}

// g_k o h for every basis vector of Hom(T, N), in that basis.
Matrix precompose_matrix(const std::vector<Morphism>& hs, const Matrix& h, const GroundRing& r) {
  const std::size_t n = hs.size();
  if (n == 0) return Matrix(0, 0);
  const std::size_t rows = hs.front().target.rank(), cols = hs.front().source.rank();
  CoordinateSolver cs(vectorized(hs, rows, cols), r);
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    auto c = cs.coordinates(mul(r, hs[k].matrix, h).vectorize());
    if (!c) throw std::logic_error("ringel: composite leaves Hom(T, N)");
    out.set_block(0, k, *c);
  }
  return out;
}

std::string table_string(const std::vector<std::vector<std::size_t>>& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < t[i].size(); ++j) os << (j ? " " : "") << t[i][j];
  }
  return os.str();
}

std::string list_string(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "}";
  return os.str();
}

std::vector<std::size_t> standard_ranks(const QHStructure& qh) {
  std::vector<std::size_t> out;
  for (const auto& d : qh.standards) out.push_back(d.rank());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> cartan_multiset(const QHStructure& qh) {
  std::vector<std::size_t> out;
  for (const auto& p : qh.covers)
    for (const auto& q : qh.covers) out.push_back(hom_rank(p.pres.p0.module, q.pres.p0.module));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Matrix RingelDual::coordinates(const Matrix& endo) const {
  const std::size_t n = tilting.module.rank();
  CoordinateSolver cs(stack_vectorized(basis, n * n), algebra->ring());
  auto c = cs.coordinates(endo.vectorize());
  if (!c) throw std::invalid_argument("RingelDual::coordinates: not an endomorphism of T");
  return *c;
}

Matrix RingelDual::endomorphism(const Matrix& coords) const {
  const std::size_t n = tilting.module.rank();
  Matrix out(n, n);
  for (std::size_t i = 0; i < basis.size(); ++i) out += basis[i] * coords(i, 0);
  return reduce(algebra->ring(), out);
}

AModule RingelDual::apply(const AModule& n) const {
  const GroundRing& r = algebra->ring();
  std::vector<Morphism> hs = hom_space(tilting.module, n);
  if (hs.empty()) return AModule::zero(algebra);
  std::vector<Matrix> act;
  for (const auto& h : basis) act.push_back(precompose_matrix(hs, h, r));
  return AModule(algebra, std::move(act));
}

Morphism RingelDual::apply(const Morphism& f) const {
  const GroundRing& r = algebra->ring();
  std::vector<Morphism> src = hom_space(tilting.module, f.source);
  std::vector<Morphism> dst = hom_space(tilting.module, f.target);
  AModule gs = apply(f.source), gt = apply(f.target);
  Matrix m(dst.size(), src.size());
  if (!dst.empty() && !src.empty()) {
    CoordinateSolver cs(vectorized(dst, f.target.rank(), tilting.module.rank()), r);
    for (std::size_t k = 0; k < src.size(); ++k) {
      auto c = cs.coordinates(mul(r, f.matrix, src[k].matrix).vectorize());
      if (!c) throw std::logic_error("ringel: f o g is not a homomorphism from T");
      m.set_block(0, k, *c);
    }
  }
  return {gs, gt, m};
}

RingelDual ringel_dual(const QHStructure& qh, const CharacteristicTilting& t) {
  if (!qh.has_costandards()) throw std::invalid_argument("ringel_dual: costandards have not been computed");
  const GroundRing& r = qh.ring();
  RingelDual out;
  out.tilting = t;
  const std::size_t parts = t.parts.size();
  const std::size_t n = t.module.rank();
  std::vector<std::string> labels;
  for (std::size_t l = 0; l < parts; ++l)
    for (std::size_t m = 0; m < parts; ++m) {
      auto hs = hom_space(t.parts[l].module, t.parts[m].module);
      for (std::size_t k = 0; k < hs.size(); ++k) {
        out.basis.push_back(mul(r, mul(r, t.inclusion(m), hs[k].matrix), t.projection(l)));
        labels.push_back("h[" + qh.poset.label(l) + "," + qh.poset.label(m) + "]" + std::to_string(k));
      }
    }
  const std::size_t d = out.basis.size();
  CoordinateSolver cs(stack_vectorized(out.basis, n * n), r);
  auto coords = [&](const Matrix& e) {
    auto c = cs.coordinates(e.vectorize());
    if (!c) throw std::logic_error("ringel_dual: composite of endomorphisms leaves End(T)");
    return *c;
  };
  std::vector<Matrix> left(d, Matrix(d, d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) left[i].set_block(0, j, coords(mul(r, out.basis[j], out.basis[i])));
  std::vector<Matrix> idempotents;
  for (std::size_t l = 0; l < parts; ++l) idempotents.push_back(coords(mul(r, t.inclusion(l), t.projection(l))));
  out.algebra = Algebra::create(r, std::move(left), coords(Matrix::identity(n)), std::move(idempotents),
                                std::move(labels));

  std::vector<AModule> standards;
  for (const auto& nabla : qh.costandards) standards.push_back(out.apply(nabla));
  VerifyResult v = verify_split_qh(out.algebra, qh.poset.reversed(), standards);
  if (!v.accepted())
    throw std::logic_error("ringel_dual: the dual algebra is rejected by axiom (" + v.refutation->axiom +
                           "): " + v.refutation->message);
  out.qh = std::move(*v.qh);
  compute_costandards(out.qh);
  return out;
}

RingelDual ringel_dual(const QHStructure& qh) { return ringel_dual(qh, build_tilting(qh)); }

std::vector<std::vector<std::size_t>> delta_multiplicity_matrix(const QHStructure& qh) {
  const std::size_t t = qh.poset.size();
  std::vector<std::vector<std::size_t>> out(t, std::vector<std::size_t>(t, 0));
  for (std::size_t l = 0; l < t; ++l)
    for (std::size_t m = 0; m < t; ++m) out[l][m] = delta_multiplicity(qh.covers[l].pres.p0.module, m, qh);
  return out;
}

std::vector<std::vector<std::size_t>> hom_delta_nabla_table(const QHStructure& qh) {
  const std::size_t t = qh.poset.size();
  std::vector<std::vector<std::size_t>> out(t, std::vector<std::size_t>(t, 0));
  for (std::size_t l = 0; l < t; ++l)
    for (std::size_t m = 0; m < t; ++m) out[l][m] = hom_rank(qh.standards[l], qh.costandards[m]);
  return out;
}

bool DoubleDualReport::all_equal() const {
  return std::all_of(comparisons.begin(), comparisons.end(), [](const auto& c) { return c.equal; });
}

DoubleDualReport double_dual_invariants(const QHStructure& qh) {
  RingelDual once = ringel_dual(qh);
  RingelDual twice = ringel_dual(once.qh);
  const QHStructure& rr = twice.qh;
  DoubleDualReport rep;
  rep.multiplicities_a = delta_multiplicity_matrix(qh);
  rep.multiplicities_rra = delta_multiplicity_matrix(rr);
  rep.hom_a = hom_delta_nabla_table(qh);
  rep.hom_rra = hom_delta_nabla_table(rr);
  rep.comparisons.push_back({"delta multiplicities [P(l):Delta(m)]", rep.multiplicities_a == rep.multiplicities_rra,
                             table_string(rep.multiplicities_a) + " vs " + table_string(rep.multiplicities_rra)});
  rep.comparisons.push_back({"rank Hom(Delta(l), nabla(m))", rep.hom_a == rep.hom_rra,
                             table_string(rep.hom_a) + " vs " + table_string(rep.hom_rra)});
  const bool orth_a = ext_orthogonality_table(qh).passed();
  const bool orth_rr = ext_orthogonality_table(rr).passed();
  rep.comparisons.push_back({"Ext-orthogonality", orth_a == orth_rr,
                             std::string(orth_a ? "pass" : "fail") + " vs " + (orth_rr ? "pass" : "fail")});
  rep.comparisons.push_back({"labels", qh.poset.size() == rr.poset.size(),
                             std::to_string(qh.poset.size()) + " vs " + std::to_string(rr.poset.size())});
  return rep;
}

SelfDualityReport self_duality_probe(const QHStructure& qh) {
  RingelDual b = ringel_dual(qh);
  SelfDualityReport rep;
  const auto ra = standard_ranks(qh), rb = standard_ranks(b.qh);
  rep.comparisons.push_back({"standard ranks", ra == rb, list_string(ra) + " vs " + list_string(rb)});
  const auto ca = cartan_multiset(qh), cb = cartan_multiset(b.qh);
  rep.comparisons.push_back({"Cartan ranks", ca == cb, list_string(ca) + " vs " + list_string(cb)});
  const std::size_t na = qh.algebra->rank(), nb = b.algebra->rank();
  rep.comparisons.push_back({"algebra rank", na == nb, std::to_string(na) + " vs " + std::to_string(nb)});
  for (const auto& c : rep.comparisons)
    if (!c.equal) {
      rep.possibly_self_dual = false;
      rep.witness = c.name + ": " + c.detail;
      break;
    }
  return rep;
}

}  // namespace qhkit
