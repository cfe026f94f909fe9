#include "qhkit/tilting.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace qhkit {

namespace {

// Is the R-linear map "coordinates of each composite in the target basis"
// onto the target lattice?
bool onto(const std::vector<Morphism>& images, const std::vector<Morphism>& target_basis) {
  if (target_basis.empty()) return true;
  const AModule& s = target_basis.front().source;
  const AModule& t = target_basis.front().target;
  const GroundRing& r = t.ring();
  CoordinateSolver cs(vectorized(target_basis, t.rank(), s.rank()), r);
  Matrix coords(target_basis.size(), images.size());
  for (std::size_t k = 0; k < images.size(); ++k) {
    auto c = cs.coordinates(images[k].matrix.vectorize());
    if (!c) throw std::logic_error("approximation_check: composite is not an intertwiner");
    coords.set_block(0, k, *c);
  }
  return cokernel_invariants(coords, r).is_zero();
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::logic_error(msg);
}

}  // namespace

UniversalExtension universal_extension(const AModule& x, const AModule& delta, std::uint64_t seed) {
  ExtGroup e = ext(delta, x);
  UniversalExtension out;
  if (e.generators.empty()) {
    out.middle = x;
    out.iota = identity_morphism(x);
    out.pi = zero_morphism(x, AModule::zero(delta.algebra()));
    return out;
  }
  std::vector<Morphism> gens = e.generators;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(gens.begin(), gens.end(), rng);
    std::uniform_int_distribution<long> coeff(-1, 1);
    const GroundRing& r = x.ring();
    for (std::size_t i = 1; i < gens.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) gens[i].matrix = reduce(r, gens[i].matrix + gens[j].matrix * Scalar(coeff(rng)));
  }
  Extension ext_seq = extension_from_cocycles(e, gens);
  out.middle = ext_seq.middle;
  out.iota = ext_seq.iota;
  out.pi = ext_seq.pi;
  out.copies = ext_seq.copies;
  require(ext(delta, out.middle).is_zero(), "universal_extension: Ext^1 survives the extension");
  return out;
}

PartialTilting build_partial_tilting(std::size_t label, const QHStructure& qh, std::uint64_t seed) {
  const Poset& poset = qh.poset;
  const GroundRing& r = qh.ring();
  const std::size_t t = poset.size();
  PartialTilting out;
  out.label = label;
  AModule cur = qh.standards[label];
  Matrix emb = Matrix::identity(cur.rank());
  bool clean = false;
  for (std::size_t pass = 0; pass < 10 * t && !clean; ++pass) {
    clean = true;
    for (std::size_t mu : poset.decreasing()) {
      if (!poset.lt(mu, label)) continue;
      UniversalExtension ue = universal_extension(cur, qh.standards[mu], seed == 0 ? 0 : seed + pass * t + mu);
      if (ue.copies == 0) continue;
      clean = false;
      emb = mul(r, ue.iota.matrix, emb);
      cur = ue.middle;
      out.extension_steps.push_back(mu);
    }
  }
  for (std::size_t mu = 0; mu < t; ++mu)
    require(ext(qh.standards[mu], cur).is_zero(),
            "build_partial_tilting: Ext^1(Delta(" + poset.label(mu) + "), T(" + poset.label(label) + ")) != 0");
  out.module = cur;
  out.delta_embedding = {qh.standards[label], cur, emb};

  out.x = quotient(cur, emb);
  out.x_certificate = extract_delta_filtration(out.x.module, qh);

  FiltrationCertificate nc = extract_nabla_filtration(cur, qh);
  require(!nc.layers.empty() && nc.layers.back().label == label && nc.layers.back().multiplicity == 1,
          "build_partial_tilting: top of the nabla-filtration is not nabla(" + poset.label(label) + ")");
  const Matrix below = nc.layers.size() > 1 ? nc.layers[nc.layers.size() - 2].sub : Matrix(cur.rank(), 0);
  Sublattice k = complete_basis(below, r);
  auto inv = inverse(mul(r, k.quotient, nc.layers.back().witness), r);
  require(inv.has_value(), "build_partial_tilting: nabla layer witness is not invertible");
  out.nabla_surjection = {cur, qh.costandards[label], mul(r, *inv, k.quotient)};
  out.y = submodule(cur, below);
  out.y_certificate = extract_nabla_filtration(out.y.module, qh);
  return out;
}

Matrix CharacteristicTilting::inclusion(std::size_t label) const {
  Matrix m(module.rank(), parts[label].module.rank());
  m.set_block(offsets[label], 0, Matrix::identity(parts[label].module.rank()));
  return m;
}

Matrix CharacteristicTilting::projection(std::size_t label) const { return inclusion(label).transpose(); }

CharacteristicTilting build_tilting(const QHStructure& qh, std::uint64_t seed) {
  CharacteristicTilting out;
  std::vector<AModule> mods;
  std::size_t off = 0;
  for (std::size_t l = 0; l < qh.poset.size(); ++l) {
    out.parts.push_back(build_partial_tilting(l, qh, seed));
    mods.push_back(out.parts.back().module);
    out.offsets.push_back(off);
    off += mods.back().rank();
  }
  out.module = mods.empty() ? AModule::zero(qh.algebra) : direct_sum(mods);
  return out;
}

bool verify_partial_tilting(const PartialTilting& t, const QHStructure& qh) {
  const GroundRing& r = qh.ring();
  const Poset& poset = qh.poset;
  const AModule& delta = qh.standards[t.label];
  const AModule& nabla = qh.costandards[t.label];
  if (!t.delta_embedding.is_intertwiner() || !t.nabla_surjection.is_intertwiner()) return false;
  // 0 -> Delta -> T -> X -> 0, split over R.
  if (rank(t.delta_embedding.matrix, r) != delta.rank()) return false;
  if (!is_saturated(column_span_basis(t.delta_embedding.matrix, r), r)) return false;
  if (t.x.module.rank() + delta.rank() != t.module.rank()) return false;
  if (!mul(r, t.x.projection.matrix, t.delta_embedding.matrix).is_zero()) return false;
  // 0 -> Y -> T -> nabla -> 0.
  if (!cokernel_invariants(t.nabla_surjection.matrix, r).is_zero()) return false;
  if (t.y.module.rank() + nabla.rank() != t.module.rank()) return false;
  if (!mul(r, t.nabla_surjection.matrix, t.y.inclusion.matrix).is_zero()) return false;
  for (const auto* c : {&t.x_certificate, &t.y_certificate}) {
    if (replay_certificate(*c, qh)) return false;
    for (const auto& layer : c->layers)
      if (!poset.lt(layer.label, t.label)) return false;
  }
  for (const auto& d : qh.standards)
    if (!ext(d, t.module).is_zero()) return false;
  return true;
}

bool verify_tilting(const AModule& t, const QHStructure& qh) {
  if (!has_delta_filtration(t, qh) || !has_nabla_filtration(t, qh)) return false;
  if (replay_certificate(extract_delta_filtration(t, qh), qh)) return false;
  if (replay_certificate(extract_nabla_filtration(t, qh), qh)) return false;
  return ext(t, t, 1).is_zero() && ext(t, t, 2).is_zero();
}

bool verify_tilting(const CharacteristicTilting& t, const QHStructure& qh) {
  for (const auto& p : t.parts)
    if (!verify_partial_tilting(p, qh)) return false;
  return verify_tilting(t.module, qh);
}

bool approximation_check(const PartialTilting& t, const QHStructure& qh, const std::vector<AModule>& probes) {
  const GroundRing& r = qh.ring();
  const AModule& delta = qh.standards[t.label];
  const AModule& nabla = qh.costandards[t.label];
  for (const auto& x : probes) {
    if (x.rank() == 0) continue;
    if (has_nabla_filtration(x, qh)) {
      std::vector<Morphism> images;
      for (const auto& f : hom_space(t.module, x))
        images.push_back({delta, x, mul(r, f.matrix, t.delta_embedding.matrix)});
      if (!onto(images, hom_space(delta, x))) return false;
    }
    if (has_delta_filtration(x, qh)) {
      std::vector<Morphism> images;
      for (const auto& g : hom_space(x, t.module))
        images.push_back({x, nabla, mul(r, t.nabla_surjection.matrix, g.matrix)});
      if (!onto(images, hom_space(x, nabla))) return false;
    }
  }
  return true;
}

bool add_t_membership(const AModule& x, const QHStructure& qh) {
  return has_delta_filtration(x, qh) && has_nabla_filtration(x, qh);
}

}  // namespace qhkit
