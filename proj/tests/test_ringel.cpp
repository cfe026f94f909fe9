#include "doctest.h"

#include "oracles.hpp"
#include "qhkit/corpus.hpp"
#include "qhkit/ringel.hpp"

using namespace qhkit;

namespace {

const std::vector<GroundRing> kRings{GroundRing::prime_field(2), GroundRing::prime_field(5), GroundRing::rationals(),
                                     GroundRing::integers()};

std::vector<AModule> nabla_pool(const QHStructure& qh, std::uint64_t seed) {
  std::vector<AModule> out;
  for (const auto& m : module_pool(qh, 6, seed, 10))
    if (has_nabla_filtration(m, qh)) out.push_back(m);
  return out;
}

// Reciprocity: [P(l) : Delta(m)] = rank e_l nabla(m), with e_l the idempotent
// of the cover of Delta(l).
std::vector<std::vector<std::size_t>> reciprocity_matrix(const QHStructure& qh) {
  const std::size_t t = qh.poset.size();
  std::vector<std::vector<std::size_t>> out(t, std::vector<std::size_t>(t));
  for (std::size_t l = 0; l < t; ++l) {
    REQUIRE(qh.covers[l].pres.p0.slots.size() == 1);
    const std::size_t e = qh.covers[l].pres.p0.slots[0];
    for (std::size_t m = 0; m < t; ++m) out[l][m] = qh.costandards[m].block_rank(e);
  }
  return out;
}

}  // namespace

TEST_CASE("Ringel dual of the ground ring") {
  for (const auto& ring : kRings) {
    QHStructure qh = build_structure(ground_fixture(ring));
    RingelDual b = ringel_dual(qh);
    CHECK(b.algebra->rank() == 1);
    REQUIRE(b.qh.standards.size() == 1);
    CHECK(b.qh.standards[0].rank() == 1);
    CHECK(self_duality_probe(qh).possibly_self_dual);
    CHECK(double_dual_invariants(qh).all_equal());
  }
}

TEST_CASE("Ringel dual of E1") {
  for (const auto& ring : kRings) {
    QHStructure qh = build_structure(e1_fixture(ring));
    RingelDual b = ringel_dual(qh);
    CHECK(b.algebra->rank() == 3);
    CHECK(b.qh.standards[0].rank() == 1);
    CHECK(b.qh.standards[1].rank() == 1);
    CHECK(b.qh.poset.lt(0, 1));
    CHECK(b.algebra->unit() == b.coordinates(Matrix::identity(b.tilting.module.rank())));
    SelfDualityReport s = self_duality_probe(qh);
    CHECK_FALSE(s.possibly_self_dual);
    REQUIRE(s.witness.has_value());
    CHECK(s.witness->find("standard ranks") != std::string::npos);
  }
  // End(T) counted by enumeration over F2.
  QHStructure qh = build_structure(e1_fixture(GroundRing::prime_field(2)));
  RingelDual b = ringel_dual(qh);
  CHECK(oracle::log_p(oracle::all_homs(b.tilting.module, b.tilting.module).size(), 2) == 3);
}

TEST_CASE("Ringel duals of the corpus are quasi-hereditary for the reversed order") {
  for (const auto& ring : kRings)
    for (const auto& f : corpus_fixtures(ring)) {
      CAPTURE(f.name);
      CAPTURE(ring.name());
      QHStructure qh = build_structure(f);
      RingelDual b = ringel_dual(qh);
      std::size_t expect = 0;
      for (const auto& p : b.tilting.parts)
        for (const auto& q : b.tilting.parts) expect += hom_rank(p.module, q.module);
      CHECK(b.algebra->rank() == expect);
      for (std::size_t l = 0; l < f.poset.size(); ++l)
        for (std::size_t m = 0; m < f.poset.size(); ++m) CHECK(b.qh.poset.lt(l, m) == f.poset.lt(m, l));
      VerifyResult again = verify_split_qh(b.algebra, f.poset.reversed(), b.qh.standards);
      CHECK(again.accepted());
      CHECK(ext_orthogonality_table(b.qh).passed());
      // The idempotents of B are the summand projections of T.
      Matrix sum(b.algebra->rank(), 1);
      for (const auto& e : b.algebra->idempotents()) sum += e;
      CHECK(sum == b.algebra->unit());
    }
}

TEST_CASE("G transports Hom and Ext on F(nabla)") {
  for (const auto& ring : {GroundRing::integers(), GroundRing::prime_field(2)})
    for (const auto& f : corpus_fixtures(ring)) {
      CAPTURE(f.name);
      QHStructure qh = build_structure(f);
      RingelDual b = ringel_dual(qh);
      std::vector<AModule> pool = nabla_pool(qh, 13);
      std::vector<AModule> images;
      for (const auto& n : pool) images.push_back(b.apply(n));
      for (const auto& g : images) check_module(g);
      std::size_t pairs = 0;
      for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = 0; j < pool.size(); ++j) {
          CHECK(hom_rank(pool[i], pool[j]) == hom_rank(images[i], images[j]));
          ++pairs;
        }
      CHECK(pairs >= 20);
      for (std::size_t l = 0; l < f.poset.size(); ++l)
        for (std::size_t i = 0; i < pool.size(); ++i) {
          ExtGroup ea = ext(qh.costandards[l], pool[i]);
          ExtGroup eb = ext(b.qh.standards[l], images[i]);
          CHECK(ea.free_rank == eb.free_rank);
          CHECK(ea.torsion == eb.torsion);
        }
      for (const auto& g : images) CHECK(has_delta_filtration(g, b.qh));
    }
}

TEST_CASE("G is a functor") {
  QHStructure qh = build_structure(e2_fixture(GroundRing::integers()));
  RingelDual b = ringel_dual(qh);
  std::vector<AModule> pool = nabla_pool(qh, 5);
  REQUIRE(pool.size() >= 3);
  for (std::size_t i = 0; i + 2 < pool.size(); ++i) {
    for (const auto& f : hom_space(pool[i], pool[i + 1]))
      for (const auto& g : hom_space(pool[i + 1], pool[i + 2])) {
        Morphism gf = b.apply(compose(g, f));
        Morphism gfs = compose(b.apply(g), b.apply(f));
        CHECK(gf.matrix == gfs.matrix);
        CHECK(gf.is_intertwiner());
      }
    Morphism id = b.apply(identity_morphism(pool[i]));
    CHECK(id.matrix == Matrix::identity(id.source.rank()));
  }
}

TEST_CASE("G sends the tilting sequences to projective presentations") {
  for (const auto& ring : {GroundRing::integers(), GroundRing::prime_field(3)})
    for (const auto& f : corpus_fixtures(ring)) {
      CAPTURE(f.name);
      QHStructure qh = build_structure(f);
      RingelDual b = ringel_dual(qh);
      for (const auto& p : b.tilting.parts) {
        AModule gt = b.apply(p.module);
        CHECK(section_of(presentation(gt).d0).has_value());
        Morphism gpi = b.apply(p.nabla_surjection);
        Morphism giota = b.apply(p.y.inclusion);
        CHECK(cokernel_invariants(gpi.matrix, ring).is_zero());
        CHECK(mul(ring, gpi.matrix, giota.matrix).is_zero());
        CHECK(rank(giota.matrix, ring) == giota.source.rank());
        CHECK(giota.source.rank() + gpi.target.rank() == gt.rank());
        CHECK(find_isomorphism(gpi.target, b.qh.standards[p.label]).has_value());
      }
    }
}

TEST_CASE("double Ringel dual invariants") {
  for (const auto& ring : kRings)
    for (const auto& f : corpus_fixtures(ring)) {
      CAPTURE(f.name);
      CAPTURE(ring.name());
      QHStructure qh = build_structure(f);
      DoubleDualReport rep = double_dual_invariants(qh);
      CHECK(rep.all_equal());
      CHECK(rep.multiplicities_a == rep.multiplicities_rra);
      CHECK(rep.multiplicities_a == reciprocity_matrix(qh));
      for (std::size_t l = 0; l < f.poset.size(); ++l) CHECK(rep.multiplicities_a[l][l] == 1);
      RingelDual once = ringel_dual(qh);
      CHECK(delta_multiplicity_matrix(once.qh) == reciprocity_matrix(once.qh));
    }
}
