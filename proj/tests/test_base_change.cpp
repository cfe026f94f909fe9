#include "doctest.h"

#include "qhkit/base_change.hpp"
#include "qhkit/corpus.hpp"

using namespace qhkit;

namespace {

const GroundRing kZ = GroundRing::integers();

// Z --2--> Z over E1: not Delta-filtered over Z, isomorphic to P(1) away from 2.
AModule doubled(const AlgebraPtr& a) {
  return AModule(a, {Matrix{{1, 0}, {0, 0}}, Matrix{{0, 0}, {0, 1}}, Matrix{{0, 0}, {2, 0}}});
}

// Unimodular, upper unitriangular plus a sign.
Matrix unimodular(std::size_t n) {
  Matrix g = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g(i, j) = static_cast<long>((3 * i + 5 * j) % 7) - 3;
  if (n > 0) g(n - 1, n - 1) = -1;
  return g;
}

}  // namespace

TEST_CASE("prime samples") {
  QHStructure qh = build_structure(e1_fixture(kZ));
  PrimeSample s = sample_primes(qh, {11, 3});
  CHECK(s.primes == std::vector<long>{2, 3, 5, 7, 11});
  CHECK(s.origin[1] == PrimeOrigin::User);
  CHECK(s.origin[0] == PrimeOrigin::Automatic);
  CHECK_THROWS_AS(s.add(9, PrimeOrigin::User), std::invalid_argument);
  CHECK(bad_primes(qh).empty());
  PrimeSample with_fixture = sample_primes(qh, {}, {doubled(qh.algebra)});
  CHECK(with_fixture.contains(2));
  AModule thrice(qh.algebra, {Matrix{{1, 0}, {0, 0}}, Matrix{{0, 0}, {0, 1}}, Matrix{{0, 0}, {3, 0}}});
  CHECK(bad_primes(qh, {thrice}) == std::vector<long>{3});
  CHECK(sample_primes(qh, {}, {AModule(qh.algebra, {Matrix{{1, 0}, {0, 0}}, Matrix{{0, 0}, {0, 1}},
                                                    Matrix{{0, 0}, {11, 0}}})})
            .contains(11));
  CHECK_THROWS_AS(bad_primes(build_structure(e1_fixture(GroundRing::rationals()))), std::invalid_argument);
}

TEST_CASE("reducing E1 at 2 gives E1 over F2") {
  QHStructure qh = build_structure(e1_fixture(kZ));
  ReducedStructure r = reduce_structure(qh, 2);
  REQUIRE(r.accepted());
  QHFixture f2 = e1_fixture(GroundRing::prime_field(2));
  CHECK(r.qh->algebra->same_structure(*f2.algebra));
  for (std::size_t l = 0; l < 2; ++l) CHECK(r.qh->standards[l].actions() == f2.standards[l].actions());
  CHECK(r.costandards_match());
  CHECK_THROWS_AS(reduce_structure(build_structure(e1_fixture(GroundRing::rationals())), 2), std::invalid_argument);
}

TEST_CASE("costandards and tilting modules commute with reduction") {
  for (const auto& f : corpus_fixtures(kZ)) {
    CAPTURE(f.name);
    QHStructure qh = build_structure(f);
    CharacteristicTilting t = build_tilting(qh);
    FiberFamily fam = fiber_family(qh, sample_primes(qh));
    for (const auto& fiber : fam.fibers) {
      CAPTURE(fiber.p);
      REQUIRE(fiber.accepted());
      CHECK(fiber.costandards_match());
      TiltingReduction tr = reduce_tilting(t, fiber);
      CHECK(tr.verified);
      CHECK(tr.matches());
    }
  }
}

TEST_CASE("orthogonality tables commute with reduction") {
  for (const auto& f : corpus_fixtures(kZ)) {
    QHStructure qh = build_structure(f);
    OrthogonalityTable zt = ext_orthogonality_table(qh);
    for (const auto& c : zt.cells) CHECK(c.torsion.empty());
    for (long p : {2L, 3L, 5L, 7L}) {
      ReducedStructure r = reduce_structure(qh, p);
      REQUIRE(r.accepted());
      OrthogonalityTable pt = orthogonality_table(r.qh->standards, r.reduced_costandards);
      REQUIRE(pt.cells.size() == zt.cells.size());
      for (std::size_t k = 0; k < zt.cells.size(); ++k) CHECK(pt.cells[k].free_rank == zt.cells[k].free_rank);
    }
  }
}

TEST_CASE("reduction commutes with direct sums") {
  QHStructure qh = build_structure(e2_fixture(kZ));
  AlgebraPtr a3 = reduce_mod_p(qh.algebra, 3);
  const AModule& x = qh.costandards[2];
  const AModule& y = qh.standards[1];
  CHECK(reduce_mod_p(direct_sum(x, y), a3).actions() == direct_sum(reduce_mod_p(x, a3), reduce_mod_p(y, a3)).actions());
  Morphism f = identity_morphism(x);
  CHECK(reduce_mod_p(f, a3).is_intertwiner());
}

TEST_CASE("Hom commutes with base change on F(Delta) x F(nabla)") {
  for (const auto& f : {e1_fixture(kZ), e2_fixture(kZ)}) {
    CAPTURE(f.name);
    QHStructure qh = build_structure(f);
    FiberFamily fam = fiber_family(qh, sample_primes(qh));
    for (std::size_t l = 0; l < f.poset.size(); ++l) {
      HomBaseChange h = hom_base_change_check(qh.standards[l], qh.costandards[l], fam);
      CHECK(h.integral_rank == 1);
      CHECK(h.holds());
    }
    std::vector<AModule> deltas, nablas;
    for (const auto& m : module_pool(qh, 4, 31)) {
      if (has_delta_filtration(m, qh)) deltas.push_back(m);
      if (has_nabla_filtration(m, qh)) nablas.push_back(m);
    }
    for (const auto& m : deltas)
      for (const auto& n : nablas) CHECK(hom_base_change_check(m, n, fam).holds());
  }
  QHStructure e1 = build_structure(e1_fixture(kZ));
  FiberFamily fam = fiber_family(e1, sample_primes(e1));
  AModule da = dual_module(regular_module(e1.algebra->opposite()));
  HomBaseChange h = hom_base_change_check(regular_module(e1.algebra), da, fam);
  CHECK(h.integral_rank == 3);
  CHECK(h.fiber_ranks == std::vector<std::size_t>{3, 3, 3, 3});
}

TEST_CASE("a pair outside F(Delta) x F(nabla) shows a rank jump at 2") {
  QHStructure qh = build_structure(e1_fixture(kZ));
  AModule x = doubled(qh.algebra);
  FiberFamily fam = fiber_family(qh, sample_primes(qh, {}, {x}));
  const AModule& s2 = qh.costandards[qh.poset.index("2")];
  HomBaseChange h = hom_base_change_check(x, s2, fam);
  CHECK_FALSE(h.m_in_delta);
  CHECK(h.n_in_nabla);
  CHECK(h.integral_rank == 0);
  CHECK(h.jumps == std::vector<long>{2});
}

TEST_CASE("fiberwise Delta-filtrations") {
  for (const auto& f : {e1_fixture(kZ), e2_fixture(kZ)}) {
    QHStructure qh = build_structure(f);
    CharacteristicTilting t = build_tilting(qh);
    FiberFamily fam = fiber_family(qh, sample_primes(qh));
    FiberwiseFiltration a = fiberwise_filtration_check(regular_module(qh.algebra), fam);
    CHECK(a.ext_criterion);
    CHECK(a.failing_primes().empty());
    for (std::size_t l = 0; l < f.poset.size(); ++l)
      for (std::size_t m = 0; m < f.poset.size(); ++m) {
        FiberwiseFiltration c = fiberwise_filtration_check(direct_sum(qh.standards[l], t.parts[m].module), fam);
        CHECK(c.ext_criterion);
        CHECK(c.failing_primes().empty());
      }
    for (const auto& m : module_pool(qh, 4, 17)) CHECK(fiberwise_filtration_check(m, fam).contract_holds());
  }
  QHStructure qh = build_structure(e1_fixture(kZ));
  AModule x = doubled(qh.algebra);
  FiberFamily fam = fiber_family(qh, sample_primes(qh, {}, {x}));
  FiberwiseFiltration c = fiberwise_filtration_check(x, fam);
  CHECK_FALSE(c.ext_criterion);
  CHECK(c.failing_primes() == std::vector<long>{2});
  CHECK(c.contract_holds());
}

TEST_CASE("recognizing standards over Z") {
  for (const auto& f : corpus_fixtures(kZ)) {
    CAPTURE(f.name);
    QHStructure qh = build_structure(f);
    for (std::size_t l = 0; l < f.poset.size(); ++l) {
      const AModule& d = qh.standards[l];
      Recognition self = standard_recognition(d, l, qh);
      REQUIRE(self.isomorphism.has_value());
      CHECK(self.isomorphism->is_intertwiner());

      AModule conj = change_module_basis(d, unimodular(d.rank()));
      Recognition c = standard_recognition(conj, l, qh);
      REQUIRE(c.isomorphism.has_value());
      CHECK(c.isomorphism->is_intertwiner());
      CHECK(inverse(c.isomorphism->matrix, kZ).has_value());

      for (std::size_t m = 0; m < f.poset.size(); ++m) {
        if (m == l) continue;
        Recognition none = standard_recognition(direct_sum(d, qh.standards[m]), l, qh);
        CHECK_FALSE(none.isomorphism.has_value());
        CHECK(none.nabla_homs[m] == 1);
        CHECK_FALSE(none.diagnostic.empty());
      }
    }
  }
  // Same fibers as P(1) at every odd prime, yet not isomorphic over Z.
  QHStructure e1 = build_structure(e1_fixture(kZ));
  Recognition r = standard_recognition(doubled(e1.algebra), e1.poset.index("1"), e1);
  CHECK_FALSE(r.isomorphism.has_value());
}
