#pragma once

#include <cstdint>
#include <string>

#include "qhkit/qh.hpp"
#include "qhkit/quiver.hpp"

namespace qhkit {

// Path algebra of 1 -> 2 (lower-triangular 2 x 2 matrices); basis e1, e2, a.
AlgebraPtr e1_algebra(const GroundRing& ring);
// Path algebra of 1 -> 2 -> 3 modulo b*a; basis e1, e2, e3, a, b.
AlgebraPtr e2_algebra(const GroundRing& ring);
// R[x]/(x^2).
AlgebraPtr dual_numbers(const GroundRing& ring);
// Acyclic quiver on n vertices with arrows i -> j only for i < j and a random
// set of zero relations of length two, all drawn from the seed.
QuiverSpec random_triangular_quiver(std::size_t vertices, std::uint64_t seed);

// One-dimensional module at the idempotent a, killed by every other basis
// element; valid for algebras whose designated idempotents are basis
// vectors and whose remaining basis vectors lie in the radical.
AModule vertex_simple(const AlgebraPtr& a, std::size_t idempotent);

struct QHFixture {
  std::string name;
  AlgebraPtr algebra;
  Poset poset;
  std::vector<AModule> standards;
};

// R itself with one label.
QHFixture ground_fixture(const GroundRing& ring);
// E1 with 2 < 1 and the projectives as standards.
QHFixture e1_fixture(const GroundRing& ring);
// E1 with the opposite order 1 < 2 and the same candidates; not quasi-hereditary.
QHFixture e1_wrong_order_fixture(const GroundRing& ring);
// E2 with 1 < 2 < 3 and the simples as standards.
QHFixture e2_fixture(const GroundRing& ring);
// E1 (x) E1 with the product order and standard_candidates.
QHFixture e1_squared_fixture(const GroundRing& ring);
// random_triangular_quiver with the natural order and the simples.
QHFixture triangular_fixture(const GroundRing& ring, std::size_t vertices = 4, std::uint64_t seed = 7);
std::vector<QHFixture> corpus_fixtures(const GroundRing& ring);

// Verifies and computes costandards; throws std::runtime_error on rejection.
QHStructure build_structure(const QHFixture& f);

// Projectives, standards, costandards, duals of the projectives of A^op,
// and middles of random extensions among those, topped up with direct sums
// when nonsplit extensions are scarce.
std::vector<AModule> module_pool(const QHStructure& qh, std::size_t extensions = 4, std::uint64_t seed = 1,
                                 std::size_t max_rank = 12);

}  // namespace qhkit
