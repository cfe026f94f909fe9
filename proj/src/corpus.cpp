#include "qhkit/corpus.hpp"

#include <random>
#include <stdexcept>

namespace qhkit {

AlgebraPtr e1_algebra(const GroundRing& ring) {
  QuiverSpec q;
  q.vertices = {"1", "2"};
  q.arrows = {{"a", "1", "2"}};
  return compile_quiver(q, ring).algebra;
}

AlgebraPtr e2_algebra(const GroundRing& ring) {
  QuiverSpec q;
  q.vertices = {"1", "2", "3"};
  q.arrows = {{"a", "1", "2"}, {"b", "2", "3"}};
  q.relations = {{{{Scalar(1), "b*a"}}}};
  return compile_quiver(q, ring).algebra;
}

AlgebraPtr dual_numbers(const GroundRing& ring) {
  QuiverSpec q;
  q.vertices = {"1"};
  q.arrows = {{"x", "1", "1"}};
  q.relations = {{{{Scalar(1), "x*x"}}}};
  return compile_quiver(q, ring).algebra;
}

QuiverSpec random_triangular_quiver(std::size_t vertices, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  QuiverSpec q;
  for (std::size_t v = 1; v <= vertices; ++v) q.vertices.push_back(std::to_string(v));
  for (std::size_t i = 1; i <= vertices; ++i)
    for (std::size_t j = i + 1; j <= vertices; ++j)
      if (j == i + 1 || coin(rng)) {
        const std::string name = "a" + std::to_string(i) + std::to_string(j);
        q.arrows.push_back({name, std::to_string(i), std::to_string(j)});
      }
  for (const auto& x : q.arrows)
    for (const auto& y : q.arrows)
      if (x.target == y.source && coin(rng)) q.relations.push_back({{{Scalar(1), y.name + "*" + x.name}}});
  q.max_length = vertices + 1;
  return q;
}

AModule vertex_simple(const AlgebraPtr& a, std::size_t idempotent) {
  const Matrix& e = a->idempotent(idempotent);
  std::size_t pos = a->rank();
  for (std::size_t i = 0; i < a->rank(); ++i)
    if (e(i, 0) == 1) {
      if (pos != a->rank()) pos = a->rank() + 1;
      else pos = i;
    } else if (sgn(e(i, 0)) != 0) {
      pos = a->rank() + 1;
    }
  if (pos >= a->rank()) throw std::invalid_argument("vertex_simple: idempotent is not a basis vector");
  std::vector<Matrix> action(a->rank(), Matrix(1, 1));
  action[pos](0, 0) = 1;
  AModule s(a, std::move(action));
  check_module(s);
  return s;
}

namespace {

std::vector<AModule> projectives(const AlgebraPtr& a) {
  std::vector<AModule> out;
  for (std::size_t v = 0; v < a->num_idempotents(); ++v) out.push_back(projective_module(a, v));
  return out;
}

std::vector<AModule> simples(const AlgebraPtr& a) {
  std::vector<AModule> out;
  for (std::size_t v = 0; v < a->num_idempotents(); ++v) out.push_back(vertex_simple(a, v));
  return out;
}

}  // namespace

QHFixture ground_fixture(const GroundRing& ring) {
  auto a = Algebra::ground(ring);
  return {"R", a, Poset::chain({"1"}), {regular_module(a)}};
}

QHFixture e1_fixture(const GroundRing& ring) {
  auto a = e1_algebra(ring);
  return {"E1", a, Poset::from_relations({"1", "2"}, {{"2", "1"}}), projectives(a)};
}

QHFixture e1_wrong_order_fixture(const GroundRing& ring) {
  auto a = e1_algebra(ring);
  return {"E1-wrong-order", a, Poset::from_relations({"1", "2"}, {{"1", "2"}}), projectives(a)};
}

QHFixture e2_fixture(const GroundRing& ring) {
  auto a = e2_algebra(ring);
  return {"E2", a, Poset::chain({"1", "2", "3"}), simples(a)};
}

QHFixture e1_squared_fixture(const GroundRing& ring) {
  auto e1 = e1_algebra(ring);
  auto a = tensor_algebra(e1, e1);
  std::vector<std::string> labels{"11", "12", "21", "22"};
  // 2 < 1 in each factor, compared componentwise.
  std::vector<std::pair<std::string, std::string>> less{{"12", "11"}, {"21", "11"}, {"22", "12"}, {"22", "21"}};
  Poset p = Poset::from_relations(labels, less);
  return {"E1xE1", a, p, standard_candidates(a, p)};
}

QHFixture triangular_fixture(const GroundRing& ring, std::size_t vertices, std::uint64_t seed) {
  auto c = compile_quiver(random_triangular_quiver(vertices, seed), ring);
  std::vector<std::string> labels;
  for (std::size_t v = 1; v <= vertices; ++v) labels.push_back(std::to_string(v));
  return {"triangular" + std::to_string(vertices) + "-" + std::to_string(seed), c.algebra, Poset::chain(labels),
          simples(c.algebra)};
}

std::vector<QHFixture> corpus_fixtures(const GroundRing& ring) {
  return {ground_fixture(ring), e1_fixture(ring), e2_fixture(ring), e1_squared_fixture(ring), triangular_fixture(ring)};
}

QHStructure build_structure(const QHFixture& f) {
  VerifyResult v = verify_split_qh(f.algebra, f.poset, f.standards);
  if (!v.accepted())
    throw std::runtime_error(f.name + " rejected by axiom (" + v.refutation->axiom + "): " + v.refutation->message);
  compute_costandards(*v.qh);
  return std::move(*v.qh);
}

std::vector<AModule> module_pool(const QHStructure& qh, std::size_t extensions, std::uint64_t seed, std::size_t max_rank) {
  const AlgebraPtr& a = qh.algebra;
  std::vector<AModule> pool = projectives(a);
  pool.insert(pool.end(), qh.standards.begin(), qh.standards.end());
  pool.insert(pool.end(), qh.costandards.begin(), qh.costandards.end());
  for (std::size_t v = 0; v < a->num_idempotents(); ++v) pool.push_back(dual_module(projective_module(a->opposite(), v)));
  const std::size_t base = pool.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, base - 1);
  std::uniform_int_distribution<long> coeff(-2, 2);
  for (std::size_t tries = 0; tries < 20 * extensions && pool.size() < base + extensions; ++tries) {
    const AModule& m = pool[pick(rng)];
    const AModule& n = pool[pick(rng)];
    if (m.rank() + n.rank() > max_rank) continue;
    ExtGroup e = ext(m, n);
    if (e.generators.empty()) continue;
    Matrix f(n.rank(), e.pres.syzygy.rank());
    for (const auto& g : e.generators) f += g.matrix * Scalar(coeff(rng));
    Morphism phi{e.pres.syzygy, n, reduce(m.ring(), std::move(f))};
    pool.push_back(extension_from_cocycle(e, phi).middle);
  }
  // Split extensions where nonsplit ones are too rare (semisimple algebras).
  for (std::size_t tries = 0; tries < 20 * extensions && pool.size() < base + extensions; ++tries) {
    const AModule& m = pool[pick(rng)];
    const AModule& n = pool[pick(rng)];
    if (m.rank() + n.rank() <= max_rank) pool.push_back(direct_sum(m, n));
  }
  return pool;
}

}  // namespace qhkit
