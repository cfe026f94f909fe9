// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qhkit/base_change.hpp"
#include "qhkit/corpus.hpp"
#include "qhkit/ringel.hpp"

using namespace qhkit;

namespace {

const std::vector<GroundRing> kRings{GroundRing::prime_field(2), GroundRing::prime_field(5), GroundRing::rationals(),
                                     GroundRing::integers()};
const GroundRing kZ = GroundRing::integers();

class Criterion {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& s) { notes_.push_back(s); }

  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_, notes_;
};

std::string where(const QHFixture& f, const std::string& detail = "") {
  return f.name + "/" + f.algebra->ring().name() + (detail.empty() ? "" : ": " + detail);
}

std::vector<AModule> filtered(const std::vector<AModule>& pool, const QHStructure& qh, bool delta) {
  std::vector<AModule> out;
  for (const auto& m : pool)
    if (delta ? has_delta_filtration(m, qh) : has_nabla_filtration(m, qh)) out.push_back(m);
  return out;
}

// Z --2--> Z over E1, with e1, e2 and a acting as on P(1) up to the factor 2.
AModule doubled(const AlgebraPtr& a) {
  return AModule(a, {Matrix{{1, 0}, {0, 0}}, Matrix{{0, 0}, {0, 1}}, Matrix{{0, 0}, {2, 0}}});
}

void ext_orthogonality(Criterion& c) {
  for (const auto& ring : kRings)
    for (const auto& f : corpus_fixtures(ring)) {
      QHStructure qh = build_structure(f);
      const std::size_t t = f.poset.size();
      for (std::size_t l = 0; l < t; ++l)
        for (std::size_t b = 0; b < t; ++b) {
          const std::size_t want = l == b ? 1 : 0;
          for (std::size_t i = 0; i <= 2; ++i) {
            std::size_t free_rank = 0;
            bool torsion_free = true;
            if (i == 0) {
              free_rank = hom_rank(qh.standards[l], qh.costandards[b]);
            } else {
              ExtGroup e = ext(qh.standards[l], qh.costandards[b], i);
              free_rank = e.free_rank;
              torsion_free = e.torsion.empty();
            }
            const std::string cell = where(f, "(" + f.poset.label(l) + ", " + f.poset.label(b) + ", " +
                                                  std::to_string(i) + ")");
            c.expect(free_rank == (i == 0 ? want : 0) && torsion_free, cell);
          }
          // Enumeration over F_2 where the search space is small.
          if (ring.is_prime_field() && ring.characteristic() == 2) {
            const AModule& d = qh.standards[l];
            const AModule& n = qh.costandards[b];
            if (d.rank() * n.rank() <= 9) c.expect(oracle::brute_hom_rank(d, n) == want, where(f, "brute Hom"));
            if (f.algebra->rank() * d.rank() * n.rank() <= 16)
              c.expect(oracle::brute_ext1_rank(d, n) == 0, where(f, "brute Ext^1"));
          }
        }
    }
}

void filtration_criterion(Criterion& c) {
  const auto f2 = GroundRing::prime_field(2);
  std::size_t modules = 0, filtered_count = 0;
  for (const auto& f : {e1_fixture(f2), e2_fixture(f2)}) {
    QHStructure qh = build_structure(f);
    for (const auto& m : module_pool(qh, 6, 3, 6)) {
      if (m.rank() > 6) continue;
      ++modules;
      const bool has = has_delta_filtration(m, qh);
      c.expect(has == oracle::has_filtration(m, qh.standards), where(f, "Delta, rank " + std::to_string(m.rank())));
      c.expect(has_nabla_filtration(m, qh) == oracle::has_filtration(m, qh.costandards),
               where(f, "nabla, rank " + std::to_string(m.rank())));
      if (has) {
        ++filtered_count;
        auto problem = replay_certificate(extract_delta_filtration(m, qh), qh);
        c.expect(!problem, where(f, problem.value_or("")));
      }
    }
  }
  c.expect(filtered_count > 0 && filtered_count < modules, "pool has both filtered and unfiltered modules");
  c.note(std::to_string(modules) + " modules, " + std::to_string(filtered_count) + " Delta-filtered");
}

void tilting_suite(Criterion& c) {
  bool e2_nontrivial = false;
  for (const auto& ring : kRings)
    for (const auto& f : corpus_fixtures(ring)) {
      QHStructure qh = build_structure(f);
      CharacteristicTilting t = build_tilting(qh);
      for (const auto& p : t.parts) {
        c.expect(verify_partial_tilting(p, qh), where(f, "sequences for " + f.poset.label(p.label)));
        if (f.name == "E2" && p.module.rank() > qh.standards[p.label].rank()) e2_nontrivial = true;
      }
      c.expect(ext(t.module, t.module, 1).is_zero() && ext(t.module, t.module, 2).is_zero(), where(f, "Ext(T, T)"));
      c.expect(verify_tilting(t, qh), where(f, "verify_tilting"));
      for (const auto& m : module_pool(qh, 4, 21)) {
        const bool delta = has_delta_filtration(m, qh), nabla = has_nabla_filtration(m, qh);
        c.expect(delta == (ext(m, t.module, 1).is_zero() && ext(m, t.module, 2).is_zero()), where(f, "(a)"));
        c.expect(nabla == (ext(t.module, m, 1).is_zero() && ext(t.module, m, 2).is_zero()), where(f, "(c)"));
        c.expect((delta && nabla) == in_additive_closure(m, t.module), where(f, "add T"));
      }
    }
  c.expect(e2_nontrivial, "E2 has a T(l) larger than Delta(l)");
}

void uniqueness(Criterion& c) {
  for (const auto& ring : kRings)
    for (const auto& f : corpus_fixtures(ring)) {
      QHStructure qh = build_structure(f);
      CharacteristicTilting t = build_tilting(qh);
      CharacteristicTilting q = build_tilting(qh, 0x5eed);
      c.expect(verify_tilting(q, qh), where(f, "second build"));
      c.expect(in_additive_closure(t.module, q.module) && in_additive_closure(q.module, t.module), where(f));
    }
}

void ringel_qh(Criterion& c) {
  for (const auto& ring : kRings)
    for (const auto& f : corpus_fixtures(ring)) {
      QHStructure qh = build_structure(f);
      RingelDual b = ringel_dual(qh);
      c.expect(verify_split_qh(b.algebra, f.poset.reversed(), b.qh.standards).accepted(), where(f, "verify"));
      std::vector<AModule> pool = filtered(module_pool(qh, 6, 13, 10), qh, false);
      std::vector<AModule> images;
      for (const auto& n : pool) images.push_back(b.apply(n));
      std::size_t pairs = 0;
      for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = 0; j < pool.size(); ++j, ++pairs)
          c.expect(hom_rank(pool[i], pool[j]) == hom_rank(images[i], images[j]), where(f, "Hom transport"));
      for (std::size_t l = 0; l < f.poset.size(); ++l)
        for (std::size_t i = 0; i < pool.size(); ++i, ++pairs) {
          ExtGroup ea = ext(qh.costandards[l], pool[i]);
          ExtGroup eb = ext(b.qh.standards[l], images[i]);
          c.expect(ea.free_rank == eb.free_rank && ea.torsion == eb.torsion, where(f, "Ext transport"));
        }
      c.expect(pairs >= 20, where(f, std::to_string(pairs) + " probe pairs"));
    }
}

void double_dual(Criterion& c) {
  for (const auto& ring : kRings)
    for (const auto& f : corpus_fixtures(ring)) {
      DoubleDualReport r = double_dual_invariants(build_structure(f));
      c.expect(r.multiplicities_a == r.multiplicities_rra, where(f));
    }
}

void base_change(Criterion& c) {
  for (const auto& f : {e1_fixture(kZ), e2_fixture(kZ)}) {
    QHStructure qh = build_structure(f);
    std::vector<AModule> extra;
    if (f.algebra->rank() == 3) extra.push_back(doubled(qh.algebra));
    PrimeSample sample = sample_primes(qh, {}, extra);
    for (long p : {2L, 3L, 5L, 7L}) c.expect(sample.contains(p), where(f, "sample has " + std::to_string(p)));
    FiberFamily fam = fiber_family(qh, sample);
    CharacteristicTilting t = build_tilting(qh);
    for (const auto& fiber : fam.fibers) {
      const std::string at_p = "p = " + std::to_string(fiber.p);
      c.expect(fiber.accepted(), where(f, at_p + " accepted"));
      if (!fiber.accepted()) continue;
      c.expect(fiber.costandards_match(), where(f, at_p + " nabla"));
      TiltingReduction tr = reduce_tilting(t, fiber);
      c.expect(tr.verified && tr.matches(), where(f, at_p + " T"));
      for (const auto& iso : tr.isomorphisms) c.expect(iso && iso->is_intertwiner(), where(f, at_p + " T witness"));
      for (const auto& iso : fiber.nabla_isomorphisms)
        c.expect(iso && iso->is_intertwiner(), where(f, at_p + " nabla witness"));
    }
    std::vector<AModule> pool = module_pool(qh, 4, 31);
    std::vector<AModule> deltas = filtered(pool, qh, true), nablas = filtered(pool, qh, false);
    for (const auto& m : deltas)
      for (const auto& n : nablas) c.expect(hom_base_change_check(m, n, fam).holds(), where(f, "Hom rank"));
    for (const auto& m : pool) c.expect(fiberwise_filtration_check(m, fam).contract_holds(), where(f, "fiberwise"));
    if (!extra.empty()) {
      FiberwiseFiltration x = fiberwise_filtration_check(doubled(qh.algebra), fam);
      c.expect(!x.ext_criterion && x.failing_primes() == std::vector<long>{2} && x.contract_holds(),
               "torsion fixture fails exactly at 2");
    }
  }
}

void tor_flatness(Criterion& c) {
  std::size_t pairs = 0;
  for (const auto& f : corpus_fixtures(kZ)) {
    QHStructure qh = build_structure(f);
    std::vector<AModule> pool = module_pool(qh, 4, 9);
    std::vector<AModule> deltas = filtered(pool, qh, true), nablas = filtered(pool, qh, false);
    for (const auto& n : nablas)
      for (const auto& m : deltas) {
        ++pairs;
        TorResult r = tor1_and_tensor(dual_module(n), m);
        c.expect(r.tor1_vanishes() && r.tensor_free(), where(f, "Tor"));
        c.expect(tor_flatness_check(n, m), where(f, "tor_flatness_check"));
        // D nabla(l) (x) Delta(m) is R for l = m and 0 otherwise.
        HomFiltrationRanks h = hom_filtration_ranks(m, n, qh);
        c.expect(r.tensor.free_rank == h.predicted, where(f, "tensor rank"));
      }
  }
  c.note(std::to_string(pairs) + " pairs");
}

void negative_controls(Criterion& c) {
  for (const auto& ring : kRings) {
    auto a = dual_numbers(ring);
    AModule whole = regular_module(a);
    AModule top = quotient(whole, a->basis_vector(1)).module;
    // Every assignment of the two cyclic modules to one or two labels.
    const std::vector<AModule> types{whole, top};
    std::vector<std::pair<Poset, std::vector<AModule>>> assignments;
    for (const auto& d : types) assignments.push_back({Poset::chain({"1"}), {d}});
    for (const auto& p : {Poset::chain({"1", "2"}), Poset::from_relations({"1", "2"}, {})})
      for (const auto& x : types)
        for (const auto& y : types) assignments.push_back({p, {x, y}});
    for (const auto& [p, ds] : assignments) {
      VerifyResult v = verify_split_qh(a, p, ds);
      c.expect(!v.accepted() && !v.refutation->axiom.empty() && !v.refutation->message.empty(),
               "dual numbers/" + ring.name());
    }
    QHFixture f = e1_wrong_order_fixture(ring);
    VerifyResult v = verify_split_qh(f.algebra, f.poset, f.standards);
    const bool refuted = !v.accepted() && v.refutation->axiom == "ii" && v.refutation->witness.has_value();
    c.expect(refuted, where(f, "axiom (ii)"));
    if (refuted) {
      const Morphism& w = *v.refutation->witness;
      const AModule& d2 = f.standards[f.poset.index("2")];
      const AModule& d1 = f.standards[f.poset.index("1")];
      c.expect(w.source.actions() == d2.actions() && w.target.actions() == d1.actions() && w.is_intertwiner() &&
                   !w.matrix.is_zero(),
               where(f, "witness is a nonzero map Delta(2) -> Delta(1)"));
    }
  }
}

struct Entry {
  int id;
  std::string title;
  double limit_seconds;  // 0 for none
  std::function<void(Criterion&)> run;
};

}  // namespace

int main() {
  const std::vector<Entry> entries{
      {1, "Ext-orthogonality on the corpus over F2, F5, Q, Z", 10, ext_orthogonality},
      {2, "Delta-filtration criterion against brute force over F2", 60, filtration_criterion},
      {3, "characteristic tilting modules", 30, tilting_suite},
      {4, "two generator orderings give the same add T", 0, uniqueness},
      {5, "Ringel duals are quasi-hereditary; Hom and Ext transport", 0, ringel_qh},
      {6, "double Ringel dual multiplicities", 0, double_dual},
      {7, "integral base change", 0, base_change},
      {8, "Tor flatness over Z", 0, tor_flatness},
      {9, "negative controls", 0, negative_controls},
  };
  int failed = 0;
  for (const auto& e : entries) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.expect(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (e.limit_seconds > 0 && secs > e.limit_seconds) c.expect(false, "over the time limit");
    const bool pass = c.failed_ == 0 && c.checks_ > 0;
    if (!pass) ++failed;
    std::ostringstream line;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    line << (pass ? "PASS" : "FAIL") << "  criterion " << e.id << ": " << e.title << " (" << c.checks_ << " checks, "
         << timing;
    if (e.limit_seconds > 0) line << " of " << e.limit_seconds << " s";
    line << ")";
    for (const auto& n : c.notes_) line << "; " << n;
    std::cout << line.str() << "\n";
    for (const auto& f : c.failures_) std::cout << "      " << f << "\n";
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
