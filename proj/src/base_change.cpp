#include "qhkit/base_change.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qhkit {

namespace {

void require_integral(const GroundRing& r, const char* what) {
  if (!r.is_integers()) throw std::invalid_argument(std::string(what) + ": reduction needs a structure over Z");
}

void collect(const ExtGroup& e, std::set<long>& out) {
  for (const auto& d : e.divisors)
    if (abs(d) > 1)
      for (long q : prime_factors(d)) out.insert(q);
  for (const auto& d : e.torsion)
    for (long q : prime_factors(d)) out.insert(q);
}

}  // namespace

void PrimeSample::add(long p, PrimeOrigin o) {
  if (!is_prime(p)) throw std::invalid_argument("PrimeSample: " + std::to_string(p) + " is not prime");
  auto it = std::lower_bound(primes.begin(), primes.end(), p);
  if (it != primes.end() && *it == p) return;
  const auto k = it - primes.begin();
  primes.insert(it, p);
  origin.insert(origin.begin() + k, o);
}

bool PrimeSample::contains(long p) const { return std::binary_search(primes.begin(), primes.end(), p); }

std::vector<long> bad_primes(const QHStructure& qh, const std::vector<AModule>& extra) {
  require_integral(qh.ring(), "bad_primes");
  std::set<long> out;
  std::vector<AModule> sources = qh.standards, targets = qh.costandards;
  sources.insert(sources.end(), extra.begin(), extra.end());
  targets.insert(targets.end(), qh.standards.begin(), qh.standards.end());
  targets.insert(targets.end(), extra.begin(), extra.end());
  for (const auto& m : sources)
    for (const auto& n : targets)
      for (std::size_t deg = 1; deg <= 2; ++deg) collect(ext(m, n, deg), out);
  return {out.begin(), out.end()};
}

PrimeSample sample_primes(const QHStructure& qh, const std::vector<long>& user, const std::vector<AModule>& extra) {
  PrimeSample s;
  for (long p : user) s.add(p, PrimeOrigin::User);
  for (long p : {2L, 3L, 5L, 7L}) s.add(p, PrimeOrigin::Automatic);
  for (long p : bad_primes(qh, extra)) s.add(p, PrimeOrigin::Automatic);
  return s;
}

AlgebraPtr reduce_mod_p(const AlgebraPtr& a, long p) {
  require_integral(a->ring(), "reduce_mod_p");
  return reduce_algebra(a, p);
}

AModule reduce_mod_p(const AModule& m, const AlgebraPtr& reduced) {
  require_integral(m.ring(), "reduce_mod_p");
  return reduce_module(m, reduced);
}

Morphism reduce_mod_p(const Morphism& f, const AlgebraPtr& reduced) {
  return {reduce_mod_p(f.source, reduced), reduce_mod_p(f.target, reduced), reduce(reduced->ring(), f.matrix)};
}

bool ReducedStructure::costandards_match() const {
  return accepted() && std::all_of(nabla_isomorphisms.begin(), nabla_isomorphisms.end(),
                                   [](const auto& f) { return f.has_value(); });
}

ReducedStructure reduce_structure(const QHStructure& qh, long p) {
  require_integral(qh.ring(), "reduce_structure");
  ReducedStructure out;
  out.p = p;
  AlgebraPtr ap = reduce_algebra(qh.algebra, p);
  std::vector<AModule> standards;
  for (const auto& d : qh.standards) standards.push_back(reduce_module(d, ap));
  VerifyResult v = verify_split_qh(ap, qh.poset, standards);
  if (!v.accepted()) {
    out.refutation = v.refutation;
    return out;
  }
  QHStructure fiber = std::move(*v.qh);
  try {
    compute_costandards(fiber);
  } catch (const std::exception& e) {
    out.refutation = Refutation{"v", std::string("costandards over the fiber: ") + e.what(), std::nullopt};
    return out;
  }
  for (std::size_t l = 0; l < qh.costandards.size(); ++l) {
    out.reduced_costandards.push_back(reduce_module(qh.costandards[l], ap));
    out.nabla_isomorphisms.push_back(find_isomorphism(out.reduced_costandards.back(), fiber.costandards[l]));
  }
  out.qh = std::move(fiber);
  return out;
}

bool TiltingReduction::matches() const {
  return verified && std::all_of(isomorphisms.begin(), isomorphisms.end(), [](const auto& f) { return f.has_value(); });
}

TiltingReduction reduce_tilting(const CharacteristicTilting& t, const ReducedStructure& fiber) {
  if (!fiber.accepted()) throw std::invalid_argument("reduce_tilting: the fiber was rejected");
  const QHStructure& qp = *fiber.qh;
  TiltingReduction out;
  out.p = fiber.p;
  out.verified = verify_tilting(reduce_module(t.module, qp.algebra), qp);
  CharacteristicTilting tp = build_tilting(qp);
  for (std::size_t l = 0; l < t.parts.size(); ++l)
    out.isomorphisms.push_back(find_isomorphism(reduce_module(t.parts[l].module, qp.algebra), tp.parts[l].module));
  return out;
}

const ReducedStructure& FiberFamily::at(long p) const {
  for (std::size_t k = 0; k < sample.primes.size(); ++k)
    if (sample.primes[k] == p) return fibers[k];
  throw std::out_of_range("FiberFamily: prime " + std::to_string(p) + " was not sampled");
}

AModule FiberFamily::reduce(const AModule& m, long p) const {
  const ReducedStructure& f = at(p);
  if (!f.accepted()) throw std::logic_error("FiberFamily: fiber at " + std::to_string(p) + " was rejected");
  return reduce_module(m, f.qh->algebra);
}

FiberFamily fiber_family(const QHStructure& qh, PrimeSample sample) {
  require_integral(qh.ring(), "fiber_family");
  FiberFamily fam;
  fam.base = &qh;
  fam.sample = std::move(sample);
  for (long p : fam.sample.primes) fam.fibers.push_back(reduce_structure(qh, p));
  return fam;
}

HomBaseChange hom_base_change_check(const AModule& m, const AModule& n, const FiberFamily& fam) {
  const QHStructure& qh = *fam.base;
  HomBaseChange out;
  out.m_in_delta = has_delta_filtration(m, qh);
  out.n_in_nabla = has_nabla_filtration(n, qh);
  out.integral_rank = hom_rank(m, n);
  for (long p : fam.sample.primes) {
    const std::size_t r = hom_rank(fam.reduce(m, p), fam.reduce(n, p));
    out.primes.push_back(p);
    out.fiber_ranks.push_back(r);
    if (r != out.integral_rank) out.jumps.push_back(p);
  }
  return out;
}

bool FiberwiseFiltration::contract_holds() const {
  return !ext_criterion || std::all_of(fiber_results.begin(), fiber_results.end(), [](bool b) { return b; });
}

std::vector<long> FiberwiseFiltration::failing_primes() const {
  std::vector<long> out;
  for (std::size_t k = 0; k < primes.size(); ++k)
    if (!fiber_results[k]) out.push_back(primes[k]);
  return out;
}

FiberwiseFiltration fiberwise_filtration_check(const AModule& m, const FiberFamily& fam) {
  FiberwiseFiltration out;
  out.ext_criterion = has_delta_filtration(m, *fam.base);
  for (long p : fam.sample.primes) {
    out.primes.push_back(p);
    out.fiber_results.push_back(has_delta_filtration(fam.reduce(m, p), *fam.at(p).qh));
  }
  return out;
}

Recognition standard_recognition(const AModule& m, std::size_t label, const QHStructure& qh) {
  Recognition out;
  const std::size_t t = qh.poset.size();
  bool multiplicity_ok = true;
  for (std::size_t mu = 0; mu < t; ++mu) {
    out.nabla_homs.push_back(hom_rank(m, qh.costandards[mu]));
    if (out.nabla_homs.back() != (mu == label ? 1u : 0u)) multiplicity_ok = false;
  }
  if (!multiplicity_ok) {
    out.diagnostic = "rank Hom(M, nabla(-)) is not the indicator of " + qh.poset.label(label);
    return out;
  }
  const AModule& delta = qh.standards[label];
  if (m.rank() != delta.rank()) {
    out.diagnostic = "rank mismatch";
    return out;
  }
  std::vector<Morphism> hs = hom_space(m, delta);
  if (hs.size() != 1) {
    out.diagnostic = "Hom(M, Delta) has rank " + std::to_string(hs.size());
    return out;
  }
  if (!inverse(hs[0].matrix, qh.ring())) {
    out.diagnostic = "the generator of Hom(M, Delta) is not invertible";
    return out;
  }
  out.isomorphism = hs[0];
  return out;
}

}  // namespace qhkit
