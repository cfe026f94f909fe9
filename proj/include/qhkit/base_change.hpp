#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qhkit/tilting.hpp"

namespace qhkit {

enum class PrimeOrigin { User, Automatic };

struct PrimeSample {
  std::vector<long> primes;  // increasing, distinct
  std::vector<PrimeOrigin> origin;

  // Keeps the first origin recorded for a prime; throws on non-primes.
  void add(long p, PrimeOrigin o);
  bool contains(long p) const;
};

// Primes dividing a nonunit elementary divisor met while computing Ext^1 and
// Ext^2 between the standards, the costandards and the extra modules.
std::vector<long> bad_primes(const QHStructure& qh, const std::vector<AModule>& extra = {});

// {2, 3, 5, 7} and the bad primes (automatic) together with user primes.
PrimeSample sample_primes(const QHStructure& qh, const std::vector<long>& user = {},
                          const std::vector<AModule>& extra = {});

// Entrywise reduction; throws std::invalid_argument unless the ring is Z.
AlgebraPtr reduce_mod_p(const AlgebraPtr& a, long p);
AModule reduce_mod_p(const AModule& m, const AlgebraPtr& reduced);
Morphism reduce_mod_p(const Morphism& f, const AlgebraPtr& reduced);

struct ReducedStructure {
  long p = 0;
  std::optional<QHStructure> qh;          // fiber pipeline on the reduced standards
  std::optional<Refutation> refutation;   // if the fiber is rejected
  std::vector<AModule> reduced_costandards;
  std::vector<std::optional<Morphism>> nabla_isomorphisms;  // reduced nabla -> fiber nabla

  bool accepted() const noexcept { return qh.has_value(); }
  bool costandards_match() const;
};
ReducedStructure reduce_structure(const QHStructure& qh, long p);

struct TiltingReduction {
  long p = 0;
  bool verified = false;  // reduced T passes verify_tilting over F_p
  std::vector<std::optional<Morphism>> isomorphisms;  // reduced T(l) -> fiber T(l)

  bool matches() const;
};
TiltingReduction reduce_tilting(const CharacteristicTilting& t, const ReducedStructure& fiber);

// The integral structure with its verified fibers at the sampled primes.
struct FiberFamily {
  const QHStructure* base = nullptr;
  PrimeSample sample;
  std::vector<ReducedStructure> fibers;  // parallel to sample.primes

  const ReducedStructure& at(long p) const;
  AModule reduce(const AModule& m, long p) const;
};
FiberFamily fiber_family(const QHStructure& qh, PrimeSample sample);

struct HomBaseChange {
  bool m_in_delta = false, n_in_nabla = false;
  std::size_t integral_rank = 0;
  std::vector<long> primes;
  std::vector<std::size_t> fiber_ranks;
  std::vector<long> jumps;  // primes where the fiber rank differs

  bool holds() const noexcept { return jumps.empty(); }
};
// Runs on any pair; membership is reported so broken fixtures can be probed.
HomBaseChange hom_base_change_check(const AModule& m, const AModule& n, const FiberFamily& fam);

struct FiberwiseFiltration {
  bool ext_criterion = false;
  std::vector<long> primes;
  std::vector<bool> fiber_results;

  // The implication ext_criterion => every fiber is Delta-filtered. The
  // converse over a finite sample is evidence only.
  bool contract_holds() const;
  std::vector<long> failing_primes() const;
};
FiberwiseFiltration fiberwise_filtration_check(const AModule& m, const FiberFamily& fam);

struct Recognition {
  std::vector<std::size_t> nabla_homs;  // rank Hom(M, nabla(m)) per label
  std::optional<Morphism> isomorphism;  // M -> Delta(label)
  std::string diagnostic;
};
// Hom(M, Delta(l)) is R when M is isomorphic to Delta(l), so its generator is
// the only candidate; the search is complete.
Recognition standard_recognition(const AModule& m, std::size_t label, const QHStructure& qh);

}  // namespace qhkit
