#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qhkit/qh.hpp"

namespace qhkit {

// 0 -> X -> Y -> delta^copies -> 0 killing Ext^1(delta, X).
struct UniversalExtension {
  AModule middle;
  Morphism iota;  // X -> Y
  Morphism pi;    // Y -> delta^copies
  std::size_t copies = 0;
};
// seed 0 uses the Smith-canonical generators of Ext^1(delta, X); any other
// seed shuffles them and applies a random unitriangular change, which still
// generates the group.
UniversalExtension universal_extension(const AModule& x, const AModule& delta, std::uint64_t seed = 0);

struct PartialTilting {
  std::size_t label = 0;
  AModule module;
  Morphism delta_embedding;  // Delta(label) -> T
  Morphism nabla_surjection; // T -> nabla(label)
  QuotientModule x;          // T / Delta(label)
  FiltrationCertificate x_certificate;
  Submodule y;               // kernel of the surjection
  FiltrationCertificate y_certificate;
  std::vector<std::size_t> extension_steps;  // labels, in the order used
};

PartialTilting build_partial_tilting(std::size_t label, const QHStructure& qh, std::uint64_t seed = 0);

struct CharacteristicTilting {
  std::vector<PartialTilting> parts;  // indexed by label
  AModule module;                     // direct sum of the parts
  std::vector<std::size_t> offsets;

  Matrix inclusion(std::size_t label) const;   // T(label) -> T
  Matrix projection(std::size_t label) const;  // T -> T(label)
};

CharacteristicTilting build_tilting(const QHStructure& qh, std::uint64_t seed = 0);

// Both exact sequences, their certificates, and Ext^1(Delta(m), T(l)) = 0.
bool verify_partial_tilting(const PartialTilting& t, const QHStructure& qh);
// Membership in F(Delta) and F(nabla) with replayed certificates and
// Ext^1(T, T) = Ext^2(T, T) = 0.
bool verify_tilting(const AModule& t, const QHStructure& qh);
bool verify_tilting(const CharacteristicTilting& t, const QHStructure& qh);

// For probes in F(nabla): Hom(T(l), X) -> Hom(Delta(l), X) is onto; for
// probes in F(Delta): Hom(X, T(l)) -> Hom(X, nabla(l)) is onto.
bool approximation_check(const PartialTilting& t, const QHStructure& qh, const std::vector<AModule>& probes);

// X in F(Delta) and F(nabla).
bool add_t_membership(const AModule& x, const QHStructure& qh);

}  // namespace qhkit
