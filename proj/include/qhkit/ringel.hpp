#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qhkit/tilting.hpp"

namespace qhkit {

// B = End_A(T)^op. The basis of B is the union over (l, m) of Hom(T(l), T(m))
// bases placed in T; b_i * b_j = h_j o h_i.
struct RingelDual {
  CharacteristicTilting tilting;
  std::vector<Matrix> basis;  // endomorphisms of T
  AlgebraPtr algebra;
  QHStructure qh;             // of B over the reversed poset, with costandards

  // G N = Hom_A(T, N) as a B-module, with basis hom_space(T, N).
  AModule apply(const AModule& n) const;
  // G f : G N -> G N', g |-> f o g, in the bases used by apply.
  Morphism apply(const Morphism& f) const;
  // Coordinates of an endomorphism of T in basis.
  Matrix coordinates(const Matrix& endo) const;
  // Element of A-End(T) with these coordinates.
  Matrix endomorphism(const Matrix& coords) const;
};

// Throws std::logic_error if B fails verification.
RingelDual ringel_dual(const QHStructure& qh, const CharacteristicTilting& t);
RingelDual ringel_dual(const QHStructure& qh);

// [P(l) : Delta(m)] with P(l) the projective cover of Delta(l).
std::vector<std::vector<std::size_t>> delta_multiplicity_matrix(const QHStructure& qh);
std::vector<std::vector<std::size_t>> hom_delta_nabla_table(const QHStructure& qh);

struct InvariantComparison {
  std::string name;
  bool equal = false;
  std::string detail;
};

struct DoubleDualReport {
  std::vector<std::vector<std::size_t>> multiplicities_a, multiplicities_rra;
  std::vector<std::vector<std::size_t>> hom_a, hom_rra;
  std::vector<InvariantComparison> comparisons;

  bool all_equal() const;
};
DoubleDualReport double_dual_invariants(const QHStructure& qh);

struct SelfDualityReport {
  bool possibly_self_dual = true;
  std::vector<InvariantComparison> comparisons;
  std::optional<std::string> witness;  // first failed comparison
};
SelfDualityReport self_duality_probe(const QHStructure& qh);

}  // namespace qhkit
