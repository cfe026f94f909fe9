#pragma once

#include <cstddef>
#include <vector>

#include "qhkit/module.hpp"

namespace qhkit {

// P = A e_{a_0} + A e_{a_1} + ..., one slot per summand.
struct FreeModule {
  AModule module;
  std::vector<std::size_t> slots;    // idempotent of each summand
  std::vector<std::size_t> offsets;  // coordinate offset of each summand
};
FreeModule free_module(const AlgebraPtr& a, const std::vector<std::size_t>& slots);

// P_0 -> M -> 0 covering an idempotent-adapted R-basis of M, with the
// saturated kernel Omega M = ker d_0.
struct Presentation {
  AModule module;
  FreeModule p0;
  Morphism d0;
  std::vector<Matrix> slot_vectors;  // image of the generator e_{a_s} of slot s
  Sublattice kernel;                 // ker d_0 in P_0 coordinates
  AModule syzygy;
  Morphism inclusion;                // syzygy -> P_0
};
Presentation presentation(const AModule& m);
AModule syzygy(const AModule& m, std::size_t times = 1);

// Ext^degree(M, N) computed as Hom(Omega^degree M, N) modulo maps that
// extend to the free cover of Omega^{degree-1} M.
struct ExtGroup {
  std::size_t degree = 1;
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;
  // Cocycles Omega^degree M -> N generating the group; orders[i] is the
  // order of generators[i], 0 for a free generator.
  std::vector<Morphism> generators;
  std::vector<Integer> orders;

  Presentation pres;                      // of Omega^{degree-1} M
  AModule target;
  std::vector<Morphism> cocycle_basis;    // basis of Hom(Omega^degree M, N)
  Matrix coboundaries;                    // in cocycle_basis coordinates
  Matrix U;                               // left Smith transform of coboundaries
  std::vector<Integer> divisors;

  bool is_zero() const noexcept { return free_rank == 0 && torsion.empty(); }
  std::size_t generator_count() const noexcept { return generators.size(); }
  // Coordinates of the class of phi against generators (torsion entries
  // reduced modulo their order).
  std::vector<Integer> class_of(const Morphism& phi) const;
  bool is_coboundary(const Morphism& phi) const;
};
ExtGroup ext(const AModule& m, const AModule& n, std::size_t degree = 1);

// 0 -> N -> Y -> M^k -> 0 obtained by pushing the free cover of M along k
// cocycles Omega M -> N simultaneously.
struct Extension {
  AModule middle;
  Morphism iota;  // N -> Y
  Morphism pi;    // Y -> M^k
  std::size_t copies = 0;
};
Extension extension_from_cocycles(const ExtGroup& e, const std::vector<Morphism>& cocycles);
Extension extension_from_cocycle(const ExtGroup& e, const Morphism& cocycle);
// Cocycle Omega M -> N representing the class of 0 -> N -> Y -> M -> 0.
Morphism connecting_cocycle(const ExtGroup& e, const Morphism& iota, const Morphism& pi);

struct TorResult {
  CokernelInvariants tensor;  // X (x)_A M as an R-module
  CokernelInvariants tor1;

  bool tor1_vanishes() const noexcept { return tor1.is_zero(); }
  bool tensor_free() const noexcept { return tensor.torsion.empty(); }
};
// X is a right A-module, given as a left module over A^op.
TorResult tor1_and_tensor(const AModule& x, const AModule& m);

}  // namespace qhkit
