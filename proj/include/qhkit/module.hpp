#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qhkit/algebra.hpp"

namespace qhkit {

// Finite free R-module with a left A-action, stored as one n x n matrix per
// basis element of A. Cheap to copy; the data is shared and immutable.
class AModule {
  struct Data {
    AlgebraPtr algebra;
    std::size_t rank = 0;
    std::vector<Matrix> action;

    std::once_flag once;
    std::vector<Matrix> blocks;
    std::vector<std::size_t> offsets;
    Matrix adapted, adapted_inv;
    std::vector<Matrix> gen_blocks;
  };

 public:
  AModule() = default;
  AModule(AlgebraPtr algebra, std::vector<Matrix> action);

  static AModule zero(const AlgebraPtr& algebra);

  bool valid() const noexcept { return static_cast<bool>(d_); }
  const AlgebraPtr& algebra() const { return d_->algebra; }
  const GroundRing& ring() const { return d_->algebra->ring(); }
  std::size_t rank() const { return d_->rank; }
  const Matrix& action(std::size_t i) const { return d_->action[i]; }
  const std::vector<Matrix>& actions() const { return d_->action; }
  // rho(x) for a coefficient vector x.
  Matrix act(const Matrix& x) const;

  // Basis of e_a M; M is the direct sum of these blocks.
  const Matrix& block_basis(std::size_t a) const;
  std::size_t block_rank(std::size_t a) const { return block_basis(a).cols(); }
  // [block_basis(0) | block_basis(1) | ...] and its inverse.
  const Matrix& adapted_basis() const;
  const Matrix& adapted_inverse() const;
  std::size_t block_offset(std::size_t a) const;
  // Matrix of each algebra generator g in e_c A e_a as a map e_a M -> e_c M
  // in adapted coordinates; parallel to algebra()->generators().
  const std::vector<Matrix>& generator_blocks() const;

 private:
  void compute_adapted() const;
  std::shared_ptr<Data> d_;
};

// Throws std::invalid_argument naming the failed relation.
void check_module(const AModule& m);

struct Morphism {
  AModule source;
  AModule target;
  Matrix matrix;  // target.rank() x source.rank()

  bool is_intertwiner() const;
};

Morphism compose(const Morphism& g, const Morphism& f);
Morphism identity_morphism(const AModule& m);
Morphism zero_morphism(const AModule& source, const AModule& target);

AModule regular_module(const AlgebraPtr& a);
// A e_a with basis Algebra::projective_basis(a).
AModule projective_module(const AlgebraPtr& a, std::size_t idempotent);

AModule direct_sum(const std::vector<AModule>& parts);
AModule direct_sum(const AModule& a, const AModule& b);
// M (x)_R R^m, realized as m copies of M.
AModule tensor_with_free(const AModule& m, std::size_t copies);

struct Submodule {
  AModule module;
  Morphism inclusion;
};
struct QuotientModule {
  AModule module;
  Morphism projection;
  Sublattice lattice;  // the submodule, with a complement
};

// Submodule spanned by the columns of s; throws if s is not A-stable.
Submodule submodule(const AModule& m, const Matrix& s);
// A-submodule generated by the columns of g.
Submodule generated_submodule(const AModule& m, const Matrix& g);
// Quotient by the submodule spanned by s; throws unless s is A-stable and
// (over Z) saturated, so that the quotient stays R-free.
QuotientModule quotient(const AModule& m, const Matrix& s);

Submodule kernel(const Morphism& f);
Submodule image(const Morphism& f);
QuotientModule cokernel(const Morphism& f);

// M over A/J viewed as an A-module.
AModule inflate(const AModule& m, const AlgebraPtr& big, const QuotientAlgebra& q);
// M over A with J M = 0 viewed as an A/J-module; nullopt if J M != 0.
std::optional<AModule> deflate(const AModule& m, const QuotientAlgebra& q, const Matrix& ideal);

// D M = Hom_R(M, R) as a left module over the opposite algebra.
AModule dual_module(const AModule& m);
Morphism dual_morphism(const Morphism& f);

AModule reduce_module(const AModule& m, const AlgebraPtr& reduced_algebra);
// Same module in the basis given by the columns of g.
AModule change_module_basis(const AModule& m, const Matrix& g);

// Basis of Hom_A(M, N); over Z a lattice basis of all integral intertwiners.
std::vector<Morphism> hom_space(const AModule& m, const AModule& n);
std::size_t hom_rank(const AModule& m, const AModule& n);
// Columns are the vectorized basis morphisms.
Matrix vectorized(const std::vector<Morphism>& basis, std::size_t rows, std::size_t cols);

// Invertible intertwiner M -> N, searched among combinations of a Hom basis.
// Complete over small prime fields, a semi-decision over Q and Z.
std::optional<Morphism> find_isomorphism(const AModule& m, const AModule& n, std::uint64_t seed = 1);

struct TraceMap {
  Morphism tau;                 // L (x) Hom(L, M) -> M
  std::vector<Morphism> homs;   // the Hom basis used for the tensor factor
  Matrix image;                 // column basis of the image in M
  bool injective = false;
  bool saturated = false;
};
TraceMap trace_map(const AModule& l, const AModule& m);

// Split surjection test: is there s with f s = id?
std::optional<Morphism> section_of(const Morphism& f);

}  // namespace qhkit
