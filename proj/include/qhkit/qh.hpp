#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhkit/homology.hpp"

namespace qhkit {

// Finite poset with a fixed increasing enumeration (a linear extension).
class Poset {
 public:
  Poset() = default;
  // less holds pairs (a, b) with a < b; the order is their transitive
  // closure. An empty enumeration picks the linear extension that keeps
  // labels in their given order where possible.
  static Poset from_relations(std::vector<std::string> labels,
                              const std::vector<std::pair<std::string, std::string>>& less,
                              std::vector<std::string> enumeration = {});
  // labels[0] < labels[1] < ...
  static Poset chain(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::size_t index(const std::string& label) const;

  bool lt(std::size_t a, std::size_t b) const { return less_.at(a).at(b); }
  bool le(std::size_t a, std::size_t b) const { return a == b || lt(a, b); }
  // enumeration()[k] is the element with position k (0-based).
  const std::vector<std::size_t>& enumeration() const noexcept { return enumeration_; }
  std::size_t position(std::size_t element) const { return position_.at(element); }
  // Largest first.
  std::vector<std::size_t> decreasing() const;

  Poset reversed() const;
  // Pairs (a, b) with a < b and nothing strictly between.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<bool>> less_;
  std::vector<std::size_t> enumeration_;
  std::vector<std::size_t> position_;
};

struct Refutation {
  std::string axiom;  // "i" .. "v"
  std::string message;
  std::optional<Morphism> witness;
};

enum class FiltrationKind { Delta, Nabla };

// One step S_{j-1} < S_j of a chain 0 = S_0 < ... < S_k = M of saturated
// submodules. witness lifts an isomorphism X(label)^multiplicity -> S_j / S_{j-1}.
struct FiltrationLayer {
  std::size_t label = 0;
  std::size_t multiplicity = 0;
  Matrix sub;      // basis of S_j in M coordinates
  Matrix witness;  // M.rank() x multiplicity * rank X(label)
};

// Layers run from the bottom of M upwards. For Delta the labels weakly
// decrease in enumeration order, for Nabla they weakly increase.
struct FiltrationCertificate {
  FiltrationKind kind = FiltrationKind::Delta;
  AModule module;
  std::vector<FiltrationLayer> layers;

  std::size_t multiplicity(std::size_t label) const;
};

// Checks a certificate against the layer modules without trusting how it
// was produced; returns the first problem found.
std::optional<std::string> replay_certificate(const FiltrationCertificate& cert, const std::vector<AModule>& layer_modules,
                                              const Poset& poset);

struct HeredityLayer {
  std::size_t label = 0;
  AlgebraPtr above;      // A / J_{>label}
  Matrix local_ideal;    // heredity ideal of above, in its coordinates
  QuotientAlgebra step;  // above -> above / local_ideal
  Matrix ideal;          // J_label as a saturated lattice in A
  TraceMap trace;        // of Delta(label) into the regular module of above
};

struct ProjectiveCover {
  Presentation pres;  // P(label) = pres.p0, epimorphism pres.d0
  std::optional<FiltrationCertificate> kernel_certificate;  // C(label) over labels above
};

struct QHStructure {
  AlgebraPtr algebra;
  Poset poset;
  std::vector<AModule> standards;
  // Processing order: largest label first; chain[k].above is A_k with A_0 = A.
  std::vector<HeredityLayer> chain;
  std::vector<ProjectiveCover> covers;
  std::vector<std::string> notes;

  // Filled by compute_costandards.
  std::vector<AModule> costandards;
  std::vector<AModule> op_standards;  // D costandards over A^op

  bool has_costandards() const noexcept { return !costandards.empty() || standards.empty(); }
  const GroundRing& ring() const { return algebra->ring(); }
  std::size_t depth_of(std::size_t label) const;
  // M over A viewed over A_depth, if the heredity ideals above kill it.
  std::optional<AModule> descend(const AModule& m, std::size_t depth) const;
  // M over A_depth inflated to A.
  AModule ascend(const AModule& m, std::size_t depth) const;
};

struct VerifyResult {
  std::optional<QHStructure> qh;
  std::optional<Refutation> refutation;

  bool accepted() const noexcept { return qh.has_value(); }
};

// Decides whether (A, standards) is split quasi-hereditary over the poset.
VerifyResult verify_split_qh(const AlgebraPtr& a, const Poset& poset, const std::vector<AModule>& standards);

// Delta(l) = P(l) modulo the trace of all P(m) with m not <= l, where the
// poset elements correspond to the designated idempotents in order.
std::vector<AModule> standard_candidates(const AlgebraPtr& a, const Poset& poset);

// Builds nabla(l) = D Hom_{A_k}(Delta(l), A_k) inflated to A, and checks the
// normalization Hom(Delta(l), nabla(l)) = R and the Ext^1 vanishing so far.
void compute_costandards(QHStructure& qh);

struct OrthogonalityCell {
  std::size_t lambda = 0, beta = 0, degree = 0;
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;
  bool ok = false;
};
struct OrthogonalityTable {
  std::vector<OrthogonalityCell> cells;
  bool passed() const;
  std::optional<OrthogonalityCell> first_failure() const;
};
// Ext^i(deltas[l], nablas[b]) for i <= max_degree.
OrthogonalityTable orthogonality_table(const std::vector<AModule>& deltas, const std::vector<AModule>& nablas,
                                       std::size_t max_degree = 2);
OrthogonalityTable ext_orthogonality_table(const QHStructure& qh, std::size_t max_degree = 2);

bool has_delta_filtration(const AModule& m, const QHStructure& qh);
bool has_nabla_filtration(const AModule& n, const QHStructure& qh);
// Throw std::runtime_error when the module admits no filtration.
FiltrationCertificate extract_delta_filtration(const AModule& m, const QHStructure& qh);
FiltrationCertificate extract_nabla_filtration(const AModule& n, const QHStructure& qh);
std::optional<std::string> replay_certificate(const FiltrationCertificate& cert, const QHStructure& qh);

// Ext^1(M, sum of standards) = 0, cross-checked against a split projective
// cover; throws std::logic_error if the two answers differ.
bool ext_projective_check(const AModule& m, const QHStructure& qh);

std::size_t delta_multiplicity(const AModule& m, std::size_t label, const QHStructure& qh);
std::size_t nabla_multiplicity(const AModule& n, std::size_t label, const QHStructure& qh);

struct HomFiltrationRanks {
  std::vector<std::size_t> delta_mult;  // m_l(M)
  std::vector<std::size_t> nabla_mult;  // m_l(N)
  std::size_t predicted = 0;            // sum_l m_l(M) m_l(N)
  std::size_t hom_rank = 0;
  bool consistent() const noexcept { return predicted == hom_rank; }
};
HomFiltrationRanks hom_filtration_ranks(const AModule& m, const AModule& n, const QHStructure& qh);

// Tor_1(D N, M) = 0 and D N (x)_A M torsion-free.
bool tor_flatness_check(const AModule& n, const AModule& m);

// Trace of L^h in X splits, i.e. X is a direct summand of some L^h.
bool in_additive_closure(const AModule& x, const AModule& l);

}  // namespace qhkit
