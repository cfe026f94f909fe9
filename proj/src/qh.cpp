#include "qhkit/qh.hpp"

#include <algorithm>
#include <stdexcept>

namespace qhkit {

Poset Poset::from_relations(std::vector<std::string> labels, const std::vector<std::pair<std::string, std::string>>& less,
                            std::vector<std::string> enumeration) {
  Poset p;
  p.labels_ = std::move(labels);
  const std::size_t n = p.labels_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p.labels_[i] == p.labels_[j]) throw std::invalid_argument("poset: duplicate label " + p.labels_[i]);
  p.less_.assign(n, std::vector<bool>(n, false));
  for (const auto& [a, b] : less) p.less_[p.index(a)][p.index(b)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (p.less_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (p.less_[k][j]) p.less_[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (p.less_[i][i]) throw std::invalid_argument("poset: relations contain a cycle through " + p.labels_[i]);

  if (enumeration.empty()) {
    std::vector<bool> placed(n, false);
    for (std::size_t step = 0; step < n; ++step)
      for (std::size_t i = 0; i < n; ++i) {
        if (placed[i]) continue;
        bool minimal = true;
        for (std::size_t j = 0; j < n; ++j)
          if (!placed[j] && p.less_[j][i]) minimal = false;
        if (minimal) {
          placed[i] = true;
          p.enumeration_.push_back(i);
          break;
        }
      }
  } else {
    if (enumeration.size() != n) throw std::invalid_argument("poset: enumeration must list every element once");
    std::vector<bool> seen(n, false);
    for (const auto& l : enumeration) {
      const std::size_t i = p.index(l);
      if (seen[i]) throw std::invalid_argument("poset: enumeration repeats " + l);
      seen[i] = true;
      p.enumeration_.push_back(i);
    }
  }
  p.position_.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) p.position_[p.enumeration_[k]] = k;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p.less_[i][j] && p.position_[i] > p.position_[j])
        throw std::invalid_argument("poset: enumeration puts " + p.labels_[j] + " before " + p.labels_[i]);
  return p;
}

Poset Poset::chain(std::vector<std::string> labels) {
  std::vector<std::pair<std::string, std::string>> less;
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) less.emplace_back(labels[i], labels[i + 1]);
  return from_relations(std::move(labels), less);
}

std::size_t Poset::index(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  throw std::invalid_argument("poset: unknown label " + label);
}

std::vector<std::size_t> Poset::decreasing() const { return {enumeration_.rbegin(), enumeration_.rend()}; }

Poset Poset::reversed() const {
  Poset p = *this;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.less_[i][j] = less_[j][i];
  p.enumeration_ = decreasing();
  for (std::size_t k = 0; k < n; ++k) p.position_[p.enumeration_[k]] = k;
  return p;
}

std::vector<std::pair<std::size_t, std::size_t>> Poset::covers() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!less_[i][j]) continue;
      bool direct = true;
      for (std::size_t k = 0; k < n; ++k)
        if (less_[i][k] && less_[k][j]) direct = false;
      if (direct) out.emplace_back(i, j);
    }
  return out;
}

std::size_t FiltrationCertificate::multiplicity(std::size_t label) const {
  std::size_t m = 0;
  for (const auto& l : layers)
    if (l.label == label) m += l.multiplicity;
  return m;
}

namespace {

Refutation refute(std::string axiom, std::string message, std::optional<Morphism> witness = std::nullopt) {
  return {std::move(axiom), std::move(message), std::move(witness)};
}

bool contained(const Matrix& small, const Matrix& big, const GroundRing& r) {
  if (small.cols() == 0) return true;
  if (big.cols() == 0) return small.is_zero();
  CoordinateSolver cs(big, r);
  for (std::size_t j = 0; j < small.cols(); ++j)
    if (!cs.coordinates(small.col(j))) return false;
  return true;
}

// Peels off traces of the given modules, in order, from the bottom of M.
// Each trace must be an (A,R)-monomorphism; the layers must exhaust M.
std::vector<FiltrationLayer> trace_layers(const AModule& m, const std::vector<AModule>& modules,
                                          const std::vector<std::size_t>& order, const Poset& poset) {
  const GroundRing& r = m.ring();
  const std::size_t n = m.rank();
  AModule cur = m;
  Matrix section = Matrix::identity(n);
  Matrix prev(n, 0);
  std::vector<FiltrationLayer> layers;
  for (std::size_t label : order) {
    if (cur.rank() == 0) break;
    TraceMap tr = trace_map(modules[label], cur);
    const std::size_t h = tr.homs.size();
    if (h == 0) continue;
    if (!tr.injective)
      throw std::runtime_error("trace of the module for " + poset.label(label) + " is not injective");
    if (!tr.saturated)
      throw std::runtime_error("trace of the module for " + poset.label(label) + " is not an R-direct summand");
    QuotientModule q = quotient(cur, tr.image);
    FiltrationLayer layer;
    layer.label = label;
    layer.multiplicity = h;
    layer.witness = mul(r, section, tr.tau.matrix);
    layer.sub = hcat(prev, layer.witness);
    prev = layer.sub;
    section = mul(r, section, q.lattice.complement);
    cur = q.module;
    layers.push_back(std::move(layer));
  }
  if (cur.rank() != 0)
    throw std::runtime_error("standard traces leave a quotient of rank " + std::to_string(cur.rank()));
  return layers;
}

OrthogonalityCell make_cell(std::size_t l, std::size_t b, std::size_t i, std::size_t free_rank,
                            std::vector<Integer> torsion) {
  OrthogonalityCell c{l, b, i, free_rank, std::move(torsion), false};
  const bool diag = i == 0 && l == b;
  c.ok = c.torsion.empty() && c.free_rank == (diag ? 1u : 0u);
  return c;
}

void require_costandards(const QHStructure& qh, const char* what) {
  if (!qh.has_costandards()) throw std::invalid_argument(std::string(what) + ": costandards not computed");
}

}  // namespace

std::optional<std::string> replay_certificate(const FiltrationCertificate& cert, const std::vector<AModule>& layer_modules,
                                              const Poset& poset) {
  const AModule& m = cert.module;
  const GroundRing& r = m.ring();
  const std::size_t n = m.rank();
  Matrix prev(n, 0);
  std::size_t last_pos = 0;
  for (std::size_t j = 0; j < cert.layers.size(); ++j) {
    const FiltrationLayer& layer = cert.layers[j];
    const std::string where = "layer " + std::to_string(j) + ": ";
    if (layer.label >= layer_modules.size()) return where + "label out of range";
    const std::size_t pos = poset.position(layer.label);
    if (j > 0) {
      const bool ordered = cert.kind == FiltrationKind::Delta ? pos <= last_pos : pos >= last_pos;
      if (!ordered) return where + "labels out of order";
    }
    last_pos = pos;
    const AModule& x = layer_modules[layer.label];
    if (layer.sub.rows() != n || layer.witness.rows() != n) return where + "wrong ambient rank";
    if (layer.witness.cols() != layer.multiplicity * x.rank()) return where + "witness width differs from multiplicity";
    if (!is_saturated(layer.sub, r)) return where + "submodule is not saturated";
    try {
      submodule(m, layer.sub);
    } catch (const std::invalid_argument&) {
      return where + "submodule is not A-stable";
    }
    if (!contained(prev, layer.sub, r)) return where + "chain is not increasing";
    const Matrix both = hcat(prev, layer.witness);
    if (rank(both, r) != both.cols() || rank(layer.sub, r) != both.cols() || !same_span(both, layer.sub, r))
      return where + "witness and previous step do not form a basis of the step";
    AModule xm = tensor_with_free(x, layer.multiplicity);
    for (std::size_t i = 0; i < m.algebra()->rank(); ++i) {
      Matrix defect = sub(r, mul(r, m.action(i), layer.witness), mul(r, layer.witness, xm.action(i)));
      if (!contained(defect, prev, r)) return where + "witness is not A-linear modulo the previous step";
    }
    prev = layer.sub;
  }
  if (rank(prev, r) != n || !is_saturated(prev, r)) return std::string("layers do not exhaust the module");
  return std::nullopt;
}

std::size_t QHStructure::depth_of(std::size_t label) const {
  for (std::size_t k = 0; k < chain.size(); ++k)
    if (chain[k].label == label) return k;
  throw std::invalid_argument("depth_of: label not in the heredity chain");
}

std::optional<AModule> QHStructure::descend(const AModule& m, std::size_t depth) const {
  AModule cur = m;
  for (std::size_t k = 0; k < depth; ++k) {
    auto next = deflate(cur, chain[k].step, chain[k].local_ideal);
    if (!next) return std::nullopt;
    cur = *next;
  }
  return cur;
}

AModule QHStructure::ascend(const AModule& m, std::size_t depth) const {
  AModule cur = m;
  for (std::size_t k = depth; k-- > 0;) cur = inflate(cur, chain[k].above, chain[k].step);
  return cur;
}

VerifyResult verify_split_qh(const AlgebraPtr& a, const Poset& poset, const std::vector<AModule>& standards) {
  VerifyResult out;
  const GroundRing& r = a->ring();
  const std::size_t t = poset.size();
  if (standards.size() != t) throw std::invalid_argument("verify_split_qh: one standard module per poset element");
  for (std::size_t l = 0; l < t; ++l) {
    if (!same_algebra(standards[l].algebra(), a)) throw std::invalid_argument("verify_split_qh: standard over another algebra");
    try {
      check_module(standards[l]);
    } catch (const std::invalid_argument& e) {
      out.refutation = refute("i", "Delta(" + poset.label(l) + ") is not a module: " + e.what());
      return out;
    }
  }

  for (std::size_t l = 0; l < t; ++l) {
    auto end = hom_space(standards[l], standards[l]);
    if (end.size() != 1) {
      out.refutation = refute("iii", "End(Delta(" + poset.label(l) + ")) has rank " + std::to_string(end.size()));
      return out;
    }
    CoordinateSolver cs(vectorized(end, standards[l].rank(), standards[l].rank()), r);
    if (!cs.coordinates(Matrix::identity(standards[l].rank()).vectorize())) {
      out.refutation = refute("iii", "End(Delta(" + poset.label(l) + ")) does not contain the identity as a generator");
      return out;
    }
  }
  for (std::size_t l = 0; l < t; ++l)
    for (std::size_t m = 0; m < t; ++m) {
      if (l == m || poset.le(l, m)) continue;
      auto homs = hom_space(standards[l], standards[m]);
      if (!homs.empty()) {
        out.refutation = refute("ii", "Hom(Delta(" + poset.label(l) + "), Delta(" + poset.label(m) + ")) has rank " +
                                          std::to_string(homs.size()) + " but " + poset.label(l) +
                                          " is not below " + poset.label(m),
                                homs.front());
        return out;
      }
    }

  QHStructure qh;
  qh.algebra = a;
  qh.poset = poset;
  qh.standards = standards;
  AlgebraPtr cur = a;
  Matrix lift = Matrix::identity(a->rank());  // basis of A_k lifted to A
  Matrix below(a->rank(), 0);                  // J_{>label} in A
  for (std::size_t label : poset.decreasing()) {
    const std::string name = "Delta(" + poset.label(label) + ")";
    auto local = qh.descend(standards[label], qh.chain.size());
    if (!local) {
      out.refutation = refute("iv", name + " is not killed by the heredity ideal of the labels above it");
      return out;
    }
    Presentation pres = presentation(*local);
    if (!section_of(pres.d0)) {
      out.refutation = refute("iv", name + " is not projective modulo the heredity ideal of the labels above it");
      return out;
    }
    TraceMap tr = trace_map(*local, regular_module(cur));
    if (!tr.injective || !tr.saturated) {
      out.refutation = refute("iv", "trace of " + name + " in A/J is not an (A,R)-monomorphism");
      return out;
    }
    const Matrix& j = tr.image;
    for (std::size_t i = 0; i < cur->rank(); ++i) {
      const Matrix b = cur->basis_vector(i);
      if (!contained(mul(r, cur->left_action(b), j), j, r) || !contained(mul(r, cur->right_action(b), j), j, r)) {
        out.refutation = refute("iv", "trace ideal of " + name + " is not two-sided");
        return out;
      }
    }
    HeredityLayer layer;
    layer.label = label;
    layer.above = cur;
    layer.local_ideal = j;
    layer.step = quotient_algebra(cur, j);
    below = column_span_basis(hcat(below, mul(r, lift, j)), r);
    layer.ideal = below;
    layer.trace = std::move(tr);
    lift = mul(r, lift, layer.step.section);
    cur = layer.step.algebra;
    qh.chain.push_back(std::move(layer));
  }
  if (cur->rank() != 0) {
    out.refutation = refute("v", "the heredity chain stops at a quotient of rank " + std::to_string(cur->rank()) +
                                     ": the standards do not account for all projectives");
    return out;
  }

  std::vector<bool> covered(a->num_idempotents(), false);
  for (std::size_t l = 0; l < t; ++l) {
    ProjectiveCover pc;
    pc.pres = presentation(standards[l]);
    for (auto s : pc.pres.p0.slots) covered[s] = true;
    std::vector<std::size_t> above;
    for (std::size_t m : poset.decreasing())
      if (poset.lt(l, m)) above.push_back(m);
    try {
      FiltrationCertificate cert;
      cert.kind = FiltrationKind::Delta;
      cert.module = pc.pres.syzygy;
      cert.layers = trace_layers(pc.pres.syzygy, standards, above, poset);
      pc.kernel_certificate = std::move(cert);
    } catch (const std::exception& e) {
      qh.notes.push_back("no certificate for C(" + poset.label(l) + ") over the chosen cover: " + e.what());
    }
    qh.covers.push_back(std::move(pc));
  }
  for (std::size_t s = 0; s < covered.size(); ++s)
    if (!covered[s] && !a->idempotent(s).is_zero())
      qh.notes.push_back("idempotent " + std::to_string(s) + " does not occur in any chosen cover");
  out.qh = std::move(qh);
  return out;
}

std::vector<AModule> standard_candidates(const AlgebraPtr& a, const Poset& poset) {
  const std::size_t t = poset.size();
  if (a->num_idempotents() != t) throw std::invalid_argument("standard_candidates: need one idempotent per label");
  const GroundRing& r = a->ring();
  std::vector<AModule> out;
  for (std::size_t l = 0; l < t; ++l) {
    AModule p = projective_module(a, l);
    std::vector<Matrix> images;
    for (std::size_t m = 0; m < t; ++m)
      if (!poset.le(m, l)) images.push_back(trace_map(projective_module(a, m), p).image);
    Matrix span = column_span_basis(hcat(images, p.rank()), r);
    if (!is_saturated(span, r))
      throw std::invalid_argument("standard_candidates: trace in P(" + poset.label(l) + ") is not saturated");
    out.push_back(quotient(p, span).module);
  }
  return out;
}

void compute_costandards(QHStructure& qh) {
  const std::size_t t = qh.poset.size();
  const GroundRing& r = qh.ring();
  std::vector<AModule> nabla(t);
  std::vector<std::size_t> done;
  for (std::size_t k = 0; k < qh.chain.size(); ++k) {
    const HeredityLayer& layer = qh.chain[k];
    const std::size_t l = layer.label;
    const AlgebraPtr& ak = layer.above;
    const AModule local = *qh.descend(qh.standards[l], k);
    // Hom(Delta, A_k) as a right A_k-module: (f.b)(x) = f(x) b.
    const std::vector<Morphism>& homs = layer.trace.homs;
    CoordinateSolver cs(vectorized(homs, ak->rank(), local.rank()), r);
    std::vector<Matrix> action;
    for (std::size_t i = 0; i < ak->rank(); ++i) {
      const Matrix rb = ak->right_action(ak->basis_vector(i));
      Matrix act(homs.size(), homs.size());
      for (std::size_t j = 0; j < homs.size(); ++j) act.set_block(0, j, *cs.coordinates(mul(r, rb, homs[j].matrix).vectorize()));
      action.push_back(std::move(act));
    }
    AModule op_standard(ak->opposite(), std::move(action));
    nabla[l] = qh.ascend(dual_module(op_standard), k);
    check_module(nabla[l]);
    if (hom_rank(qh.standards[l], nabla[l]) != 1)
      throw std::runtime_error("costandard normalization failed: Hom(Delta, nabla) for " + qh.poset.label(l) +
                               " is not of rank 1");
    done.push_back(l);
    for (std::size_t x : done)
      for (std::size_t y : done)
        if (!ext(qh.standards[x], nabla[y]).is_zero())
          throw std::runtime_error("costandard check failed: Ext^1(Delta(" + qh.poset.label(x) + "), nabla(" +
                                   qh.poset.label(y) + ")) != 0");
  }
  qh.costandards = nabla;
  qh.op_standards.clear();
  for (const auto& n : nabla) qh.op_standards.push_back(dual_module(n));
}

bool OrthogonalityTable::passed() const {
  return std::all_of(cells.begin(), cells.end(), [](const OrthogonalityCell& c) { return c.ok; });
}

std::optional<OrthogonalityCell> OrthogonalityTable::first_failure() const {
  for (const auto& c : cells)
    if (!c.ok) return c;
  return std::nullopt;
}

OrthogonalityTable orthogonality_table(const std::vector<AModule>& deltas, const std::vector<AModule>& nablas,
                                       std::size_t max_degree) {
  OrthogonalityTable table;
  for (std::size_t l = 0; l < deltas.size(); ++l)
    for (std::size_t b = 0; b < nablas.size(); ++b)
      for (std::size_t i = 0; i <= max_degree; ++i) {
        if (i == 0) {
          table.cells.push_back(make_cell(l, b, 0, hom_rank(deltas[l], nablas[b]), {}));
        } else {
          ExtGroup e = ext(deltas[l], nablas[b], i);
          table.cells.push_back(make_cell(l, b, i, e.free_rank, e.torsion));
        }
      }
  return table;
}

OrthogonalityTable ext_orthogonality_table(const QHStructure& qh, std::size_t max_degree) {
  require_costandards(qh, "ext_orthogonality_table");
  return orthogonality_table(qh.standards, qh.costandards, max_degree);
}

bool has_delta_filtration(const AModule& m, const QHStructure& qh) {
  require_costandards(qh, "has_delta_filtration");
  for (const auto& n : qh.costandards)
    if (!ext(m, n).is_zero()) return false;
  return true;
}

bool has_nabla_filtration(const AModule& n, const QHStructure& qh) {
  for (const auto& d : qh.standards)
    if (!ext(d, n).is_zero()) return false;
  return true;
}

FiltrationCertificate extract_delta_filtration(const AModule& m, const QHStructure& qh) {
  FiltrationCertificate cert;
  cert.kind = FiltrationKind::Delta;
  cert.module = m;
  cert.layers = trace_layers(m, qh.standards, qh.poset.decreasing(), qh.poset);
  return cert;
}

FiltrationCertificate extract_nabla_filtration(const AModule& n, const QHStructure& qh) {
  require_costandards(qh, "extract_nabla_filtration");
  const GroundRing& r = n.ring();
  const std::size_t rk = n.rank();
  // Delta-filtration of D N over A^op, then annihilators in N.
  const auto dual_layers = trace_layers(dual_module(n), qh.op_standards, qh.poset.decreasing(), qh.poset);
  FiltrationCertificate cert;
  cert.kind = FiltrationKind::Nabla;
  cert.module = n;
  const std::size_t k = dual_layers.size();
  for (std::size_t i = 1; i <= k; ++i) {
    const FiltrationLayer& d = dual_layers[k - i];
    const Matrix below = k - i == 0 ? Matrix(rk, 0) : dual_layers[k - i - 1].sub;
    const Matrix step = below.cols() == 0 ? Matrix::identity(rk) : kernel_basis(below.transpose(), r);
    // d.witness^T maps the step onto nabla^m with kernel the next step down.
    const Matrix onto = mul(r, d.witness.transpose(), step);
    auto y = solve(onto, Matrix::identity(onto.rows()), r);
    if (!y) throw std::runtime_error("dual layer does not map onto the costandard copies");
    FiltrationLayer layer;
    layer.label = d.label;
    layer.multiplicity = d.multiplicity;
    layer.sub = step;
    layer.witness = mul(r, step, *y);
    cert.layers.push_back(std::move(layer));
  }
  return cert;
}

std::optional<std::string> replay_certificate(const FiltrationCertificate& cert, const QHStructure& qh) {
  if (cert.kind == FiltrationKind::Delta) return replay_certificate(cert, qh.standards, qh.poset);
  require_costandards(qh, "replay_certificate");
  return replay_certificate(cert, qh.costandards, qh.poset);
}

bool ext_projective_check(const AModule& m, const QHStructure& qh) {
  if (!has_delta_filtration(m, qh)) throw std::invalid_argument("ext_projective_check: module has no Delta-filtration");
  bool ext_zero = true;
  for (const auto& d : qh.standards)
    if (!ext(m, d).is_zero()) ext_zero = false;
  const bool projective = section_of(presentation(m).d0).has_value();
  if (ext_zero != projective)
    throw std::logic_error("ext_projective_check: Ext criterion and projectivity test disagree");
  return projective;
}

std::size_t delta_multiplicity(const AModule& m, std::size_t label, const QHStructure& qh) {
  require_costandards(qh, "delta_multiplicity");
  return hom_rank(m, qh.costandards.at(label));
}

std::size_t nabla_multiplicity(const AModule& n, std::size_t label, const QHStructure& qh) {
  return hom_rank(qh.standards.at(label), n);
}

HomFiltrationRanks hom_filtration_ranks(const AModule& m, const AModule& n, const QHStructure& qh) {
  if (!has_delta_filtration(m, qh)) throw std::invalid_argument("hom_filtration_ranks: first module has no Delta-filtration");
  if (!has_nabla_filtration(n, qh)) throw std::invalid_argument("hom_filtration_ranks: second module has no nabla-filtration");
  HomFiltrationRanks out;
  for (std::size_t l = 0; l < qh.poset.size(); ++l) {
    out.delta_mult.push_back(delta_multiplicity(m, l, qh));
    out.nabla_mult.push_back(nabla_multiplicity(n, l, qh));
    out.predicted += out.delta_mult.back() * out.nabla_mult.back();
  }
  out.hom_rank = hom_rank(m, n);
  return out;
}

bool tor_flatness_check(const AModule& n, const AModule& m) {
  TorResult t = tor1_and_tensor(dual_module(n), m);
  return t.tor1_vanishes() && t.tensor_free();
}

bool in_additive_closure(const AModule& x, const AModule& l) {
  if (x.rank() == 0) return true;
  TraceMap tr = trace_map(l, x);
  if (tr.homs.empty()) return false;
  return section_of(tr.tau).has_value();
}

}  // namespace qhkit
