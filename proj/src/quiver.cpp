#include "qhkit/quiver.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace qhkit {

namespace {

struct Path {
  std::size_t start = 0;
  std::vector<std::size_t> arrows;  // in traversal order

  bool operator<(const Path& o) const { return std::tie(start, arrows) < std::tie(o.start, o.arrows); }
};

class QuiverCompiler {
 public:
  QuiverCompiler(const QuiverSpec& spec, const GroundRing& ring) : spec_(spec), ring_(ring) {
    for (std::size_t v = 0; v < spec.vertices.size(); ++v) {
      if (vertex_.count(spec.vertices[v])) throw std::invalid_argument("duplicate vertex '" + spec.vertices[v] + "'");
      vertex_[spec.vertices[v]] = v;
    }
    for (std::size_t a = 0; a < spec.arrows.size(); ++a) {
      const auto& ar = spec.arrows[a];
      if (arrow_.count(ar.name) || vertex_.count(ar.name)) throw std::invalid_argument("duplicate name '" + ar.name + "'");
      source_.push_back(lookup_vertex(ar.source, "arrow " + ar.name));
      target_.push_back(lookup_vertex(ar.target, "arrow " + ar.name));
      arrow_[ar.name] = a;
    }
  }

  CompiledQuiver run() {
    const std::size_t bound = spec_.max_length + 1;
    enumerate_paths(bound);
    const Matrix ideal = ideal_span(bound);

    // Longest paths first, so pivots land on the paths being rewritten.
    std::vector<std::size_t> order(paths_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return length(x) > length(y); });
    const GroundRing field = ring_.is_integers() ? GroundRing::rationals() : ring_;
    const EchelonForm e = rref(ideal.select_cols(order), field);
    std::vector<long> pivot_row(paths_.size(), -1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) pivot_row[order[e.pivots[r]]] = static_cast<long>(r);

    std::size_t dead = 0;
    for (std::size_t len = 1; len <= spec_.max_length && dead == 0; ++len) {
      bool all = true;
      for (std::size_t p = 0; p < paths_.size(); ++p)
        if (length(p) == len && pivot_row[p] < 0) all = false;
      if (all) dead = len;
    }
    if (dead == 0) throw std::invalid_argument("path algebra did not stabilize by L = " + std::to_string(spec_.max_length));

    std::vector<std::size_t> basis;
    for (std::size_t p = 0; p < paths_.size(); ++p)
      if (pivot_row[p] < 0 && length(p) < dead) basis.push_back(p);
    std::stable_sort(basis.begin(), basis.end(), [&](std::size_t x, std::size_t y) { return length(x) < length(y); });
    std::vector<long> basis_index(paths_.size(), -1);
    for (std::size_t i = 0; i < basis.size(); ++i) basis_index[basis[i]] = static_cast<long>(i);
    const std::size_t d = basis.size();

    // Normal form of path p as a coefficient vector over the basis.
    auto normal_form = [&](const Path& path) {
      Matrix v(d, 1);
      if (path.arrows.size() >= dead) return v;
      const std::size_t p = index_.at(path);
      if (basis_index[p] >= 0) {
        v(static_cast<std::size_t>(basis_index[p]), 0) = 1;
        return v;
      }
      const std::size_t r = static_cast<std::size_t>(pivot_row[p]);
      for (std::size_t c = 0; c < order.size(); ++c) {
        const Scalar& x = e.reduced(r, c);
        if (sgn(x) == 0 || order[c] == p) continue;
        const long bi = basis_index[order[c]];
        if (bi < 0) continue;
        if (!ring_.contains(x))
          throw std::invalid_argument("relations do not give an R-free quotient (coefficient " + x.get_str() + ")");
        v(static_cast<std::size_t>(bi), 0) = ring_.reduce(-x);
      }
      return v;
    };

    std::vector<Matrix> lefts(d, Matrix(d, d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const Path& p = paths_[basis[i]];
        const Path& q = paths_[basis[j]];
        if (p.start != end(q)) continue;
        Path pq{q.start, q.arrows};
        pq.arrows.insert(pq.arrows.end(), p.arrows.begin(), p.arrows.end());
        lefts[i].set_block(0, j, normal_form(pq));
      }
    Matrix unit(d, 1);
    std::vector<Matrix> idem;
    for (std::size_t v = 0; v < spec_.vertices.size(); ++v) {
      Matrix e_v(d, 1);
      e_v(static_cast<std::size_t>(basis_index[index_.at(Path{v, {}})]), 0) = 1;
      unit += e_v;
      idem.push_back(e_v);
    }
    CompiledQuiver out;
    for (auto p : basis) out.basis_words.push_back(word(paths_[p]));
    out.algebra = Algebra::create(ring_, std::move(lefts), unit, std::move(idem), out.basis_words);
    return out;
  }

 private:
  std::size_t lookup_vertex(const std::string& name, const std::string& where) const {
    auto it = vertex_.find(name);
    if (it == vertex_.end()) throw std::invalid_argument(where + ": unknown vertex '" + name + "'");
    return it->second;
  }

  std::size_t end(const Path& p) const { return p.arrows.empty() ? p.start : target_[p.arrows.back()]; }
  std::size_t length(std::size_t p) const { return paths_[p].arrows.size(); }

  std::string word(const Path& p) const {
    if (p.arrows.empty()) return "e" + spec_.vertices[p.start];
    std::string w;
    for (std::size_t k = p.arrows.size(); k-- > 0;) {
      w += spec_.arrows[p.arrows[k]].name;
      if (k > 0) w += "*";
    }
    return w;
  }

  void enumerate_paths(std::size_t bound) {
    std::vector<Path> frontier;
    for (std::size_t v = 0; v < spec_.vertices.size(); ++v) frontier.push_back({v, {}});
    for (std::size_t len = 0; len <= bound && !frontier.empty(); ++len) {
      std::vector<Path> next;
      for (const auto& p : frontier) {
        index_[p] = paths_.size();
        paths_.push_back(p);
        for (std::size_t a = 0; a < spec_.arrows.size(); ++a)
          if (source_[a] == end(p)) {
            Path q = p;
            q.arrows.push_back(a);
            next.push_back(std::move(q));
          }
      }
      frontier = std::move(next);
    }
  }

  Path parse_word(const std::string& w) const {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (true) {
      std::size_t star = w.find('*', pos);
      std::string tok = w.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
      tok.erase(0, tok.find_first_not_of(" \t"));
      tok.erase(tok.find_last_not_of(" \t") + 1);
      if (tok.empty()) throw std::invalid_argument("empty factor in relation word '" + w + "'");
      tokens.push_back(tok);
      if (star == std::string::npos) break;
      pos = star + 1;
    }
    Path p;
    bool started = false;
    for (std::size_t k = tokens.size(); k-- > 0;) {
      const std::string& tok = tokens[k];
      if (auto it = arrow_.find(tok); it != arrow_.end()) {
        const std::size_t a = it->second;
        if (!started) {
          p.start = source_[a];
          started = true;
        } else if (end(p) != source_[a]) {
          throw std::invalid_argument("relation word '" + w + "' is not a composable path");
        }
        p.arrows.push_back(a);
        continue;
      }
      std::string v = tok.size() > 1 && tok[0] == 'e' && vertex_.count(tok.substr(1)) ? tok.substr(1) : tok;
      auto vt = vertex_.find(v);
      if (vt == vertex_.end()) throw std::invalid_argument("relation word '" + w + "': unknown factor '" + tok + "'");
      if (!started) {
        p.start = vt->second;
        started = true;
      } else if (end(p) != vt->second) {
        throw std::invalid_argument("relation word '" + w + "' is not a composable path");
      }
    }
    return p;
  }

  Matrix ideal_span(std::size_t bound) {
    std::vector<Matrix> rows;
    for (std::size_t r = 0; r < spec_.relations.size(); ++r) {
      std::vector<std::pair<Scalar, Path>> terms;
      for (const auto& [c, w] : spec_.relations[r].terms) {
        if (!ring_.contains(c)) throw std::invalid_argument("relation coefficient " + c.get_str() + " is outside " + ring_.name());
        terms.emplace_back(ring_.reduce(c), parse_word(w));
      }
      if (terms.empty()) continue;
      const std::size_t s = terms.front().second.start, t = end(terms.front().second);
      std::size_t shortest = terms.front().second.arrows.size();
      for (const auto& [c, p] : terms) {
        if (p.start != s || end(p) != t)
          throw std::invalid_argument("relation " + std::to_string(r) + " mixes paths with different endpoints");
        shortest = std::min(shortest, p.arrows.size());
      }
      for (std::size_t qi = 0; qi < paths_.size(); ++qi) {
        const Path& q = paths_[qi];
        if (end(q) != s) continue;
        for (std::size_t pi = 0; pi < paths_.size(); ++pi) {
          const Path& p = paths_[pi];
          if (p.start != t || q.arrows.size() + p.arrows.size() + shortest > bound) continue;
          Matrix row(1, paths_.size());
          bool any = false;
          for (const auto& [c, mid] : terms) {
            Path full{q.start, q.arrows};
            full.arrows.insert(full.arrows.end(), mid.arrows.begin(), mid.arrows.end());
            full.arrows.insert(full.arrows.end(), p.arrows.begin(), p.arrows.end());
            if (full.arrows.size() > bound) continue;
            row(0, index_.at(full)) += c;
            any = true;
          }
          if (any) rows.push_back(reduce(ring_, std::move(row)));
        }
      }
    }
    return rows.empty() ? Matrix(0, paths_.size()) : vcat(rows, paths_.size());
  }

  const QuiverSpec& spec_;
  GroundRing ring_;
  std::map<std::string, std::size_t> vertex_, arrow_;
  std::vector<std::size_t> source_, target_;
  std::vector<Path> paths_;
  std::map<Path, std::size_t> index_;
};

}  // namespace

CompiledQuiver compile_quiver(const QuiverSpec& spec, const GroundRing& ring) {
  if (spec.vertices.empty()) throw std::invalid_argument("quiver has no vertices");
  return QuiverCompiler(spec, ring).run();
}

}  // namespace qhkit
