#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qhkit/algebra.hpp"

namespace qhkit {

struct QuiverSpec {
  struct Arrow {
    std::string name;
    std::string source;
    std::string target;
  };
  // Linear combination of paths; a word "b*a" means a first, then b.
  struct Relation {
    std::vector<std::pair<Scalar, std::string>> terms;
  };

  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;
  std::vector<Relation> relations;
  std::size_t max_length = 8;
};

// Path algebra modulo the ideal generated by the relations. Basis: the
// surviving paths (trivial paths first, one per vertex, in vertex order);
// designated idempotents: the trivial paths.
struct CompiledQuiver {
  AlgebraPtr algebra;
  std::vector<std::string> basis_words;
};

// Throws std::invalid_argument on unknown or non-composable words and with
// "did not stabilize by L" when some path of every length <= L survives.
CompiledQuiver compile_quiver(const QuiverSpec& spec, const GroundRing& ring);

}  // namespace qhkit
