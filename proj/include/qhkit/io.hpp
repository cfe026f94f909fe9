#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qhkit/qh.hpp"
#include "qhkit/quiver.hpp"

namespace qhkit {

// Malformed or invalid input; what() names the field and, for syntax
// errors, the line and column.
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& reason)
      : std::runtime_error(field.empty() ? reason : field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct SpecDocument {
  AlgebraPtr algebra;
  Poset poset;
  std::vector<AModule> standards;
  std::vector<std::pair<std::string, AModule>> modules;
  std::optional<QuiverSpec> quiver;  // when the algebra came from a quiver block

  const AModule& module(const std::string& name) const;
};

// JSON profile:
//   ring         "Z", "Q" or "F<p>"
//   algebra      {basis: [labels], mult: [[i, j, k, c], ...], unit: [..], idempotents: [[..], ..]}
//                with b_i * b_j having coefficient c on b_k; absent entries are zero
//   quiver       {vertices, arrows: [{name, source, target}], relations: [[[c, "b*a"], ..], ..],
//                max_length}, used instead of algebra
//   poset        {elements: [..], less: [[a, b], ..], enumeration: [..]}; element k goes
//                with idempotent k
//   standards    "projectives" | "simples" | "auto" | [{label, rank, action: [matrix per basis element]}]
//   modules      {name: {rank, action}}
// Scalars are integers or strings "a/b"; matrices are row-major arrays.
SpecDocument parse_spec(const std::string& text);
SpecDocument load_spec(const std::string& path);

// Algebra, poset, standards and modules; the quiver block is not repeated.
std::string emit_spec(const SpecDocument& doc);

// Quiver block only (ring and quiver keys) to an algebra block.
std::string compile_quiver_spec(const std::string& text);

std::string scalar_to_string(const Scalar& x);

enum class Format { Text, Csv, Markdown };
Format parse_format(const std::string& s);

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render(Format f) const;
};

std::string render_matrix(const Matrix& m);

}  // namespace qhkit
