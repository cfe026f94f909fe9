#include "qhkit/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "qhkit/corpus.hpp"

namespace qhkit {

namespace {

using json = nlohmann::ordered_json;

std::string at(const std::string& parent, const std::string& key) { return parent.empty() ? key : parent + "." + key; }
std::string at(const std::string& parent, std::size_t k) { return parent + "[" + std::to_string(k) + "]"; }

const json& member(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw InputError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(at(where, key), "missing");
  return *it;
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where, "expected an array");
  return j;
}

std::string string_value(const json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where, "expected a string");
  return j.get<std::string>();
}

Scalar scalar_value(const json& j, const GroundRing& ring, const std::string& where) {
  Scalar x;
  if (j.is_number_integer()) {
    x = Scalar(j.dump());
  } else if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.empty() || s.find_first_not_of("+-0123456789/") != std::string::npos)
      throw InputError(where, "\"" + s + "\" is not an exact scalar");
    try {
      x = Scalar(s[0] == '+' ? s.substr(1) : s);
      if (x.get_den() == 0) throw std::invalid_argument("zero denominator");
      x.canonicalize();
    } catch (const std::invalid_argument&) {
      throw InputError(where, "\"" + s + "\" is not an exact scalar");
    }
  } else {
    throw InputError(where, "expected an integer or a string \"a/b\"");
  }
  if (!ring.contains(x)) throw InputError(where, scalar_to_string(x) + " is not an element of " + ring.name());
  return ring.reduce(x);
}

Matrix vector_value(const json& j, std::size_t n, const GroundRing& ring, const std::string& where) {
  array(j, where);
  if (j.size() != n) throw InputError(where, "expected " + std::to_string(n) + " entries, found " + std::to_string(j.size()));
  Matrix v(n, 1);
  for (std::size_t i = 0; i < n; ++i) v(i, 0) = scalar_value(j[i], ring, at(where, i));
  return v;
}

Matrix matrix_value(const json& j, std::size_t rows, std::size_t cols, const GroundRing& ring, const std::string& where) {
  array(j, where);
  if (j.size() != rows) throw InputError(where, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row = at(where, i);
    array(j[i], row);
    if (j[i].size() != cols)
      throw InputError(row, "expected " + std::to_string(cols) + " entries, found " + std::to_string(j[i].size()));
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = scalar_value(j[i][c], ring, at(row, c));
  }
  return m;
}

std::size_t index_value(const json& j, const std::vector<std::string>& labels, const std::string& where) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    const long long k = j.get<long long>();
    if (k < 0 || static_cast<std::size_t>(k) >= labels.size()) throw InputError(where, "index out of range");
    return static_cast<std::size_t>(k);
  }
  if (j.is_string()) {
    auto it = std::find(labels.begin(), labels.end(), j.get<std::string>());
    if (it == labels.end()) throw InputError(where, "unknown basis label \"" + j.get<std::string>() + "\"");
    return static_cast<std::size_t>(it - labels.begin());
  }
  throw InputError(where, "expected a basis index or label");
}

std::size_t rank_value(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(where, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

AModule module_value(const json& j, const AlgebraPtr& a, const std::string& where) {
  const std::size_t n = rank_value(member(j, "rank", where), at(where, "rank"));
  const json& act = array(member(j, "action", where), at(where, "action"));
  if (act.size() != a->rank())
    throw InputError(at(where, "action"), "expected one matrix per basis element (" + std::to_string(a->rank()) + ")");
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i < a->rank(); ++i) mats.push_back(matrix_value(act[i], n, n, a->ring(), at(at(where, "action"), i)));
  AModule m(a, std::move(mats));
  try {
    check_module(m);
  } catch (const std::invalid_argument& e) {
    throw InputError(where, e.what());
  }
  return m;
}

QuiverSpec quiver_value(const json& q, const GroundRing& ring) {
  const std::string w = "quiver";
  QuiverSpec spec;
  for (const auto& [k, v] : array(member(q, "vertices", w), at(w, "vertices")).items())
    spec.vertices.push_back(string_value(v, at(at(w, "vertices"), std::stoul(k))));
  if (q.contains("arrows"))
    for (std::size_t k = 0; k < array(q["arrows"], at(w, "arrows")).size(); ++k) {
      const std::string aw = at(at(w, "arrows"), k);
      const json& a = q["arrows"][k];
      spec.arrows.push_back({string_value(member(a, "name", aw), at(aw, "name")),
                             string_value(member(a, "source", aw), at(aw, "source")),
                             string_value(member(a, "target", aw), at(aw, "target"))});
    }
  if (q.contains("relations"))
    for (std::size_t k = 0; k < array(q["relations"], at(w, "relations")).size(); ++k) {
      const std::string rw = at(at(w, "relations"), k);
      QuiverSpec::Relation rel;
      for (std::size_t t = 0; t < array(q["relations"][k], rw).size(); ++t) {
        const std::string tw = at(rw, t);
        const json& term = array(q["relations"][k][t], tw);
        if (term.size() != 2) throw InputError(tw, "expected [coefficient, word]");
        rel.terms.emplace_back(scalar_value(term[0], ring, at(tw, 0)), string_value(term[1], at(tw, 1)));
      }
      spec.relations.push_back(std::move(rel));
    }
  if (q.contains("max_length")) spec.max_length = rank_value(q["max_length"], at(w, "max_length"));
  return spec;
}

AlgebraPtr algebra_value(const json& j, const GroundRing& ring) {
  const std::string w = "algebra";
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < array(member(j, "basis", w), at(w, "basis")).size(); ++k)
    labels.push_back(string_value(j["basis"][k], at(at(w, "basis"), k)));
  const std::size_t d = labels.size();
  if (d == 0) throw InputError(at(w, "basis"), "empty basis");
  std::vector<Matrix> left(d, Matrix(d, d));
  const json& mult = array(member(j, "mult", w), at(w, "mult"));
  for (std::size_t k = 0; k < mult.size(); ++k) {
    const std::string mw = at(at(w, "mult"), k);
    const json& q = array(mult[k], mw);
    if (q.size() != 4) throw InputError(mw, "expected [i, j, k, coefficient]");
    const std::size_t bi = index_value(q[0], labels, at(mw, 0));
    const std::size_t bj = index_value(q[1], labels, at(mw, 1));
    const std::size_t bk = index_value(q[2], labels, at(mw, 2));
    left[bi](bk, bj) += scalar_value(q[3], ring, at(mw, 3));
  }
  for (auto& l : left) l = reduce(ring, std::move(l));
  Matrix unit = vector_value(member(j, "unit", w), d, ring, at(w, "unit"));
  std::vector<Matrix> idempotents;
  if (j.contains("idempotents"))
    for (std::size_t k = 0; k < array(j["idempotents"], at(w, "idempotents")).size(); ++k)
      idempotents.push_back(vector_value(j["idempotents"][k], d, ring, at(at(w, "idempotents"), k)));
  try {
    return Algebra::create(ring, std::move(left), std::move(unit), std::move(idempotents), std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw InputError(w, e.what());
  }
}

Poset poset_value(const json& j) {
  const std::string w = "poset";
  std::vector<std::string> elements;
  for (std::size_t k = 0; k < array(member(j, "elements", w), at(w, "elements")).size(); ++k)
    elements.push_back(string_value(j["elements"][k], at(at(w, "elements"), k)));
  std::vector<std::pair<std::string, std::string>> less;
  if (j.contains("less"))
    for (std::size_t k = 0; k < array(j["less"], at(w, "less")).size(); ++k) {
      const std::string lw = at(at(w, "less"), k);
      const json& p = array(j["less"][k], lw);
      if (p.size() != 2) throw InputError(lw, "expected [smaller, larger]");
      less.emplace_back(string_value(p[0], at(lw, 0)), string_value(p[1], at(lw, 1)));
    }
  std::vector<std::string> enumeration;
  if (j.contains("enumeration"))
    for (std::size_t k = 0; k < array(j["enumeration"], at(w, "enumeration")).size(); ++k)
      enumeration.push_back(string_value(j["enumeration"][k], at(at(w, "enumeration"), k)));
  try {
    return Poset::from_relations(std::move(elements), less, std::move(enumeration));
  } catch (const std::invalid_argument& e) {
    throw InputError(w, e.what());
  }
}

std::vector<AModule> standards_value(const json& j, const AlgebraPtr& a, const Poset& poset) {
  const std::string w = "standards";
  const std::size_t t = poset.size();
  if (j.is_string()) {
    const std::string mode = j.get<std::string>();
    if (a->num_idempotents() != t)
      throw InputError(w, "\"" + mode + "\" needs one designated idempotent per poset element");
    std::vector<AModule> out;
    try {
      if (mode == "projectives") {
        for (std::size_t l = 0; l < t; ++l) out.push_back(projective_module(a, l));
      } else if (mode == "simples") {
        for (std::size_t l = 0; l < t; ++l) out.push_back(vertex_simple(a, l));
      } else if (mode == "auto") {
        out = standard_candidates(a, poset);
      } else {
        throw InputError(w, "unknown mode \"" + mode + "\" (projectives, simples, auto)");
      }
    } catch (const std::invalid_argument& e) {
      throw InputError(w, e.what());
    }
    return out;
  }
  array(j, w);
  std::vector<std::optional<AModule>> by_label(t);
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string sw = at(w, k);
    const std::string label = string_value(member(j[k], "label", sw), at(sw, "label"));
    std::size_t l;
    try {
      l = poset.index(label);
    } catch (const std::exception&) {
      throw InputError(at(sw, "label"), "\"" + label + "\" is not a poset element");
    }
    if (by_label[l]) throw InputError(at(sw, "label"), "duplicate standard for \"" + label + "\"");
    by_label[l] = module_value(j[k], a, sw);
  }
  std::vector<AModule> out;
  for (std::size_t l = 0; l < t; ++l) {
    if (!by_label[l]) throw InputError(w, "no standard for \"" + poset.label(l) + "\"");
    out.push_back(*by_label[l]);
  }
  return out;
}

json scalar_json(const Scalar& x) {
  if (x.get_den() == 1 && x.get_num().fits_slong_p()) return json(x.get_num().get_si());
  return json(scalar_to_string(x));
}

json vector_json(const Matrix& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.rows(); ++i) out.push_back(scalar_json(v(i, 0)));
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(i, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json module_json(const AModule& m) {
  json out = json::object();
  out["rank"] = m.rank();
  json act = json::array();
  for (const auto& a : m.actions()) act.push_back(matrix_json(a));
  out["action"] = std::move(act);
  return out;
}

bool is_flat(const json& j) {
  if (!j.is_array()) return !j.is_object();
  return std::all_of(j.begin(), j.end(), [](const json& e) {
    return !e.is_object() && (!e.is_array() || std::all_of(e.begin(), e.end(), [](const json& x) {
                                return !x.is_array() && !x.is_object();
                              }));
  });
}

// Objects and long arrays one item per line; scalars, vectors and matrices inline.
void write_json(std::ostream& os, const json& j, int indent) {
  const std::string pad(indent, ' '), inner(indent + 2, ' ');
  if (is_flat(j)) {
    os << j.dump();
    return;
  }
  if (j.is_object()) {
    os << "{\n";
    std::size_t k = 0;
    for (const auto& [key, v] : j.items()) {
      os << inner << json(key).dump() << ": ";
      write_json(os, v, indent + 2);
      os << (++k < j.size() ? ",\n" : "\n");
    }
    os << pad << "}";
    return;
  }
  os << "[\n";
  for (std::size_t k = 0; k < j.size(); ++k) {
    os << inner;
    write_json(os, j[k], indent + 2);
    os << (k + 1 < j.size() ? ",\n" : "\n");
  }
  os << pad << "]";
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    const auto p = msg.find("parse error");
    throw InputError("", "syntax error: " + (p == std::string::npos ? msg : msg.substr(p)));
  }
}

GroundRing ring_value(const json& doc) {
  const std::string r = string_value(member(doc, "ring", ""), "ring");
  try {
    return GroundRing::parse(r);
  } catch (const std::exception& e) {
    throw InputError("ring", e.what());
  }
}

SpecDocument document_value(const json& doc) {
  if (!doc.is_object()) throw InputError("", "expected a JSON object at top level");
  const GroundRing ring = ring_value(doc);
  SpecDocument out;
  if (doc.contains("algebra") == doc.contains("quiver")) throw InputError("", "give exactly one of algebra and quiver");
  if (doc.contains("algebra")) {
    out.algebra = algebra_value(doc["algebra"], ring);
  } else {
    out.quiver = quiver_value(doc["quiver"], ring);
    try {
      out.algebra = compile_quiver(*out.quiver, ring).algebra;
    } catch (const std::invalid_argument& e) {
      throw InputError("quiver", e.what());
    }
  }
  if (doc.contains("poset")) {
    out.poset = poset_value(doc["poset"]);
    if (doc.contains("standards")) out.standards = standards_value(doc["standards"], out.algebra, out.poset);
  } else if (doc.contains("standards")) {
    throw InputError("standards", "given without a poset");
  }
  if (doc.contains("modules")) {
    const json& mods = doc["modules"];
    if (!mods.is_object()) throw InputError("modules", "expected an object");
    for (const auto& [name, m] : mods.items()) out.modules.emplace_back(name, module_value(m, out.algebra, at("modules", name)));
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

const AModule& SpecDocument::module(const std::string& name) const {
  for (const auto& [n, m] : modules)
    if (n == name) return m;
  throw InputError("modules", "no module named \"" + name + "\"");
}

std::string scalar_to_string(const Scalar& x) { return x.get_str(); }

SpecDocument parse_spec(const std::string& text) { return document_value(parse_json(text)); }

SpecDocument load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string emit_spec(const SpecDocument& doc) {
  const AlgebraPtr& a = doc.algebra;
  const std::size_t d = a->rank();
  json out = json::object();
  out["ring"] = a->ring().name();
  json alg = json::object();
  json basis = json::array();
  for (std::size_t i = 0; i < d; ++i)
    basis.push_back(i < a->labels().size() && !a->labels()[i].empty() ? a->labels()[i] : "b" + std::to_string(i));
  alg["basis"] = std::move(basis);
  json mult = json::array();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        if (sgn(a->constant(i, j, k)) != 0) mult.push_back(json::array({i, j, k, scalar_json(a->constant(i, j, k))}));
  alg["mult"] = std::move(mult);
  alg["unit"] = vector_json(a->unit());
  json idem = json::array();
  for (const auto& e : a->idempotents()) idem.push_back(vector_json(e));
  alg["idempotents"] = std::move(idem);
  out["algebra"] = std::move(alg);
  if (doc.poset.size() > 0) {
    json poset = json::object();
    poset["elements"] = doc.poset.labels();
    json less = json::array();
    for (auto [x, y] : doc.poset.covers()) less.push_back(json::array({doc.poset.label(x), doc.poset.label(y)}));
    poset["less"] = std::move(less);
    json en = json::array();
    for (std::size_t e : doc.poset.enumeration()) en.push_back(doc.poset.label(e));
    poset["enumeration"] = std::move(en);
    out["poset"] = std::move(poset);
  }
  if (!doc.standards.empty()) {
    json st = json::array();
    for (std::size_t l = 0; l < doc.standards.size(); ++l) {
      json m = json::object();
      m["label"] = doc.poset.label(l);
      const json body = module_json(doc.standards[l]);
      for (const auto& [k, v] : body.items()) m[k] = v;
      st.push_back(std::move(m));
    }
    out["standards"] = std::move(st);
  }
  if (!doc.modules.empty()) {
    json mods = json::object();
    for (const auto& [name, m] : doc.modules) mods[name] = module_json(m);
    out["modules"] = std::move(mods);
  }
  std::ostringstream os;
  write_json(os, out, 0);
  os << "\n";
  return os.str();
}

std::string compile_quiver_spec(const std::string& text) {
  json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("quiver")) throw InputError("quiver", "missing");
  return emit_spec(document_value(doc));
}

Format parse_format(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "csv") return Format::Csv;
  if (s == "md") return Format::Markdown;
  throw InputError("--format", "expected text, csv or md");
}

std::string Table::render(Format f) const {
  std::ostringstream os;
  switch (f) {
    case Format::Csv: {
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
        os << "\n";
      };
      line(header);
      for (const auto& r : rows) line(r);
      break;
    }
    case Format::Markdown: {
      if (!title.empty()) os << "### " << title << "\n\n";
      auto line = [&](const std::vector<std::string>& cells) {
        os << "|";
        for (const auto& c : cells) os << " " << c << " |";
        os << "\n";
      };
      line(header);
      os << "|";
      for (std::size_t i = 0; i < header.size(); ++i) os << " --- |";
      os << "\n";
      for (const auto& r : rows) line(r);
      break;
    }
    case Format::Text: {
      if (!title.empty()) os << title << "\n";
      std::vector<std::size_t> width(header.size(), 0);
      for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
      for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
      auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          s += cells[i];
          if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 2, ' ');
        }
        os << s << "\n";
      };
      line(header);
      for (const auto& r : rows) line(r);
      break;
    }
  }
  return os.str();
}

std::string render_matrix(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", " : "") << "[";
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << scalar_to_string(m(i, c));
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace qhkit
