#include "doctest.h"

#include <fstream>
#include <sstream>

#include "qhkit/corpus.hpp"
#include "qhkit/io.hpp"
#include "qhkit/ringel.hpp"

using namespace qhkit;

namespace {

std::string golden(const std::string& name) { return std::string(QHKIT_GOLDEN_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_same(const SpecDocument& a, const SpecDocument& b) {
  CHECK(a.algebra->same_structure(*b.algebra));
  CHECK(a.algebra->labels() == b.algebra->labels());
  REQUIRE(a.poset.size() == b.poset.size());
  CHECK(a.poset.labels() == b.poset.labels());
  CHECK(a.poset.enumeration() == b.poset.enumeration());
  for (std::size_t i = 0; i < a.poset.size(); ++i)
    for (std::size_t j = 0; j < a.poset.size(); ++j) CHECK(a.poset.lt(i, j) == b.poset.lt(i, j));
  REQUIRE(a.standards.size() == b.standards.size());
  for (std::size_t l = 0; l < a.standards.size(); ++l) CHECK(a.standards[l].actions() == b.standards[l].actions());
  REQUIRE(a.modules.size() == b.modules.size());
  for (std::size_t k = 0; k < a.modules.size(); ++k) {
    CHECK(a.modules[k].first == b.modules[k].first);
    CHECK(a.modules[k].second.actions() == b.modules[k].second.actions());
  }
}

const char* kE1Explicit = R"({
  "ring": "Q",
  "algebra": {
    "basis": ["e1", "e2", "a"],
    "mult": [[0, 0, 0, 1], [1, 1, 1, 1], [2, 0, 2, 1], [1, 2, 2, 1]],
    "unit": [1, 1, 0],
    "idempotents": [[1, 0, 0], [0, 1, 0]]
  },
  "poset": {"elements": ["1", "2"], "less": [["2", "1"]]},
  "standards": "projectives"
})";

}  // namespace

TEST_CASE("golden E1 parses and is accepted") {
  SpecDocument doc = load_spec(golden("E1.spec"));
  CHECK(doc.algebra->rank() == 3);
  CHECK(doc.algebra->ring().is_integers());
  REQUIRE(doc.quiver.has_value());
  CHECK(verify_split_qh(doc.algebra, doc.poset, doc.standards).accepted());
  CHECK(doc.module("doubled").rank() == 2);
  CHECK_THROWS_AS(doc.module("missing"), InputError);
  // Same structure constants as the hand-built E1.
  CHECK(doc.algebra->same_structure(*e1_algebra(GroundRing::integers())));
}

TEST_CASE("explicit algebra blocks and exact fractions") {
  SpecDocument doc = parse_spec(kE1Explicit);
  CHECK(doc.algebra->same_structure(*e1_algebra(GroundRing::rationals())));
  SpecDocument r = load_spec(golden("E1_rational.spec"));
  CHECK(r.standards[0].action(2)(1, 0) == Scalar(1, 3));
  CHECK(verify_split_qh(r.algebra, r.poset, r.standards).accepted());
}

TEST_CASE("validation errors name the field") {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    try {
      parse_spec(text);
      FAIL("accepted: " << text);
    } catch (const InputError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  // e1 + a is idempotent but (e1 + a) e1 = e1 + a.
  std::string bad = kE1Explicit;
  bad.replace(bad.find("[[1, 0, 0], [0, 1, 0]]"), 22, "[[1, 0, 0], [1, 0, 1]]");
  fails_with(bad, "not orthogonal");
  fails_with(R"({"ring": "Z", )", "line");
  fails_with(R"({"ring": "Z7"})", "ring");
  fails_with(R"({"ring": "Z", "algebra": {"basis": ["x"], "mult": [[0, 0, 0, "1/2"]], "unit": [1]}})",
             "algebra.mult[0][3]");
  fails_with(R"({"ring": "Q", "algebra": {"basis": ["x"], "mult": [[0, 0, 0, 1.5]], "unit": [1]}})",
             "algebra.mult[0][3]");
  fails_with(R"({"ring": "Q", "algebra": {"basis": ["x"], "mult": [[0, 0, 3, 1]], "unit": [1]}})",
             "algebra.mult[0][2]");
  fails_with(R"({"ring": "Q", "algebra": {"basis": ["x"], "mult": [[0, 0, 0, 1]]}})", "algebra.unit");
  fails_with(R"({"ring": "Q", "algebra": {"basis": ["x"], "mult": [[0, 0, 0, 1]], "unit": [1]},
                 "poset": {"elements": ["1"]}, "standards": [{"label": "2", "rank": 1, "action": [[[1]]]}]})",
             "standards[0].label");
  fails_with(R"({"ring": "Q", "algebra": {"basis": ["x"], "mult": [[0, 0, 0, 1]], "unit": [1]},
                 "modules": {"m": {"rank": 1, "action": [[[2]]]}}})",
             "modules.m");
  fails_with(R"({"ring": "Q", "algebra": {"basis": ["x"], "mult": [[0, 0, 0, 1]], "unit": [1]},
                 "poset": {"elements": ["1", "2"], "less": [["1", "2"], ["2", "1"]]}})",
             "poset");
  fails_with(slurp(golden("loop.spec")), "did not stabilize");
  fails_with(R"({"ring": "Q", "quiver": {"vertices": ["1", "2"], "arrows": [{"name": "a", "source": "1", "target": "2"}],
                 "relations": [[[1, "a*a"]]]}})",
             "quiver");
  CHECK_THROWS_AS(load_spec(golden("no-such-file.spec")), InputError);
}

TEST_CASE("quiver blocks compile to the expected algebras") {
  SpecDocument e2 = load_spec(golden("E2.spec"));
  CHECK(e2.algebra->rank() == 5);
  CHECK(e2.algebra->same_structure(*e2_algebra(GroundRing::integers())));
  const std::string compiled = compile_quiver_spec(slurp(golden("E2.spec")));
  SpecDocument back = parse_spec(compiled);
  check_same(back, e2);
  CHECK_FALSE(back.quiver.has_value());
}

TEST_CASE("emit then parse is the identity on the corpus") {
  for (const auto& ring : {GroundRing::integers(), GroundRing::rationals(), GroundRing::prime_field(5)})
    for (const auto& f : corpus_fixtures(ring)) {
      CAPTURE(f.name);
      SpecDocument doc;
      doc.algebra = f.algebra;
      doc.poset = f.poset;
      doc.standards = f.standards;
      QHStructure qh = build_structure(f);
      doc.modules.emplace_back("regular", regular_module(f.algebra));
      doc.modules.emplace_back("nabla_top", qh.costandards.back());
      doc.modules.emplace_back("zero", AModule::zero(f.algebra));
      const std::string text = emit_spec(doc);
      SpecDocument back = parse_spec(text);
      check_same(doc, back);
      CHECK(emit_spec(back) == text);
    }
}

TEST_CASE("Ringel duals survive a round trip through the file format") {
  for (const auto& f : corpus_fixtures(GroundRing::integers())) {
    CAPTURE(f.name);
    RingelDual b = ringel_dual(build_structure(f));
    SpecDocument doc;
    doc.algebra = b.algebra;
    doc.poset = b.qh.poset;
    doc.standards = b.qh.standards;
    SpecDocument back = parse_spec(emit_spec(doc));
    check_same(doc, back);
    CHECK(verify_split_qh(back.algebra, back.poset, back.standards).accepted());
  }
}

TEST_CASE("fractions and large integers survive emission") {
  CHECK(scalar_to_string(Scalar(-7, 3)) == "-7/3");
  auto a = Algebra::ground(GroundRing::rationals());
  SpecDocument doc;
  doc.algebra = a;
  Matrix huge(1, 1);
  huge(0, 0) = Scalar("123456789012345678901234567890");
  const std::string text = emit_spec(doc);
  CHECK(parse_spec(text).algebra->same_structure(*a));
  CHECK(text.find("\"modules\"") == std::string::npos);
  CHECK(render_matrix(huge) == "[[123456789012345678901234567890]]");
  Matrix big(1, 1);
  big(0, 0) = Scalar("123456789012345678901234567890/7");
  CHECK(render_matrix(big) == "[[123456789012345678901234567890/7]]");
}

TEST_CASE("tables render in three formats") {
  Table t{"t", {"a", "b"}, {{"1", "x,y"}, {"22", "z"}}};
  CHECK(t.render(Format::Csv) == "a,b\n1,\"x,y\"\n22,z\n");
  CHECK(t.render(Format::Markdown) == "### t\n\n| a | b |\n| --- | --- |\n| 1 | x,y |\n| 22 | z |\n");
  CHECK(t.render(Format::Text) == "t\na   b\n1   x,y\n22  z\n");
  CHECK(parse_format("md") == Format::Markdown);
  CHECK_THROWS_AS(parse_format("html"), InputError);
}
