#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qhkit/base_change.hpp"
#include "qhkit/corpus.hpp"
#include "qhkit/io.hpp"
#include "qhkit/ringel.hpp"

using namespace qhkit;

namespace {

constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kInvalid = 2;

struct Options {
  std::string spec;
  std::string format = "text";
  std::string module;
  std::string kind = "delta";
  std::string lambda;
  std::string emit;
  std::vector<long> primes;
};

// A refutation carried to main so every command reports it the same way.
struct Refuted {
  std::string message;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string integers(const std::vector<Integer>& v) {
  std::vector<std::string> s;
  for (const auto& x : v) s.push_back(x.get_str());
  return s.empty() ? "-" : join(s, " ");
}

std::string labels_of(const Poset& p, const std::vector<std::size_t>& idx) {
  std::vector<std::string> s;
  for (auto i : idx) s.push_back(p.label(i));
  return s.empty() ? "-" : join(s, " ");
}

class Session {
 public:
  explicit Session(const Options& o) : opt_(o), doc_(load_spec(o.spec)), format_(parse_format(o.format)) {}

  const SpecDocument& doc() const { return doc_; }
  Format format() const { return format_; }
  const Options& opt() const { return opt_; }

  // Verification result, without costandards.
  const VerifyResult& verified() {
    if (!verified_) {
      if (doc_.poset.size() == 0) throw InputError("poset", "missing");
      if (doc_.standards.size() != doc_.poset.size()) throw InputError("standards", "missing");
      verified_ = verify_split_qh(doc_.algebra, doc_.poset, doc_.standards);
    }
    return *verified_;
  }

  const QHStructure& qh() {
    if (!qh_) {
      const VerifyResult& v = verified();
      if (!v.accepted()) throw Refuted{refutation_text(*v.refutation)};
      QHStructure s = *v.qh;
      try {
        compute_costandards(s);
      } catch (const std::runtime_error& e) {
        throw Refuted{std::string("costandards: ") + e.what()};
      }
      qh_ = std::move(s);
    }
    return *qh_;
  }

  std::size_t lambda() {
    try {
      return qh().poset.index(opt_.lambda);
    } catch (const std::out_of_range&) {
      throw InputError("--lambda", "\"" + opt_.lambda + "\" is not a poset element");
    } catch (const std::invalid_argument&) {
      throw InputError("--lambda", "\"" + opt_.lambda + "\" is not a poset element");
    }
  }

  // Named modules from the file, plus regular, injective and
  // projective:L / delta:L / nabla:L.
  AModule module(const std::string& name) {
    for (const auto& [n, m] : doc_.modules)
      if (n == name) return m;
    if (name == "regular") return regular_module(doc_.algebra);
    if (name == "injective") return dual_module(regular_module(doc_.algebra->opposite()));
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
      const std::string kind = name.substr(0, colon), label = name.substr(colon + 1);
      std::size_t l = doc_.poset.size();
      for (std::size_t k = 0; k < doc_.poset.size(); ++k)
        if (doc_.poset.label(k) == label) l = k;
      if (l < doc_.poset.size()) {
        if (kind == "delta") return qh().standards[l];
        if (kind == "nabla") return qh().costandards[l];
        if (kind == "projective") return qh().covers[l].pres.p0.module;
      }
    }
    throw InputError("--module", "no module named \"" + name + "\"");
  }

  static std::string refutation_text(const Refutation& r) {
    std::string s = "axiom (" + r.axiom + "): " + r.message;
    if (r.witness) s += "\nwitness: " + render_matrix(r.witness->matrix);
    return s;
  }

 private:
  Options opt_;
  SpecDocument doc_;
  Format format_;
  std::optional<VerifyResult> verified_;
  std::optional<QHStructure> qh_;
};

Table chain_table(const QHStructure& qh) {
  Table t{"heredity chain", {"step", "label", "rank J", "rank A_k", "rank Delta"}, {}};
  for (std::size_t k = 0; k < qh.chain.size(); ++k) {
    const auto& c = qh.chain[k];
    t.rows.push_back({std::to_string(k), qh.poset.label(c.label), std::to_string(c.local_ideal.cols()),
                      std::to_string(c.above->rank()), std::to_string(qh.standards[c.label].rank())});
  }
  return t;
}

Table ranks_table(const QHStructure& qh) {
  Table t{"standard and costandard ranks", {"label", "rank Delta", "rank nabla"}, {}};
  for (std::size_t l = 0; l < qh.poset.size(); ++l)
    t.rows.push_back({qh.poset.label(l), std::to_string(qh.standards[l].rank()), std::to_string(qh.costandards[l].rank())});
  return t;
}

Table ext_table(const QHStructure& qh, const OrthogonalityTable& o) {
  Table t{"Ext(Delta, nabla)", {"lambda", "beta", "degree", "free rank", "torsion", "ok"}, {}};
  for (const auto& c : o.cells)
    t.rows.push_back({qh.poset.label(c.lambda), qh.poset.label(c.beta), std::to_string(c.degree),
                      std::to_string(c.free_rank), integers(c.torsion), yes_no(c.ok)});
  return t;
}

Table tilting_table(const QHStructure& qh, const CharacteristicTilting& t) {
  Table out{"tilting modules", {"label", "rank Delta", "rank T", "rank X", "rank Y", "extensions by"}, {}};
  for (const auto& p : t.parts)
    out.rows.push_back({qh.poset.label(p.label), std::to_string(qh.standards[p.label].rank()),
                        std::to_string(p.module.rank()), std::to_string(p.x.module.rank()),
                        std::to_string(p.y.module.rank()), labels_of(qh.poset, p.extension_steps)});
  return out;
}

Table ringel_table(const RingelDual& b) {
  Table t{"Ringel dual (rank " + std::to_string(b.algebra->rank()) + ", reversed order)",
          {"label", "rank Delta_B", "rank nabla_B", "rank T"}, {}};
  for (std::size_t l = 0; l < b.qh.poset.size(); ++l)
    t.rows.push_back({b.qh.poset.label(l), std::to_string(b.qh.standards[l].rank()),
                      std::to_string(b.qh.costandards[l].rank()), std::to_string(b.tilting.parts[l].module.rank())});
  return t;
}

Table comparison_table(const std::string& title, const std::vector<InvariantComparison>& cs) {
  Table t{title, {"invariant", "equal", "detail"}, {}};
  for (const auto& c : cs) t.rows.push_back({c.name, yes_no(c.equal), c.detail});
  return t;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("--emit", "cannot write " + path);
  out << text;
}

int cmd_check(Session& s, std::ostream& os) {
  const VerifyResult& v = s.verified();
  if (!v.accepted()) throw Refuted{Session::refutation_text(*v.refutation)};
  os << "split quasi-hereditary: yes\n";
  os << chain_table(*v.qh).render(s.format());
  for (const auto& n : v.qh->notes) os << "note: " << n << "\n";
  return kOk;
}

int cmd_costandard(Session& s, std::ostream& os) {
  const QHStructure& qh = s.qh();
  if (s.opt().lambda.empty()) {
    os << ranks_table(qh).render(s.format());
    return kOk;
  }
  const std::size_t l = s.lambda();
  const AModule& n = qh.costandards[l];
  Table t{"nabla(" + qh.poset.label(l) + "), rank " + std::to_string(n.rank()), {"basis element", "action"}, {}};
  for (std::size_t i = 0; i < qh.algebra->rank(); ++i) t.rows.push_back({qh.algebra->labels()[i], render_matrix(n.action(i))});
  os << t.render(s.format());
  return kOk;
}

int cmd_ext_table(Session& s, std::ostream& os) {
  const QHStructure& qh = s.qh();
  OrthogonalityTable o = ext_orthogonality_table(qh);
  os << ext_table(qh, o).render(s.format());
  return o.passed() ? kOk : kRefuted;
}

int cmd_filtration(Session& s, std::ostream& os) {
  if (s.opt().module.empty()) throw InputError("--module", "required");
  const QHStructure& qh = s.qh();
  AModule m = s.module(s.opt().module);
  const bool delta = s.opt().kind == "delta";
  if (!delta && s.opt().kind != "nabla") throw InputError("--kind", "expected delta or nabla");
  const std::string name = delta ? "Delta" : "nabla";
  if (!(delta ? has_delta_filtration(m, qh) : has_nabla_filtration(m, qh)))
    throw Refuted{s.opt().module + " has no " + name + "-filtration"};
  FiltrationCertificate c = delta ? extract_delta_filtration(m, qh) : extract_nabla_filtration(m, qh);
  if (auto err = replay_certificate(c, qh)) throw std::logic_error("certificate replay failed: " + *err);
  Table t{name + "-filtration of " + s.opt().module + " (bottom first)", {"layer", "label", "multiplicity", "rank"}, {}};
  for (std::size_t k = 0; k < c.layers.size(); ++k)
    t.rows.push_back({std::to_string(k + 1), qh.poset.label(c.layers[k].label), std::to_string(c.layers[k].multiplicity),
                      std::to_string(c.layers[k].sub.cols())});
  os << t.render(s.format());
  os << "certificate replayed: yes\n";
  return kOk;
}

int cmd_tilt(Session& s, std::ostream& os) {
  const QHStructure& qh = s.qh();
  CharacteristicTilting t = build_tilting(qh);
  os << tilting_table(qh, t).render(s.format());
  const bool ok = verify_tilting(t, qh);
  os << "rank T: " << t.module.rank() << "\n";
  os << "verified: " << yes_no(ok) << "\n";
  if (!s.opt().lambda.empty()) {
    const std::size_t l = s.lambda();
    for (std::size_t i = 0; i < qh.algebra->rank(); ++i)
      os << "T(" << qh.poset.label(l) << ") " << qh.algebra->labels()[i] << ": "
         << render_matrix(t.parts[l].module.action(i)) << "\n";
  }
  return ok ? kOk : kRefuted;
}

int cmd_ringel(Session& s, std::ostream& os) {
  RingelDual b = ringel_dual(s.qh());
  os << ringel_table(b).render(s.format());
  if (!s.opt().emit.empty()) {
    SpecDocument out;
    out.algebra = b.algebra;
    out.poset = b.qh.poset;
    out.standards = b.qh.standards;
    write_file(s.opt().emit, emit_spec(out));
    os << "wrote " << std::filesystem::path(s.opt().emit).filename().string() << "\n";
  }
  return kOk;
}

int cmd_double_dual(Session& s, std::ostream& os) {
  DoubleDualReport r = double_dual_invariants(s.qh());
  os << comparison_table("A against R(R(A))", r.comparisons).render(s.format());
  return r.all_equal() ? kOk : kRefuted;
}

int cmd_self_dual(Session& s, std::ostream& os) {
  SelfDualityReport r = self_duality_probe(s.qh());
  os << comparison_table("A against R(A) (necessary conditions)", r.comparisons).render(s.format());
  if (r.possibly_self_dual) {
    os << "verdict: possibly self-dual\n";
    return kOk;
  }
  os << "verdict: not self-dual (" << *r.witness << ")\n";
  return kRefuted;
}

int cmd_reduce(Session& s, std::ostream& os) {
  if (!s.doc().algebra->ring().is_integers()) throw InputError("ring", "reduce needs a structure over Z");
  const QHStructure& qh = s.qh();
  std::vector<AModule> extra;
  for (const auto& [n, m] : s.doc().modules) extra.push_back(m);
  FiberFamily fam = fiber_family(qh, sample_primes(qh, s.opt().primes, extra));
  CharacteristicTilting t = build_tilting(qh);
  bool ok = true;
  Table fibers{"fibers", {"p", "origin", "accepted", "nabla matches", "T tilting", "T matches", "Hom(Delta, nabla)"}, {}};
  for (std::size_t k = 0; k < fam.sample.primes.size(); ++k) {
    const long p = fam.sample.primes[k];
    const ReducedStructure& f = fam.fibers[k];
    std::vector<std::string> row{std::to_string(p), fam.sample.origin[k] == PrimeOrigin::User ? "user" : "automatic",
                                 yes_no(f.accepted())};
    if (!f.accepted()) {
      row.insert(row.end(), {"-", "-", "-", "-"});
      ok = false;
    } else {
      TiltingReduction tr = reduce_tilting(t, f);
      bool homs = true;
      for (std::size_t l = 0; l < qh.poset.size(); ++l)
        homs = homs && hom_base_change_check(qh.standards[l], qh.costandards[l], fam).holds();
      row.insert(row.end(), {yes_no(f.costandards_match()), yes_no(tr.verified), yes_no(tr.matches()), yes_no(homs)});
      ok = ok && f.costandards_match() && tr.matches() && homs;
    }
    fibers.rows.push_back(std::move(row));
  }
  os << fibers.render(s.format());
  if (!s.doc().modules.empty()) {
    Table mods{"fiberwise Delta-filtrations", {"module", "over Z", "failing primes", "contract"}, {}};
    for (const auto& [n, m] : s.doc().modules) {
      FiberwiseFiltration f = fiberwise_filtration_check(m, fam);
      std::vector<std::string> failing;
      for (long p : f.failing_primes()) failing.push_back(std::to_string(p));
      mods.rows.push_back({n, yes_no(f.ext_criterion), failing.empty() ? "-" : join(failing, " "),
                           f.contract_holds() ? "holds" : "VIOLATED"});
      ok = ok && f.contract_holds();
    }
    if (s.format() != Format::Csv) os << "\n";
    os << mods.render(s.format());
  }
  os << "all sampled fibers consistent: " << yes_no(ok) << " (primes beyond the sample are not covered)\n";
  return ok ? kOk : kRefuted;
}

int cmd_report(Session& s, std::ostream& os) {
  const std::string name = std::filesystem::path(s.opt().spec).filename().string();
  os << "# Report for " << name << "\n\n";
  os << "Ground ring " << s.doc().algebra->ring().name() << ", algebra rank " << s.doc().algebra->rank() << ", "
     << s.doc().poset.size() << " labels.\n\n";
  os << "## Axioms\n\n";
  const VerifyResult& v = s.verified();
  if (!v.accepted()) {
    os << "Rejected by " << Session::refutation_text(*v.refutation) << "\n";
    return kRefuted;
  }
  os << "Split quasi-hereditary.\n\n" << chain_table(*v.qh).render(Format::Markdown) << "\n";
  const QHStructure& qh = s.qh();
  OrthogonalityTable o = ext_orthogonality_table(qh);
  os << "## Ext-orthogonality\n\n" << ext_table(qh, o).render(Format::Markdown) << "\n";
  os << "## Standards and costandards\n\n" << ranks_table(qh).render(Format::Markdown) << "\n";
  CharacteristicTilting t = build_tilting(qh);
  const bool tilting_ok = verify_tilting(t, qh);
  os << "## Characteristic tilting module\n\n" << tilting_table(qh, t).render(Format::Markdown) << "\n";
  os << "Verified: " << yes_no(tilting_ok) << ".\n\n";
  RingelDual b = ringel_dual(qh, t);
  os << "## Ringel dual\n\n" << ringel_table(b).render(Format::Markdown) << "\n";
  bool ok = o.passed() && tilting_ok;
  if (qh.ring().is_integers()) {
    FiberFamily fam = fiber_family(qh, sample_primes(qh));
    Table bc{"fibers", {"p", "accepted", "nabla matches", "T matches"}, {}};
    for (const auto& f : fam.fibers) {
      const bool tm = f.accepted() && reduce_tilting(t, f).matches();
      bc.rows.push_back({std::to_string(f.p), yes_no(f.accepted()), yes_no(f.costandards_match()), yes_no(tm)});
      ok = ok && f.costandards_match() && tm;
    }
    os << "## Base change\n\n" << bc.render(Format::Markdown);
  }
  return ok ? kOk : kRefuted;
}

int cmd_compile(const Options& o, std::ostream& os) {
  std::ifstream in(o.spec, std::ios::binary);
  if (!in) throw InputError("", "cannot read " + o.spec);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string out = compile_quiver_spec(ss.str());
  if (o.emit.empty()) {
    os << out;
  } else {
    write_file(o.emit, out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qhkit: split quasi-hereditary algebras in exact arithmetic"};
  app.require_subcommand(1);
  Options opt;

  using Handler = int (*)(Session&, std::ostream&);
  struct Command {
    const char* name;
    const char* help;
    Handler run;
  };
  const std::vector<Command> commands{
      {"check", "verify the axioms and print the heredity chain", cmd_check},
      {"costandard", "costandard ranks, or the action of nabla(--lambda)", cmd_costandard},
      {"ext-table", "Ext^i(Delta, nabla) for i <= 2", cmd_ext_table},
      {"filtration", "Delta- or nabla-filtration certificate of --module", cmd_filtration},
      {"tilt", "characteristic tilting module", cmd_tilt},
      {"ringel", "Ringel dual; --emit writes it as a spec file", cmd_ringel},
      {"double-dual", "compare invariants of A and R(R(A))", cmd_double_dual},
      {"self-dual", "necessary conditions for A and R(A) to agree", cmd_self_dual},
      {"reduce", "reduction modulo sampled primes (Z only)", cmd_reduce},
      {"report", "markdown summary of everything", cmd_report},
  };
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("spec", opt.spec, "algebra spec file (JSON)")->required();
    sub->add_option("--format", opt.format, "text, csv or md")->check(CLI::IsMember({"text", "csv", "md"}));
    if (std::string(c.name) == "filtration") {
      sub->add_option("--module", opt.module, "module name, or regular, injective, delta:L, nabla:L, projective:L")
          ->required();
      sub->add_option("--kind", opt.kind, "delta or nabla")->check(CLI::IsMember({"delta", "nabla"}));
    }
    if (std::string(c.name) == "costandard" || std::string(c.name) == "tilt")
      sub->add_option("--lambda", opt.lambda, "poset label");
    if (std::string(c.name) == "ringel") sub->add_option("--emit", opt.emit, "output spec file");
    if (std::string(c.name) == "reduce") sub->add_option("--primes", opt.primes, "extra primes")->delimiter(',');
    subs.emplace_back(sub, c.run);
  }
  CLI::App* compile = app.add_subcommand("compile", "compile a quiver spec into an algebra spec");
  compile->add_option("spec", opt.spec, "spec file with a quiver block")->required();
  compile->add_option("--emit", opt.emit, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  std::ostringstream out;
  int code = kOk;
  try {
    if (compile->parsed()) {
      code = cmd_compile(opt, out);
    } else {
      for (auto& [sub, run] : subs)
        if (sub->parsed()) {
          Session s(opt);
          code = run(s, out);
        }
    }
  } catch (const InputError& e) {
    std::cout << out.str();
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const Refuted& r) {
    std::cout << out.str() << "refuted: " << r.message << "\n";
    return kRefuted;
  } catch (const std::logic_error& e) {
    std::cout << out.str();
    std::cerr << "inconsistency: " << e.what() << "\n";
    return kRefuted;
  } catch (const std::exception& e) {
    std::cout << out.str();
    std::cerr << "error: " << e.what() << "\n";
    return kRefuted;
  }
  std::cout << out.str();
  return code;
}
