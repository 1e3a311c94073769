#include "chainlie/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "chainlie/continual_lie.hpp"
#include "chainlie/errors.hpp"
#include "chainlie/foliation.hpp"
#include "chainlie/json_io.hpp"
#include "chainlie/laws.hpp"
#include "chainlie/relation_tree.hpp"

namespace chainlie::cli {

namespace {

struct InputError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read {} file '{}'", what, path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ComplexSpec load_spec(const std::string& path) {
  if (path.empty() || path == "builtin:cech-de-rham") return ComplexSpec::cech_de_rham();
  if (path == "builtin:chain") return ComplexSpec::chain();
  if (path.rfind("builtin:", 0) == 0) throw InputError("unknown built-in spec '" + path + "'");
  std::string text = read_file(path, "spec");
  try {
    return parse_spec(text);
  } catch (const ParseError& e) {
    throw InputError(fmt::format("spec '{}': {}", path, e.what()));
  } catch (const ValidationError& e) {
    throw InputError(fmt::format("spec '{}' failed validation: {}", path, e.what()));
  }
}

// Accumulates a text or machine report; the spec always comes first.
class Report {
 public:
  Report(Format f, const ComplexSpec& spec, const std::string& command) : format_(f) {
    json_["spec"] = serialize_spec(spec);
    json_["command"] = command;
    text_ = "spec:\n" + indent(serialize_spec(spec)) + "command: " + command + "\n";
  }

  void field(const std::string& key, const Json& value, const std::string& text) {
    json_[key] = value;
    text_ += key + ": " + text + "\n";
  }

  void section(const std::string& key, const Json& value, const std::string& text) {
    json_[key] = value;
    text_ += "\n" + text;
    if (!text.empty() && text.back() != '\n') text_ += "\n";
  }

  void finish(bool pass, std::ostream& out) {
    json_["status"] = pass ? "pass" : "fail";
    if (format_ == Format::machine) out << json_.dump(2) << "\n";
    else out << text_ << "\nstatus: " << (pass ? "pass" : "fail") << "\n";
  }

 private:
  static std::string indent(const std::string& s) {
    std::string out, line;
    std::istringstream in(s);
    while (std::getline(in, line)) out += "  " + line + "\n";
    return out;
  }

  Format format_;
  Json json_ = Json::object();
  std::string text_;
};

std::uint64_t resolve_seed(RunConfig& c) {
  if (c.entropy_seed) {
    std::random_device rd;
    c.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    c.entropy_seed = false;
  }
  return c.seed;
}

GenSymbol seed_of(const ComplexSpec& spec, const Degree& d, const char* name, const char* first,
                  const char* second) {
  if (static_cast<int>(d.size()) != spec.arity)
    throw DegreeMismatch(fmt::format("seed degree {} does not match spec arity {}", d.to_string(), spec.arity));
  return seed_symbol(spec, name, d, first, second);
}

RelationTree build_tree(const ComplexSpec& spec, const RunConfig& c) {
  if (!c.chi) throw InputError(c.command + " needs --chi");
  if (c.depth < 1) throw InputError("--depth must be at least 1");
  GenSymbol chi = seed_of(spec, *c.chi, "CHI", "h", "s");
  GenSymbol phi = c.phi ? seed_of(spec, *c.phi, "PHI", "g", "u") : chi;
  DeriveOptions o;
  o.depth_cap = c.depth;
  return mark_dependence(derive_tree(spec, chi, phi, o));
}

void add_tree(Report& r, const RelationTree& t) { r.section("tree", to_json(t), render_tree(t)); }

int cmd_check_dga(const ComplexSpec& spec, RunConfig& c, Report& r) {
  LawOptions o;
  o.seed = resolve_seed(c);
  r.field("seed", c.seed, std::to_string(c.seed));
  auto laws = check_dga_laws(spec, o);
  r.section("dga_laws", to_json(laws), render(laws));
  bool pass = laws.pass();
  if (spec.arity == 2) {
    auto fol = check_foliation_laws(3);
    r.section("foliation_laws", to_json(fol), render(fol));
    auto dd = verify_delta_squared_zero(3);
    r.section("delta_squared", to_json(dd), render(dd));
    pass = pass && fol.pass() && dd.pass();
  }
  return pass ? 0 : 1;
}

int cmd_derive(const ComplexSpec& spec, RunConfig& c, Report& r) {
  add_tree(r, build_tree(spec, c));
  return 0;
}

int cmd_lie(const ComplexSpec& spec, RunConfig& c, Report& r) {
  auto tree = build_tree(spec, c);
  add_tree(r, tree);
  try {
    auto p = extract_presentation(tree);
    r.section("presentation", to_json(p), render_presentation(p));
  } catch (const NoIndependentPath& e) {
    r.section("presentation", nullptr, std::string("no presentation: ") + e.what());
    return 1;
  }
  return 0;
}

int cmd_jacobi(const ComplexSpec& spec, RunConfig& c, Report& r) {
  std::uint64_t seed = resolve_seed(c);
  r.field("seed", seed, std::to_string(seed));
  bool pass = true;
  bool ran = false;
  if (c.chi) {
    auto tree = build_tree(spec, c);
    LiePresentation p;
    try {
      p = extract_presentation(tree);
    } catch (const NoIndependentPath& e) {
      r.section("symbolic_jacobi", nullptr, std::string("no presentation: ") + e.what());
      return 1;
    }
    r.section("presentation", to_json(p), render_presentation(p));
    auto rep = check_jacobi_symbolic(p, sample_triples(p, c.triples, seed));
    r.section("symbolic_jacobi", to_json(rep), render(rep));
    pass = pass && rep.pass();
    ran = true;
  }
  if (!c.kernels_path.empty()) {
    KernelSet ks;
    try {
      ks = parse_kernel_file(read_file(c.kernels_path, "kernel"));
    } catch (const ParseError& e) {
      throw InputError(fmt::format("kernel file '{}': {}", c.kernels_path, e.what()));
    }
    if (!(c.tol > 0)) throw InputError("--tol must be positive");
    auto rep = check_jacobi_numeric(ks, {c.samples, c.tol, seed, 1.0});
    r.section("numeric_jacobi", to_json(rep), render(rep));
    pass = pass && rep.pass;
    ran = true;
  }
  if (!ran) throw InputError("jacobi needs --chi (symbolic check) or --kernels (numeric check)");
  return pass ? 0 : 1;
}

int cmd_demo_gv(const ComplexSpec& spec, RunConfig& c, Report& r) {
  if (spec.arity != 2) throw InputError("demo-gv needs a bigraded spec");
  if (c.phi) throw InputError("demo-gv takes only --chi; Phi is chi");
  Degree d = c.chi.value_or(Degree{1, 1});
  if (d.size() != 2) throw DegreeMismatch("demo-gv needs --chi p,q");
  std::uint64_t seed = resolve_seed(c);
  r.field("seed", seed, std::to_string(seed));
  auto tree = mark_dependence(derive_gv_tree(spec, d[0], d[1], c.depth));
  add_tree(r, tree);
  auto p = godbillon_vey(spec, d[0], d[1]);
  r.section("presentation", to_json(p), render_presentation(p));
  auto grading = grading_check(p);
  r.section("grading", to_json(grading), render(grading));
  auto rep = check_jacobi_symbolic(p, sample_triples(p, c.triples, seed));
  r.section("symbolic_jacobi", to_json(rep), render(rep));
  return rep.pass() ? 0 : 1;
}

}  // namespace

Degree parse_degree_arg(const std::string& s) {
  std::vector<int> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = s.find(',', pos);
    std::string piece = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      int v = std::stoi(piece, &used);
      if (used != piece.size()) throw std::invalid_argument(piece);
      parts.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("degree '" + s + "' is not of the form p or p,q");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (parts.size() > 2) throw ValidationError("degree '" + s + "' has more than two components");
  return Degree(parts);
}

int run(RunConfig config, std::ostream& out, std::ostream& err) {
  static const char* commands[] = {"check-dga", "derive", "lie", "jacobi", "demo-gv"};
  if (std::find(std::begin(commands), std::end(commands), config.command) == std::end(commands)) {
    err << "chainlie: unknown command '" << config.command << "'\n";
    return 2;
  }
  try {
    ComplexSpec spec = load_spec(config.spec_path);
    Report report(config.format, spec, config.command);
    int status = 0;
    if (config.command == "check-dga") status = cmd_check_dga(spec, config, report);
    else if (config.command == "derive") status = cmd_derive(spec, config, report);
    else if (config.command == "lie") status = cmd_lie(spec, config, report);
    else if (config.command == "jacobi") status = cmd_jacobi(spec, config, report);
    else status = cmd_demo_gv(spec, config, report);
    report.finish(status == 0, out);
    return status;
  } catch (const InputError& e) {
    err << "chainlie: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "chainlie: parse error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "chainlie: invalid input: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace chainlie::cli
