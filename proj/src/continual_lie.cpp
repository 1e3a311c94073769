#include "chainlie/continual_lie.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>

#include "chainlie/errors.hpp"

namespace chainlie {

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::zero: return "zero";
    case KernelKind::tuple_merge: return "tuple-merge";
    case KernelKind::numeric: return "numeric";
  }
  return "?";
}

const Generator& LiePresentation::generator(const std::string& name) const {
  for (const auto& g : generators)
    if (g.name == name) return g;
  throw UnknownPair("unknown generator " + name);
}

bool LiePresentation::has_generator(const std::string& name) const {
  return std::any_of(generators.begin(), generators.end(), [&](const Generator& g) { return g.name == name; });
}

const Kernel& LiePresentation::kernel(const std::string& name) const {
  for (const auto& k : kernels)
    if (k.name == name) return k;
  throw UnknownPair("unknown kernel " + name);
}

std::string grade_label(int g) { return g > 0 ? "+" + std::to_string(g) : std::to_string(g); }

std::string kernel_label(int ga, int gb) { return "K_{" + grade_label(ga) + "," + grade_label(gb) + "}"; }

namespace {

struct Extractor {
  const RelationTree& tree;
  const ExtractOptions& opts;
  LiePresentation out;
  std::map<std::string, std::size_t> index;  // generator name -> position

  std::string gen_name(const Factor& f) const {
    std::string key = render(f);
    auto it = opts.rename.find(key);
    return it == opts.rename.end() ? key : it->second;
  }

  LengthExpr sym(const LengthExpr& e) const { return e.renamed(opts.symbols); }

  void add_generator(const Factor& f) {
    std::string name = gen_name(f);
    if (index.count(name)) return;
    LengthExpr arity = tree.symbolic_degrees.at(f.base.name)[0];
    if (f.delta_applied) arity = arity + tree.spec.shift[0];
    int grade = static_cast<int>(out.generators.size());
    if (auto it = opts.grades.find(name); it != opts.grades.end()) {
      grade = it->second;
    } else if (!tree.spec.grading.empty()) {
      Degree d = factor_degree(f, tree.spec);
      auto g = tree.spec.grading.find(d);
      if (g == tree.spec.grading.end())
        throw ValidationError("grading map has no entry for degree " + d.to_string() + " of " + name);
      grade = g->second;
    }
    index[name] = out.generators.size();
    out.generators.push_back({name, grade, sym(arity)});
  }

  int grade(const std::string& name) const { return out.generators[index.at(name)].grade; }

  std::string add_kernel(Kernel k) {
    for (const auto& e : out.kernels) {
      if (e.name == k.name && e.kind == k.kind && e.shared == k.shared && e.left == k.left && e.right == k.right)
        return e.name;
    }
    std::string base = k.name;
    for (int i = 2; std::any_of(out.kernels.begin(), out.kernels.end(), [&](const Kernel& e) { return e.name == k.name; }); ++i)
      k.name = base + "#" + std::to_string(i);
    out.kernels.push_back(k);
    return k.name;
  }

  std::string bracket_kernel(const std::string& a, const std::string& b, bool zero, const LengthExpr& shared) {
    Kernel k;
    k.name = kernel_label(grade(a), grade(b));
    k.kind = zero ? KernelKind::zero : KernelKind::tuple_merge;
    if (!zero) k.shared = shared;
    k.left = a;
    k.right = b;
    return add_kernel(k);
  }

  static bool two_factor(const RelTerm& t) { return t.factors.size() == 2; }

  void convert(const RelationNode& n, const LengthExpr& shared) {
    const auto& L = n.relation.lhs;
    const auto& R = n.relation.rhs;
    const std::vector<RelTerm>* only = nullptr;
    if (L.empty()) only = &R;
    if (R.empty()) only = &L;

    if (only && only->size() == 1 && two_factor((*only)[0])) {
      const RelTerm& t = (*only)[0];
      std::string a = gen_name(t.factors[0]), b = gen_name(t.factors[1]);
      out.brackets.push_back({a, b, bracket_kernel(a, b, true, 0), "", 0, Rational(1)});
      return;
    }
    if (only && only->size() > 1 &&
        std::all_of(only->begin(), only->end(), [](const RelTerm& t) { return two_factor(t); })) {
      MixedConstraint mc;
      LengthExpr base = sym(only->front().sign);
      for (const auto& t : *only) {
        std::string a = gen_name(t.factors[0]), b = gen_name(t.factors[1]);
        // Listed with the later generator first, as the introduced element.
        bool swap = index.at(b) > index.at(a);
        Kernel k;
        k.name = swap ? kernel_label(grade(b), grade(a)) : kernel_label(grade(a), grade(b));
        k.kind = KernelKind::tuple_merge;
        k.shared = sym(shared);
        k.left = swap ? b : a;
        k.right = swap ? a : b;
        Rational mag = t.coeff < Rational(0) ? -t.coeff : t.coeff;
        mc.terms.push_back({a, b, add_kernel(k), (sym(t.sign) - base).parity(), mag});
      }
      out.mixed.push_back(mc);
      return;
    }
    auto single = [](const std::vector<RelTerm>& s) { return s.size() == 1 && s[0].factors.size() == 1; };
    auto pair = [](const std::vector<RelTerm>& s) { return s.size() == 1 && s[0].factors.size() == 2; };
    if ((single(L) && pair(R)) || (pair(L) && single(R))) {
      const RelTerm& c = single(L) ? L[0] : R[0];
      const RelTerm& t = single(L) ? R[0] : L[0];
      std::string a = gen_name(t.factors[0]), b = gen_name(t.factors[1]);
      Rational ratio = c.coeff / t.coeff;
      Rational mag = ratio < Rational(0) ? -ratio : ratio;
      out.brackets.push_back(
          {a, b, bracket_kernel(a, b, false, sym(shared)), gen_name(c.factors[0]), sym(c.sign - t.sign).parity(), mag});
      return;
    }
    throw ValidationError("relation '" + render(n.relation) + "' has no bracket form");
  }
};

}  // namespace

LiePresentation extract_presentation(const RelationTree& tree_in, const ExtractOptions& opts) {
  const RelationTree tree = tree_in.dependence_marked ? tree_in : mark_dependence(tree_in);
  auto paths = independent_paths(tree);
  if (paths.empty()) throw NoIndependentPath("the relation tree has no independent path");

  std::set<std::string> elems;
  for (const auto& p : paths)
    if (!p.empty())
      for (const auto& e : existence_chain(p)) elems.insert(e);
  std::vector<std::string> ordered(elems.begin(), elems.end());
  std::sort(ordered.begin(), ordered.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });

  Extractor x{tree, opts, {}, {}};
  x.add_generator({tree.chi, false});
  x.add_generator({tree.chi, true});
  x.add_generator({tree.phi, false});
  x.add_generator({tree.phi, true});
  for (const auto& e : ordered) {
    const GenSymbol& a = *tree.existence(e)->introduced;
    x.add_generator({a, false});
    x.add_generator({a, true});
  }

  auto active = [](const RelationNode* n) { return n && n->status == NodeStatus::active; };
  if (const auto* root = tree.find("", NodeRole::orthogonality); active(root)) x.convert(*root, 0);
  if (const auto* der = tree.find("", NodeRole::derived); active(der)) x.convert(*der, 0);
  for (const auto& e : ordered) {
    LengthExpr shared = LengthExpr::symbol("r_" + e);
    x.convert(*tree.existence(e), shared);
    if (const auto* c = tree.find(e, NodeRole::consequence); active(c)) x.convert(*c, shared);
  }
  for (const auto& [k, v] : tree.bindings) {
    auto it = opts.symbols.find(k);
    x.out.bindings[it == opts.symbols.end() ? k : it->second] = v;
  }
  return x.out;
}

Tuple merge_tuples(const Tuple& a, const Tuple& b, int shared) {
  if (shared < 0 || shared > static_cast<int>(a.size()) || shared > static_cast<int>(b.size()))
    throw SharedMismatch(fmt::format("cannot share {} entries between tuples of length {} and {}", shared, a.size(),
                                     b.size()));
  if (!std::equal(a.end() - shared, a.end(), b.begin()))
    throw SharedMismatch("the last " + std::to_string(shared) + " entries of the first tuple differ from the first " +
                         std::to_string(shared) + " of the second");
  Tuple out = a;
  out.insert(out.end(), b.begin() + shared, b.end());
  return out;
}

std::string render(const GenAtom& a) {
  std::string s = a.gen + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) s += (i ? "," : "") + a.args[i].name();
  return s + ")";
}

namespace {

void check_arity(const LiePresentation& p, const GenAtom& a) {
  int want = p.generator(a.gen).arity.eval(p.bindings);
  if (want != static_cast<int>(a.args.size()))
    throw ArityMismatch(fmt::format("{} takes {} arguments, got {}", a.gen, want, a.args.size()));
}

Combination apply_entry(const LiePresentation& p, const BracketEntry& e, const GenAtom& x, const GenAtom& y,
                        Rational sign) {
  Combination c;
  if (e.zero()) return c;
  const Kernel& k = p.kernel(e.kernel);
  if (k.kind != KernelKind::tuple_merge) return c;
  Tuple args = merge_tuples(x.args, y.args, k.shared.eval(p.bindings));
  for (int i = 0; i < k.offset; ++i) args.push_back(Param::holonomy("e" + std::to_string(i + 1)));
  for (int i = 0; i > k.offset && !args.empty(); --i) args.pop_back();
  Rational coeff = e.magnitude * sign;
  if (e.sign.eval(p.bindings) % 2 != 0) coeff = -coeff;
  c.terms.push_back({coeff, GenAtom{e.output, std::move(args)}});
  return c;
}

}  // namespace

Combination bracket(const LiePresentation& p, const GenAtom& a, const GenAtom& b) {
  check_arity(p, a);
  check_arity(p, b);
  if (a.gen == b.gen) return {};
  for (const auto& e : p.brackets) {
    if (e.a == a.gen && e.b == b.gen) return apply_entry(p, e, a, b, Rational(1));
    if (e.a == b.gen && e.b == a.gen) return apply_entry(p, e, b, a, Rational(-1));
  }
  throw UnknownPair("no bracket [" + a.gen + ", " + b.gen + "] in the table");
}

SymbolicJacobiReport check_jacobi_symbolic(const LiePresentation& p, const std::vector<Triple>& samples) {
  SymbolicJacobiReport rep;
  for (const auto& tri : samples) {
    JacobiSampleResult res;
    res.triple = tri;
    res.admissible = true;
    std::map<std::string, Rational> acc;
    try {
      for (int k = 0; k < 3; ++k) {
        const GenAtom& x = tri[k];
        const GenAtom& y = tri[(k + 1) % 3];
        const GenAtom& z = tri[(k + 2) % 3];
        Combination inner = bracket(p, y, z);
        for (const auto& [c, atom] : inner.terms) {
          try {
            for (const auto& [c2, out] : bracket(p, x, atom).terms) acc[render(out)] += c * c2;
          } catch (const ArityMismatch&) {
            acc["[" + render(x) + ", " + render(atom) + "]"] += c;
          }
        }
      }
    } catch (const UnknownPair& e) {
      res.admissible = false;
      res.reason = e.what();
    } catch (const SharedMismatch& e) {
      res.admissible = false;
      res.reason = e.what();
    } catch (const ArityMismatch& e) {
      res.admissible = false;
      res.reason = e.what();
    }
    if (res.admissible) {
      for (const auto& [k, v] : acc)
        if (v != Rational(0)) res.residual[k] = v;
      ++rep.admissible;
      if (!res.residual.empty()) ++rep.nonzero;
    }
    rep.samples.push_back(std::move(res));
  }
  return rep;
}

std::vector<Triple> sample_triples(const LiePresentation& p, int count, std::uint64_t seed, int alphabet) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, alphabet);
  const std::size_t g = p.generators.size();
  std::vector<Triple> out;
  if (g == 0) return out;
  const std::size_t combos = g * g * g;
  for (int s = 0; s < count; ++s) {
    std::size_t c = static_cast<std::size_t>(s) % combos;
    std::size_t idx[3] = {c / (g * g), (c / g) % g, c % g};
    Triple t;
    for (int k = 0; k < 3; ++k) {
      const Generator& gen = p.generators[idx[k]];
      int len = gen.arity.eval(p.bindings);
      t[k].gen = gen.name;
      for (int i = 0; i < len; ++i) t[k].args.push_back(Param::holonomy("h" + std::to_string(pick(rng))));
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::string tuple_text(const LengthExpr& len, bool prime) {
  std::string h = prime ? "h'" : "h";
  if (len.is_constant()) {
    int k = len.constant();
    if (k <= 0) return "";
    if (k == 1) return h + "_1";
    return h + "_1.." + h + "_" + std::to_string(k);
  }
  std::string s = len.to_string();
  return h + "_1.." + h + "_" + (s.size() == 1 ? s : "{" + s + "}");
}

std::string sign_text(const LengthExpr& e, const Rational& mag, bool leading) {
  LengthExpr par = e.parity();
  std::string mag_s = mag == Rational(1) ? "" : to_string(mag) + " ";
  if (par.is_constant()) {
    bool neg = par.constant() != 0;
    if (leading) return (neg ? "- " : "") + mag_s;
    return (neg ? " - " : " + ") + mag_s;
  }
  std::string s = par.to_string();
  std::string pow = "(-1)^" + (s.size() == 1 ? s : "{" + s + "}") + " ";
  return (leading ? "" : " + ") + pow + mag_s;
}

std::string call(const LiePresentation& p, const std::string& gen, bool prime) {
  return gen + "(" + tuple_text(p.generator(gen).arity, prime) + ")";
}

}  // namespace

std::string render_presentation(const LiePresentation& p) {
  std::string out = "generators:\n";
  for (const auto& g : p.generators)
    out += fmt::format("  {} grade {} arity {}\n", g.name, grade_label(g.grade), g.arity.to_string());
  out += "brackets:\n";
  for (const auto& e : p.brackets) {
    out += "  [" + call(p, e.a, false) + ", " + call(p, e.b, e.zero()) + "] = ";
    if (e.zero()) {
      out += "0\n";
      continue;
    }
    out += sign_text(e.sign, e.magnitude, true) + e.output + "(" + e.kernel + "(" +
           tuple_text(p.generator(e.a).arity, false) + ", " + tuple_text(p.generator(e.b).arity, false) + "))\n";
  }
  for (const auto& m : p.mixed) {
    out += "  ";
    for (std::size_t i = 0; i < m.terms.size(); ++i) {
      const auto& t = m.terms[i];
      out += sign_text(t.sign, t.magnitude, i == 0) + "[" + call(p, t.a, false) + ", " + call(p, t.b, false) + "]";
    }
    out += " = 0\n";
  }
  out += "kernels:\n";
  for (const auto& k : p.kernels) {
    const LengthExpr la = p.generator(k.left).arity, lb = p.generator(k.right).arity;
    bool zero = k.kind == KernelKind::zero;
    out += "  " + k.name + "(" + tuple_text(la, false) + ", " + tuple_text(lb, zero) + ") = ";
    out += zero ? "0" : tuple_text(la + lb - k.shared + k.offset, false);
    out += "\n";
  }
  for (const auto& a : p.annotations) out += "note: " + a + "\n";
  return out;
}

std::string render(const SymbolicJacobiReport& r, bool all_samples) {
  std::string out = fmt::format("symbolic jacobi: {} samples, {} admissible, {} nonzero\n", r.samples.size(),
                                r.admissible, r.nonzero);
  for (const auto& s : r.samples) {
    if (!s.admissible || (!all_samples && s.residual.empty())) continue;
    out += "  " + render(s.triple[0]) + " " + render(s.triple[1]) + " " + render(s.triple[2]) + ": ";
    if (s.residual.empty()) {
      out += "0\n";
      continue;
    }
    bool first = true;
    for (const auto& [atom, c] : s.residual) {
      Term t{c, {}};
      std::string coeff = c < Rational(0) ? (first ? "- " : " - ") : (first ? "" : " + ");
      Rational mag = c < Rational(0) ? -c : c;
      out += coeff + (mag == Rational(1) ? "" : to_string(mag) + " ") + atom;
      first = false;
    }
    out += "\n";
  }
  return out;
}

GradingReport grading_check(const LiePresentation& p) {
  GradingReport rep;
  auto g = [&](const std::string& n) { return p.generator(n).grade; };
  for (const auto& e : p.brackets) {
    if (e.zero()) continue;
    if (g(e.output) != g(e.a) + g(e.b))
      rep.violations.push_back(fmt::format("[{}, {}] = {}: grade {} + {} != {}", e.a, e.b, e.output,
                                           grade_label(g(e.a)), grade_label(g(e.b)), grade_label(g(e.output))));
  }
  for (const auto& m : p.mixed) {
    std::set<int> sums;
    for (const auto& t : m.terms) sums.insert(g(t.a) + g(t.b));
    if (sums.size() > 1) {
      std::string s;
      for (const auto& t : m.terms)
        s += fmt::format("{}[{}, {}] in grade {}", s.empty() ? "" : ", ", t.a, t.b, grade_label(g(t.a) + g(t.b)));
      rep.violations.push_back("mixed constraint spans several grades: " + s);
    }
  }
  return rep;
}

std::string render(const GradingReport& r) {
  std::string out = fmt::format("grading: {} ({} violations)\n", r.pass() ? "pass" : "fail", r.violations.size());
  for (const auto& v : r.violations) out += "  " + v + "\n";
  return out;
}

// ---- numeric ----

DiscreteE DiscreteE::pointwise(int dim) {
  std::vector<double> t(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  for (int k = 0; k < dim; ++k) t[(static_cast<std::size_t>(k) * dim + k) * dim + k] = 1.0;
  return DiscreteE(dim, std::move(t));
}

DiscreteE::DiscreteE(int dim, std::vector<double> table) : dim_(dim), table_(std::move(table)) {
  const std::size_t d = dim;
  if (dim <= 0 || table_.size() != d * d * d)
    throw DimensionMismatch(fmt::format("product table of size {} for dimension {}", table_.size(), dim));
  auto T = [&](std::size_t k, std::size_t i, std::size_t j) { return table_[(k * d + i) * d + j]; };
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (T(k, i, j) != T(k, j, i)) throw ValidationError("product table is not commutative");
  // (e_i e_j) e_k == e_i (e_j e_k), coordinate l
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          double lhs = 0, rhs = 0;
          for (std::size_t m = 0; m < d; ++m) {
            lhs += T(m, i, j) * T(l, m, k);
            rhs += T(m, j, k) * T(l, i, m);
          }
          if (lhs != rhs) throw ValidationError("product table is not associative");
        }
}

std::vector<double> DiscreteE::multiply(const std::vector<double>& a, const std::vector<double>& b) const {
  Kernel k;
  k.kind = KernelKind::numeric;
  k.dimension = dim_;
  k.tensor = table_;
  return apply_kernel(k, a, b, dim_);
}

Kernel scaled_product_kernel(const std::string& name, const DiscreteE& e, double c) {
  Kernel k;
  k.name = name;
  k.kind = KernelKind::numeric;
  k.dimension = e.dimension();
  k.tensor = e.table();
  for (auto& x : k.tensor) x *= c;
  return k;
}

Kernel zero_kernel(const std::string& name) {
  Kernel k;
  k.name = name;
  k.kind = KernelKind::zero;
  return k;
}

std::vector<double> apply_kernel(const Kernel& k, const std::vector<double>& a, const std::vector<double>& b,
                                 int dim) {
  const std::size_t d = dim;
  if (a.size() != d || b.size() != d)
    throw DimensionMismatch(fmt::format("kernel {} applied to vectors of size {} and {}", k.name, a.size(), b.size()));
  std::vector<double> out(d, 0.0);
  if (k.kind == KernelKind::zero) return out;
  if (k.kind != KernelKind::numeric) throw ValidationError("kernel " + k.name + " is not numeric");
  if (k.dimension != dim || k.tensor.size() != d * d * d)
    throw DimensionMismatch(fmt::format("kernel {} has dimension {}, expected {}", k.name, k.dimension, dim));
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      double ab = a[i] * b[j];
      if (ab == 0.0) continue;
      for (std::size_t m = 0; m < d; ++m) out[m] += k.tensor[(m * d + i) * d + j] * ab;
    }
  }
  return out;
}

KernelSet sl2_kernels(int dim) {
  DiscreteE e = DiscreteE::pointwise(dim);
  KernelSet s;
  s.dimension = dim;
  s.kernels["K00"] = zero_kernel("K00");
  s.kernels["K+1"] = scaled_product_kernel("K+1", e, 2.0);
  s.kernels["K-1"] = scaled_product_kernel("K-1", e, -2.0);
  s.kernels["K0"] = scaled_product_kernel("K0", e, 1.0);
  return s;
}

namespace {

struct Token {
  std::string text;
  int line;
  int column;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    Token t{"", line, col};
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') {
      t.text += text[i++];
      ++col;
    }
    out.push_back(std::move(t));
  }
  return out;
}

int to_int(const Token& t) {
  try {
    std::size_t used = 0;
    int v = std::stoi(t.text, &used);
    if (used == t.text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("expected an integer, got '" + t.text + "'", t.line, t.column);
}

double to_double(const Token& t) {
  try {
    std::size_t used = 0;
    double v = std::stod(t.text, &used);
    if (used == t.text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("expected a number, got '" + t.text + "'", t.line, t.column);
}

}  // namespace

KernelSet parse_kernel_file(const std::string& text) {
  auto toks = tokenize(text);
  std::size_t i = 0;
  auto next = [&](const char* what) -> const Token& {
    if (i >= toks.size()) {
      int line = toks.empty() ? 1 : toks.back().line;
      throw ParseError(std::string("unexpected end of document, expected ") + what, line, 1);
    }
    return toks[i++];
  };
  KernelSet s;
  const Token& kw = next("'dimension'");
  if (kw.text != "dimension") throw ParseError("expected 'dimension', got '" + kw.text + "'", kw.line, kw.column);
  const Token& dt = next("dimension value");
  s.dimension = to_int(dt);
  if (s.dimension <= 0) throw ParseError("dimension must be positive", dt.line, dt.column);
  while (i < toks.size()) {
    const Token& k = next("'kernel'");
    if (k.text != "kernel") throw ParseError("expected 'kernel', got '" + k.text + "'", k.line, k.column);
    const Token& name = next("kernel name");
    const Token& rule = next("kernel rule");
    if (s.kernels.count(name.text)) throw ParseError("duplicate kernel '" + name.text + "'", name.line, name.column);
    if (rule.text == "zero") {
      s.kernels[name.text] = zero_kernel(name.text);
    } else if (rule.text == "numeric") {
      int dims[3];
      for (int& d : dims) {
        const Token& t = next("tensor dimension");
        d = to_int(t);
        if (d != s.dimension)
          throw DimensionMismatch(fmt::format("kernel {} has tensor dimension {} but the file declares {}", name.text,
                                              d, s.dimension));
      }
      Kernel kern;
      kern.name = name.text;
      kern.kind = KernelKind::numeric;
      kern.dimension = s.dimension;
      std::size_t n = static_cast<std::size_t>(s.dimension) * s.dimension * s.dimension;
      kern.tensor.reserve(n);
      for (std::size_t v = 0; v < n; ++v) kern.tensor.push_back(to_double(next("tensor entry")));
      s.kernels[name.text] = std::move(kern);
    } else {
      throw ParseError("unknown kernel rule '" + rule.text + "'", rule.line, rule.column);
    }
  }
  for (const char* req : {"K00", "K+1", "K-1", "K0"})
    if (!s.kernels.count(req)) throw ValidationError(std::string("kernel file lacks ") + req);
  return s;
}

std::string serialize_kernel_file(const KernelSet& k) {
  std::string out = fmt::format("dimension {}\n", k.dimension);
  for (const auto& [name, kern] : k.kernels) {
    if (kern.kind == KernelKind::zero) {
      out += fmt::format("kernel {} zero\n", name);
      continue;
    }
    out += fmt::format("kernel {} numeric {} {} {}\n", name, k.dimension, k.dimension, k.dimension);
    const std::size_t d = k.dimension;
    for (std::size_t r = 0; r < d * d; ++r) {
      for (std::size_t c = 0; c < d; ++c) out += fmt::format("{}{}", c ? " " : "", kern.tensor[r * d + c]);
      out += "\n";
    }
  }
  return out;
}

namespace {

using Vec = std::vector<double>;

struct GradedKernels {
  const KernelSet& set;
  double scale;

  Vec k(const std::string& name, const Vec& a, const Vec& b) const {
    Vec v = apply_kernel(set.kernels.at(name), a, b, set.dimension);
    for (auto& x : v) x *= scale;
    return v;
  }

  // K_{i,j} for grades in {-1, 0, 1}; zero whenever i + j leaves the range.
  Vec K(int i, int j, const Vec& a, const Vec& b) const {
    Vec zero(set.dimension, 0.0);
    if (i < -1 || i > 1 || j < -1 || j > 1 || i + j < -1 || i + j > 1) return zero;
    if (i == 0 && j == 0) return k("K00", a, b);
    if (i == 0) return k(j > 0 ? "K+1" : "K-1", a, b);
    if (j == 0) return neg(k(i > 0 ? "K+1" : "K-1", b, a));
    if (i == 1 && j == -1) return k("K0", a, b);
    return neg(k("K0", b, a));
  }

  static Vec neg(Vec v) {
    for (auto& x : v) x = -x;
    return v;
  }
};

double max_abs(const Vec& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vec add(Vec a, const Vec& b, double s = 1.0) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  return a;
}

}  // namespace

NumericJacobiReport check_jacobi_numeric(const KernelSet& set, const NumericJacobiOptions& opts) {
  for (const char* req : {"K00", "K+1", "K-1", "K0"})
    if (!set.kernels.count(req)) throw ValidationError(std::string("kernel set lacks ") + req);
  for (const auto& [name, k] : set.kernels)
    if (k.kind == KernelKind::numeric &&
        (k.dimension != set.dimension ||
         k.tensor.size() != static_cast<std::size_t>(set.dimension) * set.dimension * set.dimension))
      throw DimensionMismatch(fmt::format("kernel {} has dimension {}, expected {}", name, k.dimension, set.dimension));

  NumericJacobiReport rep;
  rep.samples = opts.samples;
  rep.seed = opts.seed;
  rep.tol = opts.tol;
  GradedKernels G{set, opts.scale};
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int d = set.dimension;
  auto draw = [&] {
    Vec v(d);
    for (auto& x : v) x = unif(rng);
    return v;
  };
  for (int s = 0; s < opts.samples; ++s) {
    Vec phi = draw(), psi = draw(), chi = draw();
    for (const char* K : {"K+1", "K-1"}) {
      Vec lhs = G.k(K, G.k("K00", phi, psi), chi);
      Vec rhs = add(G.k(K, phi, G.k(K, psi, chi)), G.k(K, psi, G.k(K, phi, chi)), -1.0);
      rep.jac1_first = std::max(rep.jac1_first, max_abs(add(lhs, rhs, -1.0)));
    }
    {
      Vec lhs = G.k("K00", psi, G.k("K0", phi, chi));
      Vec rhs = add(G.k("K0", G.k("K+1", psi, phi), chi), G.k("K0", phi, G.k("K-1", psi, chi)));
      rep.jac1_second = std::max(rep.jac1_second, max_abs(add(lhs, rhs, -1.0)));
    }
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j)
        for (int k = -1; k <= 1; ++k) {
          Vec t1 = G.K(i, j + k, phi, G.K(j, k, psi, chi));
          Vec t2 = G.K(j, k + i, psi, G.K(k, i, chi, phi));
          Vec t3 = G.K(k, i + j, chi, G.K(i, j, phi, psi));
          rep.cyclic = std::max(rep.cyclic, max_abs(add(add(t1, t2), t3)));
        }
  }
  rep.max_residual = std::max({rep.jac1_first, rep.jac1_second, rep.cyclic});
  rep.pass = rep.max_residual < opts.tol;
  return rep;
}

std::string render(const NumericJacobiReport& r) {
  return fmt::format(
      "numeric jacobi: samples={} seed={} tol={:g}\n  jac1 first={:.3e} second={:.3e} cyclic={:.3e}\n  max residual "
      "{:.3e}: {}\n",
      r.samples, r.seed, r.tol, r.jac1_first, r.jac1_second, r.cyclic, r.max_residual, r.pass ? "pass" : "fail");
}

}  // namespace chainlie
