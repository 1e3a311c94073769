#include "chainlie/foliation.hpp"

#include <fmt/format.h>

#include <map>

#include "chainlie/errors.hpp"

namespace chainlie {

namespace {

using Word = std::vector<std::string>;
using Substitution = std::map<std::string, Word>;

std::string slot_name(int i) { return "h" + std::to_string(i); }

Word substitute_word(const Word& w, const Substitution& sub) {
  Word out;
  for (const auto& a : w) {
    auto it = sub.find(a);
    if (it == sub.end()) out.push_back(a);
    else out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

Param with_word(const Param& p, Word w) { return Param{std::move(w), p.kind, p.component}; }

// Slots are renamed inside params and pullbacks; a pullback by a slot that
// becomes a composite stays composite until rewrite_pullbacks.
GenSymbol substitute(const GenSymbol& s, const Substitution& sub, const std::vector<Param>& prefix) {
  GenSymbol out = s;
  for (auto& p : out.params) p = with_word(p, substitute_word(p.word, sub));
  for (auto& p : out.pullbacks) p = with_word(p, substitute_word(p.word, sub));
  out.pullbacks.insert(out.pullbacks.begin(), prefix.begin(), prefix.end());
  return out;
}

Expr substitute(const Expr& e, const Substitution& sub, const std::vector<Param>& prefix = {}) {
  std::vector<Term> terms = e.terms();
  for (auto& t : terms)
    for (auto& f : t.factors) f.base = substitute(f.base, sub, prefix);
  return Expr::from_terms(std::move(terms));
}

Substitution shift_slots(int k, int by) {
  Substitution sub;
  for (int j = 1; j <= k; ++j) sub[slot_name(j)] = {slot_name(j + by)};
  return sub;
}

int de_rham_degree(const Term& t) {
  int q = 0;
  for (const auto& f : t.factors) q += f.base.degree[1];
  return q;
}

Cochain add(Cochain a, const Cochain& b, const Rational& s) {
  for (const auto& [k, e] : b.parts) a.parts[k] = a.part(k) + s * e;
  std::erase_if(a.parts, [](const auto& kv) { return kv.second.is_zero(); });
  return a;
}

std::string param_list(const std::vector<Param>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + ps[i].name();
  return s;
}

}  // namespace

Cochain Cochain::of(int cech, const Expr& e) {
  Cochain c;
  Expr n = normalize_ordered(e);
  if (!n.is_zero()) c.parts[cech] = n;
  return c;
}

Expr Cochain::part(int k) const {
  auto it = parts.find(k);
  return it == parts.end() ? Expr::zero() : it->second;
}

std::size_t Cochain::term_count() const {
  std::size_t n = 0;
  for (const auto& [k, e] : parts) n += e.terms().size();
  return n;
}

Param slot(int i) { return Param::holonomy(slot_name(i)); }

GenSymbol cech_form(const std::string& name, int p, int q) {
  if (p < 0 || q < 0) throw DomainViolation(fmt::format("form degree ({},{}) is negative", p, q));
  GenSymbol s{name, Degree{p, q}, {}, {}, false};
  for (int i = 1; i <= p; ++i) s.params.push_back(slot(i));
  return s;
}

Cochain cochain(const GenSymbol& form) {
  return Cochain::of(static_cast<int>(form.params.size()), Expr::symbol(form));
}

Expr cech_face(const Expr& e, int k, int i) {
  if (i < 0 || i > k + 1) throw ValidationError(fmt::format("face {} of a {}-cochain", i, k));
  if (i == 0) return substitute(e, shift_slots(k, 1), {slot(1)});
  if (i == k + 1) return e;
  Substitution sub;
  for (int j = 1; j <= k; ++j) {
    if (j < i) sub[slot_name(j)] = {slot_name(j)};
    else if (j == i) sub[slot_name(j)] = {slot_name(i + 1), slot_name(i)};
    else sub[slot_name(j)] = {slot_name(j + 1)};
  }
  return substitute(e, sub);
}

std::vector<Term> cech_delta_terms(const Expr& e, int k) {
  std::vector<Term> out;
  for (int i = 0; i <= k + 1; ++i) {
    Expr face = cech_face(e, k, i);
    for (auto t : face.terms()) {
      if (i % 2) t.coeff = -t.coeff;
      out.push_back(std::move(t));
    }
  }
  return out;
}

Cochain cech_delta(const Cochain& c) {
  Cochain out;
  for (const auto& [k, e] : c.parts) out = add(out, Cochain::of(k + 1, Expr::from_terms(cech_delta_terms(e, k))), Rational(1));
  return out;
}

Expr exterior_d(const Expr& e) {
  std::vector<Term> out;
  for (const auto& t : e.terms()) {
    int before = 0;
    for (std::size_t j = 0; j < t.factors.size(); ++j) {
      const GenSymbol& s = t.factors[j].base;
      if (!s.exterior_d) {
        Term n = t;
        n.factors[j].base.exterior_d = true;
        n.factors[j].base.degree[1] += 1;
        if (before % 2) n.coeff = -n.coeff;
        out.push_back(std::move(n));
      }
      before += s.degree[1];
    }
  }
  return normalize_ordered(Expr::from_terms(std::move(out)));
}

Cochain de_rham_d(const Cochain& c) {
  Cochain out;
  for (const auto& [k, e] : c.parts) {
    Expr d = exterior_d(e);
    out = add(out, Cochain::of(k, k % 2 ? -d : d), Rational(1));
  }
  return out;
}

Cochain total_delta(const Cochain& c) { return add(de_rham_d(c), cech_delta(c), Rational(1)); }

std::string to_string(ProductSign s) { return s == ProductSign::cech ? "cech" : "koszul"; }

ProductSign product_sign_from_string(const std::string& s) {
  if (s == "cech") return ProductSign::cech;
  if (s == "koszul") return ProductSign::koszul;
  throw ValidationError("unknown product sign '" + s + "' (expected cech or koszul)");
}

Cochain bigraded_product(const Cochain& a, const Cochain& b, ProductSign sign) {
  Cochain out;
  for (const auto& [n, ea] : a.parts) {
    std::vector<Param> chain;
    for (int i = 1; i <= n; ++i) chain.push_back(slot(i));
    int q = de_rham_degree(ea.terms().front());
    for (const auto& [n2, eb] : b.parts) {
      Expr shifted = normalize_ordered(substitute(eb, shift_slots(n2, n), chain));
      Expr prod = ordered_product(ea, shifted);
      int exponent = sign == ProductSign::cech ? n * n2 : q * n2;
      out = add(out, Cochain::of(n + n2, exponent % 2 ? -prod : prod), Rational(1));
    }
  }
  return out;
}

Degree bidegree(const Cochain& c) {
  if (c.is_zero()) throw ZeroExpr("the zero cochain has no bidegree");
  if (c.parts.size() > 1) throw Inhomogeneous("cochain has parts in several Cech degrees");
  const auto& [k, e] = *c.parts.begin();
  int q = de_rham_degree(e.terms().front());
  for (const auto& t : e.terms())
    if (de_rham_degree(t) != q) throw Inhomogeneous("terms of different de Rham degree");
  return Degree{k, q};
}

Cochain operator+(const Cochain& a, const Cochain& b) { return add(a, b, Rational(1)); }
Cochain operator-(const Cochain& a, const Cochain& b) { return add(a, b, Rational(-1)); }
Cochain operator*(const Rational& c, const Cochain& a) { return add(Cochain{}, a, c); }

GenSymbol rewrite_pullbacks(const GenSymbol& s) {
  GenSymbol out = s;
  out.pullbacks.clear();
  for (const auto& p : s.pullbacks)
    for (auto it = p.word.rbegin(); it != p.word.rend(); ++it) out.pullbacks.push_back(with_word(p, {*it}));
  return out;
}

Expr rewrite_pullbacks(const Expr& e) {
  std::vector<Term> terms = e.terms();
  for (auto& t : terms)
    for (auto& f : t.factors) f.base = rewrite_pullbacks(f.base);
  return normalize_ordered(Expr::from_terms(std::move(terms)));
}

Cochain rewrite_pullbacks(const Cochain& c) {
  Cochain out;
  for (const auto& [k, e] : c.parts) out = add(out, Cochain::of(k, rewrite_pullbacks(e)), Rational(1));
  return out;
}

std::string render_form(const GenSymbol& s) {
  std::string out;
  for (const auto& p : s.pullbacks) out += (p.composite() ? "(" + p.name() + ")" : p.name()) + "*";
  if (!s.pullbacks.empty()) out += ".";
  int q = s.degree.size() > 1 ? s.degree[1] - (s.exterior_d ? 1 : 0) : 0;
  out += fmt::format("{}{}{{{},{}}}", s.exterior_d ? "d" : "", s.name, s.degree.size() ? s.degree[0] : 0, q);
  if (!s.params.empty()) out += "(" + param_list(s.params) + ")";
  return out;
}

std::string render_form(const Term& t, bool leading) {
  Rational mag = t.coeff < Rational(0) ? -t.coeff : t.coeff;
  std::string s = leading ? (t.coeff < Rational(0) ? "- " : "") : (t.coeff < Rational(0) ? " - " : " + ");
  if (t.factors.empty()) return s + to_string(mag);
  if (mag != Rational(1)) s += to_string(mag) + " ";
  for (std::size_t i = 0; i < t.factors.size(); ++i) s += (i ? " . " : "") + render_form(t.factors[i].base);
  return s;
}

std::string render_form(const Expr& e) { return render_form_terms(e.terms()); }

std::string render_form_terms(const std::vector<Term>& terms) {
  if (terms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) s += render_form(terms[i], i == 0);
  return s;
}

RelationTree derive_gv_tree(const ComplexSpec& spec, const GenSymbol& chi, int depth_cap) {
  DeriveOptions o;
  o.depth_cap = depth_cap;
  return derive_tree(spec, chi, chi, o);
}

RelationTree derive_gv_tree(const ComplexSpec& spec, int n, int m, int depth_cap) {
  return derive_gv_tree(spec, seed_symbol(spec, "CHI", Degree{n, m}), depth_cap);
}

ExtractOptions gv_extract_options() {
  ExtractOptions o;
  o.rename = {{"CHI", "X+"}, {"d CHI", "X-"}, {"alpha_1_R", "H"}, {"d alpha_1_R", "H*"}};
  o.grades = {{"X+", 1}, {"X-", -1}, {"H", 0}, {"H*", 0}};
  o.symbols = {{"r_R", "r"}, {"t_R", "t"}};
  return o;
}

LiePresentation godbillon_vey(const ComplexSpec& spec, int n, int m) {
  if (n < 0 || m < 0) throw ValidationError(fmt::format("Godbillon-Vey seed degree ({},{}) is negative", n, m));
  auto tree = derive_gv_tree(spec, n, m);
  LiePresentation p = extract_presentation(tree, gv_extract_options());
  if (n == 1) p.annotations.push_back("Godbillon-Vey class [H . H*] = [alpha_1_R . d alpha_1_R]");
  return p;
}

bool DeltaSquaredReport::pass() const {
  for (const auto& r : rows)
    if (!r.zero) return false;
  return !rows.empty();
}

DeltaSquaredReport verify_delta_squared_zero(int pmax, int q) {
  if (pmax < 0) throw ValidationError("pmax must be non-negative");
  DeltaSquaredReport rep;
  rep.q = q;
  for (int p = 0; p <= pmax; ++p) {
    DeltaSquaredRow row;
    row.p = p;
    Cochain once = total_delta(cochain(cech_form("w", p, q)));
    row.first_terms = once.term_count();
    Cochain twice = total_delta(once);
    row.expanded_terms = twice.term_count();
    Cochain rest = rewrite_pullbacks(twice);
    row.residual_terms = rest.term_count();
    row.zero = rest.is_zero();
    rep.rows.push_back(row);
  }
  return rep;
}

std::string render(const DeltaSquaredReport& r) {
  std::string out = fmt::format("delta squared, generic w{{p,{}}}:\n", r.q);
  for (const auto& row : r.rows)
    out += fmt::format("  p={} D w: {} terms; D D w: {} terms, {} after (h2h1)* = h1*h2*: {}\n", row.p, row.first_terms,
                       row.expanded_terms, row.residual_terms, row.zero ? "zero" : "nonzero");
  out += r.pass() ? "pass\n" : "fail\n";
  return out;
}

}  // namespace chainlie
