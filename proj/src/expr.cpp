#include "chainlie/expr.hpp"

#include <map>
#include <set>

#include "chainlie/errors.hpp"

namespace chainlie {

std::string to_string(const Rational& q) {
  std::string s = std::to_string(q.numerator());
  if (q.denominator() != 1) s += "/" + std::to_string(q.denominator());
  return s;
}

std::string Param::name() const {
  std::string s;
  for (const auto& letter : word) s += letter;
  return s;
}

std::strong_ordering operator<=>(const Factor& a, const Factor& b) {
  if (auto c = a.base.name <=> b.base.name; c != 0) return c;
  if (auto c = a.base.params <=> b.base.params; c != 0) return c;
  if (auto c = a.base.pullbacks <=> b.base.pullbacks; c != 0) return c;
  if (auto c = a.delta_applied <=> b.delta_applied; c != 0) return c;
  if (auto c = a.base.exterior_d <=> b.base.exterior_d; c != 0) return c;
  return a.base.degree <=> b.base.degree;
}

Expr Expr::scalar(Rational c) {
  if (c == Rational(0)) return {};
  return from_terms({Term{c, {}}});
}

Expr Expr::symbol(const GenSymbol& s, bool delta_applied) {
  return factor(Factor{s, delta_applied});
}

Expr Expr::factor(const Factor& f) { return from_terms({Term{Rational(1), {f}}}); }

Expr Expr::from_terms(std::vector<Term> terms) {
  Expr e;
  e.terms_ = std::move(terms);
  return e;
}

namespace {

using Collector = std::map<std::vector<Factor>, Rational>;

Expr collect(const Collector& acc) {
  std::vector<Term> out;
  out.reserve(acc.size());
  for (const auto& [factors, c] : acc) {
    if (c != Rational(0)) out.push_back(Term{c, factors});
  }
  return Expr::from_terms(std::move(out));
}

}  // namespace

Expr normalize(const Expr& e) {
  Collector acc;
  for (const auto& t : e.terms()) {
    if (t.coeff == Rational(0)) continue;
    std::vector<Factor> f = t.factors;
    bool negate = false;
    // Bubble sort so every adjacent transposition is counted.
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = 0; j + 1 < f.size() - i; ++j) {
        if (f[j + 1] < f[j]) {
          std::swap(f[j], f[j + 1]);
          negate = !negate;
        }
      }
    }
    bool repeated = false;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
      if (f[i] == f[i + 1]) {
        repeated = true;
        break;
      }
    }
    if (repeated) continue;
    acc[std::move(f)] += negate ? -t.coeff : t.coeff;
  }
  return collect(acc);
}

Expr normalize_ordered(const Expr& e) {
  Collector acc;
  for (const auto& t : e.terms()) {
    if (t.coeff != Rational(0)) acc[t.factors] += t.coeff;
  }
  return collect(acc);
}

namespace {

std::vector<Term> concat(const Expr& a, const Expr& b) {
  std::vector<Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      Term t{ta.coeff * tb.coeff, ta.factors};
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      out.push_back(std::move(t));
    }
  }
  return out;
}

Expr combine(const Expr& a, const Expr& b, const Rational& sb) {
  std::vector<Term> all = a.terms();
  for (auto t : b.terms()) {
    t.coeff *= sb;
    all.push_back(std::move(t));
  }
  // Operands are already canonical (exterior or ordered), so collecting
  // like terms is enough and keeps ordered products intact.
  return normalize_ordered(Expr::from_terms(std::move(all)));
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) { return combine(a, b, Rational(1)); }
Expr operator-(const Expr& a, const Expr& b) { return combine(a, b, Rational(-1)); }
Expr operator-(const Expr& a) { return Rational(-1) * a; }

Expr operator*(const Rational& c, const Expr& e) {
  if (c == Rational(0)) return Expr::zero();
  std::vector<Term> out = e.terms();
  for (auto& t : out) t.coeff *= c;
  return Expr::from_terms(std::move(out));
}

Expr wedge(const Expr& a, const Expr& b) { return normalize(Expr::from_terms(concat(a, b))); }

Expr wedge_strict(const Expr& a, const Expr& b, const ComplexSpec& spec) {
  Degree da, db;
  try {
    da = degree_of(a, spec);
    db = degree_of(b, spec);
  } catch (const Error& e) {
    throw DegreeMismatch(std::string("wedge operands must be homogeneous: ") + e.what());
  }
  Expr raw = Expr::from_terms(concat(a, b));
  for (const auto& t : raw.terms()) {
    Degree d = term_degree(t, spec);
    if (!spec.in_domain(d)) {
      throw DegreeMismatch("product of " + da.to_string() + " and " + db.to_string() +
                           " leaves the index domain at " + d.to_string());
    }
  }
  return normalize(raw);
}

Expr ordered_product(const Expr& a, const Expr& b) {
  return normalize_ordered(Expr::from_terms(concat(a, b)));
}

Degree factor_degree(const Factor& f, const ComplexSpec& spec) {
  if (static_cast<int>(f.base.degree.size()) != spec.arity) {
    throw DegreeMismatch("symbol " + f.base.name + " has degree " + f.base.degree.to_string() +
                         " but the spec has arity " + std::to_string(spec.arity));
  }
  return f.delta_applied ? f.base.degree + spec.shift : f.base.degree;
}

Degree term_degree(const Term& t, const ComplexSpec& spec) {
  Degree d = Degree::zeros(spec.arity);
  std::set<Param> all;
  for (const auto& f : t.factors) {
    d = d + factor_degree(f, spec);
    for (const auto& p : f.base.params) {
      if (p.component < 0 || p.component >= spec.arity) {
        throw DegreeMismatch("parameter " + p.name() + " counts against a missing component");
      }
      d[p.component] -= 1;
      all.insert(p);
    }
  }
  for (const auto& p : all) d[p.component] += 1;
  return d;
}

Degree degree_of(const Expr& e, const ComplexSpec& spec) {
  if (e.is_zero()) throw ZeroExpr("degree of the zero expression is undefined");
  Degree d = term_degree(e.terms().front(), spec);
  for (const auto& t : e.terms()) {
    Degree dt = term_degree(t, spec);
    if (dt != d) {
      throw Inhomogeneous("terms of degree " + d.to_string() + " and " + dt.to_string());
    }
  }
  return d;
}

OverlapRecord overlap_between(const std::vector<Factor>& a, const std::vector<Factor>& b,
                              int arity) {
  std::set<Param> pa, pb;
  for (const auto& f : a) pa.insert(f.base.params.begin(), f.base.params.end());
  for (const auto& f : b) pb.insert(f.base.params.begin(), f.base.params.end());
  OverlapRecord ov{Degree::zeros(arity)};
  for (const auto& p : pa) {
    if (pb.count(p) && p.component >= 0 && p.component < arity) ov.counts[p.component] += 1;
  }
  return ov;
}

Expr apply_delta(const Expr& e, const ComplexSpec& spec) {
  std::vector<Term> out;
  for (const auto& t : e.terms()) {
    int parity = 0;
    for (std::size_t j = 0; j < t.factors.size(); ++j) {
      const Factor& f = t.factors[j];
      if (!f.delta_applied) {
        Term dt = t;
        dt.factors[j].delta_applied = true;
        if (parity % 2 != 0) dt.coeff = -dt.coeff;
        out.push_back(std::move(dt));
      }
      parity += spec.sign_degree(factor_degree(f, spec));
    }
  }
  return normalize(Expr::from_terms(std::move(out)));
}

std::string render(const Factor& f) { return (f.delta_applied ? "d " : "") + f.base.name; }

std::string render(const Term& t, bool leading) {
  Rational mag = t.coeff < Rational(0) ? -t.coeff : t.coeff;
  std::string s;
  if (leading) {
    if (t.coeff < Rational(0)) s += "- ";
  } else {
    s += t.coeff < Rational(0) ? " - " : " + ";
  }
  if (t.factors.empty()) return s + to_string(mag);
  if (mag != Rational(1)) s += to_string(mag) + " ";
  for (std::size_t i = 0; i < t.factors.size(); ++i) {
    if (i) s += " . ";
    s += render(t.factors[i]);
  }
  return s;
}

std::string render(const Expr& e) {
  if (e.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < e.terms().size(); ++i) s += render(e.terms()[i], i == 0);
  return s;
}

}  // namespace chainlie
