#include "chainlie/laws.hpp"

#include <fmt/format.h>

#include <functional>
#include <random>

#include "chainlie/expr.hpp"
#include "chainlie/foliation.hpp"

namespace chainlie {

namespace {

std::vector<GenSymbol> pool(const ComplexSpec& spec, int count) {
  static const char* names[] = {"A", "B", "C", "D", "E", "F"};
  std::vector<GenSymbol> out;
  for (int i = 0; i < count; ++i) {
    Degree d = Degree::zeros(spec.arity);
    // cycle through degrees 0, 1, 2, 3 spread over the components
    int k = i % 4;
    if (spec.arity == 1) d[0] = k;
    else {
      d[0] = k % 2;
      d[1] = k / 2;
    }
    out.push_back(GenSymbol{names[i], d, {}, {}, false});
  }
  return out;
}

std::vector<Factor> factors_of(const std::vector<GenSymbol>& syms) {
  std::vector<Factor> out;
  for (const auto& s : syms) {
    out.push_back({s, false});
    out.push_back({s, true});
  }
  return out;
}

Expr word_expr(const std::vector<Factor>& w, Rational c = Rational(1)) {
  return Expr::from_terms({Term{c, w}});
}

void enumerate(const std::vector<Factor>& alphabet, int max_len, std::vector<std::vector<Factor>>& out) {
  std::vector<std::vector<Factor>> layer{{}};
  out.push_back({});
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<Factor>> next;
    for (const auto& w : layer)
      for (const auto& f : alphabet) {
        auto v = w;
        v.push_back(f);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
}

struct Tally {
  LawResult r;
  void check(bool ok, const std::function<std::string()>& what) {
    ++r.cases;
    if (ok) return;
    if (r.failures++ == 0) r.first_failure = what();
  }
};

int sign_degree(const Term& t, const ComplexSpec& spec) {
  int s = 0;
  for (const auto& f : t.factors) s += spec.sign_degree(factor_degree(f, spec));
  return s;
}

// delta(a b) against delta(a) b + (-1)^{|t|} t delta(b), term by term over a;
// every factor of a precedes every factor of b in the canonical order.
bool leibniz_holds(const Expr& a, const Expr& b, const ComplexSpec& spec) {
  Expr lhs = apply_delta(wedge(a, b), spec);
  Expr rhs = wedge(apply_delta(a, spec), b);
  for (const auto& t : a.terms()) {
    Expr te = Expr::from_terms({t});
    Expr part = wedge(te, apply_delta(b, spec));
    rhs = rhs + (sign_degree(t, spec) % 2 ? -part : part);
  }
  return lhs == normalize(rhs);
}

Expr random_expr(std::mt19937_64& rng, const std::vector<Factor>& alphabet, int max_terms, int max_factors) {
  std::vector<Term> terms;
  int nt = 1 + static_cast<int>(rng() % max_terms);
  for (int i = 0; i < nt; ++i) {
    Term t{Rational(static_cast<long long>(rng() % 7) - 3, 1 + static_cast<long long>(rng() % 3)), {}};
    int nf = static_cast<int>(rng() % (max_factors + 1));
    for (int j = 0; j < nf; ++j) t.factors.push_back(alphabet[rng() % alphabet.size()]);
    terms.push_back(std::move(t));
  }
  return Expr::from_terms(std::move(terms));
}

}  // namespace

bool LawReport::pass() const {
  for (const auto& r : results)
    if (!r.pass()) return false;
  return !results.empty();
}

std::size_t LawReport::cases() const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.cases;
  return n;
}

LawReport check_dga_laws(const ComplexSpec& spec, const LawOptions& opts) {
  const auto syms = pool(spec, 4);
  const auto alphabet = factors_of(syms);
  std::vector<std::vector<Factor>> words;
  enumerate(alphabet, opts.max_word, words);

  Tally idem{{"normalization idempotence"}}, anti{{"anticommutativity"}}, nil{{"nilpotency"}},
      leib{{"Leibniz"}}, dd{{"delta delta = 0"}}, lin{{"delta linearity"}};

  for (const auto& w : words) {
    Expr raw = word_expr(w);
    Expr n = normalize(raw);
    idem.check(normalize(n) == n, [&] { return render(raw); });
    dd.check(apply_delta(apply_delta(n, spec), spec).is_zero(), [&] { return render(raw); });
    if (n.terms().size() == 1) {
      const auto& canon = n.terms()[0].factors;
      for (std::size_t k = 0; k <= canon.size(); ++k) {
        Expr a = word_expr({canon.begin(), canon.begin() + static_cast<long>(k)});
        Expr b = word_expr({canon.begin() + static_cast<long>(k), canon.end()});
        leib.check(leibniz_holds(a, b, spec), [&] { return render(a) + " | " + render(b); });
      }
    }
  }
  for (const auto& u : words)
    for (const auto& v : words) {
      if (u.empty() || v.empty() || static_cast<int>(u.size() + v.size()) > opts.max_word) continue;
      Expr eu = word_expr(u), ev = word_expr(v);
      Expr uv = wedge(eu, ev), vu = wedge(ev, eu);
      bool odd = (u.size() * v.size()) % 2 == 1;
      anti.check(uv == (odd ? -vu : vu), [&] { return render(eu) + " , " + render(ev); });
    }
  for (const auto& w : words) {
    if (w.empty()) continue;
    Expr e = word_expr(w);
    nil.check(wedge(e, e).is_zero(), [&] { return render(e); });
  }

  // random expressions over six symbols
  std::mt19937_64 rng(opts.seed);
  const auto big = factors_of(pool(spec, 6));
  const std::vector<Factor> left(big.begin(), big.begin() + 6), right(big.begin() + 6, big.end());
  for (int i = 0; i < opts.random; ++i) {
    Expr e = random_expr(rng, big, 6, 5);
    Expr n = normalize(e);
    idem.check(normalize(n) == n, [&] { return render(e); });
    dd.check(apply_delta(apply_delta(n, spec), spec).is_zero(), [&] { return render(n); });
    Expr f = normalize(random_expr(rng, big, 4, 3));
    lin.check(apply_delta(n + f, spec) == apply_delta(n, spec) + apply_delta(f, spec),
             [&] { return render(n) + " ; " + render(f); });
    Expr a = normalize(random_expr(rng, left, 3, 3)), b = normalize(random_expr(rng, right, 3, 3));
    leib.check(leibniz_holds(a, b, spec), [&] { return render(a) + " | " + render(b); });
    std::vector<Factor> x, y;
    for (int k = 1 + static_cast<int>(rng() % 3); k > 0; --k) x.push_back(big[rng() % big.size()]);
    for (int k = 1 + static_cast<int>(rng() % 3); k > 0; --k) y.push_back(big[rng() % big.size()]);
    Expr ex = word_expr(x), ey = word_expr(y);
    bool odd = (x.size() * y.size()) % 2 == 1;
    anti.check(wedge(ex, ey) == (odd ? -wedge(ey, ex) : wedge(ey, ex)),
               [&] { return render(ex) + " , " + render(ey); });
    nil.check(wedge(ex, ex).is_zero(), [&] { return render(ex); });
  }

  LawReport rep;
  rep.suite = fmt::format("dga laws (arity {}, words <= {}, {} random, seed {})", spec.arity, opts.max_word,
                          opts.random, opts.seed);
  rep.results = {idem.r, anti.r, nil.r, leib.r, dd.r, lin.r};
  return rep;
}

LawReport check_foliation_laws(int pmax) {
  Tally dd{{"total delta squared = 0"}}, koszul{{"Leibniz, Koszul product sign"}},
      twisted{{"twisted Cech Leibniz, displayed product sign"}};
  for (int p = 0; p <= pmax; ++p)
    for (int q = 0; q <= 2; ++q) {
      auto c = cochain(cech_form("w", p, q));
      dd.check(rewrite_pullbacks(total_delta(total_delta(c))).is_zero(),
               [&] { return fmt::format("w{{{},{}}}", p, q); });
    }
  for (int pa = 0; pa <= 2; ++pa)
    for (int qa = 0; qa <= 2; ++qa)
      for (int pb = 0; pb <= 2; ++pb)
        for (int qb = 0; qb <= 2; ++qb) {
          auto a = cochain(cech_form("w", pa, qa)), b = cochain(cech_form("e", pb, qb));
          auto what = [&] { return fmt::format("w{{{},{}}} e{{{},{}}}", pa, qa, pb, qb); };
          Rational s((pa + qa) % 2 ? -1 : 1);
          auto lhs = rewrite_pullbacks(total_delta(bigraded_product(a, b, ProductSign::koszul)));
          auto rhs = rewrite_pullbacks(bigraded_product(total_delta(a), b, ProductSign::koszul) +
                                       s * bigraded_product(a, total_delta(b), ProductSign::koszul));
          koszul.check(lhs == rhs, what);
          auto tl = rewrite_pullbacks(cech_delta(bigraded_product(a, b)));
          auto tr = rewrite_pullbacks(Rational(pb % 2 ? -1 : 1) * bigraded_product(cech_delta(a), b) +
                                      bigraded_product(a, cech_delta(b)));
          twisted.check(tl == tr, what);
        }
  LawReport rep;
  rep.suite = fmt::format("foliation laws (p <= {})", pmax);
  rep.results = {dd.r, koszul.r, twisted.r};
  return rep;
}

std::string render(const LawReport& r) {
  std::string out = r.suite + ":\n";
  for (const auto& l : r.results) {
    out += fmt::format("  {}: {} cases, {} failures", l.law, l.cases, l.failures);
    if (l.failures) out += " (first: " + l.first_failure + ")";
    out += "\n";
  }
  out += r.pass() ? "pass\n" : "fail\n";
  return out;
}

}  // namespace chainlie
