#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "chainlie/errors.hpp"
#include "chainlie/foliation.hpp"

using namespace chainlie;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(CHAINLIE_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Cochain form(const char* name, int p, int q) { return cochain(cech_form(name, p, q)); }

Param word(std::vector<std::string> w) { return Param{std::move(w), ParamKind::holonomy, 0}; }

// One application of (ab)* = b*a* at chain position i; the oracle for the
// confluence check applies these in random order.
bool rewrite_step(GenSymbol& s, std::size_t i) {
  if (i >= s.pullbacks.size() || !s.pullbacks[i].composite()) return false;
  Param p = s.pullbacks[i];
  Param first = word({p.word.begin(), p.word.end() - 1});
  Param last = word({p.word.back()});
  s.pullbacks[i] = last;
  s.pullbacks.insert(s.pullbacks.begin() + static_cast<long>(i) + 1, first);
  return true;
}

Expr random_pullback_expr(std::mt19937_64& rng) {
  const char* names[] = {"w", "e"};
  std::vector<Term> terms;
  int count = 1 + static_cast<int>(rng() % 30);
  for (int t = 0; t < count; ++t) {
    Term term{Rational(static_cast<long long>(rng() % 5) - 2), {}};
    int nf = 1 + static_cast<int>(rng() % 2);
    for (int f = 0; f < nf; ++f) {
      GenSymbol s = cech_form(names[rng() % 2], static_cast<int>(rng() % 2), static_cast<int>(rng() % 2));
      int chain = static_cast<int>(rng() % 3);
      for (int c = 0; c < chain; ++c) {
        std::vector<std::string> w;
        int len = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < len; ++k) w.push_back("h" + std::to_string(1 + rng() % 3));
        s.pullbacks.push_back(word(w));
      }
      term.factors.push_back({s, false});
    }
    terms.push_back(term);
  }
  return Expr::from_terms(terms);
}

}  // namespace

TEST_SUITE("foliation") {

TEST_CASE("Cech differential face lists in low degree") {
  auto w0 = Expr::symbol(cech_form("w", 0, 2));
  CHECK(render_form_terms(cech_delta_terms(w0, 0)) == "h1*.w{0,2} - w{0,2}");
  auto w1 = Expr::symbol(cech_form("w", 1, 2));
  CHECK(render_form_terms(cech_delta_terms(w1, 1)) == "h1*.w{1,2}(h2) - w{1,2}(h2h1) + w{1,2}(h1)");
  auto w2 = Expr::symbol(cech_form("w", 2, 0));
  CHECK(render_form_terms(cech_delta_terms(w2, 2)) ==
        "h1*.w{2,0}(h2,h3) - w{2,0}(h2h1,h3) + w{2,0}(h1,h3h2) - w{2,0}(h1,h2)");
}

TEST_CASE("Cech differential has p+2 faces") {
  for (int p = 0; p <= 6; ++p) {
    auto w = Expr::symbol(cech_form("w", p, 1));
    CHECK(cech_delta_terms(w, p).size() == static_cast<std::size_t>(p + 2));
    CHECK(bidegree(cech_delta(form("w", p, 1))) == Degree{p + 1, 1});
  }
}

TEST_CASE("delta squared needs the pullback composition rule") {
  auto twice = cech_delta(cech_delta(form("w", 0, 2)));
  CHECK(render_form(twice.part(2)) == "h1*h2*.w{0,2} - (h2h1)*.w{0,2}");
  CHECK(rewrite_pullbacks(twice).is_zero());
  for (int p = 0; p <= 3; ++p) {
    auto c = form("w", p, 1);
    CHECK(rewrite_pullbacks(cech_delta(cech_delta(c))).is_zero());
  }
}

TEST_CASE("verify_delta_squared_zero") {
  auto rep = verify_delta_squared_zero(3, 2);
  CHECK(rep.pass());
  REQUIRE(rep.rows.size() == 4);
  for (const auto& row : rep.rows) {
    CHECK(row.zero);
    CHECK(row.first_terms == static_cast<std::size_t>(row.p + 3));
  }
  CHECK(render(rep) == render(verify_delta_squared_zero(3, 2)));
  CHECK(verify_delta_squared_zero(0).rows.size() == 1);
  CHECK_THROWS_AS(verify_delta_squared_zero(-1), ValidationError);
}

TEST_CASE("de Rham differential") {
  auto even = de_rham_d(form("w", 2, 1));
  CHECK(render_form(even.part(2)) == "dw{2,1}(h1,h2)");
  CHECK(bidegree(even) == Degree{2, 2});
  auto odd = de_rham_d(form("w", 1, 1));
  CHECK(render_form(odd.part(1)) == "- dw{1,1}(h1)");
  CHECK(de_rham_d(de_rham_d(form("w", 1, 3))).is_zero());
  // graded Leibniz over the de Rham degree of the left factor
  auto a = Expr::symbol(cech_form("a", 0, 1)), b = Expr::symbol(cech_form("b", 0, 2));
  CHECK(render_form(exterior_d(ordered_product(a, b))) == "- a{0,1} . db{0,2} + da{0,1} . b{0,2}");
}

TEST_CASE("total differential") {
  auto w = form("w", 0, 3);
  auto D = total_delta(w);
  CHECK(render_form(D.part(0)) == "dw{0,3}");
  CHECK(render_form_terms(cech_delta_terms(w.part(0), 0)) == "h1*.w{0,3} - w{0,3}");
  CHECK(D.part(1) == cech_delta(w).part(1));
  auto v = form("v", 1, 0);
  CHECK(total_delta(w + v) == total_delta(w) + total_delta(v));
  for (int p = 0; p <= 3; ++p) CHECK(rewrite_pullbacks(total_delta(total_delta(form("w", p, 2)))).is_zero());
}

TEST_CASE("bigraded product") {
  auto w = form("w", 1, 0), e = form("e", 1, 0);
  CHECK(render_form(bigraded_product(w, e).part(2)) == "- w{1,0}(h1) . h1*.e{1,0}(h2)");
  CHECK(render_form(bigraded_product(form("w", 0, 1), form("e", 2, 0)).part(2)) == "w{0,1} . e{2,0}(h1,h2)");
  CHECK(render_form(bigraded_product(form("w", 2, 0), form("e", 0, 1)).part(2)) ==
        "w{2,0}(h1,h2) . h1*h2*.e{0,1}");
  CHECK(render_form(bigraded_product(form("w", 2, 1), form("e", 1, 0)).part(3)) ==
        "w{2,1}(h1,h2) . h1*h2*.e{1,0}(h3)");
}

TEST_CASE("bigraded product bidegree is additive") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    int p1 = static_cast<int>(rng() % 4), q1 = static_cast<int>(rng() % 3);
    int p2 = static_cast<int>(rng() % 4), q2 = static_cast<int>(rng() % 3);
    for (auto sign : {ProductSign::cech, ProductSign::koszul})
      CHECK(bidegree(bigraded_product(form("w", p1, q1), form("e", p2, q2), sign)) == Degree{p1 + p2, q1 + q2});
  }
}

TEST_CASE("bigraded product is associative") {
  for (auto sign : {ProductSign::cech, ProductSign::koszul})
    for (int p1 = 0; p1 <= 2; ++p1)
      for (int p2 = 0; p2 <= 2; ++p2)
        for (int p3 = 0; p3 <= 1; ++p3) {
          auto a = form("a", p1, 1), b = form("b", p2, 0), c = form("c", p3, 1);
          CHECK(rewrite_pullbacks(bigraded_product(bigraded_product(a, b, sign), c, sign)) ==
                rewrite_pullbacks(bigraded_product(a, bigraded_product(b, c, sign), sign)));
        }
}

TEST_CASE("Leibniz rule for the total differential") {
  for (int pa = 0; pa <= 2; ++pa)
    for (int qa = 0; qa <= 2; ++qa)
      for (int pb = 0; pb <= 2; ++pb)
        for (int qb = 0; qb <= 1; ++qb) {
          auto a = form("w", pa, qa), b = form("e", pb, qb);
          Rational s((pa + qa) % 2 ? -1 : 1);
          auto lhs = rewrite_pullbacks(total_delta(bigraded_product(a, b, ProductSign::koszul)));
          auto rhs = rewrite_pullbacks(bigraded_product(total_delta(a), b, ProductSign::koszul) +
                                       s * bigraded_product(a, total_delta(b), ProductSign::koszul));
          CHECK(lhs == rhs);

          // The Cech-only sign satisfies delta(ab) = (-1)^{n'} delta(a) b + a delta(b).
          auto tl = rewrite_pullbacks(cech_delta(bigraded_product(a, b)));
          auto tr = rewrite_pullbacks(Rational(pb % 2 ? -1 : 1) * bigraded_product(cech_delta(a), b) +
                                      bigraded_product(a, cech_delta(b)));
          CHECK(tl == tr);
        }

  // (1,0) x (1,0) under the Cech-only sign is off by the twist.
  auto a = form("w", 1, 0), b = form("e", 1, 0);
  auto lhs = rewrite_pullbacks(total_delta(bigraded_product(a, b)));
  auto rhs = rewrite_pullbacks(bigraded_product(total_delta(a), b) - bigraded_product(a, total_delta(b)));
  CHECK_FALSE(lhs == rhs);
}

TEST_CASE("pullback rewrite is confluent with normalization") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    Expr e = random_pullback_expr(rng);
    Expr expect = rewrite_pullbacks(e);
    CHECK(rewrite_pullbacks(normalize_ordered(e)) == expect);

    std::vector<Term> terms = e.terms();
    std::shuffle(terms.begin(), terms.end(), rng);
    for (auto& t : terms)
      for (auto& f : t.factors) {
        while (true) {
          std::vector<std::size_t> open;
          for (std::size_t i = 0; i < f.base.pullbacks.size(); ++i)
            if (f.base.pullbacks[i].composite()) open.push_back(i);
          if (open.empty()) break;
          rewrite_step(f.base, open[rng() % open.size()]);
        }
      }
    CHECK(normalize_ordered(Expr::from_terms(terms)) == expect);
  }
}

TEST_CASE("form rendering grammar") {
  GenSymbol s = cech_form("w", 2, 1);
  s.params[1] = word({"h2", "h1"});
  s.pullbacks = {slot(1), slot(2)};
  CHECK(render_form(s) == "h1*h2*.w{2,1}(h1,h2h1)");
  CHECK(render_form(Expr::zero()) == "0");
  CHECK_THROWS_AS(cech_form("w", -1, 0), DomainViolation);
}

TEST_CASE("Godbillon-Vey tree") {
  auto spec = ComplexSpec::cech_de_rham();
  for (int m = 0; m <= 2; ++m) {
    auto t = derive_gv_tree(spec, 1, m);
    auto chi = seed_symbol(spec, "CHI", Degree{1, m});
    CHECK(t == derive_tree(spec, chi, chi));
    const auto* r = t.existence("R");
    REQUIRE(r != nullptr);
    std::set<int> overlaps;
    for (const auto& w : r->witnesses) overlaps.insert(w.overlap.counts[0]);
    CHECK(overlaps == std::set<int>{0, 1});
    const auto* l = t.find("L", NodeRole::existence);
    REQUIRE(l != nullptr);
    CHECK(l->status == NodeStatus::pruned);
    CHECK(t.find("", NodeRole::derived)->status == NodeStatus::collapsed_trivial);
    auto capped = derive_gv_tree(spec, 1, m, 1);
    CHECK(capped.nodes == t.nodes);
  }
  CHECK_THROWS_AS(derive_gv_tree(spec, GenSymbol{"", Degree{1, 1}, {}, {}, false}), SeedDegenerate);
}

TEST_CASE("godbillon_vey presentation") {
  auto spec = ComplexSpec::cech_de_rham();
  auto p = godbillon_vey(spec, 1, 2);
  CHECK(render_presentation(p) == read_golden("gv_demo.txt"));
  REQUIRE(p.annotations.size() == 1);
  for (int n = 0; n <= 3; ++n) {
    auto base = godbillon_vey(spec, n, 0);
    for (int m = 1; m <= 3; ++m) {
      auto other = godbillon_vey(spec, n, m);
      CHECK(render_presentation(other) == render_presentation(base));
      CHECK(other.brackets == base.brackets);
      CHECK(other.mixed == base.mixed);
      CHECK(other.kernels == base.kernels);
    }
    auto without_note = base;
    without_note.annotations.clear();
    CHECK(render_presentation(without_note) == read_golden("gv_presentation.txt"));
    auto rep = check_jacobi_symbolic(base, sample_triples(base, 400, 1));
    CHECK(rep.pass());
  }
  CHECK_THROWS_AS(godbillon_vey(spec, -1, 0), ValidationError);
}

}  // TEST_SUITE
