#include <doctest.h>

#include <functional>
#include <set>

#include "chainlie/errors.hpp"
#include "chainlie/json_io.hpp"
#include "chainlie/relation_tree.hpp"
#include "oracles.hpp"

using namespace chainlie;

namespace {

std::vector<std::string> rendered(const RelationTree& t, bool include_pruned = false) {
  std::vector<std::string> out;
  for (const auto& n : t.nodes)
    if (include_pruned || n.status != NodeStatus::pruned) out.push_back(render(n.relation));
  return out;
}

RelationTree gv_tree(int n, int m, int cap = 6) {
  auto spec = ComplexSpec::cech_de_rham();
  auto chi = seed_symbol(spec, "CHI", Degree{n, m});
  DeriveOptions o;
  o.depth_cap = cap;
  return derive_tree(spec, chi, chi, o);
}

std::vector<RelationTree> sample_trees() {
  std::vector<RelationTree> out;
  auto chain = ComplexSpec::chain();
  DeriveOptions o;
  o.depth_cap = 4;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      out.push_back(derive_tree(chain, seed_symbol(chain, "CHI", Degree{a}), seed_symbol(chain, "PHI", Degree{b}, "g"), o));
  auto bi = ComplexSpec::cech_de_rham();
  o.depth_cap = 3;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      Degree chi{a, b}, phi{b, a};
      out.push_back(derive_tree(bi, seed_symbol(bi, "CHI", chi), seed_symbol(bi, "PHI", phi, "g", "u"), o));
      out.push_back(derive_tree(bi, seed_symbol(bi, "CHI", chi), seed_symbol(bi, "CHI", chi), o));
    }
  return out;
}

}  // namespace

TEST_SUITE("relation_tree") {

TEST_CASE("Godbillon-Vey seed gives the four-relation system") {
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 2; ++m) {
      auto t = gv_tree(n, m);
      std::string sign = n % 2 ? " - " : " + ";
      std::vector<std::string> expected{
          "CHI . d CHI = 0",
          "d CHI . d CHI = 0",
          "d CHI = CHI . alpha_1_R",
          "0 = d CHI . alpha_1_R" + sign + "CHI . d alpha_1_R",
      };
      CHECK(rendered(t) == expected);
      CHECK(t.find("", NodeRole::derived)->status == NodeStatus::collapsed_trivial);
      const RelationNode* left = t.existence("L");
      REQUIRE(left);
      CHECK(left->status == NodeStatus::pruned);
      CHECK(left->violated == "L1");
      const RelationNode* right = t.existence("R");
      REQUIRE(right);
      CHECK(right->introduced->degree == Degree{1, 1});
      for (const auto& w : right->witnesses) {
        CHECK(w.alpha == Degree{w.overlap.r() + 1, w.overlap.t() + 1});
        CHECK(w.overlap.r() <= n);
      }
      CHECK(t.nodes.size() == 5);
    }
}

TEST_CASE("Godbillon-Vey tree is the same at depth cap 1") {
  auto full = gv_tree(1, 1);
  auto capped = gv_tree(1, 1, 1);
  CHECK(render_tree(full).substr(render_tree(full).find('\n')) ==
        render_tree(capped).substr(render_tree(capped).find('\n')));
  CHECK(full.nodes == capped.nodes);
}

TEST_CASE("phi one above chi opens both branches at the root") {
  auto chain = ComplexSpec::chain();
  for (int n0 = -2; n0 <= 3; ++n0) {
    Degree chi{n0}, phi{n0 + 1};
    auto t = derive_tree(chain, seed_symbol(chain, "CHI", chi), seed_symbol(chain, "PHI", phi, "g"));
    CHECK(t.existence("L")->status == NodeStatus::active);
    CHECK(t.existence("R")->status == NodeStatus::active);
    CHECK_FALSE(oracle::lattice(chain, CompatKind::L1, chi, phi).empty());
    CHECK_FALSE(oracle::lattice(chain, CompatKind::R1, chi, phi).empty());
  }
}

TEST_CASE("depth cap 1 stops after the first existence pair") {
  auto chain = ComplexSpec::chain();
  DeriveOptions o;
  o.depth_cap = 1;
  auto t = derive_tree(chain, seed_symbol(chain, "CHI", Degree{0}), seed_symbol(chain, "PHI", Degree{1}, "g"), o);
  std::set<std::string> existence;
  for (const auto& n : t.nodes) {
    CHECK(n.depth() <= 1);
    if (n.role == NodeRole::existence) existence.insert(n.path);
  }
  CHECK(existence == std::set<std::string>{"L", "R"});
  CHECK(t.find("", NodeRole::orthogonality)->relation == Relation{{RelTerm{Rational(1), {{t.phi, false}, {t.chi, true}}, 0}}, {}});
  CHECK(render(t.find("", NodeRole::orthogonality)->relation) == "PHI . d CHI = 0");
}

TEST_CASE("seed errors") {
  auto chain = ComplexSpec::chain();
  auto chi = seed_symbol(chain, "CHI", Degree{1});
  CHECK_THROWS_AS(derive_tree(chain, Expr::zero(), Expr::symbol(chi)), SeedDegenerate);
  CHECK_THROWS_AS(derive_tree(chain, Expr::symbol(chi), Expr::zero()), SeedDegenerate);
  CHECK_THROWS_AS(derive_tree(chain, GenSymbol{"", Degree{1}, {}, {}, false}, chi), SeedDegenerate);
  CHECK_THROWS_AS(derive_tree(chain, GenSymbol{"X", Degree{1, 1}, {}, {}, false}, chi), DegreeMismatch);
  CHECK_NOTHROW(derive_tree(chain, Expr::symbol(chi), Expr::symbol(chi)));
}

TEST_CASE("active relations are homogeneous on both sides") {
  for (const auto& t : sample_trees())
    for (const auto& n : t.nodes) {
      if (n.status != NodeStatus::active) continue;
      Expr l = side_expr(n.relation.lhs), r = side_expr(n.relation.rhs);
      if (!l.is_zero() && !r.is_zero()) CHECK(degree_of(l, t.spec) == degree_of(r, t.spec));
      if (n.role == NodeRole::existence) {
        const auto& c = *n.compat;
        CHECK(check_compat(t.spec, c.kind, c.outer, c.inner, c.alpha, c.overlap));
      }
    }
}

TEST_CASE("each consequence is the differential of its parent relation") {
  for (const auto& t : sample_trees()) {
    const RelationNode* root = t.find("", NodeRole::orthogonality);
    const RelationNode* derived = t.find("", NodeRole::derived);
    CHECK(side_expr(derived->relation.lhs) == apply_delta(side_expr(root->relation.lhs), t.spec));
    for (const auto& n : t.nodes) {
      if (n.role != NodeRole::consequence) continue;
      const RelationNode* parent = t.existence(n.path);
      REQUIRE(parent);
      CHECK(side_expr(n.relation.lhs) == apply_delta(side_expr(parent->relation.lhs), t.spec));
      CHECK(side_expr(n.relation.rhs) == apply_delta(side_expr(parent->relation.rhs), t.spec));
    }
  }
}

TEST_CASE("symbolic signs agree with the concrete coefficients") {
  for (const auto& t : sample_trees())
    for (const auto& n : t.nodes)
      for (const auto* side : {&n.relation.lhs, &n.relation.rhs})
        for (const auto& term : *side) {
          bool negative = term.sign.eval(t.bindings) % 2 != 0;
          CHECK(negative == (term.coeff < Rational(0)));
        }
}

TEST_CASE("pruned nodes have no admissible overlap") {
  int pruned = 0;
  for (const auto& t : sample_trees())
    for (const auto& n : t.nodes) {
      if (n.status != NodeStatus::pruned || n.role != NodeRole::existence) continue;
      ++pruned;
      CHECK(oracle::lattice(t.spec, n.compat->kind, n.compat->outer, n.compat->inner).empty());
    }
  CHECK(pruned > 0);
}

TEST_CASE("non-minimal witness shares parameters with its partner") {
  auto spec = ComplexSpec::cech_de_rham();
  auto chi = seed_symbol(spec, "CHI", Degree{2, 1});
  DeriveOptions o;
  o.witness = 3;  // (2,2)/(1,1)
  auto t = derive_tree(spec, chi, chi, o);
  const RelationNode* r = t.existence("R");
  REQUIRE(r->status == NodeStatus::active);
  CHECK(r->compat->overlap.counts == Degree{1, 1});
  CHECK(r->introduced->params.front() == chi.params[1]);
  CHECK(t.bindings.at("r_R") == 1);
  CHECK(overlap_between({Factor{chi, false}}, {Factor{*r->introduced, false}}, 2).counts == Degree{1, 1});
}

TEST_CASE("dependence marks") {
  auto gv = mark_dependence(gv_tree(1, 1));
  CHECK(gv.marks.empty());
  CHECK(independent_paths(gv) == std::vector<std::string>{"R"});

  auto chain = ComplexSpec::chain();
  auto both = mark_dependence(
      derive_tree(chain, seed_symbol(chain, "CHI", Degree{0}), seed_symbol(chain, "PHI", Degree{1}, "g")));
  REQUIRE_FALSE(both.marks.empty());
  CHECK(both.marks.front() == DependencyMark{"L", "R", "level-1"});

  DeriveOptions o;
  o.depth_cap = 3;
  auto sym = mark_dependence(
      derive_tree(chain, seed_symbol(chain, "CHI", Degree{0}), seed_symbol(chain, "PHI", Degree{0}, "g"), o));
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& m : sym.marks) pairs.insert({m.dependent, m.partner});
  std::set<std::pair<std::string, std::string>> expected{{"LL", "RR"}, {"LLL", "RRL"}, {"LLR", "RRR"}};
  CHECK(pairs == expected);
  CHECK(unpaired_paths(sym) == std::vector<std::string>{"R"});
}

TEST_CASE("independent paths agree with filtering every path") {
  auto chain = ComplexSpec::chain();
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      DeriveOptions o;
      o.depth_cap = 4;
      auto t = mark_dependence(
          derive_tree(chain, seed_symbol(chain, "CHI", Degree{a}), seed_symbol(chain, "PHI", Degree{b}, "g"), o));
      std::set<std::string> marked;
      for (const auto& m : t.marks) marked.insert(m.dependent);

      // Every word over {L, R} of length <= 4; a word is usable when each
      // of its existence ancestors is an active, unmarked element.
      std::vector<std::string> words{""};
      std::function<void(std::string)> grow = [&](std::string w) {
        if (w.size() == 4) return;
        for (char c : {'L', 'R'}) {
          words.push_back(w + c);
          grow(w + c);
        }
      };
      grow("");
      auto usable = [&](const std::string& w) {
        if (w.empty()) return true;
        for (const auto& p : existence_chain(w)) {
          const RelationNode* e = t.existence(p);
          if (!e || e->status != NodeStatus::active || marked.count(p)) return false;
        }
        return true;
      };
      std::vector<std::string> expected;
      for (const auto& w : words) {
        if (!usable(w)) continue;
        bool maximal = true;
        for (const auto& v : words) {
          if (v == w || !usable(v) || v.empty()) continue;
          auto chain_v = existence_chain(v);
          if (w.empty() || std::find(chain_v.begin(), chain_v.end(), w) != chain_v.end()) maximal = false;
        }
        if (maximal) expected.push_back(w);
      }
      std::sort(expected.begin(), expected.end());
      CHECK(independent_paths(t) == expected);
    }
}

TEST_CASE("inactive seed relation has no independent path") {
  auto t = mark_dependence(gv_tree(1, 1));
  for (auto& n : t.nodes) n.status = NodeStatus::pruned;
  CHECK(independent_paths(t).empty());
}

TEST_CASE("derivation is deterministic and the document round-trips") {
  for (const auto& t : sample_trees()) {
    auto again = derive_tree(t.spec, t.chi, t.phi, DeriveOptions{t.depth_cap});
    CHECK(render_tree(again) == render_tree(t));
    auto marked = mark_dependence(t);
    Json doc = to_json(marked);
    CHECK(tree_from_json(Json::parse(doc.dump())) == marked);
    CHECK(to_json(tree_from_json(doc)).dump() == doc.dump());
  }
}

}  // TEST_SUITE
