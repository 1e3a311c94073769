#include "chainlie/relation_tree.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <set>

#include "chainlie/errors.hpp"

namespace chainlie {

Expr side_expr(const std::vector<RelTerm>& side) {
  std::vector<Term> raw;
  raw.reserve(side.size());
  for (const auto& t : side) raw.push_back({t.coeff, t.factors});
  return normalize(Expr::from_terms(std::move(raw)));
}

namespace {

std::string render_side(const std::vector<RelTerm>& side) {
  if (side.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < side.size(); ++i) s += render(Term{side[i].coeff, side[i].factors}, i == 0);
  return s;
}

std::string render_positive(const RelTerm& t) {
  Term u{t.coeff < Rational(0) ? -t.coeff : t.coeff, t.factors};
  return render(u, true);
}

}  // namespace

std::string render(const Relation& r) {
  if (r.lhs.size() == 1 && r.rhs.empty()) return render_positive(r.lhs[0]) + " = 0";
  if (r.rhs.size() == 1 && r.lhs.empty()) return render_positive(r.rhs[0]) + " = 0";
  return render_side(r.lhs) + " = " + render_side(r.rhs);
}

std::string to_string(NodeRole r) {
  switch (r) {
    case NodeRole::orthogonality: return "orthogonality";
    case NodeRole::derived: return "derived";
    case NodeRole::existence: return "existence";
    case NodeRole::consequence: return "consequence";
  }
  return "?";
}

std::string to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::active: return "active";
    case NodeStatus::pruned: return "pruned";
    case NodeStatus::collapsed_trivial: return "collapsed-trivial";
  }
  return "?";
}

NodeRole node_role_from_string(const std::string& s) {
  for (auto r : {NodeRole::orthogonality, NodeRole::derived, NodeRole::existence, NodeRole::consequence})
    if (to_string(r) == s) return r;
  throw ValidationError("unknown node role '" + s + "'");
}

NodeStatus node_status_from_string(const std::string& s) {
  for (auto st : {NodeStatus::active, NodeStatus::pruned, NodeStatus::collapsed_trivial})
    if (to_string(st) == s) return st;
  throw ValidationError("unknown node status '" + s + "'");
}

const RelationNode* RelationTree::find(const std::string& path, NodeRole role) const {
  for (const auto& n : nodes)
    if (n.path == path && n.role == role) return &n;
  return nullptr;
}

GenSymbol seed_symbol(const ComplexSpec& spec, const std::string& name, const Degree& d,
                      const std::string& first, const std::string& second) {
  GenSymbol s{name, d, {}, {}, false};
  ParamKind k0 = spec.arity == 2 ? ParamKind::holonomy : ParamKind::generic;
  for (int i = 1; i <= d[0]; ++i) s.params.push_back(Param::atom(first + std::to_string(i), k0, 0));
  if (d.size() > 1)
    for (int i = 1; i <= d[1]; ++i) s.params.push_back(Param::atom(second + std::to_string(i), ParamKind::generic, 1));
  return s;
}

std::vector<std::string> existence_chain(const std::string& path) {
  if (path.size() <= 2) return {path};
  auto chain = existence_chain(path.substr(0, path.size() - 1));
  chain.push_back(path);
  return chain;
}

namespace {

using SymDegree = std::vector<LengthExpr>;

class Builder {
 public:
  Builder(const ComplexSpec& spec, const GenSymbol& chi, const GenSymbol& phi, const DeriveOptions& opts)
      : spec_(spec), opts_(opts) {
    tree_.spec = spec;
    tree_.chi = chi;
    tree_.phi = phi;
    tree_.depth_cap = opts.depth_cap;
    const bool same = chi.name == phi.name;
    tree_.symbolic_degrees[chi.name] = seed_degree(chi.degree, same ? "n" : "n0", same ? "m" : "m0");
    tree_.symbolic_degrees[phi.name] = seed_degree(phi.degree, "n", "m");
    param_mode_ = !chi.params.empty() || !phi.params.empty();
  }

  RelationTree run() {
    const GenSymbol& chi = tree_.chi;
    const GenSymbol& phi = tree_.phi;

    RelationNode root;
    root.role = NodeRole::orthogonality;
    root.relation.lhs = {RelTerm{Rational(1), {plain(phi), delta(chi)}, 0}};
    root.status = side_expr(root.relation.lhs).is_zero() ? NodeStatus::collapsed_trivial : NodeStatus::active;
    if (root.status == NodeStatus::active) {
      root.ortho_left = plain(phi);
      root.ortho_right = chi;
    }
    std::size_t root_idx = push(std::move(root));

    RelationNode derived;
    derived.role = NodeRole::derived;
    derived.relation.lhs = differentiate(tree_.nodes[root_idx].relation.lhs);
    derived.status = side_expr(derived.relation.lhs).is_zero() ? NodeStatus::collapsed_trivial
                                                               : NodeStatus::active;
    if (tree_.nodes[root_idx].status != NodeStatus::active) derived.status = NodeStatus::pruned;
    if (derived.status == NodeStatus::active) {
      derived.ortho_left = delta(phi);
      derived.ortho_right = chi;
    }
    std::size_t derived_idx = push(std::move(derived));

    std::deque<std::size_t> queue;
    if (tree_.nodes[root_idx].status == NodeStatus::active) queue.push_back(root_idx);
    if (tree_.nodes[derived_idx].status == NodeStatus::active) queue.push_back(derived_idx);

    while (!queue.empty()) {
      std::size_t idx = queue.front();
      queue.pop_front();
      const RelationNode parent = tree_.nodes[idx];
      for (char side : {'L', 'R'}) {
        std::string path = parent.role == NodeRole::derived ? std::string(2, side) : parent.path + side;
        if (static_cast<int>(path.size()) > opts_.depth_cap) continue;
        if (auto next = expand(parent, side, path)) queue.push_back(*next);
      }
    }

    std::stable_sort(tree_.nodes.begin(), tree_.nodes.end(), [](const RelationNode& a, const RelationNode& b) {
      if (a.depth() != b.depth()) return a.depth() < b.depth();
      if (a.path != b.path) return a.path < b.path;
      return a.role < b.role;
    });
    return std::move(tree_);
  }

 private:
  SymDegree seed_degree(const Degree& d, const std::string& s0, const std::string& s1) {
    SymDegree out{LengthExpr::symbol(s0)};
    tree_.bindings[s0] = d[0];
    if (d.size() > 1) {
      out.push_back(LengthExpr::symbol(s1));
      tree_.bindings[s1] = d[1];
    }
    return out;
  }

  static Factor plain(const GenSymbol& s) { return Factor{s, false}; }
  static Factor delta(const GenSymbol& s) { return Factor{s, true}; }

  SymDegree sym_degree(const Factor& f) const {
    SymDegree d = tree_.symbolic_degrees.at(f.base.name);
    if (f.delta_applied)
      for (std::size_t c = 0; c < d.size(); ++c) d[c] = d[c] + spec_.shift[c];
    return d;
  }

  LengthExpr sym_sign_degree(const Factor& f) const {
    SymDegree d = sym_degree(f);
    if (spec_.leibniz_sign == LeibnizSign::first || d.size() == 1) return d[0];
    LengthExpr s;
    for (const auto& x : d) s = s + x;
    return s;
  }

  // Leibniz rule on written terms. The sign of the j-th term counts the
  // factors that precede factor j in the canonical order, so the result
  // normalizes to exactly apply_delta of the normalized input.
  std::vector<RelTerm> differentiate(const std::vector<RelTerm>& side) const {
    std::vector<RelTerm> out;
    for (const auto& t : side) {
      for (std::size_t j = 0; j < t.factors.size(); ++j) {
        if (t.factors[j].delta_applied) continue;
        int parity = 0;
        LengthExpr sym = t.sign;
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
          if (i == j || !(t.factors[i] < t.factors[j])) continue;
          parity += spec_.sign_degree(factor_degree(t.factors[i], spec_));
          sym = sym + sym_sign_degree(t.factors[i]);
        }
        RelTerm dt{parity % 2 != 0 ? -t.coeff : t.coeff, t.factors, sym.parity()};
        dt.factors[j].delta_applied = true;
        auto same = std::find_if(out.begin(), out.end(), [&](const RelTerm& u) { return u.factors == dt.factors; });
        if (same == out.end()) {
          out.push_back(std::move(dt));
        } else {
          same->coeff += dt.coeff;
        }
      }
    }
    std::erase_if(out, [](const RelTerm& u) { return u.coeff == Rational(0); });
    return out;
  }

  std::size_t push(RelationNode n) {
    tree_.nodes.push_back(std::move(n));
    return tree_.nodes.size() - 1;
  }

  // Symbolic alpha - ov for the relation, mirroring the integer version.
  SymDegree sym_difference(CompatKind kind, const SymDegree& outer, const SymDegree& inner) const {
    SymDegree d(outer.size());
    for (std::size_t c = 0; c < d.size(); ++c) {
      switch (kind) {
        case CompatKind::R1: d[c] = outer[c] + spec_.shift[c] - inner[c]; break;
        case CompatKind::L1: d[c] = inner[c] - outer[c] - spec_.shift[c]; break;
        case CompatKind::RRseq: d[c] = outer[c] - inner[c]; break;
        case CompatKind::LLseq: d[c] = inner[c] - outer[c]; break;
      }
    }
    return d;
  }

  std::vector<Param> alpha_params(const std::string& name, const Witness& w, const Factor& partner) const {
    std::vector<Param> out;
    if (!param_mode_) {
      if (w.overlap.counts != Degree::zeros(w.overlap.counts.size()))
        throw ValidationError("a witness with nonzero overlap needs seeds with parameters");
      return out;
    }
    for (int c = 0; c < spec_.arity; ++c) {
      std::vector<Param> mine;
      for (const auto& p : partner.base.params)
        if (p.component == c) mine.push_back(p);
      int shared = w.overlap.counts[c];
      if (shared > static_cast<int>(mine.size()))
        throw ValidationError(fmt::format("witness overlap {} exceeds the parameters of {}",
                                          w.overlap.counts.to_string(), partner.base.name));
      out.insert(out.end(), mine.end() - shared, mine.end());
      ParamKind kind = c == 0 && spec_.arity == 2 ? ParamKind::holonomy : ParamKind::generic;
      const char* letter = c == 0 ? "h" : "s";
      for (int k = 1; k <= w.alpha[c] - shared; ++k)
        out.push_back(Param::atom(fmt::format("{}.{}{}", name, letter, k), kind, c));
    }
    return out;
  }

  // Children of the orthogonality A . d B = 0 held by `parent`. Returns the
  // index of a consequence node that is itself an orthogonality.
  std::optional<std::size_t> expand(const RelationNode& parent, char side, const std::string& path) {
    const Factor A = *parent.ortho_left;
    const GenSymbol B = *parent.ortho_right;
    const bool seq = parent.role == NodeRole::derived;
    CompatKind kind = side == 'R' ? (seq ? CompatKind::RRseq : CompatKind::R1)
                                  : (seq ? CompatKind::LLseq : CompatKind::L1);
    Degree outer = seq ? tree_.chi.degree : B.degree;
    Degree inner = seq ? tree_.phi.degree : factor_degree(A, spec_);
    SymDegree sym_outer = seq ? tree_.symbolic_degrees.at(tree_.chi.name) : sym_degree(plain(B));
    SymDegree sym_inner = seq ? tree_.symbolic_degrees.at(tree_.phi.name) : sym_degree(A);

    RelationNode node;
    node.path = path;
    node.role = NodeRole::existence;
    node.compat = CompatRecord{kind, outer, inner, {}, {}};

    BranchSide solved = solve_branch(spec_, kind, outer, inner);
    if (!solved.satisfiable) {
      node.status = NodeStatus::pruned;
      node.violated = to_string(kind);
      push(std::move(node));
      return std::nullopt;
    }
    node.witnesses = solved.witnesses;
    if (node.witnesses.size() > opts_.witness_cap) node.witnesses.resize(opts_.witness_cap);
    const Witness w = solved.witnesses[std::min(opts_.witness, solved.witnesses.size() - 1)];

    const std::string name = fmt::format("alpha_{}_{}", path.size(), path);
    const Factor partner = side == 'R' ? A : delta(B);
    GenSymbol alpha{name, w.alpha, alpha_params(name, w, partner), {}, false};
    node.introduced = alpha;
    node.compat->alpha = w.alpha;
    node.compat->overlap = w.overlap;

    SymDegree diff = sym_difference(kind, sym_outer, sym_inner);
    SymDegree sym_alpha(diff.size());
    const char* ov_names[] = {"r", "t"};
    for (std::size_t c = 0; c < diff.size(); ++c) {
      std::string ov = fmt::format("{}_{}", ov_names[c], path);
      sym_alpha[c] = diff[c] + LengthExpr::symbol(ov);
      tree_.bindings[ov] = w.overlap.counts[c];
    }
    tree_.symbolic_degrees[name] = sym_alpha;

    if (side == 'R') {
      node.relation.lhs = {RelTerm{Rational(1), {delta(B)}, 0}};
      node.relation.rhs = {RelTerm{Rational(1), {A, plain(alpha)}, 0}};
    } else {
      node.relation.lhs = {RelTerm{Rational(1), {A}, 0}};
      node.relation.rhs = {RelTerm{Rational(1), {plain(alpha), delta(B)}, 0}};
    }

    bool ok = false;
    try {
      ok = check_compat(spec_, kind, outer, inner, w.alpha, w.overlap) &&
           degree_of(side_expr(node.relation.lhs), spec_) == degree_of(side_expr(node.relation.rhs), spec_);
    } catch (const DomainViolation&) {
      ok = false;
    }
    if (!ok) {
      node.status = NodeStatus::pruned;
      node.violated = to_string(kind);
      node.relation = {};
      push(std::move(node));
      return std::nullopt;
    }
    Relation rel = node.relation;
    push(std::move(node));

    RelationNode cons;
    cons.path = path;
    cons.role = NodeRole::consequence;
    cons.relation.lhs = differentiate(rel.lhs);
    cons.relation.rhs = differentiate(rel.rhs);
    Expr diffexpr = side_expr(cons.relation.lhs) - side_expr(cons.relation.rhs);
    cons.status = diffexpr.is_zero() ? NodeStatus::collapsed_trivial : NodeStatus::active;

    // 0 = X . d Y with a single term is the next orthogonality.
    const auto& r = cons.relation;
    bool ortho = cons.status == NodeStatus::active && r.lhs.empty() && r.rhs.size() == 1 &&
                 r.rhs[0].factors.size() == 2 && r.rhs[0].factors[1].delta_applied &&
                 !r.rhs[0].factors[1].base.exterior_d;
    if (ortho) {
      cons.ortho_left = r.rhs[0].factors[0];
      cons.ortho_right = r.rhs[0].factors[1].base;
    }
    std::size_t idx = push(std::move(cons));
    if (ortho) return idx;
    return std::nullopt;
  }

  const ComplexSpec& spec_;
  DeriveOptions opts_;
  RelationTree tree_;
  bool param_mode_ = false;
};

void check_seed(const ComplexSpec& spec, const GenSymbol& s) {
  if (s.name.empty()) throw SeedDegenerate("seed symbol has no name");
  if (static_cast<int>(s.degree.size()) != spec.arity)
    throw DegreeMismatch("seed " + s.name + " has degree " + s.degree.to_string() + " for arity " +
                         std::to_string(spec.arity));
  if (!spec.in_domain(s.degree))
    throw DomainViolation("seed " + s.name + " degree " + s.degree.to_string() + " outside the index domain");
}

GenSymbol seed_from_expr(const Expr& e) {
  if (e.is_zero()) throw SeedDegenerate("seed is the zero expression");
  const auto& t = e.terms();
  if (t.size() != 1 || t[0].coeff != Rational(1) || t[0].factors.size() != 1 || t[0].factors[0].delta_applied)
    throw ValidationError("seed must be a single plain symbol, got " + render(e));
  return t[0].factors[0].base;
}

}  // namespace

RelationTree derive_tree(const ComplexSpec& spec, const GenSymbol& chi, const GenSymbol& phi,
                         const DeriveOptions& opts) {
  spec.validate();
  check_seed(spec, chi);
  check_seed(spec, phi);
  if (chi.name == phi.name && !(chi == phi))
    throw ValidationError("two different seeds share the name " + chi.name);
  if (opts.depth_cap < 1) throw ValidationError("depth cap must be at least 1");
  return Builder(spec, chi, phi, opts).run();
}

RelationTree derive_tree(const ComplexSpec& spec, const Expr& chi, const Expr& phi, const DeriveOptions& opts) {
  return derive_tree(spec, seed_from_expr(chi), seed_from_expr(phi), opts);
}

RelationTree mark_dependence(RelationTree tree) {
  auto active = [&](const std::string& p) {
    const RelationNode* n = tree.existence(p);
    return n && n->status == NodeStatus::active;
  };
  tree.marks.clear();
  if (active("L") && active("R")) tree.marks.push_back({"L", "R", "level-1"});
  for (const auto& n : tree.nodes) {
    if (n.role != NodeRole::existence || n.status != NodeStatus::active) continue;
    if (n.path.rfind("LL", 0) != 0) continue;
    std::string mirror = "RR" + n.path.substr(2);
    if (active(mirror)) tree.marks.push_back({n.path, mirror, "sequence"});
  }
  tree.dependence_marked = true;
  return tree;
}

std::vector<std::string> independent_paths(const RelationTree& tree) {
  const RelationNode* root = tree.find("", NodeRole::orthogonality);
  if (!root || root->status != NodeStatus::active) return {};
  std::set<std::string> marked;
  for (const auto& m : tree.marks) marked.insert(m.dependent);

  std::vector<std::string> candidates{""};
  for (const auto& n : tree.nodes) {
    if (n.role != NodeRole::existence || n.status != NodeStatus::active) continue;
    auto chain = existence_chain(n.path);
    bool clean = std::none_of(chain.begin(), chain.end(), [&](const std::string& p) {
      const RelationNode* e = tree.existence(p);
      return marked.count(p) || !e || e->status != NodeStatus::active;
    });
    if (clean) candidates.push_back(n.path);
  }
  auto extends = [](const std::string& longer, const std::string& shorter) {
    if (shorter.empty()) return !longer.empty();
    auto chain = existence_chain(longer);
    return longer != shorter && std::find(chain.begin(), chain.end(), shorter) != chain.end();
  };
  std::vector<std::string> out;
  for (const auto& p : candidates) {
    bool maximal = std::none_of(candidates.begin(), candidates.end(),
                                [&](const std::string& q) { return extends(q, p); });
    if (maximal) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> unpaired_paths(const RelationTree& tree) {
  std::set<std::string> covered;
  for (const auto& m : tree.marks) {
    covered.insert(m.dependent);
    covered.insert(m.partner);
  }
  std::vector<std::string> out;
  for (const auto& n : tree.nodes)
    if (n.role == NodeRole::existence && n.status == NodeStatus::active && !covered.count(n.path))
      out.push_back(n.path);
  return out;
}

namespace {

std::string join_paths(const std::vector<std::string>& ps) {
  if (ps.empty()) return "(none)";
  std::string s;
  for (const auto& p : ps) s += (s.empty() ? "" : " ") + (p.empty() ? std::string("-") : p);
  return s;
}

}  // namespace

std::string render_tree(const RelationTree& tree) {
  std::string out = fmt::format("tree depth_cap={}\n", tree.depth_cap);
  out += fmt::format("seed chi={} {} phi={} {}\n", tree.chi.name, tree.chi.degree.to_string(), tree.phi.name,
                     tree.phi.degree.to_string());
  for (const auto& n : tree.nodes) {
    std::string path = n.path.empty() ? "-" : n.path;
    out += fmt::format("[{}] {} {}: ", path, to_string(n.role), to_string(n.status));
    if (n.status == NodeStatus::pruned && n.relation.empty()) {
      if (n.compat) {
        out += fmt::format("no solution of {} for outer={} inner={}\n", n.violated, n.compat->outer.to_string(),
                           n.compat->inner.to_string());
      } else {
        out += "seed relation inactive\n";
      }
      continue;
    }
    out += render(n.relation) + "\n";
    if (n.role == NodeRole::existence && n.introduced) {
      const auto& c = *n.compat;
      out += fmt::format("    introduced {} {}; {} outer={} inner={} alpha={} overlap={}\n", n.introduced->name,
                         n.introduced->degree.to_string(), to_string(c.kind), c.outer.to_string(),
                         c.inner.to_string(), c.alpha.to_string(), c.overlap.counts.to_string());
      std::string ws;
      for (const auto& w : n.witnesses) ws += " " + w.alpha.to_string() + "/" + w.overlap.counts.to_string();
      out += "    witnesses" + ws + "\n";
    }
  }
  if (tree.dependence_marked) {
    out += "marks:";
    if (tree.marks.empty()) out += " (none)";
    out += "\n";
    for (const auto& m : tree.marks) out += fmt::format("  {} ~ {} ({})\n", m.dependent, m.partner, m.identity);
    out += "independent: " + join_paths(independent_paths(tree)) + "\n";
    out += "unpaired: " + join_paths(unpaired_paths(tree)) + "\n";
  }
  return out;
}

}  // namespace chainlie
