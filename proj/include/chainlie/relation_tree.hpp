#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainlie/complex_spec.hpp"
#include "chainlie/expr.hpp"
#include "chainlie/length_expr.hpp"

namespace chainlie {

/// One signed product in a relation, kept in written factor order.
/// `sign` is the symbolic exponent: coeff == (-1)^sign * |coeff| under the
/// tree's bindings.
struct RelTerm {
  Rational coeff{1};
  std::vector<Factor> factors;
  LengthExpr sign;

  friend bool operator==(const RelTerm&, const RelTerm&) = default;
};

struct Relation {
  std::vector<RelTerm> lhs;
  std::vector<RelTerm> rhs;

  bool empty() const { return lhs.empty() && rhs.empty(); }
  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Exterior normal form of one side.
Expr side_expr(const std::vector<RelTerm>& side);
/// "PHI . d CHI = 0" grammar; single-term zero relations are printed with
/// a positive leading term.
std::string render(const Relation& r);

enum class NodeRole {
  orthogonality,  // the seed relation (1)
  derived,        // its differential (3)
  existence,      // introduces an element: R or L shape
  consequence,    // differential of an existence relation
};

enum class NodeStatus { active, pruned, collapsed_trivial };

std::string to_string(NodeRole r);
std::string to_string(NodeStatus s);
NodeRole node_role_from_string(const std::string& s);
NodeStatus node_status_from_string(const std::string& s);

struct CompatRecord {
  CompatKind kind = CompatKind::R1;
  Degree outer;
  Degree inner;
  Degree alpha;  // empty when pruned
  OverlapRecord overlap;

  friend bool operator==(const CompatRecord&, const CompatRecord&) = default;
};

struct RelationNode {
  std::string path;  // over {L, R}; empty at the root
  NodeRole role = NodeRole::orthogonality;
  NodeStatus status = NodeStatus::active;
  Relation relation;
  std::optional<GenSymbol> introduced;
  std::optional<CompatRecord> compat;
  /// Full admissible (alpha, ov) lattice, truncated at the witness cap.
  std::vector<Witness> witnesses;
  /// Relation that failed, for pruned nodes.
  std::string violated;
  /// Orthogonality A . d B = 0 this node seeds, if any.
  std::optional<Factor> ortho_left;
  std::optional<GenSymbol> ortho_right;

  int depth() const { return static_cast<int>(path.size()); }
  friend bool operator==(const RelationNode&, const RelationNode&) = default;
};

struct DependencyMark {
  std::string dependent;  // path of the element treated as redundant
  std::string partner;
  std::string identity;   // "level-1" or "sequence"

  friend bool operator==(const DependencyMark&, const DependencyMark&) = default;
};

struct RelationTree {
  ComplexSpec spec;
  GenSymbol chi;
  GenSymbol phi;
  int depth_cap = 6;
  std::vector<RelationNode> nodes;
  /// Symbolic degree of every symbol in the tree, per component.
  std::map<std::string, std::vector<LengthExpr>> symbolic_degrees;
  /// Concrete values of the degree and overlap symbols.
  Bindings bindings;
  bool dependence_marked = false;
  std::vector<DependencyMark> marks;

  const RelationNode* find(const std::string& path, NodeRole role) const;
  /// Existence node whose introduced element the given path names.
  const RelationNode* existence(const std::string& path) const { return find(path, NodeRole::existence); }

  friend bool operator==(const RelationTree&, const RelationTree&) = default;
};

struct DeriveOptions {
  int depth_cap = 6;
  /// Index into each node's witness list of the (alpha, ov) pair to
  /// instantiate; 0 is the minimal one. Clamped to the list.
  std::size_t witness = 0;
  std::size_t witness_cap = 64;
};

/// Builds the relation system from the orthogonality Phi . d chi = 0.
/// chi and phi may be the same symbol. Throws SeedDegenerate for an unnamed
/// seed and DegreeMismatch when a seed degree does not fit the spec.
RelationTree derive_tree(const ComplexSpec& spec, const GenSymbol& chi, const GenSymbol& phi,
                         const DeriveOptions& opts = {});
/// Same, with the seeds given as expressions; they must be single plain
/// symbols, and the zero expression raises SeedDegenerate.
RelationTree derive_tree(const ComplexSpec& spec, const Expr& chi, const Expr& phi,
                         const DeriveOptions& opts = {});

/// Pairs L with R at level one and LL.s with RR.s for every suffix s when
/// both are active; the L-side element of each pair is marked dependent.
RelationTree mark_dependence(RelationTree tree);

/// Maximal existence paths whose elements are all unmarked, in
/// lexicographic order. {""} when only the seed relations are active, {}
/// when the seed itself is not active.
std::vector<std::string> independent_paths(const RelationTree& tree);

/// Active existence nodes that no dependency mark covers.
std::vector<std::string> unpaired_paths(const RelationTree& tree);

/// Existence ancestors of a path, outermost first, including the path.
std::vector<std::string> existence_chain(const std::string& path);

std::string render_tree(const RelationTree& tree);

/// Seed symbol carrying one parameter per unit of degree: <first>1..<first>p
/// on the first component (holonomy in a bicomplex) and <second>1..<second>q
/// on the second.
GenSymbol seed_symbol(const ComplexSpec& spec, const std::string& name, const Degree& d,
                      const std::string& first = "h", const std::string& second = "s");

}  // namespace chainlie
