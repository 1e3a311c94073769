#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainlie/expr.hpp"
#include "chainlie/length_expr.hpp"
#include "chainlie/relation_tree.hpp"

namespace chainlie {

struct Generator {
  std::string name;
  int grade = 0;
  /// Length of the parameter tuple the generator takes.
  LengthExpr arity;

  friend bool operator==(const Generator&, const Generator&) = default;
};

enum class KernelKind { zero, tuple_merge, numeric };

std::string to_string(KernelKind k);

struct Kernel {
  std::string name;
  KernelKind kind = KernelKind::zero;
  /// tuple_merge: number of shared entries and a length offset (0 for the
  /// extracted kernels; nonzero only in mutation tests).
  LengthExpr shared;
  int offset = 0;
  /// numeric: T[k][i][j], K(a, b)_k = sum_ij T[k][i][j] a_i b_j.
  int dimension = 0;
  std::vector<double> tensor;
  /// Generators whose bracket the kernel describes, in argument order.
  std::string left;
  std::string right;

  friend bool operator==(const Kernel&, const Kernel&) = default;
};

/// One bracket [a, b] with coefficient (-1)^sign * magnitude.
struct BracketTerm {
  std::string a;
  std::string b;
  std::string kernel;
  LengthExpr sign;
  Rational magnitude{1};

  friend bool operator==(const BracketTerm&, const BracketTerm&) = default;
};

/// [a, b] = 0 when output is empty, else [a, b] = (-1)^sign * output(K(...)).
struct BracketEntry {
  std::string a;
  std::string b;
  std::string kernel;
  std::string output;
  LengthExpr sign;
  Rational magnitude{1};

  bool zero() const { return output.empty(); }
  friend bool operator==(const BracketEntry&, const BracketEntry&) = default;
};

/// Sum of brackets equal to zero that does not resolve into table entries.
struct MixedConstraint {
  std::vector<BracketTerm> terms;
  friend bool operator==(const MixedConstraint&, const MixedConstraint&) = default;
};

struct LiePresentation {
  std::vector<Generator> generators;
  std::vector<BracketEntry> brackets;
  std::vector<MixedConstraint> mixed;
  std::vector<Kernel> kernels;
  Bindings bindings;
  bool grading_rule = true;
  std::vector<std::string> annotations;

  const Generator& generator(const std::string& name) const;
  const Kernel& kernel(const std::string& name) const;
  bool has_generator(const std::string& name) const;

  friend bool operator==(const LiePresentation&, const LiePresentation&) = default;
};

struct ExtractOptions {
  /// Generator names keyed by rendered factor ("CHI", "d alpha_1_R").
  std::map<std::string, std::string> rename;
  /// Grades keyed by final generator name; when absent the spec's grading
  /// map is used, else the position in the generator list.
  std::map<std::string, int> grades;
  /// Renaming of degree/overlap symbols in lengths and signs.
  std::map<std::string, std::string> symbols;
};

/// Generators and bracket table along the independent paths of a marked
/// tree. Throws NoIndependentPath.
LiePresentation extract_presentation(const RelationTree& tree, const ExtractOptions& opts = {});

/// "+1", "-1", "0".
std::string grade_label(int g);
/// "K_{+1,0}".
std::string kernel_label(int ga, int gb);

using Tuple = std::vector<Param>;

/// a followed by the tail of b after its first `shared` entries, which
/// must equal the last `shared` entries of a. Throws SharedMismatch.
Tuple merge_tuples(const Tuple& a, const Tuple& b, int shared);

/// X(h1,...,hk)
struct GenAtom {
  std::string gen;
  Tuple args;
  friend auto operator<=>(const GenAtom&, const GenAtom&) = default;
  friend bool operator==(const GenAtom&, const GenAtom&) = default;
};

std::string render(const GenAtom& a);

struct Combination {
  std::vector<std::pair<Rational, GenAtom>> terms;
  bool is_zero() const { return terms.empty(); }
};

/// Table lookup with antisymmetry for reversed pairs; identical generators
/// bracket to zero. Throws ArityMismatch, UnknownPair, SharedMismatch.
Combination bracket(const LiePresentation& p, const GenAtom& a, const GenAtom& b);

using Triple = std::array<GenAtom, 3>;

struct JacobiSampleResult {
  Triple triple;
  bool admissible = false;
  std::string reason;  // why a sample was skipped
  /// Rendered atom -> coefficient; empty means exact zero.
  std::map<std::string, Rational> residual;
};

struct SymbolicJacobiReport {
  std::vector<JacobiSampleResult> samples;
  int admissible = 0;
  int nonzero = 0;
  bool pass() const { return nonzero == 0 && admissible > 0; }
};

SymbolicJacobiReport check_jacobi_symbolic(const LiePresentation& p, const std::vector<Triple>& samples);

/// `count` triples cycling through every ordered generator triple, with
/// random argument tuples over the holonomy alphabet h1..h<alphabet>.
std::vector<Triple> sample_triples(const LiePresentation& p, int count, std::uint64_t seed, int alphabet = 3);

std::string render_presentation(const LiePresentation& p);
std::string render(const SymbolicJacobiReport& r, bool all_samples = false);

struct GradingReport {
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

GradingReport grading_check(const LiePresentation& p);
std::string render(const GradingReport& r);

// ---- numeric kernels over a finite-dimensional root algebra ----

/// Commutative associative algebra with structure constants
/// T[k][i][j]: (a b)_k = sum_ij T[k][i][j] a_i b_j.
class DiscreteE {
 public:
  /// Pointwise product of functions on a grid of `dim` points.
  static DiscreteE pointwise(int dim);
  /// Throws ValidationError unless commutativity and associativity hold
  /// exactly, DimensionMismatch on a bad table size.
  DiscreteE(int dim, std::vector<double> table);

  int dimension() const { return dim_; }
  const std::vector<double>& table() const { return table_; }
  std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) const;

 private:
  int dim_;
  std::vector<double> table_;
};

/// Kernel c * (a b) as a numeric tensor.
Kernel scaled_product_kernel(const std::string& name, const DiscreteE& e, double c);
Kernel zero_kernel(const std::string& name);

std::vector<double> apply_kernel(const Kernel& k, const std::vector<double>& a, const std::vector<double>& b,
                                 int dim);

/// Numeric kernels keyed K00, K+1, K-1, K0.
struct KernelSet {
  int dimension = 8;
  std::map<std::string, Kernel> kernels;

  friend bool operator==(const KernelSet&, const KernelSet&) = default;
};

/// K_{0,0}=0, K_{+1}=2ab, K_{-1}=-2ab, K_0=ab over the pointwise algebra.
KernelSet sl2_kernels(int dim = 8);

/// Kernel file: "dimension N", then per kernel "kernel NAME zero" or
/// "kernel NAME numeric N N N" followed by N^3 numbers row-major.
KernelSet parse_kernel_file(const std::string& text);
std::string serialize_kernel_file(const KernelSet& k);

struct NumericJacobiOptions {
  int samples = 100;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  double scale = 1.0;  // multiplies every kernel
};

struct NumericJacobiReport {
  double jac1_first = 0;   // both signs
  double jac1_second = 0;
  double cyclic = 0;       // all grade triples in {-1, 0, 1}
  double max_residual = 0;
  bool pass = false;
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 0;
};

NumericJacobiReport check_jacobi_numeric(const KernelSet& k, const NumericJacobiOptions& opts = {});
std::string render(const NumericJacobiReport& r);

}  // namespace chainlie
