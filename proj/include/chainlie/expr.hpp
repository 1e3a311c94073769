#pragma once

#include <boost/rational.hpp>
#include <compare>
#include <string>
#include <vector>

#include "chainlie/complex_spec.hpp"
#include "chainlie/degree.hpp"

namespace chainlie {

using Rational = boost::rational<long long>;

std::string to_string(const Rational& q);

enum class ParamKind { generic, holonomy };

/// A parameter symbol. Holonomy parameters may be formal composites
/// (h2h1 = h2 after h1), stored letter by letter as written.
struct Param {
  std::vector<std::string> word;
  ParamKind kind = ParamKind::generic;
  /// Degree component this parameter is counted against (0 = Cech/first).
  int component = 0;

  static Param atom(std::string name, ParamKind kind = ParamKind::generic, int component = 0) {
    return Param{{std::move(name)}, kind, component};
  }
  static Param holonomy(std::string name) { return atom(std::move(name), ParamKind::holonomy); }

  std::string name() const;
  bool composite() const { return word.size() > 1; }

  friend auto operator<=>(const Param&, const Param&) = default;
  friend bool operator==(const Param&, const Param&) = default;
};

/// A graded generator symbol, possibly evaluated at parameters and pulled
/// back along a chain of holonomy symbols.
struct GenSymbol {
  std::string name;
  Degree degree;
  std::vector<Param> params;
  /// Applied pullbacks, outermost first: {h1, h2} renders as h1*h2*.
  std::vector<Param> pullbacks;
  /// Formal exterior derivative d has been applied (foliation mode only).
  bool exterior_d = false;

  friend bool operator==(const GenSymbol&, const GenSymbol&) = default;
};

struct Factor {
  GenSymbol base;
  /// The abstract differential has been applied once, unevaluated.
  bool delta_applied = false;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Canonical total order: (name, params, pullbacks, delta_applied), then
/// the remaining fields to make it total.
std::strong_ordering operator<=>(const Factor& a, const Factor& b);

struct Term {
  Rational coeff{1};
  std::vector<Factor> factors;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Formal linear combination of products of factors. Every function in this
/// header returns normalized expressions; construct through them.
class Expr {
 public:
  Expr() = default;

  static Expr zero() { return {}; }
  static Expr scalar(Rational c);
  static Expr symbol(const GenSymbol& s, bool delta_applied = false);
  static Expr factor(const Factor& f);
  /// Wraps raw terms without normalization (used by normalize itself and
  /// by tests that want to feed unnormalized input).
  static Expr from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const Expr&, const Expr&) = default;

 private:
  std::vector<Term> terms_;
};

/// Exterior canonical form: factors sorted with one sign flip per adjacent
/// transposition, terms with a repeated factor dropped, like terms
/// collected, zero coefficients dropped. Idempotent.
Expr normalize(const Expr& e);

/// Canonical form for the ordinary (non-commutative) product: factor order
/// is kept, only like terms are collected.
Expr normalize_ordered(const Expr& e);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Rational& c, const Expr& e);

/// Exterior product: bilinear concatenation followed by normalize.
Expr wedge(const Expr& a, const Expr& b);
/// As wedge, but both sides must be homogeneous of the spec's arity and the
/// product degree must stay in the index domain; throws DegreeMismatch.
Expr wedge_strict(const Expr& a, const Expr& b, const ComplexSpec& spec);

/// Ordinary product followed by normalize_ordered.
Expr ordered_product(const Expr& a, const Expr& b);

/// Effective degree of one factor: base degree plus the shift if the
/// differential was applied.
Degree factor_degree(const Factor& f, const ComplexSpec& spec);

/// Degree of a product: sum of factor degrees minus shared parameters,
/// i.e. per component sum(deg) - sum(|params|) + |union of params|.
Degree term_degree(const Term& t, const ComplexSpec& spec);

/// Common degree of all terms; throws ZeroExpr / Inhomogeneous.
Degree degree_of(const Expr& e, const ComplexSpec& spec);

/// Overlap record between two factor lists (shared parameter names per
/// degree component).
OverlapRecord overlap_between(const std::vector<Factor>& a, const std::vector<Factor>& b,
                              int arity);

/// Abstract differential via the graded Leibniz rule on the canonical
/// factor order: d(f1...fk) = sum_j (-1)^{s_j} f1..(d fj)..fk with s_j the
/// sign degree of f1..f(j-1). A factor already carrying the differential
/// maps to zero.
Expr apply_delta(const Expr& e, const ComplexSpec& spec);

/// "PHI . d CHI" style rendering (names only).
std::string render(const Factor& f);
std::string render(const Term& t, bool leading);
std::string render(const Expr& e);

}  // namespace chainlie
