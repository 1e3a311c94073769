#pragma once

#include <map>
#include <string>
#include <vector>

#include "chainlie/complex_spec.hpp"
#include "chainlie/continual_lie.hpp"
#include "chainlie/expr.hpp"
#include "chainlie/relation_tree.hpp"

namespace chainlie {

/// Cochain in the Cech-de Rham double complex, one part per Cech degree k:
/// a combination of ordered products of forms evaluated at words in the slot
/// variables h1..hk. Factors are GenSymbols with degree (p, q), params the
/// holonomy words and pullbacks an atom chain, outermost first. Zero parts
/// are dropped.
struct Cochain {
  std::map<int, Expr> parts;

  static Cochain of(int cech, const Expr& e);
  bool is_zero() const { return parts.empty(); }
  /// The part of Cech degree k (zero if absent).
  Expr part(int k) const;
  std::size_t term_count() const;

  friend bool operator==(const Cochain&, const Cochain&) = default;
};

/// Slot variable h<i> as a holonomy param.
Param slot(int i);

/// w{p,q}(h1,...,hp).
GenSymbol cech_form(const std::string& name, int p, int q);
Cochain cochain(const GenSymbol& form);

/// The i-th face of the Cech differential on a k-cochain: i = 0 pulls back
/// along h1 and shifts the slots, 0 < i < k+1 composes h<i+1>h<i>, i = k+1
/// drops the last slot. Unsigned and unnormalized.
Expr cech_face(const Expr& e, int k, int i);

/// Faces of a k-cochain with their signs (-1)^i, in face order, unnormalized.
std::vector<Term> cech_delta_terms(const Expr& e, int k);
Cochain cech_delta(const Cochain& c);

/// Formal exterior derivative with the graded Leibniz sign over the de Rham
/// degrees; d commutes with pullbacks and d d = 0.
Expr exterior_d(const Expr& e);
/// (-1)^cech d.
Cochain de_rham_d(const Cochain& c);
Cochain total_delta(const Cochain& c);

enum class ProductSign {
  cech,    // (-1)^{n n'}, Cech degrees only
  koszul,  // (-1)^{q n'}, de Rham degree of the left factor against the Cech degree of the right
};

std::string to_string(ProductSign s);
ProductSign product_sign_from_string(const std::string& s);

/// (a b)(h1..h_{n+n'}) = sign * a(h1..hn) . h1*...hn* b(h_{n+1}..h_{n+n'}).
/// The de Rham degree of each part of `a` is read off its first term.
Cochain bigraded_product(const Cochain& a, const Cochain& b, ProductSign sign = ProductSign::cech);

/// Common bidegree (Cech part, summed de Rham degree) of every term; throws
/// Inhomogeneous when terms differ and ZeroExpr for the zero cochain.
Degree bidegree(const Cochain& c);

Cochain operator+(const Cochain& a, const Cochain& b);
Cochain operator-(const Cochain& a, const Cochain& b);
Cochain operator*(const Rational& c, const Cochain& a);

/// Rewrites every pullback by a composite word into the atom chain,
/// (h2h1)* = h1*h2*.
GenSymbol rewrite_pullbacks(const GenSymbol& s);
/// Same on every factor, then normalize_ordered.
Expr rewrite_pullbacks(const Expr& e);
Cochain rewrite_pullbacks(const Cochain& c);

/// "h1*h2*.w{p,q}(h1,h2h1)"; a d-marked form prints as dw{p,q} with the
/// degree of the undifferentiated form.
std::string render_form(const GenSymbol& s);
std::string render_form(const Term& t, bool leading);
std::string render_form(const Expr& e);
/// Terms in the given order, without normalizing.
std::string render_form_terms(const std::vector<Term>& terms);

/// Relation tree of the Godbillon-Vey seed: Phi = chi in C^{n,m}.
RelationTree derive_gv_tree(const ComplexSpec& spec, const GenSymbol& chi, int depth_cap = 6);
RelationTree derive_gv_tree(const ComplexSpec& spec, int n, int m, int depth_cap = 6);

/// Renames and grades X+ = chi, X- = d chi, H = alpha, H* = d alpha.
ExtractOptions gv_extract_options();

/// Presentation of the Godbillon-Vey tree; throws ValidationError for
/// negative degrees.
LiePresentation godbillon_vey(const ComplexSpec& spec, int n, int m);

struct DeltaSquaredRow {
  int p = 0;
  std::size_t first_terms = 0;   // terms of D w
  std::size_t expanded_terms = 0;  // terms of D D w before cancellation
  std::size_t residual_terms = 0;
  bool zero = false;
};

struct DeltaSquaredReport {
  int q = 0;
  std::vector<DeltaSquaredRow> rows;
  bool pass() const;
};

/// D D w = 0 for a generic w{p,q}, p = 0..pmax.
DeltaSquaredReport verify_delta_squared_zero(int pmax, int q = 0);
std::string render(const DeltaSquaredReport& r);

}  // namespace chainlie
