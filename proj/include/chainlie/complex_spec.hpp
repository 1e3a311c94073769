#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chainlie/degree.hpp"

namespace chainlie {

enum class IndexDomain { integers, nonnegative };

/// Which integer the graded Leibniz sign (-1)^k reads off a degree.
enum class LeibnizSign {
  total,  // sum of all components
  first,  // first (Cech) component only
};

/// Signature of a chain complex or bicomplex.
///
/// The product degree map is always "additive-minus-overlap":
/// deg(a . b) = deg a + deg b - overlap(a, b).
struct ComplexSpec {
  int arity = 1;
  IndexDomain domain = IndexDomain::integers;
  Degree shift{1};
  std::string product_rule = "additive-minus-overlap";
  LeibnizSign leibniz_sign = LeibnizSign::total;
  std::map<Degree, int> grading;

  static ComplexSpec chain();
  /// arity 2, non-negative, shift (1,1), sign read off the Cech degree.
  static ComplexSpec cech_de_rham();

  int sign_degree(const Degree& d) const;
  bool in_domain(const Degree& d) const;
  /// Throws ValidationError naming the violated invariant.
  void validate() const;

  friend bool operator==(const ComplexSpec&, const ComplexSpec&) = default;
};

ComplexSpec parse_spec(std::string_view text);
std::string serialize_spec(const ComplexSpec& spec);

/// Number of shared parameters per degree component: (r) or (r, t).
struct OverlapRecord {
  Degree counts;

  int r() const { return counts[0]; }
  int t() const { return counts.size() > 1 ? counts[1] : 0; }

  friend bool operator==(const OverlapRecord&, const OverlapRecord&) = default;
};

enum class CompatKind { R1, L1, RRseq, LLseq };

std::string to_string(CompatKind kind);
CompatKind compat_kind_from_string(std::string_view s);

/// d1 + d2 - ov. Throws OverlapOutOfRange unless 0 <= ov <= min(d1, d2).
Degree product_degree(const ComplexSpec& spec, const Degree& d1, const Degree& d2,
                      const OverlapRecord& ov);

/// Residual of the named linear relation; zero iff the relation holds.
///   R1:    outer + shift - (inner + alpha - ov)
///   L1:    inner - (alpha + outer + shift - ov)
///   RRseq: outer - (inner + alpha - ov)
///   LLseq: inner - (outer + alpha - ov)
Degree compat_residual(const ComplexSpec& spec, CompatKind kind, const Degree& outer,
                       const Degree& inner, const Degree& alpha, const OverlapRecord& ov);

/// Upper bound on the overlap for the introduced element: the overlap can
/// exceed neither alpha nor the degree of the factor alpha multiplies.
Degree overlap_bound(const ComplexSpec& spec, CompatKind kind, const Degree& outer,
                     const Degree& inner, const Degree& alpha);

/// True iff the relation holds and 0 <= ov <= overlap_bound. Throws
/// DomainViolation when an index leaves the spec's index domain.
bool check_compat(const ComplexSpec& spec, CompatKind kind, const Degree& outer,
                  const Degree& inner, const Degree& alpha, const OverlapRecord& ov);

struct Witness {
  Degree alpha;
  OverlapRecord overlap;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct BranchSide {
  bool satisfiable = false;
  std::vector<Witness> witnesses;  // ordered lexicographically by overlap
};

struct BranchReport {
  BranchSide left;   // Phi = alpha . d chi
  BranchSide right;  // d chi = Phi . alpha
  bool ambiguous() const { return left.satisfiable && right.satisfiable; }
};

BranchReport branch_existence(const ComplexSpec& spec, const Degree& chi, const Degree& phi);

/// Admissible (alpha, ov) pairs for one side, with the degrees of the
/// factors given explicitly (outer multiplies via d, inner plainly).
BranchSide solve_branch(const ComplexSpec& spec, CompatKind kind, const Degree& outer,
                        const Degree& inner);

}  // namespace chainlie
