#pragma once

#include <compare>
#include <map>
#include <string>

namespace chainlie {

using Bindings = std::map<std::string, int>;

/// Integer affine combination of named symbols, e.g. n0 - n + r_RR + 1.
/// Used for symbolic degrees, tuple lengths and sign exponents.
class LengthExpr {
 public:
  LengthExpr() = default;
  LengthExpr(int c) : constant_(c) {}  // NOLINT: implicit from int is intended

  static LengthExpr symbol(const std::string& name, int coeff = 1);

  int constant() const { return constant_; }
  const std::map<std::string, int>& coeffs() const { return coeffs_; }
  bool is_constant() const { return coeffs_.empty(); }

  /// Throws ValidationError on an unbound symbol.
  int eval(const Bindings& b) const;
  /// Coefficients reduced mod 2 into {0, 1}; for sign exponents.
  LengthExpr parity() const;
  LengthExpr renamed(const std::map<std::string, std::string>& names) const;

  /// "n+1", "r_R+2", "n0-n", "0".
  std::string to_string() const;

  friend LengthExpr operator+(const LengthExpr& a, const LengthExpr& b);
  friend LengthExpr operator-(const LengthExpr& a, const LengthExpr& b);
  friend LengthExpr operator-(const LengthExpr& a);
  friend LengthExpr operator*(int k, const LengthExpr& a);

  friend bool operator==(const LengthExpr&, const LengthExpr&) = default;
  friend auto operator<=>(const LengthExpr&, const LengthExpr&) = default;

 private:
  void prune();

  int constant_ = 0;
  std::map<std::string, int> coeffs_;  // no zero entries
};

}  // namespace chainlie
