#include "chainlie/length_expr.hpp"

#include "chainlie/errors.hpp"

namespace chainlie {

LengthExpr LengthExpr::symbol(const std::string& name, int coeff) {
  LengthExpr e;
  e.coeffs_[name] = coeff;
  e.prune();
  return e;
}

void LengthExpr::prune() {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->second == 0) {
      it = coeffs_.erase(it);
    } else {
      ++it;
    }
  }
}

int LengthExpr::eval(const Bindings& b) const {
  int v = constant_;
  for (const auto& [name, k] : coeffs_) {
    auto it = b.find(name);
    if (it == b.end()) throw ValidationError("unbound symbol '" + name + "'");
    v += k * it->second;
  }
  return v;
}

LengthExpr LengthExpr::parity() const {
  LengthExpr e;
  e.constant_ = ((constant_ % 2) + 2) % 2;
  for (const auto& [name, k] : coeffs_) e.coeffs_[name] = ((k % 2) + 2) % 2;
  e.prune();
  return e;
}

LengthExpr LengthExpr::renamed(const std::map<std::string, std::string>& names) const {
  LengthExpr e(constant_);
  for (const auto& [name, k] : coeffs_) {
    auto it = names.find(name);
    e.coeffs_[it == names.end() ? name : it->second] += k;
  }
  e.prune();
  return e;
}

std::string LengthExpr::to_string() const {
  std::string s;
  for (const auto& [name, k] : coeffs_) {
    if (k < 0) {
      s += "-";
    } else if (!s.empty()) {
      s += "+";
    }
    int mag = k < 0 ? -k : k;
    if (mag != 1) s += std::to_string(mag);
    s += name;
  }
  if (constant_ != 0 || s.empty()) {
    if (constant_ >= 0 && !s.empty()) s += "+";
    s += std::to_string(constant_);
  }
  return s;
}

LengthExpr operator+(const LengthExpr& a, const LengthExpr& b) {
  LengthExpr e = a;
  e.constant_ += b.constant_;
  for (const auto& [name, k] : b.coeffs_) e.coeffs_[name] += k;
  e.prune();
  return e;
}

LengthExpr operator-(const LengthExpr& a) { return -1 * a; }

LengthExpr operator-(const LengthExpr& a, const LengthExpr& b) { return a + (-b); }

LengthExpr operator*(int k, const LengthExpr& a) {
  LengthExpr e;
  e.constant_ = k * a.constant_;
  for (const auto& [name, c] : a.coeffs_) e.coeffs_[name] = k * c;
  e.prune();
  return e;
}

}  // namespace chainlie
