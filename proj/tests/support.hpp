#pragma once

#include <string>

#include "chainlie/expr.hpp"

namespace test_support {

inline chainlie::GenSymbol sym(std::string name, chainlie::Degree d) {
  return chainlie::GenSymbol{std::move(name), std::move(d), {}, {}, false};
}

inline chainlie::Expr ex(const chainlie::GenSymbol& s, bool delta = false) {
  return chainlie::Expr::symbol(s, delta);
}

inline chainlie::Expr d(const chainlie::GenSymbol& s) { return ex(s, true); }

}  // namespace test_support
