#pragma once

// Independent reference implementations used to cross-check the library.

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "chainlie/complex_spec.hpp"

namespace oracle {

using chainlie::CompatKind;
using chainlie::ComplexSpec;
using chainlie::Degree;

// Direct transcription of the four relations, component by component.
inline bool relation_holds(CompatKind kind, int outer, int inner, int alpha, int ov, int shift) {
  switch (kind) {
    case CompatKind::R1: return outer + shift == inner + alpha - ov;
    case CompatKind::L1: return inner == alpha + outer + shift - ov;
    case CompatKind::RRseq: return outer == inner + alpha - ov;
    case CompatKind::LLseq: return inner == outer + alpha - ov;
  }
  return false;
}

// Degree of the factor that alpha is multiplied with in each relation.
inline int partner(CompatKind kind, int outer, int inner, int shift) {
  switch (kind) {
    case CompatKind::R1: return inner;
    case CompatKind::L1: return outer + shift;
    case CompatKind::RRseq: return inner + shift;
    case CompatKind::LLseq: return outer + shift;
  }
  return 0;
}

inline bool admissible(CompatKind kind, int outer, int inner, int alpha, int ov, int shift) {
  // A factor of negative degree carries no parameters, so shares none.
  return ov >= 0 && ov <= alpha && ov <= std::max(partner(kind, outer, inner, shift), 0) &&
         relation_holds(kind, outer, inner, alpha, ov, shift);
}

constexpr int kAlphaMax = 12;
constexpr int kOverlapMax = 7;

// All (alpha, ov) pairs in the box [0, kAlphaMax]^2 x [0, kOverlapMax]^2 that
// satisfy the relation; for components <= 5 the box contains every solution.
inline std::set<std::pair<std::vector<int>, std::vector<int>>> lattice(const ComplexSpec& spec,
                                                                       CompatKind kind,
                                                                       const Degree& outer,
                                                                       const Degree& inner) {
  std::set<std::pair<std::vector<int>, std::vector<int>>> out;
  const int n = spec.arity;
  std::vector<std::vector<std::pair<int, int>>> per(n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a <= kAlphaMax; ++a)
      for (int o = 0; o <= kOverlapMax; ++o)
        if (admissible(kind, outer[c], inner[c], a, o, spec.shift[c])) per[c].push_back({a, o});
  if (n == 1) {
    for (auto [a, o] : per[0]) out.insert({{a}, {o}});
  } else {
    for (auto [a0, o0] : per[0])
      for (auto [a1, o1] : per[1]) out.insert({{a0, a1}, {o0, o1}});
  }
  return out;
}

inline int side_disagreements(const ComplexSpec& spec, CompatKind kind, const Degree& outer,
                              const Degree& inner, const chainlie::BranchSide& side) {
  auto expected = lattice(spec, kind, outer, inner);
  std::set<std::pair<std::vector<int>, std::vector<int>>> got;
  for (const auto& w : side.witnesses) got.insert({w.alpha.components, w.overlap.counts.components});
  int bad = 0;
  if (side.satisfiable != !expected.empty()) ++bad;
  if (got != expected) ++bad;

  // check_compat must accept exactly the lattice points over the whole box.
  const int n = spec.arity;
  std::vector<int> idx(2 * n, 0);
  Degree alpha = Degree::zeros(n);
  Degree ov = Degree::zeros(n);
  chainlie::OverlapRecord rec{ov};
  while (true) {
    bool ref = true;
    for (int c = 0; c < n; ++c) {
      alpha.components[c] = idx[c];
      rec.counts.components[c] = idx[n + c];
      ref = ref && admissible(kind, outer[c], inner[c], idx[c], idx[n + c], spec.shift[c]);
    }
    if (chainlie::check_compat(spec, kind, outer, inner, alpha, rec) != ref) ++bad;
    int i = 2 * n - 1;
    while (i >= 0) {
      int cap = i < n ? kAlphaMax : kOverlapMax;
      if (idx[i] < cap) {
        ++idx[i];
        break;
      }
      idx[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return bad;
}

// Disagreements between branch_existence / check_compat and enumeration.
inline int branch_disagreements(const ComplexSpec& spec, const Degree& chi, const Degree& phi) {
  auto rep = chainlie::branch_existence(spec, chi, phi);
  return side_disagreements(spec, CompatKind::L1, chi, phi, rep.left) +
         side_disagreements(spec, CompatKind::R1, chi, phi, rep.right);
}

}  // namespace oracle
