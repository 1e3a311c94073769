#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chainlie/complex_spec.hpp"

namespace chainlie {

struct LawResult {
  std::string law;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool pass() const { return failures == 0 && cases > 0; }
};

struct LawReport {
  std::string suite;
  std::vector<LawResult> results;

  bool pass() const;
  std::size_t cases() const;
};

struct LawOptions {
  /// Words of up to this many factors over the pool are enumerated.
  int max_word = 4;
  int random = 1000;
  std::uint64_t seed = 0;
};

/// Idempotence, anticommutativity, nilpotency, Leibniz and delta delta = 0
/// over every word of at most `max_word` factors drawn from four symbols
/// (each with and without the differential), plus `random` random
/// expressions over six symbols.
LawReport check_dga_laws(const ComplexSpec& spec, const LawOptions& opts = {});

/// D D = 0 on generic forms up to Cech degree pmax, the Koszul Leibniz rule
/// and the twisted rule of the displayed product sign on forms of degree
/// at most (2, 2).
LawReport check_foliation_laws(int pmax = 3);

std::string render(const LawReport& r);

}  // namespace chainlie
