#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "chainlie/degree.hpp"

namespace chainlie::cli {

enum class Format { text, machine };

struct RunConfig {
  std::string command;  // check-dga, derive, lie, jacobi, demo-gv
  /// File path, or "builtin:cech-de-rham" / "builtin:chain". Empty means
  /// the built-in Cech-de Rham spec.
  std::string spec_path;
  std::optional<Degree> chi;
  std::optional<Degree> phi;  // absent: Phi is chi itself
  int depth = 6;
  Format format = Format::text;
  std::uint64_t seed = 0;
  bool entropy_seed = false;  // --seed random
  double tol = 1e-12;
  std::string kernels_path;
  int samples = 100;   // numeric Jacobi
  int triples = 400;   // symbolic Jacobi
};

/// "1" or "1,2".
Degree parse_degree_arg(const std::string& s);

/// Runs one command; the report goes to `out`, diagnostics to `err`.
/// Returns 0 when every check passes, 1 on a failed check, 2 on an input
/// error.
int run(RunConfig config, std::ostream& out, std::ostream& err);

}  // namespace chainlie::cli
