#pragma once

// Command-line front end. run() is the whole program minus process setup so
// tests can drive it in-process.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coatom/local_space.hpp"
#include "coatom/spectra.hpp"

namespace coatom::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kQualityGate = 3 };

/// Failure fraction above which sample and cayley-demo exit with kQualityGate.
inline constexpr double kMaxFailureFraction = 0.01;

struct Model {
  std::string name;
  LmiSpectrahedron spectrahedron;
  std::optional<LocalSpaceBasis> basis;  // absent for the Cayley cubic
};

/// Resolves a descriptor ("c3-qubit", ..., "cayley") or a JSON list-of-lists
/// hypergraph such as "[[1,2],[2,3]]" with the given unit algebra. Throws
/// std::invalid_argument for anything else.
Model resolve_model(const std::string& descriptor, const std::string& algebra = "qubit");

/// Parses "0.5", "pi/8", "3pi/4", "-pi" style values.
double parse_angle(std::string_view text);
std::vector<double> parse_number_list(std::string_view text);

/// Runs one command line (argv[0] is the program name) and returns the exit
/// code. Reports go to `out` unless --out names a file; diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coatom::cli
