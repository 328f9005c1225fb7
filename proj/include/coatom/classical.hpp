#pragma once

// Commutative (bit) case in exact integer arithmetic: support sets over
// configurations, the 0/1 marginal matrix M, M-feasibility, frustration-free
// ground projector decompositions and the three-bit coatom lattices.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coatom/herm.hpp"
#include "coatom/local_space.hpp"

namespace coatom {

/// Configuration x in {0,1}^N as an index; unit 1 is the most significant
/// bit, so "011" is index 3 and 00...0 is the top-left diagonal entry.
using Config = std::size_t;

/// Digit of unit i (1-based) in configuration x.
int config_digit(Config x, int n_units, int unit);
/// "011"-style label.
std::string config_label(Config x, int n_units);
/// Truncation x_nu: the digits of the units in nu, first unit most significant.
Config truncate(Config x, int n_units, UnitSet nu);

/// Subset F of C = {0,1}^N, bit x of the mask set iff x is in F. N <= 6.
class SupportSet {
 public:
  SupportSet(int n_units, std::uint64_t mask);

  static SupportSet full(int n_units);
  static SupportSet empty(int n_units) { return SupportSet(n_units, 0); }
  static SupportSet from_configs(int n_units, const std::vector<Config>& configs);
  /// Character i of the string is 1 iff configuration i is in F.
  static SupportSet from_bitstring(std::string_view bits);
  /// Throws std::invalid_argument unless p is diagonal with 0/1 entries.
  static SupportSet from_projector(const Projector& p, int n_units);

  int n_units() const { return n_units_; }
  std::size_t n_configs() const { return std::size_t{1} << n_units_; }
  std::uint64_t mask() const { return mask_; }
  bool contains(Config x) const { return (mask_ >> x) & 1u; }
  std::size_t size() const;
  std::vector<Config> configs() const;
  SupportSet complement() const;
  std::string to_bitstring() const;

  Projector to_projector() const;

  SupportSet operator|(const SupportSet& o) const;
  SupportSet operator&(const SupportSet& o) const;
  bool operator==(const SupportSet& o) const = default;

 private:
  int n_units_;
  std::uint64_t mask_;
};

struct MRow {
  UnitSet nu = 0;
  Config y = 0;  // configuration of the units in nu
};

/// Entry ((nu, y), x) = 1 iff x_nu = y.
struct MMatrix {
  int n_units = 0;
  std::vector<MRow> rows;
  std::vector<std::vector<std::uint8_t>> entries;  // rows x 2^N
};

/// Rows over the generating class of g, or over every nonempty member when
/// full_rows is set.
MMatrix m_matrix(const Hypergraph& g, bool full_rows = false);

/// True iff no x outside F has its row support covered by the union of the
/// row supports of F.
bool is_m_feasible(const SupportSet& f, const Hypergraph& g, bool full_rows = false);

/// Cylinder factor P_nu (x) I: the configurations on nu that remain allowed
/// are all except `excluded`.
struct CylinderFactor {
  UnitSet nu = 0;
  std::vector<Config> excluded;
};

struct FfDecomposition {
  std::vector<CylinderFactor> factors;  // only nu with a nonempty exclusion
  SupportSet support;                   // the intersection of the cylinders
};

/// Intersects the cylinders {x_nu}' over nu in g_x = {nu : x_nu != y_nu for all
/// y in F}, x in F'. Returns the factors when the intersection equals F.
std::optional<FfDecomposition> ff_ground_projector_form(const SupportSet& f, const Hypergraph& g);

enum class ClassicalModel { C3, C3ff, P3 };

std::string_view to_string(ClassicalModel m);
std::optional<ClassicalModel> parse_classical_model(std::string_view name);
Hypergraph model_hypergraph(ClassicalModel m);

/// Digit sums of x and y differ modulo two. Throws std::invalid_argument if
/// x == y or either lies outside {0..7}.
bool k44_edge(Config x, Config y);

/// Whether {x, y} is an allowed edge of the model's coatom graph.
bool edge_allowed(ClassicalModel m, Config x, Config y);

/// Coatoms of the three-bit lattice as supports F (complements of edges), in
/// the row order of the edge tables: edges differing in digit 3, 2, 1, then
/// in all three digits; within a group by the smaller configuration.
std::vector<SupportSet> enumerate_coatoms(ClassicalModel m);

/// True iff F' is a union of allowed edges of the model.
bool lattice_membership(const SupportSet& f, ClassicalModel m);

/// "diag(1,1,0,0,0,0,0,0)" for the indicator of a set.
std::string diag_pattern(const SupportSet& s);
/// Edge label "{000,111}" with the lighter configuration first.
std::string edge_label(const SupportSet& edge);
/// Pauli expansion of a diagonal projector over the full bit algebra, e.g.
/// "1/4(III + IZZ + ZIZ + ZZI)".
std::string pauli_expansion(const SupportSet& s);

}  // namespace coatom
