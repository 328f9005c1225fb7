#pragma once

// Spaces of g-local Hamiltonians over tensor products of two-dimensional unit
// algebras, with their Pauli-word bases, partial traces and marginal maps.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coatom/herm.hpp"

namespace coatom {

/// Unit algebras. Every unit is two-dimensional.
enum class AlgebraKind {
  Qubit,    // M_2, hermitian basis I, X, Y, Z
  Bit,      // diagonal 2x2, hermitian basis I, Z
  RealTwo,  // real 2x2, hermitian basis I, X, Z
};

std::string_view to_string(AlgebraKind kind);
std::optional<AlgebraKind> parse_algebra_kind(std::string_view name);

/// Non-identity hermitian basis symbols of a unit algebra, in X < Y < Z order.
std::string_view algebra_symbols(AlgebraKind kind);
/// Real dimension of the hermitian part of a unit algebra (4, 2 or 3).
std::size_t hermitian_dimension(AlgebraKind kind);

/// Single-unit matrix for a symbol in {I, X, Y, Z}.
HermitianMatrix pauli_matrix(char symbol);
/// Tensor product of single-unit Pauli matrices, leftmost symbol = unit 1.
HermitianMatrix pauli_word(std::string_view word);

/// Subsets of {1..N} stored as bitmasks, bit (i - 1) for unit i.
using UnitSet = std::uint32_t;

/// Orders subsets by size, then lexicographically by their sorted members.
bool unit_set_less(UnitSet a, UnitSet b);
std::vector<int> unit_set_members(UnitSet s);
std::string unit_set_to_string(UnitSet s);

/// A family of subsets of {1..N}, kept sorted by unit_set_less and
/// free of duplicates.
class Hypergraph {
 public:
  Hypergraph() = default;
  /// Members are given as lists of 1-based unit indices. Throws
  /// std::invalid_argument for indices outside {1..n_units} or n_units > 8.
  Hypergraph(int n_units, const std::vector<std::vector<int>>& subsets);
  Hypergraph(int n_units, std::vector<UnitSet> subsets);

  int n_units() const { return n_units_; }
  const std::vector<UnitSet>& subsets() const& { return subsets_; }
  std::vector<UnitSet> subsets() && { return std::move(subsets_); }
  bool contains(UnitSet s) const;

  /// Downward closure; idempotent.
  Hypergraph closure() const;
  /// Maximal members (an antichain).
  Hypergraph generating_class() const;
  bool is_closed() const;

  /// Cycle hypergraph c3 and path hypergraph p3 on three units.
  static Hypergraph c3();
  static Hypergraph p3();
  /// Closure of all k-subsets of {1..n}.
  static Hypergraph n_choose_k(int n, int k);

  bool operator==(const Hypergraph& other) const = default;

 private:
  int n_units_ = 0;
  std::vector<UnitSet> subsets_;
};

/// Ordered orthogonal basis of U(g, a): the identity first, then for every
/// member nu of g (in hypergraph order) all Pauli words that are
/// non-identity exactly on nu. Elements keep the raw Pauli-word scale,
/// hs_inner(e, e) = 2^N.
class LocalSpaceBasis {
 public:
  LocalSpaceBasis(Hypergraph g, std::vector<AlgebraKind> algebras,
                  std::vector<std::string> labels);

  const Hypergraph& hypergraph() const { return g_; }
  const std::vector<AlgebraKind>& algebras() const { return algebras_; }
  const std::vector<HermitianMatrix>& elements() const& { return elements_; }
  std::vector<HermitianMatrix> elements() && { return std::move(elements_); }
  const std::vector<std::string>& labels() const& { return labels_; }
  std::vector<std::string> labels() && { return std::move(labels_); }
  std::size_t size() const { return elements_.size(); }
  std::size_t d() const { return d_; }

  /// Position of a Pauli word among the elements, if present.
  std::optional<std::size_t> index_of(std::string_view label) const;

  /// Coefficients z with A = sum_i z_i e_i + (part orthogonal to U).
  RealVector coordinates(const HermitianMatrix& a) const;
  HermitianMatrix assemble(std::span<const double> coords) const;

 private:
  Hypergraph g_;
  std::vector<AlgebraKind> algebras_;
  std::vector<HermitianMatrix> elements_;
  std::vector<std::string> labels_;
  std::size_t d_ = 0;
};

/// Throws std::invalid_argument if g is not closed (callers must take the
/// closure first) or the number of algebras differs from g's unit count.
LocalSpaceBasis factor_interaction_basis(const Hypergraph& g,
                                         const std::vector<AlgebraKind>& algebras);

/// sum over nu in g of prod_{i in nu} (hdim(A_i) - 1).
std::size_t space_dimension(const Hypergraph& g, const std::vector<AlgebraKind>& algebras);

/// Pauli words of the algebra that are orthogonal to U(g, a): those whose
/// non-identity support is not a member of g. Spans U^perp inside H(A).
std::vector<HermitianMatrix> complement_basis(const Hypergraph& g,
                                              const std::vector<AlgebraKind>& algebras);

/// Tr over the units outside `keep`; kept units stay in increasing order.
/// Throws std::invalid_argument if dim(a) is not 2^N or keep is not a
/// subset of {1..N}.
HermitianMatrix partial_trace(const HermitianMatrix& a, int n_units, UnitSet keep);

/// Embedding B -> B (x) I on the complement of `units`, the adjoint of
/// partial_trace.
HermitianMatrix embed(const HermitianMatrix& b, int n_units, UnitSet units);

/// Marginals over the generating class of g, in hypergraph order.
std::vector<std::pair<UnitSet, HermitianMatrix>> marginal_map(const HermitianMatrix& a,
                                                              const Hypergraph& g);

/// Orthogonal projection onto U with respect to the Hilbert-Schmidt product.
HermitianMatrix project_onto_space(const HermitianMatrix& a, const LocalSpaceBasis& basis);

/// Model descriptors: "c3-qubit", "p3-qubit", "c3-bit", "p3-bit",
/// "c3-realtwo", "p3-realtwo".
std::optional<LocalSpaceBasis> basis_for_model(std::string_view descriptor);

}  // namespace coatom
