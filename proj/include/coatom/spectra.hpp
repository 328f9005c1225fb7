#pragma once

// Spectrahedra S = {x : I_d + sum_i x_i A_i >= 0} with traceless,
// HS-orthogonal A_i.

#include <json.hpp>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coatom/herm.hpp"
#include "coatom/local_space.hpp"

namespace coatom {

enum class PointClass { Interior, Boundary, Outside };

std::string_view to_string(PointClass c);

/// One stored nonzero of a basis matrix.
struct SparseEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  Complex value;
};

class LmiSpectrahedron {
 public:
  /// Throws std::invalid_argument if an element is not d x d, has a trace
  /// above 1e-12, or two elements are not HS-orthogonal (1e-9 relative).
  LmiSpectrahedron(std::size_t d, std::vector<HermitianMatrix> basis,
                   std::vector<std::string> labels = {});

  /// Drops the leading identity of a local space basis.
  static LmiSpectrahedron from_local_space(const LocalSpaceBasis& basis);
  /// The 3x3 elliptope [[1,x,y],[x,1,z],[y,z,1]].
  static LmiSpectrahedron cayley_cubic();

  std::size_t d() const { return d_; }
  std::size_t m() const { return basis_.size(); }
  const std::vector<HermitianMatrix>& basis() const& { return basis_; }
  std::vector<HermitianMatrix> basis() && { return std::move(basis_); }
  const std::vector<std::string>& labels() const& { return labels_; }
  std::vector<std::string> labels() && { return std::move(labels_); }
  /// Nonzero entries of each A_i (both triangles).
  const std::vector<std::vector<SparseEntry>>& sparse_basis() const { return sparse_; }
  /// hs_inner(A_i, A_i)
  const RealVector& norms2() const { return norms2_; }

  /// I_d + sum_i x_i A_i. Throws std::invalid_argument if |x| != m.
  HermitianMatrix assemble(std::span<const double> x) const;
  /// x_i = hs_inner(A_i, A) / hs_inner(A_i, A_i); the inverse of
  /// A -> assemble(x) - I on the span of the basis.
  RealVector coordinates(const HermitianMatrix& a) const;

  nlohmann::json to_json() const;

 private:
  std::size_t d_ = 0;
  std::vector<HermitianMatrix> basis_;
  std::vector<std::string> labels_;
  std::vector<std::vector<SparseEntry>> sparse_;
  RealVector norms2_;
};

inline constexpr double kBoundaryTol = 1e-7;

PointClass classify_point(const LmiSpectrahedron& s, std::span<const double> x,
                          double tol = kBoundaryTol);

/// 1 + <A, pi_V(rho)> for A = sum_i x_i A_i, where pi_V projects onto the span
/// of the basis. Nonnegative on feasible x for every state rho. Throws
/// std::invalid_argument if x is Outside or rho has the wrong dimension.
double duality_residual(const LmiSpectrahedron& s, std::span<const double> x,
                        const HermitianMatrix& rho);

}  // namespace coatom
