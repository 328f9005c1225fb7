#pragma once

// Dense complex linear algebra for the small (d <= 64) matrices used
// throughout: hermitian matrices, spectral decompositions and projectors.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coatom {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Raised when an iterative numerical routine fails to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square complex matrix in row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }
  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  ComplexVector apply(std::span<const Complex> v) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);

/// Hermitian d x d matrix. The constructor from a general matrix symmetrizes
/// and rejects entries whose hermitian defect exceeds 1e-9 (relative to the
/// largest entry when that exceeds one).
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t dim);
  explicit HermitianMatrix(const ComplexMatrix& m);

  static HermitianMatrix identity(std::size_t dim);
  static HermitianMatrix diagonal(std::span<const double> diag);
  /// |v><v|
  static HermitianMatrix outer(std::span<const Complex> v);

  std::size_t dim() const { return m_.dim(); }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  /// Sets entry (r, c) and its mirror (c, r) to the conjugate.
  void set(std::size_t r, std::size_t c, Complex value);
  const ComplexMatrix& matrix() const { return m_; }

  double trace() const;
  double frobenius_norm() const { return m_.frobenius_norm(); }
  double max_abs_entry() const;

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double s);

 private:
  ComplexMatrix m_;
};

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, HermitianMatrix a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

/// Hilbert-Schmidt inner product Tr(A B). Throws std::invalid_argument on a
/// dimension mismatch.
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

/// Largest entrywise difference.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const HermitianMatrix& a, const HermitianMatrix& b);

struct EigenDecomposition {
  RealVector eigenvalues;               // nondecreasing
  std::vector<ComplexVector> eigenvectors;  // orthonormal, aligned by index
};

/// Cyclic complex Jacobi. Eigenvectors carry a fixed phase: the first
/// component of magnitude above 1e-10 is real positive. Throws
/// ConvergenceError after 100 sweeps.
EigenDecomposition eig_hermitian(const HermitianMatrix& a);

/// Spectral norm max |lambda|.
double spectral_norm(const EigenDecomposition& eig);

class Projector {
 public:
  Projector() = default;
  /// Builds the orthogonal projector onto the span of the given orthonormal
  /// vectors of length `dim`.
  Projector(std::size_t dim, std::vector<ComplexVector> range_basis);

  static Projector zero(std::size_t dim) { return Projector(dim, {}); }
  static Projector identity(std::size_t dim);
  /// Diagonal projector onto the computational basis states listed.
  static Projector diagonal(std::size_t dim, std::span<const std::size_t> states);

  const HermitianMatrix& matrix() const { return matrix_; }
  std::size_t rank() const { return range_basis_.size(); }
  std::size_t dim() const { return matrix_.dim(); }
  const std::vector<ComplexVector>& range_basis() const& { return range_basis_; }
  std::vector<ComplexVector> range_basis() && { return std::move(range_basis_); }

  /// P' = I - P
  Projector complement() const;

 private:
  HermitianMatrix matrix_;
  std::vector<ComplexVector> range_basis_;
};

inline constexpr double kDefaultGapTol = 1e-8;
inline constexpr double kDefaultRankTol = 1e-6;

/// Spectral projector of all eigenvalues within gap_tol * max(1, |A|_2) of the
/// smallest one.
Projector ground_projector(const HermitianMatrix& a, double gap_tol = kDefaultGapTol);

/// Projector onto eigenvectors with eigenvalue above gap_tol * max(1, |rho|_2).
/// Throws std::invalid_argument if rho has an eigenvalue below -1e-8.
Projector support_projector(const HermitianMatrix& rho, double gap_tol = kDefaultGapTol);

/// Number of eigenvalues with |lambda| > rel_tol * max(1, max |lambda|).
std::size_t numerical_rank(const HermitianMatrix& a, double rel_tol = kDefaultRankTol);
std::size_t numerical_rank(const EigenDecomposition& eig, double rel_tol = kDefaultRankTol);

/// Projector onto the eigenvectors not counted by numerical_rank.
Projector kernel_projector(const HermitianMatrix& a, double rel_tol = kDefaultRankTol);
Projector kernel_projector(const EigenDecomposition& eig, double rel_tol = kDefaultRankTol);

struct NullspaceResult {
  std::size_t dimension = 0;
  std::vector<RealVector> basis;   // orthonormal
  RealVector singular_values;      // descending, length m
  double cutoff = 0.0;             // tol * sigma_max
};

/// Orthonormal basis of {x in R^m : R x = 0} by singular-value thresholding
/// at tol * sigma_max (one-sided Jacobi SVD). An empty system returns the
/// whole space.
NullspaceResult real_nullspace(std::span<const RealVector> rows, std::size_t m,
                               double tol = 1e-8);

}  // namespace coatom
