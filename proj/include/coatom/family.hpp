#pragma once

// The two-parameter family M(a, t) of rank-three two-local three-qubit
// matrices whose kernels are rank-five coatoms.

#include <string>
#include <vector>

#include "coatom/herm.hpp"
#include "coatom/local_space.hpp"
#include "coatom/search.hpp"
#include "coatom/spectra.hpp"

namespace coatom {

struct FamilyPoint {
  double a = 0.0;
  double t = 0.0;
  double eta = 0.0;  // 4 - a^2
  HermitianMatrix dense;
  RealVector pauli_coords;  // in the c3-qubit basis, identity first
};

/// Block form of M(a, t).
HermitianMatrix m_family_dense(double a, double t);
/// Pauli-word expansion of M(a, t).
HermitianMatrix m_family_pauli(double a, double t);

/// Throws std::invalid_argument unless 0 <= a <= 2 and 0 <= t < pi, and
/// std::logic_error if the two forms disagree by more than 1e-10.
FamilyPoint m_family(double a, double t);

/// |001>, |110>, |111>, psi_1, psi_2, normalized. Throws
/// std::invalid_argument at a in {0, 2} or t in {0, pi/2}, where the kernel
/// changes dimension.
std::vector<ComplexVector> family_kernel_basis(double a, double t);

/// True when a or t sits at a value where the rank of M(a, t) drops.
bool family_is_special(double a, double t);

struct FamilyCertificate {
  double a = 0.0;
  double t = 0.0;
  std::size_t rank = 0;
  std::size_t projector_rank = 0;
  double min_eigenvalue = 0.0;
  double kernel_residual = 0.0;  // max |M v| over the stated kernel vectors; 0 if special
  CoatomCertificate certificate;
  /// Largest coordinate deviation between the normalized generator and the
  /// normalized M(a, t); infinite when the certificate is not one-dimensional.
  double collinearity_residual = 0.0;
  bool generator_collinear = false;
};

std::vector<double> default_a_grid();
std::vector<double> default_t_grid();

/// Certifies the kernel projector of every M(a, t) on the grid against the
/// c3-qubit basis, ordered by (a, t).
std::vector<FamilyCertificate> certify_family(const std::vector<double>& a_grid,
                                              const std::vector<double>& t_grid);

struct SpecialValueRow {
  std::string regime;  // "M(0,t)", "M(2,t)", "M(a,0)", "M(a,pi/2)"
  double a = 0.0;
  double t = 0.0;
  std::size_t rank = 0;
  std::size_t expected_rank = 0;
  PointClass point_class = PointClass::Interior;  // of M(a, t) - III
  CertificateVerdict verdict = CertificateVerdict::Inconclusive;
  std::size_t certificate_dim = 0;
  bool extreme = false;  // boundary point whose kernel projector is a coatom
  bool expected_extreme = false;
};

/// Ranks and extremality of M(a, t) - III at the special parameter values,
/// next to the values the case analysis predicts.
std::vector<SpecialValueRow> special_values_report();

}  // namespace coatom
