#include "coatom/family.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace coatom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpecialTol = 1e-12;

const LocalSpaceBasis& c3_qubit_basis() {
  static const LocalSpaceBasis basis = *basis_for_model("c3-qubit");
  return basis;
}

bool near(double x, double target) { return std::abs(x - target) <= kSpecialTol; }

}  // namespace

HermitianMatrix m_family_dense(double a, double t) {
  const double eta = 4.0 - a * a;
  const double c = std::cos(t), s = std::sin(t), s2 = std::sin(2.0 * t);
  const double r = std::sqrt(std::max(eta, 0.0));
  HermitianMatrix m(8);
  m.set(0, 0, a * a);
  m.set(2, 2, 4.0 * c * c);
  m.set(2, 3, -r * s2);
  m.set(3, 3, eta * s * s);
  m.set(4, 4, 4.0 * s * s);
  m.set(4, 5, r * s2);
  m.set(5, 5, eta * c * c);
  return m;
}

HermitianMatrix m_family_pauli(double a, double t) {
  const double a2 = a * a, eta = 4.0 - a2;
  const double s = std::sin(t), c = std::cos(t);
  const double r = std::sqrt(std::max(eta, 0.0));
  HermitianMatrix m = pauli_word("III");
  m += (a2 / 4.0) * (pauli_word("IIZ") + (s * s) * pauli_word("IZI") + (c * c) * pauli_word("ZII"));
  m += (r / 2.0 * std::sin(2.0 * t)) * (pauli_word("IZX") - pauli_word("ZIX"));
  m += (a2 / 8.0) * (pauli_word("IZZ") + pauli_word("ZIZ"));
  m -= ((8.0 - a2) / 8.0 * std::cos(2.0 * t)) * (pauli_word("IZZ") - pauli_word("ZIZ"));
  m -= (eta / 4.0) * pauli_word("ZZI");
  return m;
}

FamilyPoint m_family(double a, double t) {
  if (!(a >= 0.0 && a <= 2.0)) throw std::invalid_argument("m_family: a must lie in [0, 2]");
  if (!(t >= 0.0 && t < kPi)) throw std::invalid_argument("m_family: t must lie in [0, pi)");
  FamilyPoint p;
  p.a = a;
  p.t = t;
  p.eta = 4.0 - a * a;
  p.dense = m_family_dense(a, t);
  if (max_abs_diff(p.dense, m_family_pauli(a, t)) > 1e-10) {
    throw std::logic_error("m_family: block form and Pauli expansion disagree");
  }
  p.pauli_coords = c3_qubit_basis().coordinates(p.dense);
  return p;
}

bool family_is_special(double a, double t) {
  return near(a, 0.0) || near(a, 2.0) || near(t, 0.0) || near(t, kPi / 2.0);
}

std::vector<ComplexVector> family_kernel_basis(double a, double t) {
  if (family_is_special(a, t)) {
    throw std::invalid_argument("family_kernel_basis: special parameters change the kernel");
  }
  const double r = std::sqrt(4.0 - a * a), s2 = std::sin(2.0 * t);
  const double c = std::cos(t), s = std::sin(t);
  auto basis_state = [](std::size_t i) {
    ComplexVector v(8, 0.0);
    v[i] = 1.0;
    return v;
  };
  auto two_term = [](std::size_t i, double x, std::size_t j, double y) {
    const double n = std::hypot(x, y);
    ComplexVector v(8, 0.0);
    v[i] = x / n;
    v[j] = y / n;
    return v;
  };
  return {basis_state(1), basis_state(6), basis_state(7),
          two_term(2, r * s2, 3, 4.0 * c * c), two_term(4, r * s2, 5, -4.0 * s * s)};
}

std::vector<double> default_a_grid() { return {0.2, 0.6, 1.0, 1.4, 1.8}; }

std::vector<double> default_t_grid() {
  return {kPi / 8.0, kPi / 4.0, 3.0 * kPi / 8.0, 5.0 * kPi / 8.0, 3.0 * kPi / 4.0};
}

std::vector<FamilyCertificate> certify_family(const std::vector<double>& a_grid,
                                              const std::vector<double>& t_grid) {
  const auto& basis = c3_qubit_basis();
  std::vector<FamilyCertificate> out;
  for (double a : a_grid)
    for (double t : t_grid) {
      const FamilyPoint fp = m_family(a, t);
      FamilyCertificate row;
      row.a = a;
      row.t = t;
      const auto eig = eig_hermitian(fp.dense);
      row.rank = numerical_rank(eig);
      row.min_eigenvalue = eig.eigenvalues.front();
      if (!family_is_special(a, t)) {
        for (const auto& v : family_kernel_basis(a, t)) {
          const auto mv = fp.dense.matrix().apply(v);
          for (const auto& x : mv) row.kernel_residual = std::max(row.kernel_residual, std::abs(x));
        }
      }
      const Projector p = kernel_projector(eig);
      row.projector_rank = p.rank();
      row.collinearity_residual = std::numeric_limits<double>::infinity();
      if (p.rank() == 0 || p.rank() == 8) {
        out.push_back(std::move(row));
        continue;
      }
      row.certificate = coatom_certificate(p, basis);
      if (row.certificate.span_dimension == 1) {
        const RealVector& g = row.certificate.intersection_coordinates[0];
        double gn = 0.0, mn = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          gn += g[i] * g[i];
          mn += fp.pauli_coords[i] * fp.pauli_coords[i];
        }
        gn = std::sqrt(gn);
        mn = std::sqrt(mn);
        double dev = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
          dev = std::max(dev, std::abs(g[i] / gn - fp.pauli_coords[i] / mn));
        row.collinearity_residual = dev;
        row.generator_collinear = dev <= 1e-8;
      }
      out.push_back(std::move(row));
    }
  return out;
}

std::vector<SpecialValueRow> special_values_report() {
  const auto& basis = c3_qubit_basis();
  const LmiSpectrahedron s = LmiSpectrahedron::from_local_space(basis);
  const std::vector<double> ts = {0.0, kPi / 8.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0};
  const std::vector<double> as = {0.0, 0.5, 1.0, 1.5, 2.0};

  std::vector<SpecialValueRow> rows;
  auto evaluate = [&](const std::string& regime, double a, double t, bool expected_extreme,
                      std::size_t expected_rank) {
    SpecialValueRow row;
    row.regime = regime;
    row.a = a;
    row.t = t;
    row.expected_extreme = expected_extreme;
    row.expected_rank = expected_rank;
    const FamilyPoint fp = m_family(a, t);
    const auto eig = eig_hermitian(fp.dense);
    row.rank = numerical_rank(eig);
    // M - III has coordinates pauli_coords without the identity entry.
    const RealVector x(fp.pauli_coords.begin() + 1, fp.pauli_coords.end());
    row.point_class = classify_point(s, x);
    const Projector p = kernel_projector(eig);
    if (p.rank() > 0 && p.rank() < 8) {
      const auto cert = coatom_certificate(p, basis);
      row.verdict = cert.verdict;
      row.certificate_dim = cert.dimension;
    }
    row.extreme = row.point_class == PointClass::Boundary &&
                  row.verdict == CertificateVerdict::Coatom;
    rows.push_back(row);
  };

  for (double t : ts) evaluate("M(0,t)", 0.0, t, true, 2);
  for (double t : ts) {
    const bool edge = near(t, 0.0) || near(t, kPi / 2.0);
    evaluate("M(2,t)", 2.0, t, edge, edge ? 2 : 3);
  }
  for (double t : {0.0, kPi / 2.0})
    for (double a : as) {
      const bool edge = near(a, 0.0) || near(a, 2.0);
      evaluate(t == 0.0 ? "M(a,0)" : "M(a,pi/2)", a, t, edge, edge ? 2 : 3);
    }
  return rows;
}

}  // namespace coatom
