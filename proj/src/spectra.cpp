#include "coatom/spectra.hpp"

#include <cmath>
#include <stdexcept>

#include "coatom/herm_io.hpp"

namespace coatom {

std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::Interior: return "interior";
    case PointClass::Boundary: return "boundary";
    case PointClass::Outside: return "outside";
  }
  return "?";
}

LmiSpectrahedron::LmiSpectrahedron(std::size_t d, std::vector<HermitianMatrix> basis,
                                   std::vector<std::string> labels)
    : d_(d), basis_(std::move(basis)), labels_(std::move(labels)) {
  if (d == 0) throw std::invalid_argument("LmiSpectrahedron: d must be positive");
  if (!labels_.empty() && labels_.size() != basis_.size()) {
    throw std::invalid_argument("LmiSpectrahedron: label count mismatch");
  }
  norms2_.reserve(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const auto& a = basis_[i];
    if (a.dim() != d) throw std::invalid_argument("LmiSpectrahedron: basis element not d x d");
    if (std::abs(a.trace()) > 1e-12) {
      throw std::invalid_argument("LmiSpectrahedron: basis element " + std::to_string(i) +
                                  " is not traceless");
    }
    norms2_.push_back(hs_inner(a, a));
    if (norms2_.back() <= 0.0) throw std::invalid_argument("LmiSpectrahedron: zero basis element");
  }
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(hs_inner(basis_[i], basis_[j])) > 1e-9 * std::sqrt(norms2_[i] * norms2_[j])) {
        throw std::invalid_argument("LmiSpectrahedron: basis elements " + std::to_string(j) +
                                    " and " + std::to_string(i) + " are not orthogonal");
      }
  sparse_.resize(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (basis_[i](r, c) != Complex(0.0)) sparse_[i].push_back({r, c, basis_[i](r, c)});
}

LmiSpectrahedron LmiSpectrahedron::from_local_space(const LocalSpaceBasis& basis) {
  if (basis.size() == 0 || max_abs_diff(basis.elements().front(),
                                        HermitianMatrix::identity(basis.d())) != 0.0) {
    throw std::invalid_argument("from_local_space: first basis element must be the identity");
  }
  std::vector<HermitianMatrix> elems(basis.elements().begin() + 1, basis.elements().end());
  std::vector<std::string> labels(basis.labels().begin() + 1, basis.labels().end());
  return LmiSpectrahedron(basis.d(), std::move(elems), std::move(labels));
}

LmiSpectrahedron LmiSpectrahedron::cayley_cubic() {
  std::vector<HermitianMatrix> basis;
  for (auto [r, c] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    HermitianMatrix a(3);
    a.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), 1.0);
    basis.push_back(a);
  }
  return LmiSpectrahedron(3, std::move(basis), {"x", "y", "z"});
}

HermitianMatrix LmiSpectrahedron::assemble(std::span<const double> x) const {
  if (x.size() != basis_.size()) {
    throw std::invalid_argument("assemble: expected " + std::to_string(basis_.size()) +
                                " coordinates, got " + std::to_string(x.size()));
  }
  ComplexMatrix out = ComplexMatrix::identity(d_);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (const auto& e : sparse_[i]) out(e.row, e.col) += x[i] * e.value;
  return HermitianMatrix(out);
}

RealVector LmiSpectrahedron::coordinates(const HermitianMatrix& a) const {
  if (a.dim() != d_) throw std::invalid_argument("coordinates: dimension mismatch");
  RealVector x(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) x[i] = hs_inner(basis_[i], a) / norms2_[i];
  return x;
}

nlohmann::json LmiSpectrahedron::to_json() const {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& a : basis_) basis.push_back(matrix_to_json(a));
  nlohmann::json out = {{"d", d_}, {"m", basis_.size()}, {"basis", std::move(basis)}};
  if (!labels_.empty()) out["labels"] = labels_;
  return out;
}

PointClass classify_point(const LmiSpectrahedron& s, std::span<const double> x, double tol) {
  const double lmin = eig_hermitian(s.assemble(x)).eigenvalues.front();
  if (lmin > tol) return PointClass::Interior;
  if (lmin >= -tol) return PointClass::Boundary;
  return PointClass::Outside;
}

double duality_residual(const LmiSpectrahedron& s, std::span<const double> x,
                        const HermitianMatrix& rho) {
  if (rho.dim() != s.d()) throw std::invalid_argument("duality_residual: state dimension mismatch");
  if (classify_point(s, x) == PointClass::Outside) {
    throw std::invalid_argument("duality_residual: point lies outside the spectrahedron");
  }
  // <A, pi_V(rho)> = sum_i x_i |A_i|^2 * (rho's i-th coordinate).
  const RealVector r = s.coordinates(rho);
  double acc = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * s.norms2()[i] * r[i];
  return acc;
}

}  // namespace coatom
