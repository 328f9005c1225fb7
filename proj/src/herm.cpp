#include "coatom/herm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace coatom {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) {
    throw std::invalid_argument("ComplexMatrix: expected " + std::to_string(dim_ * dim_) +
                                " entries, got " + std::to_string(data_.size()));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexVector ComplexMatrix::apply(std::span<const Complex> v) const {
  require_same_dim(dim_, v.size(), "ComplexMatrix::apply");
  ComplexVector out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(dim_, other.dim_, "ComplexMatrix::operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(dim_, other.dim_, "ComplexMatrix::operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "ComplexMatrix::operator*");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex(0.0)) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
  ComplexMatrix out(n);
  for (std::size_t ra = 0; ra < na; ++ra)
    for (std::size_t ca = 0; ca < na; ++ca) {
      const Complex s = a(ra, ca);
      if (s == Complex(0.0)) continue;
      for (std::size_t rb = 0; rb < nb; ++rb)
        for (std::size_t cb = 0; cb < nb; ++cb) out(ra * nb + rb, ca * nb + cb) = s * b(rb, cb);
    }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(std::size_t dim) : m_(dim) {}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) : m_(m.dim()) {
  const std::size_t n = m.dim();
  double scale = 1.0;
  for (const auto& z : m.data()) scale = std::max(scale, std::abs(z));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) {
      const Complex a = m(r, c), b = std::conj(m(c, r));
      if (std::abs(a - b) > 1e-9 * scale) {
        throw std::invalid_argument("HermitianMatrix: entry (" + std::to_string(r) + "," +
                                    std::to_string(c) + ") violates hermiticity");
      }
      const Complex avg = 0.5 * (a + b);
      m_(r, c) = r == c ? Complex(avg.real(), 0.0) : avg;
      m_(c, r) = std::conj(m_(r, c));
    }
  }
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
  HermitianMatrix h(dim);
  for (std::size_t i = 0; i < dim; ++i) h.m_(i, i) = 1.0;
  return h;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> diag) {
  HermitianMatrix h(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) h.m_(i, i) = diag[i];
  return h;
}

HermitianMatrix HermitianMatrix::outer(std::span<const Complex> v) {
  HermitianMatrix h(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) h.m_(r, c) = v[r] * std::conj(v[c]);
  for (std::size_t i = 0; i < v.size(); ++i) h.m_(i, i) = h.m_(i, i).real();
  return h;
}

void HermitianMatrix::set(std::size_t r, std::size_t c, Complex value) {
  if (r == c) {
    m_(r, r) = value.real();
  } else {
    m_(r, c) = value;
    m_(c, r) = std::conj(value);
  }
}

double HermitianMatrix::trace() const { return m_.trace().real(); }

double HermitianMatrix::max_abs_entry() const {
  double m = 0.0;
  for (const auto& z : m_.data()) m = std::max(m, std::abs(z));
  return m;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  m_ += other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  m_ -= other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(kron(a.matrix(), b.matrix()));
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "hs_inner");
  // Tr(AB) = sum_{rc} A_rc B_cr = sum_{rc} A_rc conj(B_rc) for hermitian B.
  double s = 0.0;
  const auto da = a.matrix().data(), db = b.matrix().data();
  for (std::size_t i = 0; i < da.size(); ++i)
    s += da[i].real() * db[i].real() + da[i].imag() * db[i].imag();
  return s;
}

double max_abs_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  return max_abs_diff(a.matrix(), b.matrix());
}

// ---------------------------------------------------------------------------
// Eigendecomposition

EigenDecomposition eig_hermitian(const HermitianMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<Complex> m(a.matrix().data().begin(), a.matrix().data().end());
  std::vector<Complex> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double norm = a.frobenius_norm();
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c) s += std::norm(m[r * n + c]);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() <= 1e-13 * norm) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = m[p * n + q];
        const double abs_apq = std::abs(apq);
        if (abs_apq == 0.0) continue;
        const double app = m[p * n + p].real(), aqq = m[q * n + q].real();
        // Once the rotation would not change the diagonal in floating point,
        // drop the entry.
        if (sweep > 3 && std::abs(app) + 1e3 * abs_apq == std::abs(app) &&
            std::abs(aqq) + 1e3 * abs_apq == std::abs(aqq)) {
          m[p * n + q] = m[q * n + p] = 0.0;
          continue;
        }
        const Complex phase = apq / abs_apq;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * abs_apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        const Complex e_minus = std::conj(phase);

        // A <- A V with V = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = m[r * n + p], arq = m[r * n + q];
          m[r * n + p] = c * arp - s * e_minus * arq;
          m[r * n + q] = s * arp + c * e_minus * arq;
        }
        // A <- V^* A
        for (std::size_t r = 0; r < n; ++r) {
          const Complex apr = m[p * n + r], aqr = m[q * n + r];
          m[p * n + r] = c * apr - s * phase * aqr;
          m[q * n + r] = s * apr + c * phase * aqr;
        }
        m[p * n + q] = m[q * n + p] = 0.0;
        m[p * n + p] = app - t * abs_apq;
        m[q * n + q] = aqq + t * abs_apq;
        for (std::size_t r = 0; r < n; ++r) {
          const Complex vrp = v[r * n + p], vrq = v[r * n + q];
          v[r * n + p] = c * vrp - s * e_minus * vrq;
          v[r * n + q] = s * vrp + c * e_minus * vrq;
        }
      }
    }
  }
  if (!converged && off_norm() > 1e-13 * norm) {
    throw ConvergenceError("eig_hermitian: no convergence after 100 sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return m[i * n + i].real() < m[j * n + j].real();
  });

  EigenDecomposition out;
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (std::size_t k : order) {
    out.eigenvalues.push_back(m[k * n + k].real());
    ComplexVector vec(n);
    double nrm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      vec[r] = v[r * n + k];
      nrm += std::norm(vec[r]);
    }
    nrm = std::sqrt(nrm);
    Complex fix = 1.0 / nrm;
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(vec[r]) > 1e-10) {
        fix = std::conj(vec[r]) / (std::abs(vec[r]) * nrm);
        break;
      }
    }
    for (auto& z : vec) z *= fix;
    out.eigenvectors.push_back(std::move(vec));
  }
  return out;
}

double spectral_norm(const EigenDecomposition& eig) {
  double m = 0.0;
  for (double l : eig.eigenvalues) m = std::max(m, std::abs(l));
  return m;
}

// ---------------------------------------------------------------------------
// Projectors

Projector::Projector(std::size_t dim, std::vector<ComplexVector> range_basis)
    : matrix_(dim), range_basis_(std::move(range_basis)) {
  ComplexMatrix m(dim);
  for (const auto& v : range_basis_) {
    require_same_dim(dim, v.size(), "Projector");
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) m(r, c) += v[r] * std::conj(v[c]);
  }
  matrix_ = HermitianMatrix(m);
}

Projector Projector::identity(std::size_t dim) {
  std::vector<ComplexVector> basis;
  for (std::size_t i = 0; i < dim; ++i) {
    ComplexVector e(dim, 0.0);
    e[i] = 1.0;
    basis.push_back(std::move(e));
  }
  return Projector(dim, std::move(basis));
}

Projector Projector::diagonal(std::size_t dim, std::span<const std::size_t> states) {
  std::vector<ComplexVector> basis;
  for (std::size_t s : states) {
    if (s >= dim) throw std::invalid_argument("Projector::diagonal: state out of range");
    ComplexVector e(dim, 0.0);
    e[s] = 1.0;
    basis.push_back(std::move(e));
  }
  return Projector(dim, std::move(basis));
}

Projector Projector::complement() const {
  const std::size_t n = dim();
  // Orthonormal complement by Gram-Schmidt against the range, sweeping the
  // computational basis.
  std::vector<ComplexVector> all = range_basis_;
  std::vector<ComplexVector> out;
  for (std::size_t i = 0; i < n && all.size() < n; ++i) {
    ComplexVector e(n, 0.0);
    e[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : all) {
        Complex ip = 0.0;
        for (std::size_t r = 0; r < n; ++r) ip += std::conj(u[r]) * e[r];
        for (std::size_t r = 0; r < n; ++r) e[r] -= ip * u[r];
      }
    }
    double nrm = 0.0;
    for (const auto& z : e) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-6) continue;
    for (auto& z : e) z /= nrm;
    all.push_back(e);
    out.push_back(std::move(e));
  }
  return Projector(n, std::move(out));
}

namespace {

Projector projector_from(const EigenDecomposition& eig, std::size_t dim, auto&& keep) {
  std::vector<ComplexVector> basis;
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i)
    if (keep(eig.eigenvalues[i])) basis.push_back(eig.eigenvectors[i]);
  return Projector(dim, std::move(basis));
}

}  // namespace

Projector ground_projector(const HermitianMatrix& a, double gap_tol) {
  const auto eig = eig_hermitian(a);
  if (eig.eigenvalues.empty()) return Projector::zero(0);
  const double lmin = eig.eigenvalues.front();
  const double cut = gap_tol * std::max(1.0, spectral_norm(eig));
  return projector_from(eig, a.dim(), [&](double l) { return l - lmin <= cut; });
}

Projector support_projector(const HermitianMatrix& rho, double gap_tol) {
  const auto eig = eig_hermitian(rho);
  if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < -1e-8) {
    throw std::invalid_argument("support_projector: matrix is not positive semidefinite");
  }
  const double cut = gap_tol * std::max(1.0, spectral_norm(eig));
  return projector_from(eig, rho.dim(), [&](double l) { return l > cut; });
}

std::size_t numerical_rank(const EigenDecomposition& eig, double rel_tol) {
  const double cut = rel_tol * std::max(1.0, spectral_norm(eig));
  return static_cast<std::size_t>(std::count_if(
      eig.eigenvalues.begin(), eig.eigenvalues.end(),
      [&](double l) { return std::abs(l) > cut; }));
}

std::size_t numerical_rank(const HermitianMatrix& a, double rel_tol) {
  return numerical_rank(eig_hermitian(a), rel_tol);
}

Projector kernel_projector(const EigenDecomposition& eig, double rel_tol) {
  const double cut = rel_tol * std::max(1.0, spectral_norm(eig));
  const std::size_t n = eig.eigenvalues.size();
  return projector_from(eig, n, [&](double l) { return std::abs(l) <= cut; });
}

Projector kernel_projector(const HermitianMatrix& a, double rel_tol) {
  return kernel_projector(eig_hermitian(a), rel_tol);
}

}  // namespace coatom
