#pragma once

// Reference computations written independently of the library code paths:
// index-formula Kronecker products and partial traces, closed-form small
// eigenvalues, and random test inputs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "coatom/herm.hpp"

namespace oracle {

using coatom::Complex;
using coatom::ComplexMatrix;
using coatom::HermitianMatrix;

inline HermitianMatrix random_hermitian(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  ComplexMatrix m(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r; c < d; ++c) {
      const Complex v = r == c ? Complex(g(rng), 0.0) : Complex(g(rng), g(rng));
      m(r, c) = scale * v;
      m(c, r) = scale * std::conj(v);
    }
  return HermitianMatrix(m);
}

/// G G^* / Tr(G G^*) for a Gaussian G: full-rank density matrix.
inline HermitianMatrix random_state(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(d);
  for (auto& z : a.data()) z = Complex(g(rng), g(rng));
  ComplexMatrix rho = a * a.adjoint();
  const double tr = rho.trace().real();
  rho *= Complex(1.0 / tr);
  return HermitianMatrix(rho);
}

/// Random pure state |v><v|.
inline HermitianMatrix random_pure_state(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  coatom::ComplexVector v(d);
  double n = 0.0;
  for (auto& z : v) {
    z = Complex(g(rng), g(rng));
    n += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(n);
  return HermitianMatrix::outer(v);
}

/// (A (x) B)[(i k), (j l)] = A[i j] B[k l].
inline ComplexMatrix kron_by_index(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim(), m = b.dim();
  ComplexMatrix out(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) out(i * m + k, j * m + l) = a(i, j) * b(k, l);
  return out;
}

/// Partial trace over qubit units outside `keep` (bit u-1 for unit u, unit 1
/// most significant), summing matrix elements whose traced digits agree.
inline ComplexMatrix partial_trace_by_digits(const ComplexMatrix& a, int n, unsigned keep) {
  std::vector<int> kept;
  for (int u = 1; u <= n; ++u)
    if (keep & (1u << (u - 1))) kept.push_back(u);
  const std::size_t dk = std::size_t{1} << kept.size();
  ComplexMatrix out(dk);
  auto digit = [n](std::size_t x, int u) { return (x >> (n - u)) & 1u; };
  auto reduced = [&](std::size_t x) {
    std::size_t r = 0;
    for (int u : kept) r = (r << 1) | digit(x, u);
    return r;
  };
  const std::size_t d = std::size_t{1} << n;
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) {
      bool traced_equal = true;
      for (int u = 1; u <= n; ++u)
        if (!(keep & (1u << (u - 1))) && digit(x, u) != digit(y, u)) traced_equal = false;
      if (traced_equal) out(reduced(x), reduced(y)) += a(x, y);
    }
  return out;
}

/// Eigenvalues of a real symmetric 3x3 matrix, ascending (trigonometric form).
inline std::vector<double> symmetric3_eigenvalues(const double m[3][3]) {
  const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
  const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
  if (p1 == 0.0) {
    std::vector<double> e = {m[0][0], m[1][1], m[2][2]};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                    (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  double b[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
  const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                      b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                      b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  std::vector<double> e = {e3, 3.0 * q - e1 - e3, e1};
  std::sort(e.begin(), e.end());
  return e;
}

/// Eigenvalues of [[a, b], [conj b, c]], ascending.
inline std::pair<double, double> hermitian2_eigenvalues(double a, Complex b, double c) {
  const double mid = 0.5 * (a + c), rad = std::hypot(0.5 * (a - c), std::abs(b));
  return {mid - rad, mid + rad};
}

/// Smallest eigenvalue of the Cayley matrix [[1,x,y],[x,1,z],[y,z,1]].
inline double cayley_min_eigenvalue(double x, double y, double z) {
  const double m[3][3] = {{1, x, y}, {x, 1, z}, {y, z, 1}};
  return symmetric3_eigenvalues(m)[0];
}

/// Rank of a small integer matrix by fraction-free Gaussian elimination.
inline std::size_t integer_rank(std::vector<std::vector<long long>> rows) {
  std::size_t rank = 0;
  const std::size_t ncols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < ncols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const long long f = rows[r][c], g = rows[rank][c];
      for (std::size_t k = 0; k < ncols; ++k) rows[r][k] = rows[r][k] * g - rows[rank][k] * f;
    }
    ++rank;
  }
  return rank;
}

}  // namespace oracle
