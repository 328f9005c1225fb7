#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "coatom/herm.hpp"

namespace coatom {

NullspaceResult real_nullspace(std::span<const RealVector> rows, std::size_t m, double tol) {
  NullspaceResult out;
  for (const auto& row : rows) {
    if (row.size() != m) {
      throw std::invalid_argument("real_nullspace: row of length " + std::to_string(row.size()) +
                                  ", expected " + std::to_string(m));
    }
  }
  const std::size_t n = rows.size();

  // Columns of R, stored contiguously. Hestenes rotations orthogonalize them
  // while V accumulates the right singular vectors.
  std::vector<RealVector> col(m, RealVector(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m; ++c) col[c][r] = rows[r][c];
  std::vector<RealVector> v(m, RealVector(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) v[i][i] = 1.0;

  // Columns below rounding level of the whole matrix are numerically zero;
  // rotating them against each other only chases noise.
  double fro2 = 0.0;
  for (const auto& c : col)
    for (double x : c) fro2 += x * x;
  const double negligible = fro2 * 1e-30;

  constexpr int kMaxSweeps = 80;
  const double kEps = std::max(1e-15, static_cast<double>(n) * std::numeric_limits<double>::epsilon());
  int sweep = 0;
  for (; sweep < kMaxSweeps && n > 0; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          alpha += col[i][r] * col[i][r];
          beta += col[j][r] * col[j][r];
          gamma += col[i][r] * col[j][r];
        }
        if (alpha <= negligible || beta <= negligible) continue;
        if (std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        for (std::size_t r = 0; r < n; ++r) {
          const double a = col[i][r], b = col[j][r];
          col[i][r] = c * a - s * b;
          col[j][r] = s * a + c * b;
        }
        for (std::size_t r = 0; r < m; ++r) {
          const double a = v[i][r], b = v[j][r];
          v[i][r] = c * a - s * b;
          v[j][r] = s * a + c * b;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == kMaxSweeps) throw ConvergenceError("real_nullspace: Jacobi SVD did not converge");

  RealVector sigma(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (double x : col[i]) s += x * x;
    sigma[i] = std::sqrt(s);
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  const double smax = m > 0 ? sigma[order.front()] : 0.0;
  out.cutoff = tol * smax;
  for (std::size_t k : order) {
    out.singular_values.push_back(sigma[k]);
    if (sigma[k] <= out.cutoff) out.basis.push_back(v[k]);
  }
  out.dimension = out.basis.size();
  return out;
}

}  // namespace coatom
