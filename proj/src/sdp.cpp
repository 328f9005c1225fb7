#include "coatom/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coatom {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationCap: return "iteration_cap";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

namespace {


// Lower-triangular L with L L^H = a and a real positive diagonal. Returns
// false when a is not (numerically) positive definite.
bool complex_cholesky(const ComplexMatrix& a, ComplexMatrix& l) {
  const std::size_t n = a.dim();
  l = ComplexMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l(j, k));
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return true;
}

ComplexMatrix lower_inverse(const ComplexMatrix& l) {
  const std::size_t n = l.dim();
  ComplexMatrix inv(n);
  for (std::size_t j = 0; j < n; ++j) {
    inv(j, j) = 1.0 / l(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = 0.0;
      for (std::size_t k = j; k < i; ++k) s -= l(i, k) * inv(k, j);
      inv(i, j) = s / l(i, i);
    }
  }
  return inv;
}

// Real symmetric positive definite solve with diagonal scaling and one step of
// iterative refinement. Returns the relative residual, or infinity when the
// factorization breaks down.
double spd_solve(const std::vector<double>& h, std::size_t n, const RealVector& rhs,
                 RealVector& sol) {
  RealVector scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(h[i * n + i] > 0.0)) return std::numeric_limits<double>::infinity();
    scale[i] = 1.0 / std::sqrt(h[i * n + i]);
  }
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = h[j * n + j] * scale[j] * scale[j];
    for (std::size_t k = 0; k < j; ++k) diag -= l[j * n + k] * l[j * n + k];
    if (!(diag > 0.0)) return std::numeric_limits<double>::infinity();
    const double ljj = std::sqrt(diag);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = h[i * n + j] * scale[i] * scale[j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / ljj;
    }
  }
  auto solve_scaled = [&](const RealVector& b, RealVector& x) {
    RealVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[i] * scale[i];
      for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * y[k];
      y[i] = s / l[i * n + i];
    }
    x.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * x[k];
      x[ii] = s / l[ii * n + ii];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] *= scale[i];
  };
  auto residual = [&](const RealVector& x, RealVector& r) {
    r.assign(n, 0.0);
    double rn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs[i];
      for (std::size_t k = 0; k < n; ++k) s -= h[i * n + k] * x[k];
      r[i] = s;
      rn += s * s;
    }
    return std::sqrt(rn);
  };
  double bn = 0.0;
  for (double v : rhs) bn += v * v;
  bn = std::max(std::sqrt(bn), std::numeric_limits<double>::min());

  solve_scaled(rhs, sol);
  RealVector r, corr;
  residual(sol, r);
  solve_scaled(r, corr);
  for (std::size_t i = 0; i < n; ++i) sol[i] += corr[i];
  return residual(sol, r) / bn;
}

class BarrierSolver {
 public:
  BarrierSolver(const LmiSpectrahedron& s, std::span<const double> c, const SolverOptions& opts)
      : s_(s), c_(c.begin(), c.end()), opts_(opts), d_(s.d()), m_(s.m()),
        cw_(m_, ComplexMatrix(d_)), h_(m_ * m_), g_(m_) {}

  SdpSolution run();

 private:
  // Fills s_mat_ for x, and returns false when it is not positive definite.
  bool factor_at(const RealVector& x);
  void gradient_and_hessian(double t);
  double objective(const RealVector& x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < m_; ++i) v += c_[i] * x[i];
    return v;
  }

  const LmiSpectrahedron& s_;
  RealVector c_;
  SolverOptions opts_;
  std::size_t d_, m_;
  ComplexMatrix l_, linv_, w_;
  std::vector<ComplexMatrix> cw_;  // W A_j W
  std::vector<double> h_;
  RealVector g_;
};

bool BarrierSolver::factor_at(const RealVector& x) {
  const HermitianMatrix smat = s_.assemble(x);
  if (!complex_cholesky(smat.matrix(), l_)) return false;
  linv_ = lower_inverse(l_);
  w_ = linv_.adjoint() * linv_;
  return true;
}

void BarrierSolver::gradient_and_hessian(double t) {
  const auto& sparse = s_.sparse_basis();
  ComplexMatrix b(d_);
  for (std::size_t j = 0; j < m_; ++j) {
    // b = W A_j, then cw_[j] = b W.
    std::fill(b.data().begin(), b.data().end(), Complex(0.0));
    Complex tr = 0.0;
    for (const auto& e : sparse[j]) {
      for (std::size_t r = 0; r < d_; ++r) b(r, e.col) += w_(r, e.row) * e.value;
      tr += w_(e.col, e.row) * e.value;
    }
    g_[j] = t * c_[j] - tr.real();
    ComplexMatrix& cj = cw_[j];
    for (std::size_t r = 0; r < d_; ++r)
      for (std::size_t cc = 0; cc < d_; ++cc) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < d_; ++k) acc += b(r, k) * w_(k, cc);
        cj(r, cc) = acc;
      }
  }
  // H_ij = Re Tr(A_i W A_j W) = Re sum_{(k,c) in A_i} A_i(k,c) (W A_j W)(c,k).
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = i; j < m_; ++j) {
      double acc = 0.0;
      for (const auto& e : sparse[i]) acc += (e.value * cw_[j](e.col, e.row)).real();
      h_[i * m_ + j] = acc;
      h_[j * m_ + i] = acc;
    }
}

SdpSolution BarrierSolver::run() {
  SdpSolution sol;
  sol.direction = c_;
  RealVector x(m_, 0.0), delta(m_), rhs(m_);
  double t = opts_.t0;
  const double d = static_cast<double>(d_);
  sol.status = SolveStatus::IterationCap;

  if (!factor_at(x)) {
    sol.status = SolveStatus::NumericalFailure;
  } else {
    for (int stage = 0; stage < opts_.max_outer; ++stage) {
      bool centered = false;
      // The last stage is centered tightly: its point is the one returned.
      const double tol = d / t <= opts_.gap_tol ? opts_.final_newton_tol : opts_.newton_tol;
      double prev_lambda2 = std::numeric_limits<double>::infinity();
      for (int it = 0; it < opts_.max_newton; ++it) {
        gradient_and_hessian(t);
        for (std::size_t i = 0; i < m_; ++i) rhs[i] = -g_[i];
        const double res = spd_solve(h_, m_, rhs, delta);
        if (!(res <= 1e-6)) {
          sol.status = SolveStatus::NumericalFailure;
          break;
        }
        double gd = 0.0;
        for (std::size_t i = 0; i < m_; ++i) gd += g_[i] * delta[i];
        const double lambda2 = -gd;
        if (lambda2 / 2.0 <= tol) {
          centered = true;
          break;
        }
        // Near the center Newton converges quadratically; a small decrement
        // that stops shrinking is the rounding floor of g at large t.
        if (lambda2 < 1e-6 && lambda2 > 0.5 * prev_lambda2) {
          centered = true;
          break;
        }
        prev_lambda2 = lambda2;
        ++sol.newton_iters;

        // Exact one-dimensional barrier along delta from the eigenvalues of
        // L^-1 dS L^-H, free of the cancellation in log det at large t.
        ComplexMatrix ds(d_);
        const auto& sparse = s_.sparse_basis();
        for (std::size_t i = 0; i < m_; ++i)
          for (const auto& e : sparse[i]) ds(e.row, e.col) += delta[i] * e.value;
        const auto mu = eig_hermitian(HermitianMatrix(linv_ * ds * linv_.adjoint())).eigenvalues;
        const double cdelta = t * objective(delta);
        auto phi = [&](double step) {
          double v = step * cdelta;
          for (double mk : mu) v -= std::log1p(step * mk);
          return v;
        };
        double step = 1.0;
        while (std::any_of(mu.begin(), mu.end(), [&](double mk) { return 1.0 + step * mk <= 0.0; }))
          step *= opts_.beta;
        while (step > 1e-12 && !(phi(step) <= opts_.alpha * step * gd)) step *= opts_.beta;
        if (step <= 1e-12) {
          // No measurable progress left at this t; accept the point as centered
          // if the decrement is already small, otherwise give up.
          if (lambda2 < 1e-6) centered = true;
          else sol.status = SolveStatus::NumericalFailure;
          break;
        }
        RealVector trial = x;
        for (std::size_t i = 0; i < m_; ++i) trial[i] += step * delta[i];
        if (!factor_at(trial)) {
          // Rounding pushed the trial point onto the boundary; retreat.
          bool ok = false;
          for (int k = 0; k < 30 && !ok; ++k) {
            step *= opts_.beta;
            for (std::size_t i = 0; i < m_; ++i) trial[i] = x[i] + step * delta[i];
            ok = factor_at(trial);
          }
          if (!ok) {
            factor_at(x);
            if (lambda2 < 1e-6) centered = true;
            else sol.status = SolveStatus::NumericalFailure;
            break;
          }
        }
        if (trial == x) {
          // The step is below the resolution of x: nothing further to gain.
          centered = true;
          break;
        }
        x = std::move(trial);
      }
      if (sol.status == SolveStatus::NumericalFailure) break;
      sol.stages = stage + 1;
      sol.stage_objectives.push_back(objective(x));
      if (!centered) break;  // Newton cap: IterationCap
      if (d / t <= opts_.gap_tol) {
        sol.status = SolveStatus::Converged;
        break;
      }
      t *= opts_.mu;
    }
  }
  sol.x_star = x;
  sol.optimum_matrix = s_.assemble(x);
  sol.objective = objective(x);
  sol.t_final = t;
  sol.gap_bound = d / t;
  return sol;
}

}  // namespace

SdpSolution minimize(const LmiSpectrahedron& s, std::span<const double> c,
                     const SolverOptions& opts) {
  if (s.m() == 0) throw std::invalid_argument("minimize: spectrahedron has no coordinates");
  if (c.size() != s.m()) {
    throw std::invalid_argument("minimize: objective has " + std::to_string(c.size()) +
                                " entries, expected " + std::to_string(s.m()));
  }
  if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("minimize: zero objective has no target face");
  }
  if (!(opts.mu > 1.0) || !(opts.gap_tol > 0.0) || opts.max_outer < 1 || opts.max_newton < 1 ||
      !(opts.t0 > 0.0)) {
    throw std::invalid_argument("minimize: invalid solver options");
  }
  return BarrierSolver(s, c, opts).run();
}

DualResiduals dual_residuals(const LmiSpectrahedron& s, const SdpSolution& sol) {
  DualResiduals out;
  const auto eig = eig_hermitian(sol.optimum_matrix);
  out.feasibility = -std::min(0.0, eig.eigenvalues.front());
  // grad log det_i = Tr(S^-1 A_i), with S^-1 from the same Cholesky route the
  // solver uses. A singular S leaves the residual infinite.
  ComplexMatrix l;
  if (!complex_cholesky(sol.optimum_matrix.matrix(), l)) {
    out.stationarity = std::numeric_limits<double>::infinity();
    return out;
  }
  const ComplexMatrix linv = lower_inverse(l);
  const ComplexMatrix w = linv.adjoint() * linv;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < s.m(); ++i) {
    Complex tr = 0.0;
    for (const auto& e : s.sparse_basis()[i]) tr += w(e.col, e.row) * e.value;
    const double gi = sol.t_final * sol.direction[i] - tr.real();
    norm2 += gi * gi;
  }
  out.stationarity = std::sqrt(norm2) / sol.t_final;
  return out;
}

}  // namespace coatom
