#pragma once

// Log-barrier interior-point minimization of a linear functional over an
// LmiSpectrahedron.

#include <string_view>

#include "coatom/spectra.hpp"

namespace coatom {

struct SolverOptions {
  double gap_tol = 1e-9;     // stop once d / t <= gap_tol
  double mu = 4.0;           // barrier parameter growth per stage
  int max_outer = 60;        // barrier stages
  int max_newton = 50;       // Newton steps per stage
  double newton_tol = 1e-10; // stage ends when lambda^2 / 2 <= newton_tol
  double final_newton_tol = 1e-14;  // same, for the stage that meets gap_tol
  double alpha = 0.25;       // Armijo fraction
  double beta = 0.5;         // backtracking factor
  double t0 = 1.0;
};

enum class SolveStatus { Converged, IterationCap, NumericalFailure };

std::string_view to_string(SolveStatus s);

struct SdpSolution {
  RealVector x_star;
  HermitianMatrix optimum_matrix;
  double objective = 0.0;  // <c, x_star>
  double gap_bound = 0.0;  // d / t at termination
  int newton_iters = 0;    // total over all stages
  int stages = 0;
  double t_final = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  RealVector direction;          // the objective c
  RealVector stage_objectives;   // <c, x> at the end of every stage
};

/// Path-following from x = 0. Throws std::invalid_argument if m = 0, the
/// length of c differs from m, or c = 0.
SdpSolution minimize(const LmiSpectrahedron& s, std::span<const double> c,
                     const SolverOptions& opts = {});

struct DualResiduals {
  double feasibility = 0.0;   // -min(0, lambda_min(optimum_matrix))
  double stationarity = 0.0;  // |t c - grad log det| / t at the final t
};

DualResiduals dual_residuals(const LmiSpectrahedron& s, const SdpSolution& sol);

}  // namespace coatom
