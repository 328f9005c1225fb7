#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "coatom/sdp.hpp"
#include "coatom/search.hpp"
#include "oracles.hpp"

using namespace coatom;
using Catch::Approx;

namespace {

const std::vector<RealVector> kVertices = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};

double dist_inf(const RealVector& a, const RealVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

RealVector unit(RealVector v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  for (double& x : v) x /= std::sqrt(n);
  return v;
}

}  // namespace

TEST_CASE("Cayley vertex from the diagonal direction") {
  const auto s = LmiSpectrahedron::cayley_cubic();
  const auto sol = minimize(s, unit({-1, -1, -1}));
  REQUIRE(sol.status == SolveStatus::Converged);
  CHECK(dist_inf(sol.x_star, {1, 1, 1}) <= 1e-6);
  CHECK(numerical_rank(sol.optimum_matrix) == 1);
  CHECK(sol.gap_bound <= 1e-9);
  CHECK(sol.objective == Approx(-std::sqrt(3.0)).margin(1e-8));
}

TEST_CASE("Cayley directions inside a cap reach the same vertex") {
  // The normal cone of (1,1,1) is spanned by the outer normals of the three
  // faces through it; directions near -(1,1,1) stay inside it.
  const auto s = LmiSpectrahedron::cayley_cubic();
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g(0.0, 0.15);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = unit({-1 + g(rng), -1 + g(rng), -1 + g(rng)});
    const auto sol = minimize(s, c);
    REQUIRE(sol.status == SolveStatus::Converged);
    CHECK(dist_inf(sol.x_star, {1, 1, 1}) <= 1e-6);
  }
}

TEST_CASE("edge direction of the qubit instance recovers 4P' - I") {
  const auto basis = *basis_for_model("c3-qubit");
  const auto s = LmiSpectrahedron::from_local_space(basis);
  const std::vector<std::size_t> edge = {0, 7};
  const auto pp = Projector::diagonal(8, edge);
  const auto target = 4.0 * pp.matrix() - HermitianMatrix::identity(8);
  RealVector c = s.coordinates(target);
  for (double& v : c) v = -v;
  const auto sol = minimize(s, unit(c));
  REQUIRE(sol.status == SolveStatus::Converged);
  CHECK(max_abs_diff(sol.optimum_matrix - HermitianMatrix::identity(8), target) <= 1e-6);
  CHECK(numerical_rank(sol.optimum_matrix) == 2);
  CHECK(classify_point(s, sol.x_star) == PointClass::Boundary);
  CHECK(max_abs_diff(kernel_projector(sol.optimum_matrix).matrix(), pp.complement().matrix()) <= 1e-6);
}

TEST_CASE("rejected inputs") {
  const auto s = LmiSpectrahedron::cayley_cubic();
  CHECK_THROWS_AS(minimize(s, RealVector{0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(minimize(s, RealVector{1, 0}), std::invalid_argument);
  SolverOptions bad;
  bad.mu = 1.0;
  CHECK_THROWS_AS(minimize(s, RealVector{1, 0, 0}, bad), std::invalid_argument);

  const auto trivial = factor_interaction_basis(Hypergraph(3, std::vector<UnitSet>{0}),
                                                std::vector<AlgebraKind>(3, AlgebraKind::Qubit));
  CHECK_THROWS_AS(minimize(LmiSpectrahedron::from_local_space(trivial), RealVector{}),
                  std::invalid_argument);
}

TEST_CASE("dual residuals of converged and capped solves") {
  const auto s = LmiSpectrahedron::cayley_cubic();
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = random_direction(3, rng);
    const auto sol = minimize(s, c);
    REQUIRE(sol.status == SolveStatus::Converged);
    const auto r = dual_residuals(s, sol);
    CHECK(r.feasibility <= 1e-9);
    CHECK(r.stationarity <= 1e-6);
    CHECK(eig_hermitian(sol.optimum_matrix).eigenvalues.front() >= -1e-9);
  }
  SolverOptions capped;
  capped.max_outer = 3;
  const auto sol = minimize(s, unit({-1, -1, -1}), capped);
  CHECK(sol.status == SolveStatus::IterationCap);
  const auto r = dual_residuals(s, sol);
  CHECK(std::isfinite(r.feasibility));
  CHECK(std::isfinite(r.stationarity));
}

TEST_CASE("objective is nonincreasing across stages") {
  const auto s = LmiSpectrahedron::from_local_space(*basis_for_model("c3-qubit"));
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sol = minimize(s, random_direction(s.m(), rng));
    REQUIRE(sol.stage_objectives.size() == static_cast<std::size_t>(sol.stages));
    for (std::size_t k = 1; k < sol.stage_objectives.size(); ++k)
      CHECK(sol.stage_objectives[k] <= sol.stage_objectives[k - 1] + 1e-12);
  }
}

TEST_CASE("lower-bound sandwich on Cayley vertex instances") {
  // For c in the normal cone of a vertex v the true optimum is <c, v>.
  const auto s = LmiSpectrahedron::cayley_cubic();
  std::mt19937_64 rng(44);
  std::normal_distribution<double> g(0.0, 0.1);
  for (const auto& v : kVertices)
    for (int trial = 0; trial < 10; ++trial) {
      const auto c = unit({-v[0] + g(rng), -v[1] + g(rng), -v[2] + g(rng)});
      const auto sol = minimize(s, c);
      REQUIRE(sol.status == SolveStatus::Converged);
      const double truth = c[0] * v[0] + c[1] * v[1] + c[2] * v[2];
      CHECK(sol.objective - sol.gap_bound <= truth + 1e-8);
      CHECK(truth <= sol.objective + 1e-8);
    }
}

TEST_CASE("solver is deterministic and scale invariant") {
  const auto s = LmiSpectrahedron::from_local_space(*basis_for_model("c3-qubit"));
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const auto c = random_direction(s.m(), rng);
    const auto a = minimize(s, c), b = minimize(s, c);
    CHECK(a.x_star == b.x_star);
    CHECK(a.newton_iters == b.newton_iters);
    RealVector c2 = c;
    for (double& v : c2) v *= 2.0;
    const auto d = minimize(s, c2);
    CHECK(dist_inf(a.x_star, d.x_star) <= 1e-6);
  }
}

TEST_CASE("bit instance optima are classical vertices") {
  const auto s = LmiSpectrahedron::from_local_space(*basis_for_model("c3-bit"));
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sol = minimize(s, random_direction(s.m(), rng));
    REQUIRE(sol.status == SolveStatus::Converged);
    CHECK(numerical_rank(sol.optimum_matrix) == 2);
    const auto e = eig_hermitian(sol.optimum_matrix).eigenvalues;
    CHECK(e[7] == Approx(4.0).margin(1e-6));
    CHECK(e[6] == Approx(4.0).margin(1e-6));
  }
}
