#include <catch_amalgamated.hpp>

#include <random>

#include "coatom/local_space.hpp"
#include "oracles.hpp"

using namespace coatom;
using Catch::Approx;

namespace {

UnitSet units(std::initializer_list<int> members) {
  UnitSet s = 0;
  for (int u : members) s |= UnitSet{1} << (u - 1);
  return s;
}

const std::vector<AlgebraKind> kQubits(3, AlgebraKind::Qubit);
const std::vector<AlgebraKind> kBits(3, AlgebraKind::Bit);

HermitianMatrix ghz() {
  ComplexVector v(8, 0.0);
  v[0] = v[7] = 1.0 / std::sqrt(2.0);
  return HermitianMatrix::outer(v);
}

HermitianMatrix half_00_11() {
  const std::vector<double> d = {0.5, 0, 0, 0.5};
  return HermitianMatrix::diagonal(d);
}

}  // namespace

TEST_CASE("closure of the three-cycle and the path") {
  const Hypergraph cyc(3, {{1, 2}, {2, 3}, {3, 1}});
  const auto c = cyc.closure();
  CHECK(c.subsets() == std::vector<UnitSet>{0, units({1}), units({2}), units({3}), units({1, 2}),
                                            units({1, 3}), units({2, 3})});
  CHECK(c == Hypergraph::c3());
  CHECK(c.closure() == c);

  const auto p = Hypergraph(3, {{1, 2}, {2, 3}}).closure();
  CHECK(p.subsets().size() == 6);
  CHECK(p == Hypergraph::p3());

  const Hypergraph empty_set(3, std::vector<UnitSet>{0});
  CHECK(empty_set.closure().subsets() == std::vector<UnitSet>{0});
}

TEST_CASE("generating class is an antichain and closure is downward closed") {
  const auto g = Hypergraph::n_choose_k(4, 2);
  const auto gen = g.generating_class();
  for (UnitSet a : gen.subsets())
    for (UnitSet b : gen.subsets())
      if (a != b) CHECK((a & b) != a);
  for (UnitSet a : g.subsets())
    for (UnitSet sub = a;; sub = (sub - 1) & a) {
      CHECK(g.contains(sub));
      if (sub == 0) break;
    }
  CHECK(g.is_closed());
  CHECK_FALSE(Hypergraph(3, std::vector<std::vector<int>>{{1, 2}}).is_closed());
  CHECK_THROWS_AS(Hypergraph(3, std::vector<std::vector<int>>{{1, 4}}), std::invalid_argument);
}

TEST_CASE("basis sizes") {
  CHECK(factor_interaction_basis(Hypergraph::c3(), kQubits).size() == 37);
  CHECK(factor_interaction_basis(Hypergraph::p3(), kQubits).size() == 28);
  const auto bits = factor_interaction_basis(Hypergraph::c3(), kBits);
  CHECK(bits.size() == 7);
  CHECK_FALSE(bits.index_of("ZZZ").has_value());
  for (const auto& label : bits.labels()) CHECK(label.find_first_not_of("IZ") == std::string::npos);

  CHECK(space_dimension(Hypergraph::c3(), kQubits) == 37);
  CHECK(space_dimension(Hypergraph(3, std::vector<UnitSet>{0}), kQubits) == 1);
  const std::vector<AlgebraKind> real2(3, AlgebraKind::RealTwo);
  CHECK(space_dimension(Hypergraph::c3(), real2) == 19);
  CHECK(factor_interaction_basis(Hypergraph::c3(), real2).size() == 19);
}

TEST_CASE("basis requires a closed hypergraph") {
  CHECK_THROWS_AS(factor_interaction_basis(Hypergraph(3, {{1, 2}, {2, 3}}), kQubits),
                  std::invalid_argument);
  CHECK_THROWS_AS(factor_interaction_basis(Hypergraph::c3(), std::vector<AlgebraKind>(2)),
                  std::invalid_argument);
}

TEST_CASE("basis order and orthogonality") {
  const auto b = factor_interaction_basis(Hypergraph::c3(), kQubits);
  CHECK(b.labels()[0] == "III");
  CHECK(b.labels()[1] == "XII");
  CHECK(b.labels()[3] == "ZII");
  CHECK(b.labels()[4] == "IXI");
  CHECK(b.labels()[10] == "XXI");
  CHECK(b.labels().back() == "IZZ");
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      CHECK(hs_inner(b.elements()[i], b.elements()[j]) == (i == j ? 8.0 : 0.0));
}

TEST_CASE("p3 dimension drops by the 1-3 interaction for every algebra mix") {
  const AlgebraKind kinds[] = {AlgebraKind::Qubit, AlgebraKind::Bit, AlgebraKind::RealTwo};
  for (auto a1 : kinds)
    for (auto a2 : kinds)
      for (auto a3 : kinds) {
        const std::vector<AlgebraKind> a = {a1, a2, a3};
        const std::size_t drop = (hermitian_dimension(a1) - 1) * (hermitian_dimension(a3) - 1);
        CHECK(space_dimension(Hypergraph::p3(), a) == space_dimension(Hypergraph::c3(), a) - drop);
      }
}

TEST_CASE("partial trace examples") {
  std::mt19937_64 rng(21);
  const auto rho = oracle::random_state(2, rng), sigma = oracle::random_state(2, rng);
  const auto tau = oracle::random_state(2, rng);
  const auto prod = kron(kron(rho, sigma), tau);
  CHECK(max_abs_diff(partial_trace(prod, 3, units({1})), rho) <= 1e-14);

  CHECK(max_abs_diff(partial_trace(HermitianMatrix::identity(8), 3, units({2})),
                     4.0 * HermitianMatrix::identity(2)) == 0.0);
  CHECK(max_abs_diff(partial_trace(ghz(), 3, units({1, 2})), half_00_11()) <= 1e-15);
  CHECK_THROWS_AS(partial_trace(HermitianMatrix::identity(8), 3, units({4})), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(HermitianMatrix::identity(6), 3, units({1})), std::invalid_argument);
}

TEST_CASE("partial trace agrees with the digit-sum oracle") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_hermitian(8, rng);
    for (UnitSet keep = 0; keep < 8; ++keep)
      CHECK(max_abs_diff(partial_trace(a, 3, keep).matrix(),
                         oracle::partial_trace_by_digits(a.matrix(), 3, keep)) <= 1e-13);
  }
}

TEST_CASE("partial trace is adjoint to the embedding") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<UnitSet> pick(1, 7);
  for (int trial = 0; trial < 50; ++trial) {
    const UnitSet nu = pick(rng);
    const auto a = oracle::random_hermitian(8, rng);
    const auto b = oracle::random_hermitian(std::size_t{1} << std::popcount(nu), rng);
    CHECK(std::abs(hs_inner(partial_trace(a, 3, nu), b) - hs_inner(a, embed(b, 3, nu))) <= 1e-10);
  }
}

TEST_CASE("marginal map examples") {
  const auto mixed = (1.0 / 8.0) * HermitianMatrix::identity(8);
  const auto m = marginal_map(mixed, Hypergraph::c3());
  REQUIRE(m.size() == 3);
  for (const auto& [nu, marg] : m) {
    CHECK(std::popcount(nu) == 2);
    CHECK(max_abs_diff(marg, 0.25 * HermitianMatrix::identity(4)) <= 1e-15);
  }
  for (const auto& [nu, marg] : marginal_map(ghz(), Hypergraph::c3()))
    CHECK(max_abs_diff(marg, half_00_11()) <= 1e-15);
}

TEST_CASE("marginal map factors through the projection onto U") {
  const auto basis = factor_interaction_basis(Hypergraph::c3(), kQubits);
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = oracle::random_state(8, rng);
    const auto direct = marginal_map(rho, Hypergraph::c3());
    const auto projected = marginal_map(project_onto_space(rho, basis), Hypergraph::c3());
    REQUIRE(direct.size() == projected.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      CHECK(direct[i].first == projected[i].first);
      CHECK(max_abs_diff(direct[i].second, projected[i].second) <= 1e-12);
    }
  }
}

TEST_CASE("projection onto U examples") {
  const auto bits = factor_interaction_basis(Hypergraph::c3(), kBits);
  CHECK(project_onto_space(pauli_word("ZZZ"), bits).max_abs_entry() <= 1e-15);

  const auto qubits = factor_interaction_basis(Hypergraph::c3(), kQubits);
  for (const auto& e : qubits.elements()) CHECK(max_abs_diff(project_onto_space(e, qubits), e) <= 1e-15);

  ComplexVector e0(8, 0.0);
  e0[0] = 1.0;
  const auto p000 = HermitianMatrix::outer(e0);
  CHECK(max_abs_diff(project_onto_space(p000, qubits), p000) > 0.1);
}

TEST_CASE("projection onto U is idempotent and self-adjoint") {
  const auto basis = factor_interaction_basis(Hypergraph::p3(), kQubits);
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_hermitian(8, rng), b = oracle::random_hermitian(8, rng);
    const auto pa = project_onto_space(a, basis);
    CHECK(max_abs_diff(project_onto_space(pa, basis), pa) <= 1e-10);
    CHECK(std::abs(hs_inner(pa, b) - hs_inner(a, project_onto_space(b, basis))) <= 1e-10);
  }
}

TEST_CASE("complement basis spans the orthogonal complement") {
  const auto comp = complement_basis(Hypergraph::c3(), kQubits);
  CHECK(comp.size() == 27);
  const auto basis = factor_interaction_basis(Hypergraph::c3(), kQubits);
  for (const auto& c : comp)
    for (const auto& e : basis.elements()) CHECK(hs_inner(c, e) == 0.0);
  CHECK(complement_basis(Hypergraph::c3(), kBits).size() == 1);
}

TEST_CASE("coordinates and assemble are inverse on U") {
  const auto basis = factor_interaction_basis(Hypergraph::c3(), kQubits);
  std::mt19937_64 rng(26);
  std::normal_distribution<double> g;
  RealVector z(basis.size());
  for (auto& v : z) v = g(rng);
  const auto a = basis.assemble(z);
  const auto back = basis.coordinates(a);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(back[i] == Approx(z[i]).margin(1e-12));
}

TEST_CASE("model descriptors") {
  CHECK(basis_for_model("c3-qubit")->size() == 37);
  CHECK(basis_for_model("p3-qubit")->size() == 28);
  CHECK(basis_for_model("c3-bit")->size() == 7);
  CHECK(basis_for_model("p3-bit")->size() == 6);
  CHECK(basis_for_model("c3-realtwo")->size() == 19);
  CHECK_FALSE(basis_for_model("c4-qubit").has_value());
}
