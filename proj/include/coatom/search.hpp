#pragma once

// Random-direction sampling of extreme points, the coatom certificate
// dim(H(P' A P') ∩ U), and the exposed point attached to a coatom.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "coatom/herm.hpp"
#include "coatom/local_space.hpp"
#include "coatom/sdp.hpp"
#include "coatom/spectra.hpp"

namespace coatom {

/// Normalized vector of independent standard Gaussians: uniform on S^{m-1}.
/// Throws std::invalid_argument for m = 0.
RealVector random_direction(std::size_t m, std::mt19937_64& rng);

/// Generator for trial `index` of a run seeded with `seed`. Streams depend
/// only on (seed, index), so results do not depend on how trials are
/// scheduled.
std::mt19937_64 make_trial_rng(std::uint64_t seed, std::uint64_t index);

enum class CertificateVerdict { Coatom, NotCoatom, Inconclusive };

std::string_view to_string(CertificateVerdict v);

struct CoatomCertificate {
  /// Dimension of {B in U : B P = 0}. When that space is a single line whose
  /// generator is indefinite on the range of P', the cone K(P) is {0} and the
  /// dimension is reported as 0.
  std::size_t dimension = 0;
  /// Dimension of the linear solution space before the cone check.
  std::size_t span_dimension = 0;
  std::vector<HermitianMatrix> intersection_basis;
  /// Coordinates of the intersection basis in the space's own basis.
  std::vector<RealVector> intersection_coordinates;
  CertificateVerdict verdict = CertificateVerdict::Inconclusive;
  double tolerance_used = 0.0;
  /// Smallest kept over largest dropped singular value.
  double gap_ratio = 0.0;
  RealVector singular_values;
};

inline constexpr double kCertificateTol = 1e-8;
inline constexpr double kInconclusiveRatio = 1e3;

/// `space` spans U and must contain the identity among its elements. For a
/// one-dimensional solution space the generator G is oriented to be positive
/// on P'; the verdict is Coatom when G is definite there, NotCoatom when it is
/// only semidefinite (its ground projector is then larger than P).
/// Throws std::invalid_argument if P is 0 or the identity.
CoatomCertificate coatom_certificate(const Projector& p, std::span<const HermitianMatrix> space,
                                     double tol = kCertificateTol);
CoatomCertificate coatom_certificate(const Projector& p, const LocalSpaceBasis& basis,
                                     double tol = kCertificateTol);

/// The identity followed by the basis of s: a spanning set of the space whose
/// traceless part is the spectrahedron's.
std::vector<HermitianMatrix> space_elements(const LmiSpectrahedron& s);

/// True when some real combination A of the complement basis satisfies
/// P' A P' = lambda P' with lambda != 0, which rules P out of the ground
/// projector lattice. False means no conclusion.
bool quick_reject(const Projector& p, std::span<const HermitianMatrix> complement_basis);

/// Coordinates of A = Tr(P)/Tr(P') P' - P in the spectrahedron basis. Throws
/// std::invalid_argument unless P lies in the span of I and the basis (within
/// 1e-9) and 0 < rank(P) < d.
RealVector exposed_point_from_coatom(const Projector& p, const LmiSpectrahedron& s);

/// Unit objective c with c_i proportional to <A_i, P>; minimizing it drives
/// the optimum matrix onto the face with kernel P when that face is exposed.
/// Throws std::invalid_argument when P is orthogonal to every A_i.
RealVector exposing_direction(const Projector& p, const LmiSpectrahedron& s);

struct SampleRecord {
  std::size_t seed_index = 0;
  RealVector direction;
  RealVector x_star;
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;
  int newton_iters = 0;
  std::size_t optimum_rank = 0;
  std::size_t projector_rank = 0;  // d - optimum_rank
  std::optional<std::size_t> certificate_dim;
  std::optional<CertificateVerdict> verdict;
};

struct SampleOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;  // 0 = one per hardware thread
  bool certify = false;
  double rank_tol = kDefaultRankTol;
  SolverOptions solver;
};

struct SampleReport {
  std::map<std::size_t, std::size_t> histogram;  // optimum rank -> count, converged only
  std::size_t failures = 0;
  std::vector<SampleRecord> records;  // ordered by seed_index
};

/// Minimizes over `trials` random directions. Certificates, when requested,
/// are computed for the kernel projector of each converged optimum against
/// space_elements(s). Throws std::invalid_argument for zero trials.
SampleReport sample_extreme_points(const LmiSpectrahedron& s, const SampleOptions& opts);

}  // namespace coatom
