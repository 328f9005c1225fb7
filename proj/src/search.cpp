#include "coatom/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace coatom {

RealVector random_direction(std::size_t m, std::mt19937_64& rng) {
  if (m == 0) throw std::invalid_argument("random_direction: m must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector v(m);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& x : v) {
      x = normal(rng);
      n2 += x * x;
    }
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& x : v) x *= inv;
  return v;
}

std::mt19937_64 make_trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::string_view to_string(CertificateVerdict v) {
  switch (v) {
    case CertificateVerdict::Coatom: return "coatom";
    case CertificateVerdict::NotCoatom: return "not_coatom";
    case CertificateVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

/// Q^H A Q for the orthonormal columns Q.
HermitianMatrix compress(const HermitianMatrix& a, const std::vector<ComplexVector>& q) {
  const std::size_t k = q.size();
  std::vector<ComplexVector> aq;
  aq.reserve(k);
  for (const auto& v : q) aq.push_back(a.matrix().apply(v));
  ComplexMatrix out(k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < q[r].size(); ++i) acc += std::conj(q[r][i]) * aq[c][i];
      out(r, c) = acc;
    }
  return HermitianMatrix(out);
}

void check_proper(const Projector& p, const char* what) {
  if (p.rank() == 0 || p.rank() >= p.dim()) {
    throw std::invalid_argument(std::string(what) + ": projector must satisfy 0 < rank < d");
  }
}

}  // namespace

CoatomCertificate coatom_certificate(const Projector& p, std::span<const HermitianMatrix> space,
                                     double tol) {
  check_proper(p, "coatom_certificate");
  const std::size_t n = space.size(), d = p.dim();
  for (const auto& e : space)
    if (e.dim() != d) throw std::invalid_argument("coatom_certificate: dimension mismatch");

  // Rows of sum_j x_j (E_j v) = 0, real and imaginary parts, v in range(P).
  std::vector<RealVector> rows;
  rows.reserve(2 * d * p.rank());
  std::vector<ComplexVector> ev(n);
  for (const auto& v : p.range_basis()) {
    for (std::size_t j = 0; j < n; ++j) ev[j] = space[j].matrix().apply(v);
    for (std::size_t r = 0; r < d; ++r) {
      RealVector re(n), im(n);
      for (std::size_t j = 0; j < n; ++j) {
        re[j] = ev[j][r].real();
        im[j] = ev[j][r].imag();
      }
      rows.push_back(std::move(re));
      rows.push_back(std::move(im));
    }
  }
  const NullspaceResult ns = real_nullspace(rows, n, tol);

  CoatomCertificate cert;
  cert.tolerance_used = tol;
  cert.singular_values = ns.singular_values;
  cert.span_dimension = ns.dimension;
  cert.dimension = ns.dimension;

  // Gap at the cutoff: smallest kept against largest dropped.
  const std::size_t kept = n - ns.dimension;
  if (kept == 0) {
    cert.gap_ratio = std::numeric_limits<double>::infinity();
  } else {
    const double smallest_kept = ns.singular_values[kept - 1];
    const double largest_dropped = ns.dimension > 0 ? ns.singular_values[kept] : ns.cutoff;
    cert.gap_ratio = largest_dropped > 0.0 ? smallest_kept / largest_dropped
                                           : std::numeric_limits<double>::infinity();
  }

  for (const auto& coords : ns.basis) {
    HermitianMatrix b(d);
    for (std::size_t j = 0; j < n; ++j)
      if (coords[j] != 0.0) b += coords[j] * space[j];
    cert.intersection_basis.push_back(std::move(b));
    cert.intersection_coordinates.push_back(coords);
  }

  if (cert.gap_ratio < kInconclusiveRatio) {
    cert.verdict = CertificateVerdict::Inconclusive;
    return cert;
  }
  if (ns.dimension != 1) {
    cert.verdict = CertificateVerdict::NotCoatom;
    return cert;
  }

  // One line: orient the generator positive on P' and check definiteness.
  const Projector pc = p.complement();
  RealVector lam = eig_hermitian(compress(cert.intersection_basis[0], pc.range_basis())).eigenvalues;
  if (lam.back() < 0.0 || (lam.front() < 0.0 && -lam.front() > lam.back())) {
    cert.intersection_basis[0] *= -1.0;
    for (auto& x : cert.intersection_coordinates[0]) x = -x;
    for (auto& x : lam) x = -x;
    std::reverse(lam.begin(), lam.end());
  }
  const double delta = kDefaultRankTol * std::max(std::abs(lam.front()), std::abs(lam.back()));
  const double lo = lam.front();
  if (lo < -delta) {
    cert.dimension = 0;  // indefinite: K(P) = {0}
    cert.verdict = CertificateVerdict::NotCoatom;
  } else if (lo <= delta) {
    cert.verdict = CertificateVerdict::NotCoatom;  // P is not the ground projector
  } else {
    cert.verdict = CertificateVerdict::Coatom;
  }
  return cert;
}

CoatomCertificate coatom_certificate(const Projector& p, const LocalSpaceBasis& basis,
                                     double tol) {
  if (p.dim() != basis.d()) throw std::invalid_argument("coatom_certificate: dimension mismatch");
  return coatom_certificate(p, basis.elements(), tol);
}

std::vector<HermitianMatrix> space_elements(const LmiSpectrahedron& s) {
  std::vector<HermitianMatrix> out;
  out.reserve(s.m() + 1);
  out.push_back(HermitianMatrix::identity(s.d()));
  out.insert(out.end(), s.basis().begin(), s.basis().end());
  return out;
}

bool quick_reject(const Projector& p, std::span<const HermitianMatrix> complement_basis) {
  if (p.rank() >= p.dim()) throw std::invalid_argument("quick_reject: P must not be the identity");
  const auto& q = p.complement().range_basis();
  const std::size_t k = q.size(), n = complement_basis.size();
  std::vector<HermitianMatrix> blocks;
  for (const auto& f : complement_basis) blocks.push_back(compress(f, q));
  // Unknowns (c_1..c_n, lambda): sum c_i Q^H F_i Q - lambda I = 0.
  std::vector<RealVector> rows;
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      RealVector re(n + 1), im(n + 1);
      for (std::size_t i = 0; i < n; ++i) {
        re[i] = blocks[i](r, c).real();
        im[i] = blocks[i](r, c).imag();
      }
      re[n] = r == c ? -1.0 : 0.0;
      rows.push_back(std::move(re));
      rows.push_back(std::move(im));
    }
  const NullspaceResult ns = real_nullspace(rows, n + 1, kCertificateTol);
  return std::any_of(ns.basis.begin(), ns.basis.end(),
                     [&](const RealVector& v) { return std::abs(v[n]) > 1e-6; });
}

RealVector exposed_point_from_coatom(const Projector& p, const LmiSpectrahedron& s) {
  check_proper(p, "exposed_point_from_coatom");
  if (p.dim() != s.d()) throw std::invalid_argument("exposed_point_from_coatom: dimension mismatch");
  const double d = static_cast<double>(s.d());
  const double tr = static_cast<double>(p.rank());
  const RealVector xp = s.coordinates(p.matrix());
  HermitianMatrix rebuilt = s.assemble(xp) - HermitianMatrix::identity(s.d());
  rebuilt += (tr / d) * HermitianMatrix::identity(s.d());
  if (max_abs_diff(rebuilt, p.matrix()) > 1e-9) {
    throw std::invalid_argument("exposed_point_from_coatom: projector does not lie in U");
  }
  const Projector pc = p.complement();
  const HermitianMatrix a = (tr / (d - tr)) * pc.matrix() - p.matrix();
  return s.coordinates(a);
}

RealVector exposing_direction(const Projector& p, const LmiSpectrahedron& s) {
  if (p.dim() != s.d()) throw std::invalid_argument("exposing_direction: dimension mismatch");
  RealVector c(s.m());
  double n2 = 0.0;
  for (std::size_t i = 0; i < s.m(); ++i) {
    c[i] = hs_inner(s.basis()[i], p.matrix());
    n2 += c[i] * c[i];
  }
  if (!(std::sqrt(n2) > 1e-12)) {
    throw std::invalid_argument("exposing_direction: projector is orthogonal to the space");
  }
  for (auto& v : c) v /= std::sqrt(n2);
  return c;
}

SampleReport sample_extreme_points(const LmiSpectrahedron& s, const SampleOptions& opts) {
  if (opts.trials == 0) throw std::invalid_argument("sample_extreme_points: trials must be >= 1");
  const std::vector<HermitianMatrix> space = opts.certify ? space_elements(s)
                                                          : std::vector<HermitianMatrix>{};
  std::vector<SampleRecord> records(opts.trials);

  auto run_trial = [&](std::size_t index) {
    SampleRecord& rec = records[index];
    rec.seed_index = index;
    auto rng = make_trial_rng(opts.seed, index);
    rec.direction = random_direction(s.m(), rng);
    SdpSolution sol;
    try {
      sol = minimize(s, rec.direction, opts.solver);
    } catch (const ConvergenceError&) {
      rec.status = SolveStatus::NumericalFailure;
      return;
    }
    rec.x_star = sol.x_star;
    rec.status = sol.status;
    rec.objective = sol.objective;
    rec.newton_iters = sol.newton_iters;
    if (sol.status != SolveStatus::Converged) return;
    const auto eig = eig_hermitian(sol.optimum_matrix);
    rec.optimum_rank = numerical_rank(eig, opts.rank_tol);
    rec.projector_rank = s.d() - rec.optimum_rank;
    if (opts.certify && rec.projector_rank > 0 && rec.projector_rank < s.d()) {
      const auto cert = coatom_certificate(kernel_projector(eig, opts.rank_tol), space);
      rec.certificate_dim = cert.dimension;
      rec.verdict = cert.verdict;
    }
  };

  unsigned workers = opts.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : opts.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, opts.trials));
  if (workers <= 1) {
    for (std::size_t i = 0; i < opts.trials; ++i) run_trial(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < opts.trials; i = next++) run_trial(i);
      });
    for (auto& th : pool) th.join();
  }

  SampleReport report;
  for (const auto& rec : records) {
    if (rec.status == SolveStatus::Converged) ++report.histogram[rec.optimum_rank];
    else ++report.failures;
  }
  report.records = std::move(records);
  return report;
}

}  // namespace coatom
