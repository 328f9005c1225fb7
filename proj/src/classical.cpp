#include "coatom/classical.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace coatom {

int config_digit(Config x, int n_units, int unit) {
  return static_cast<int>((x >> (n_units - unit)) & 1u);
}

std::string config_label(Config x, int n_units) {
  std::string out;
  for (int unit = 1; unit <= n_units; ++unit) out += config_digit(x, n_units, unit) ? '1' : '0';
  return out;
}

Config truncate(Config x, int n_units, UnitSet nu) {
  Config out = 0;
  for (int unit = 1; unit <= n_units; ++unit)
    if (nu & (UnitSet{1} << (unit - 1))) out = (out << 1) | static_cast<Config>(config_digit(x, n_units, unit));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t all_configs(int n_units) {
  const std::size_t n = std::size_t{1} << n_units;
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace

SupportSet::SupportSet(int n_units, std::uint64_t mask) : n_units_(n_units), mask_(mask) {
  if (n_units < 0 || n_units > 6) throw std::invalid_argument("SupportSet: N must lie in [0, 6]");
  if (mask & ~all_configs(n_units)) throw std::invalid_argument("SupportSet: mask exceeds 2^N bits");
}

SupportSet SupportSet::full(int n_units) {
  if (n_units < 0 || n_units > 6) throw std::invalid_argument("SupportSet: N must lie in [0, 6]");
  return SupportSet(n_units, all_configs(n_units));
}

SupportSet SupportSet::from_configs(int n_units, const std::vector<Config>& configs) {
  if (n_units < 0 || n_units > 6) throw std::invalid_argument("SupportSet: N must lie in [0, 6]");
  std::uint64_t mask = 0;
  for (Config x : configs) {
    if (x >= (std::size_t{1} << n_units)) {
      throw std::invalid_argument("SupportSet: configuration " + std::to_string(x) + " out of range");
    }
    mask |= std::uint64_t{1} << x;
  }
  return SupportSet(n_units, mask);
}

SupportSet SupportSet::from_bitstring(std::string_view bits) {
  const int n = std::countr_zero(bits.size());
  if (bits.empty() || !std::has_single_bit(bits.size()) || n > 6) {
    throw std::invalid_argument("support mask must have 2^N characters, N <= 6");
  }
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') mask |= std::uint64_t{1} << i;
    else if (bits[i] != '0') throw std::invalid_argument("support mask may only contain 0 and 1");
  }
  return SupportSet(n, mask);
}

SupportSet SupportSet::from_projector(const Projector& p, int n_units) {
  if (p.dim() != (std::size_t{1} << n_units)) {
    throw std::invalid_argument("from_projector: dimension is not 2^N");
  }
  std::uint64_t mask = 0;
  for (std::size_t r = 0; r < p.dim(); ++r)
    for (std::size_t c = 0; c < p.dim(); ++c) {
      const Complex v = p.matrix()(r, c);
      const bool one = std::abs(v - 1.0) <= 1e-9, zero = std::abs(v) <= 1e-9;
      if (r != c ? !zero : !(one || zero)) {
        throw std::invalid_argument("from_projector: projector is not a diagonal 0/1 matrix");
      }
      if (r == c && one) mask |= std::uint64_t{1} << r;
    }
  return SupportSet(n_units, mask);
}

std::size_t SupportSet::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<Config> SupportSet::configs() const {
  std::vector<Config> out;
  for (Config x = 0; x < n_configs(); ++x)
    if (contains(x)) out.push_back(x);
  return out;
}

SupportSet SupportSet::complement() const {
  return SupportSet(n_units_, ~mask_ & all_configs(n_units_));
}

std::string SupportSet::to_bitstring() const {
  std::string out;
  for (Config x = 0; x < n_configs(); ++x) out += contains(x) ? '1' : '0';
  return out;
}

Projector SupportSet::to_projector() const {
  const auto cs = configs();
  return Projector::diagonal(n_configs(), cs);
}

SupportSet SupportSet::operator|(const SupportSet& o) const {
  if (o.n_units_ != n_units_) throw std::invalid_argument("SupportSet: unit count mismatch");
  return SupportSet(n_units_, mask_ | o.mask_);
}

SupportSet SupportSet::operator&(const SupportSet& o) const {
  if (o.n_units_ != n_units_) throw std::invalid_argument("SupportSet: unit count mismatch");
  return SupportSet(n_units_, mask_ & o.mask_);
}

// ---------------------------------------------------------------------------

MMatrix m_matrix(const Hypergraph& g, bool full_rows) {
  MMatrix out;
  out.n_units = g.n_units();
  const std::size_t n_configs = std::size_t{1} << g.n_units();
  const Hypergraph source = full_rows ? g.closure() : g.generating_class();
  for (UnitSet nu : source.subsets()) {
    if (nu == 0) continue;
    for (Config y = 0; y < (Config{1} << std::popcount(nu)); ++y) {
      out.rows.push_back({nu, y});
      std::vector<std::uint8_t> row(n_configs, 0);
      for (Config x = 0; x < n_configs; ++x) row[x] = truncate(x, g.n_units(), nu) == y ? 1 : 0;
      out.entries.push_back(std::move(row));
    }
  }
  return out;
}

bool is_m_feasible(const SupportSet& f, const Hypergraph& g, bool full_rows) {
  if (f.n_units() != g.n_units()) throw std::invalid_argument("is_m_feasible: unit count mismatch");
  const MMatrix m = m_matrix(g, full_rows);
  std::vector<std::uint8_t> covered(m.rows.size(), 0);
  for (Config y : f.configs())
    for (std::size_t r = 0; r < m.rows.size(); ++r) covered[r] |= m.entries[r][y];
  for (Config x = 0; x < f.n_configs(); ++x) {
    if (f.contains(x)) continue;
    bool inside = true;
    for (std::size_t r = 0; r < m.rows.size() && inside; ++r)
      if (m.entries[r][x] && !covered[r]) inside = false;
    if (inside) return false;
  }
  return true;
}

std::optional<FfDecomposition> ff_ground_projector_form(const SupportSet& f, const Hypergraph& g) {
  if (f.n_units() != g.n_units()) {
    throw std::invalid_argument("ff_ground_projector_form: unit count mismatch");
  }
  const int n = g.n_units();
  std::vector<UnitSet> nus;
  const Hypergraph generators = g.generating_class();
  for (UnitSet nu : generators.subsets())
    if (nu != 0) nus.push_back(nu);

  std::vector<std::vector<bool>> excluded(nus.size());
  for (std::size_t k = 0; k < nus.size(); ++k)
    excluded[k].assign(Config{1} << std::popcount(nus[k]), false);
  const auto inside = f.configs();
  for (Config x : f.complement().configs())
    for (std::size_t k = 0; k < nus.size(); ++k) {
      const Config xv = truncate(x, n, nus[k]);
      const bool separated = std::none_of(inside.begin(), inside.end(), [&](Config y) {
        return truncate(y, n, nus[k]) == xv;
      });
      if (separated) excluded[k][xv] = true;
    }

  std::uint64_t mask = 0;
  for (Config z = 0; z < f.n_configs(); ++z) {
    bool keep = true;
    for (std::size_t k = 0; k < nus.size() && keep; ++k)
      if (excluded[k][truncate(z, n, nus[k])]) keep = false;
    if (keep) mask |= std::uint64_t{1} << z;
  }
  if (mask != f.mask()) return std::nullopt;

  FfDecomposition out{{}, SupportSet(n, mask)};
  for (std::size_t k = 0; k < nus.size(); ++k) {
    CylinderFactor factor{nus[k], {}};
    for (Config y = 0; y < excluded[k].size(); ++y)
      if (excluded[k][y]) factor.excluded.push_back(y);
    if (!factor.excluded.empty()) out.factors.push_back(std::move(factor));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ClassicalModel m) {
  switch (m) {
    case ClassicalModel::C3: return "c3";
    case ClassicalModel::C3ff: return "c3ff";
    case ClassicalModel::P3: return "p3";
  }
  return "?";
}

std::optional<ClassicalModel> parse_classical_model(std::string_view name) {
  if (name == "c3") return ClassicalModel::C3;
  if (name == "c3ff") return ClassicalModel::C3ff;
  if (name == "p3") return ClassicalModel::P3;
  return std::nullopt;
}

Hypergraph model_hypergraph(ClassicalModel m) {
  return m == ClassicalModel::P3 ? Hypergraph::p3() : Hypergraph::c3();
}

namespace {

void check_pair(Config x, Config y) {
  if (x > 7 || y > 7) throw std::invalid_argument("three-bit configuration out of range");
  if (x == y) throw std::invalid_argument("an edge needs two distinct configurations");
}

// Table group: differing in digit 3, 2, 1 only, then all three, then others.
int edge_group(Config x, Config y) {
  switch (x ^ y) {
    case 0b001: return 0;
    case 0b010: return 1;
    case 0b100: return 2;
    case 0b111: return 3;
    default: return 4;
  }
}

}  // namespace

bool k44_edge(Config x, Config y) {
  check_pair(x, y);
  return (std::popcount(x) + std::popcount(y)) % 2 == 1;
}

bool edge_allowed(ClassicalModel m, Config x, Config y) {
  check_pair(x, y);
  const Config diff = x ^ y;
  switch (m) {
    case ClassicalModel::C3: return k44_edge(x, y);
    case ClassicalModel::C3ff: return std::popcount(diff) == 1;
    case ClassicalModel::P3: return diff == 0b100 || diff == 0b001;  // digit 1 or digit 3
  }
  return false;
}

std::vector<SupportSet> enumerate_coatoms(ClassicalModel m) {
  std::vector<std::pair<Config, Config>> edges;
  for (Config x = 0; x < 8; ++x)
    for (Config y = x + 1; y < 8; ++y)
      if (edge_allowed(m, x, y)) edges.emplace_back(x, y);
  std::stable_sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return edge_group(a.first, a.second) < edge_group(b.first, b.second);
  });
  std::vector<SupportSet> out;
  for (auto [x, y] : edges) out.push_back(SupportSet::from_configs(3, {x, y}).complement());
  return out;
}

bool lattice_membership(const SupportSet& f, ClassicalModel m) {
  if (f.n_units() != 3) throw std::invalid_argument("lattice_membership: three units required");
  const SupportSet fc = f.complement();
  for (Config x : fc.configs()) {
    bool covered = false;
    for (Config y : fc.configs())
      if (y != x && edge_allowed(m, x, y)) covered = true;
    if (!covered) return false;
  }
  return true;
}

std::string diag_pattern(const SupportSet& s) {
  std::string out = "diag(";
  for (Config x = 0; x < s.n_configs(); ++x) {
    if (x) out += ',';
    out += s.contains(x) ? '1' : '0';
  }
  return out + ")";
}

std::string edge_label(const SupportSet& edge) {
  auto cs = edge.configs();
  std::stable_sort(cs.begin(), cs.end(), [](Config a, Config b) {
    return std::popcount(a) < std::popcount(b);
  });
  std::string out = "{";
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ',';
    out += config_label(cs[i], edge.n_units());
  }
  return out + "}";
}

std::string pauli_expansion(const SupportSet& s) {
  const int n = s.n_units();
  const long denom_full = 1L << n;
  // Z-word on units S has coefficient (1/2^N) sum_{x in F} (-1)^{sum_{i in S} x_i}.
  std::vector<std::pair<std::string, long>> terms;
  long g = denom_full;
  for (Config w = 0; w < s.n_configs(); ++w) {
    long k = 0;
    for (Config x : s.configs()) k += (std::popcount(x & w) % 2) ? -1 : 1;
    if (k == 0) continue;
    std::string word;
    for (int unit = 1; unit <= n; ++unit) word += config_digit(w, n, unit) ? 'Z' : 'I';
    terms.emplace_back(word, k);
    g = std::gcd(g, std::abs(k));
  }
  if (terms.empty()) return "0";
  // Words sort with I before Z, matching the order of the expansion tables.
  const long denom = denom_full / g;
  std::string out = denom == 1 ? "(" : "1/" + std::to_string(denom) + "(";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const long c = terms[i].second / g;
    if (i) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    if (std::abs(c) != 1) out += std::to_string(std::abs(c)) + " ";
    out += terms[i].first;
  }
  return out + ")";
}

}  // namespace coatom
