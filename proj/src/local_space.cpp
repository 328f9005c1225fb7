#include "coatom/local_space.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>

namespace coatom {

std::string_view to_string(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::Qubit: return "qubit";
    case AlgebraKind::Bit: return "bit";
    case AlgebraKind::RealTwo: return "realtwo";
  }
  return "?";
}

std::optional<AlgebraKind> parse_algebra_kind(std::string_view name) {
  if (name == "qubit") return AlgebraKind::Qubit;
  if (name == "bit") return AlgebraKind::Bit;
  if (name == "realtwo") return AlgebraKind::RealTwo;
  return std::nullopt;
}

std::string_view algebra_symbols(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::Qubit: return "XYZ";
    case AlgebraKind::Bit: return "Z";
    case AlgebraKind::RealTwo: return "XZ";
  }
  return "";
}

std::size_t hermitian_dimension(AlgebraKind kind) { return algebra_symbols(kind).size() + 1; }

HermitianMatrix pauli_matrix(char symbol) {
  HermitianMatrix m(2);
  switch (symbol) {
    case 'I':
      m.set(0, 0, 1.0);
      m.set(1, 1, 1.0);
      break;
    case 'X': m.set(0, 1, 1.0); break;
    case 'Y': m.set(0, 1, Complex(0.0, -1.0)); break;
    case 'Z':
      m.set(0, 0, 1.0);
      m.set(1, 1, -1.0);
      break;
    default: throw std::invalid_argument(std::string("unknown Pauli symbol '") + symbol + "'");
  }
  return m;
}

HermitianMatrix pauli_word(std::string_view word) {
  if (word.empty()) throw std::invalid_argument("pauli_word: empty word");
  HermitianMatrix out = pauli_matrix(word.front());
  for (std::size_t i = 1; i < word.size(); ++i) out = kron(out, pauli_matrix(word[i]));
  return out;
}

// ---------------------------------------------------------------------------
// Unit sets and hypergraphs

std::vector<int> unit_set_members(UnitSet s) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (s & (UnitSet{1} << i)) out.push_back(i + 1);
  return out;
}

bool unit_set_less(UnitSet a, UnitSet b) {
  const int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  return unit_set_members(a) < unit_set_members(b);
}

std::string unit_set_to_string(UnitSet s) {
  std::string out = "{";
  bool first = true;
  for (int m : unit_set_members(s)) {
    if (!first) out += ",";
    out += std::to_string(m);
    first = false;
  }
  return out + "}";
}

namespace {

void normalize(std::vector<UnitSet>& sets) {
  std::sort(sets.begin(), sets.end(), unit_set_less);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
}

constexpr int kMaxUnits = 8;

}  // namespace

Hypergraph::Hypergraph(int n_units, std::vector<UnitSet> subsets)
    : n_units_(n_units), subsets_(std::move(subsets)) {
  if (n_units < 0 || n_units > kMaxUnits) {
    throw std::invalid_argument("Hypergraph: unit count must lie in [0, 8]");
  }
  const UnitSet all = (UnitSet{1} << n_units) - 1;
  for (UnitSet s : subsets_) {
    if (s & ~all) throw std::invalid_argument("Hypergraph: member outside {1..N}");
  }
  normalize(subsets_);
}

Hypergraph::Hypergraph(int n_units, const std::vector<std::vector<int>>& subsets)
    : n_units_(n_units) {
  if (n_units < 0 || n_units > kMaxUnits) {
    throw std::invalid_argument("Hypergraph: unit count must lie in [0, 8]");
  }
  for (const auto& members : subsets) {
    UnitSet s = 0;
    for (int i : members) {
      if (i < 1 || i > n_units) {
        throw std::invalid_argument("Hypergraph: unit index " + std::to_string(i) +
                                    " outside {1.." + std::to_string(n_units) + "}");
      }
      s |= UnitSet{1} << (i - 1);
    }
    subsets_.push_back(s);
  }
  normalize(subsets_);
}

bool Hypergraph::contains(UnitSet s) const {
  return std::binary_search(subsets_.begin(), subsets_.end(), s, unit_set_less);
}

Hypergraph Hypergraph::closure() const {
  std::vector<UnitSet> out;
  for (UnitSet s : subsets_) {
    // Enumerate all submasks of s, including the empty set.
    for (UnitSet sub = s;; sub = (sub - 1) & s) {
      out.push_back(sub);
      if (sub == 0) break;
    }
  }
  return Hypergraph(n_units_, std::move(out));
}

Hypergraph Hypergraph::generating_class() const {
  std::vector<UnitSet> out;
  for (UnitSet s : subsets_) {
    const bool maximal = std::none_of(subsets_.begin(), subsets_.end(), [&](UnitSet t) {
      return t != s && (s & t) == s;
    });
    if (maximal) out.push_back(s);
  }
  return Hypergraph(n_units_, std::move(out));
}

bool Hypergraph::is_closed() const { return closure().subsets_ == subsets_; }

Hypergraph Hypergraph::c3() { return Hypergraph(3, {{1, 2}, {2, 3}, {3, 1}}).closure(); }

Hypergraph Hypergraph::p3() { return Hypergraph(3, {{1, 2}, {2, 3}}).closure(); }

Hypergraph Hypergraph::n_choose_k(int n, int k) {
  std::vector<UnitSet> sets;
  for (UnitSet s = 0; s < (UnitSet{1} << n); ++s)
    if (std::popcount(s) == k) sets.push_back(s);
  return Hypergraph(n, std::move(sets)).closure();
}

// ---------------------------------------------------------------------------
// Local space basis

namespace {

/// All words that are non-identity exactly on `nu`, lexicographic with unit 1
/// varying slowest.
std::vector<std::string> words_on(UnitSet nu, const std::vector<AlgebraKind>& algebras) {
  const int n = static_cast<int>(algebras.size());
  std::vector<std::string> out;
  std::string word(static_cast<std::size_t>(n), 'I');
  std::function<void(int)> rec = [&](int unit) {
    if (unit == n) {
      out.push_back(word);
      return;
    }
    if (nu & (UnitSet{1} << unit)) {
      for (char sym : algebra_symbols(algebras[static_cast<std::size_t>(unit)])) {
        word[static_cast<std::size_t>(unit)] = sym;
        rec(unit + 1);
      }
      word[static_cast<std::size_t>(unit)] = 'I';
    } else {
      rec(unit + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace

LocalSpaceBasis::LocalSpaceBasis(Hypergraph g, std::vector<AlgebraKind> algebras,
                                 std::vector<std::string> labels)
    : g_(std::move(g)), algebras_(std::move(algebras)), labels_(std::move(labels)) {
  d_ = std::size_t{1} << algebras_.size();
  elements_.reserve(labels_.size());
  for (const auto& w : labels_) elements_.push_back(pauli_word(w));
}

std::optional<std::size_t> LocalSpaceBasis::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

RealVector LocalSpaceBasis::coordinates(const HermitianMatrix& a) const {
  RealVector z(elements_.size());
  const double norm2 = static_cast<double>(d_);
  for (std::size_t i = 0; i < elements_.size(); ++i) z[i] = hs_inner(elements_[i], a) / norm2;
  return z;
}

HermitianMatrix LocalSpaceBasis::assemble(std::span<const double> coords) const {
  if (coords.size() != elements_.size()) {
    throw std::invalid_argument("LocalSpaceBasis::assemble: coordinate count mismatch");
  }
  HermitianMatrix out(d_);
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] != 0.0) out += coords[i] * elements_[i];
  return out;
}

LocalSpaceBasis factor_interaction_basis(const Hypergraph& g,
                                         const std::vector<AlgebraKind>& algebras) {
  if (static_cast<int>(algebras.size()) != g.n_units()) {
    throw std::invalid_argument("factor_interaction_basis: need one algebra per unit");
  }
  if (g.n_units() < 1) throw std::invalid_argument("factor_interaction_basis: no units");
  if (!g.is_closed()) {
    throw std::invalid_argument(
        "factor_interaction_basis: hypergraph is not closed; apply closure() first");
  }
  std::vector<std::string> labels;
  for (UnitSet nu : g.subsets()) {
    auto words = words_on(nu, algebras);
    labels.insert(labels.end(), words.begin(), words.end());
  }
  if (!g.contains(0)) {
    // A closed nonempty family always contains the empty set; an empty
    // family still gets the identity so that I_d lies in U.
    labels.insert(labels.begin(), std::string(algebras.size(), 'I'));
  }
  return LocalSpaceBasis(g, algebras, std::move(labels));
}

std::size_t space_dimension(const Hypergraph& g, const std::vector<AlgebraKind>& algebras) {
  std::size_t total = 0;
  for (UnitSet nu : g.subsets()) {
    std::size_t p = 1;
    for (int i : unit_set_members(nu)) p *= hermitian_dimension(algebras.at(static_cast<std::size_t>(i - 1))) - 1;
    total += p;
  }
  return total;
}

std::vector<HermitianMatrix> complement_basis(const Hypergraph& g,
                                              const std::vector<AlgebraKind>& algebras) {
  std::vector<HermitianMatrix> out;
  const UnitSet all = (UnitSet{1} << algebras.size()) - 1;
  std::vector<UnitSet> missing;
  for (UnitSet nu = 0; nu <= all; ++nu)
    if (!g.contains(nu)) missing.push_back(nu);
  std::sort(missing.begin(), missing.end(), unit_set_less);
  for (UnitSet nu : missing)
    for (const auto& w : words_on(nu, algebras)) out.push_back(pauli_word(w));
  return out;
}

// ---------------------------------------------------------------------------
// Partial traces

namespace {

/// Scatters the bits of `kept` into the positions of `units` and the bits of
/// `rest` into the remaining positions. Unit 1 is the most significant bit.
std::size_t compose_index(int n_units, UnitSet units, std::size_t kept, std::size_t rest) {
  const int k = std::popcount(units);
  int ki = k - 1, ri = n_units - k - 1;
  std::size_t idx = 0;
  for (int unit = 1; unit <= n_units; ++unit) {
    const int pos = n_units - unit;  // bit position in the global index
    // Read from the most significant remaining bit of kept/rest.
    std::size_t bit;
    if (units & (UnitSet{1} << (unit - 1))) {
      bit = (kept >> ki) & 1u;
      --ki;
    } else {
      bit = (rest >> ri) & 1u;
      --ri;
    }
    idx |= bit << pos;
  }
  return idx;
}

void check_subsystem(const HermitianMatrix& a, int n_units, UnitSet units, const char* what) {
  if (n_units < 0 || n_units > kMaxUnits || a.dim() != (std::size_t{1} << n_units)) {
    throw std::invalid_argument(std::string(what) + ": matrix dimension is not 2^N");
  }
  if (units & ~((UnitSet{1} << n_units) - 1)) {
    throw std::invalid_argument(std::string(what) + ": units not a subset of {1..N}");
  }
}

}  // namespace

HermitianMatrix partial_trace(const HermitianMatrix& a, int n_units, UnitSet keep) {
  check_subsystem(a, n_units, keep, "partial_trace");
  const int k = std::popcount(keep);
  const std::size_t dk = std::size_t{1} << k, dr = std::size_t{1} << (n_units - k);
  ComplexMatrix out(dk);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (std::size_t z = 0; z < dr; ++z)
        acc += a(compose_index(n_units, keep, r, z), compose_index(n_units, keep, c, z));
      out(r, c) = acc;
    }
  return HermitianMatrix(out);
}

HermitianMatrix embed(const HermitianMatrix& b, int n_units, UnitSet units) {
  const int k = std::popcount(units);
  if (b.dim() != (std::size_t{1} << k)) {
    throw std::invalid_argument("embed: matrix dimension is not 2^|units|");
  }
  if (n_units < 0 || n_units > kMaxUnits || (units & ~((UnitSet{1} << n_units) - 1))) {
    throw std::invalid_argument("embed: units not a subset of {1..N}");
  }
  const std::size_t dk = b.dim(), dr = std::size_t{1} << (n_units - k);
  ComplexMatrix out(std::size_t{1} << n_units);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c)
      for (std::size_t z = 0; z < dr; ++z)
        out(compose_index(n_units, units, r, z), compose_index(n_units, units, c, z)) = b(r, c);
  return HermitianMatrix(out);
}

std::vector<std::pair<UnitSet, HermitianMatrix>> marginal_map(const HermitianMatrix& a,
                                                              const Hypergraph& g) {
  std::vector<std::pair<UnitSet, HermitianMatrix>> out;
  const Hypergraph generators = g.generating_class();
  for (UnitSet nu : generators.subsets())
    out.emplace_back(nu, partial_trace(a, g.n_units(), nu));
  return out;
}

HermitianMatrix project_onto_space(const HermitianMatrix& a, const LocalSpaceBasis& basis) {
  if (a.dim() != basis.d()) throw std::invalid_argument("project_onto_space: dimension mismatch");
  return basis.assemble(basis.coordinates(a));
}

std::optional<LocalSpaceBasis> basis_for_model(std::string_view descriptor) {
  const auto dash = descriptor.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  const auto graph = descriptor.substr(0, dash);
  const auto kind = parse_algebra_kind(descriptor.substr(dash + 1));
  if (!kind) return std::nullopt;
  Hypergraph g;
  if (graph == "c3") {
    g = Hypergraph::c3();
  } else if (graph == "p3") {
    g = Hypergraph::p3();
  } else {
    return std::nullopt;
  }
  return factor_interaction_basis(g, std::vector<AlgebraKind>(3, *kind));
}

}  // namespace coatom
