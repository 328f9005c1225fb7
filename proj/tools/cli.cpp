#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "coatom/classical.hpp"
#include "coatom/family.hpp"
#include "coatom/herm_io.hpp"
#include "coatom/sdp.hpp"
#include "coatom/search.hpp"

#ifndef COATOM_VERSION
#define COATOM_VERSION "unknown"
#endif

namespace coatom::cli {

using Json = nlohmann::ordered_json;

Model resolve_model(const std::string& descriptor, const std::string& algebra) {
  if (descriptor == "cayley") return {"cayley", LmiSpectrahedron::cayley_cubic(), std::nullopt};
  if (!descriptor.empty() && descriptor.front() == '[') {
    const auto kind = parse_algebra_kind(algebra);
    if (!kind) throw std::invalid_argument("unknown algebra '" + algebra + "'");
    std::vector<std::vector<int>> sets;
    try {
      sets = nlohmann::json::parse(descriptor).get<std::vector<std::vector<int>>>();
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("hypergraph must be a JSON list of lists of unit indices: " +
                                  std::string(e.what()));
    }
    int n = 0;
    for (const auto& s : sets)
      for (int i : s) n = std::max(n, i);
    if (n < 1) throw std::invalid_argument("hypergraph has no units");
    const Hypergraph g = Hypergraph(n, sets).closure();
    auto basis = factor_interaction_basis(g, std::vector<AlgebraKind>(static_cast<std::size_t>(n), *kind));
    auto s = LmiSpectrahedron::from_local_space(basis);
    return {descriptor, std::move(s), std::move(basis)};
  }
  auto basis = basis_for_model(descriptor);
  if (!basis) throw std::invalid_argument("unknown model '" + descriptor + "'");
  auto s = LmiSpectrahedron::from_local_space(*basis);
  return {descriptor, std::move(s), std::move(basis)};
}

double parse_angle(std::string_view text) {
  std::string s(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  const auto pos = s.find("pi");
  auto to_double = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse number '" + std::string(text) + "'");
    }
    if (used != part.size()) throw std::invalid_argument("cannot parse number '" + std::string(text) + "'");
    return v;
  };
  if (pos == std::string::npos) return to_double(s);
  std::string coef = s.substr(0, pos);
  double factor = 1.0;
  if (coef == "-") factor = -1.0;
  else if (!coef.empty() && coef != "+") factor = to_double(coef);
  double value = factor * std::numbers::pi;
  const std::string rest = s.substr(pos + 2);
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument("cannot parse angle '" + std::string(text) + "'");
    value /= to_double(rest.substr(1));
  }
  return value;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_angle(item));
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

namespace {

struct Common {
  std::string model = "c3-qubit";
  std::string algebra = "qubit";
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double rank_tol = kDefaultRankTol;
  SolverOptions solver;
  std::string out_path;
  std::string format = "json";
};

void add_solver_flags(CLI::App* app, Common& c) {
  app->add_option("--gap-tol", c.solver.gap_tol, "Barrier stop once d/t falls below this")
      ->check(CLI::PositiveNumber);
  app->add_option("--mu", c.solver.mu, "Barrier parameter growth per stage")->check(CLI::Range(1.0001, 1e6));
  app->add_option("--max-outer", c.solver.max_outer, "Barrier stage cap")->check(CLI::PositiveNumber);
  app->add_option("--max-newton", c.solver.max_newton, "Newton steps per stage")->check(CLI::PositiveNumber);
  app->add_option("--rank-tol", c.rank_tol, "Relative eigenvalue cutoff for numerical ranks")
      ->check(CLI::PositiveNumber);
}

void add_output_flags(CLI::App* app, Common& c, std::vector<std::string> formats) {
  app->add_option("--out", c.out_path, "Write the report to this file");
  app->add_option("--format", c.format, "Report format")->check(CLI::IsMember(formats));
}

Json solver_json(const SolverOptions& o) {
  return {{"gap_tol", o.gap_tol}, {"mu", o.mu},         {"max_outer", o.max_outer},
          {"max_newton", o.max_newton}, {"newton_tol", o.newton_tol},
          {"final_newton_tol", o.final_newton_tol}, {"alpha", o.alpha},
          {"beta", o.beta}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Report header shared by every JSON report.
Json report_header(const std::string& command) {
  return {{"command", command}, {"version", COATOM_VERSION}};
}

void emit(const std::string& text, const Common& c, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path);
  if (!f) throw std::runtime_error("cannot write " + c.out_path);
  f << text;
}

std::string format_percent(double fraction) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << 100.0 * fraction << "%";
  return s.str();
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t given) {
  if (seed_opt->count() > 0) return given;
  if (const char* env = std::getenv("COATOM_FORGE_SEED")) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || env[used] != '\0') {
      throw std::invalid_argument("COATOM_FORGE_SEED must be a nonnegative integer");
    }
    return v;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sample / cayley-demo

Json record_json(const SampleRecord& r, bool full) {
  Json j = {{"index", r.seed_index},
            {"status", to_string(r.status)},
            {"objective", r.objective},
            {"newton_iters", r.newton_iters}};
  if (r.status == SolveStatus::Converged) {
    j["optimum_rank"] = r.optimum_rank;
    j["projector_rank"] = r.projector_rank;
  }
  if (r.certificate_dim) j["certificate_dim"] = *r.certificate_dim;
  if (r.verdict) j["verdict"] = to_string(*r.verdict);
  if (full) {
    j["direction"] = r.direction;
    j["x_star"] = r.x_star;
  }
  return j;
}

std::string records_csv(const SampleReport& rep, std::size_t m) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << "index,status,objective,newton_iters,optimum_rank,projector_rank,certificate_dim,verdict";
  for (std::size_t i = 0; i < m; ++i) s << ",c" << i + 1;
  for (std::size_t i = 0; i < m; ++i) s << ",x" << i + 1;
  s << '\n';
  for (const auto& r : rep.records) {
    const bool ok = r.status == SolveStatus::Converged;
    s << r.seed_index << ',' << to_string(r.status) << ',' << r.objective << ',' << r.newton_iters
      << ',' << (ok ? std::to_string(r.optimum_rank) : "") << ','
      << (ok ? std::to_string(r.projector_rank) : "") << ','
      << (r.certificate_dim ? std::to_string(*r.certificate_dim) : "") << ','
      << (r.verdict ? std::string(to_string(*r.verdict)) : "");
    for (double v : r.direction) s << ',' << v;
    for (double v : r.x_star) s << ',' << v;
    s << '\n';
  }
  return s.str();
}

Json histogram_json(const SampleReport& rep) {
  Json h = Json::object();
  for (auto [rank, count] : rep.histogram) h[std::to_string(rank)] = count;
  return h;
}

Json frequencies_json(const SampleReport& rep) {
  std::size_t converged = 0;
  for (auto [rank, count] : rep.histogram) converged += count;
  Json f = Json::object();
  for (auto [rank, count] : rep.histogram)
    f[std::to_string(rank)] = converged ? static_cast<double>(count) / static_cast<double>(converged) : 0.0;
  return f;
}

struct Vertex {
  std::array<double, 3> x;
  std::size_t hits = 0;
  double max_deviation = 0.0;
};

std::vector<Vertex> tetrahedron_vertices() {
  return {{{1, 1, 1}}, {{1, -1, -1}}, {{-1, 1, -1}}, {{-1, -1, 1}}};
}

int cmd_sample(const Common& c, bool certify, bool full_records, const std::string& export_path,
               std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const Model model = resolve_model(c.model, c.algebra);
  if (!export_path.empty()) {
    std::ofstream f(export_path);
    if (!f) throw std::runtime_error("cannot write " + export_path);
    f << model.spectrahedron.to_json().dump(2) << '\n';
  }
  SampleOptions opts;
  opts.trials = c.trials;
  opts.seed = c.seed;
  opts.workers = c.workers;
  opts.certify = certify;
  opts.rank_tol = c.rank_tol;
  opts.solver = c.solver;
  const SampleReport rep = sample_extreme_points(model.spectrahedron, opts);
  const double failure_fraction = static_cast<double>(rep.failures) / static_cast<double>(c.trials);

  if (c.format == "csv") {
    emit(records_csv(rep, model.spectrahedron.m()), c, out);
  } else if (c.format == "table") {
    std::ostringstream s;
    s << "model " << model.name << ", " << c.trials << " trials, seed " << c.seed << "\n";
    s << "rank  count  frequency\n";
    const Json freq = frequencies_json(rep);
    for (auto [rank, count] : rep.histogram)
      s << std::setw(4) << rank << "  " << std::setw(5) << count << "  "
        << format_percent(freq[std::to_string(rank)].get<double>()) << "\n";
    s << "failures " << rep.failures << "\n";
    emit(s.str(), c, out);
  } else {
    Json j = report_header("sample");
    j["config"] = {{"model", c.model},       {"algebra", c.algebra}, {"trials", c.trials},
                   {"seed", c.seed},         {"workers", c.workers}, {"certify", certify},
                   {"rank_tol", c.rank_tol}, {"solver", solver_json(c.solver)}};
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["d"] = model.spectrahedron.d();
    j["m"] = model.spectrahedron.m();
    j["histogram"] = histogram_json(rep);
    j["frequencies"] = frequencies_json(rep);
    j["failures"] = rep.failures;
    if (certify) {
      Json verdicts = Json::object();
      for (const auto& r : rep.records)
        if (r.verdict) {
          const std::string key(to_string(*r.verdict));
          verdicts[key] = verdicts.value(key, 0) + 1;
        }
      j["verdicts"] = verdicts;
    }
    Json records = Json::array();
    for (const auto& r : rep.records) records.push_back(record_json(r, full_records));
    j["records"] = std::move(records);
    j["duration_seconds"] = seconds_since(start);
    emit(j.dump(2) + "\n", c, out);
  }
  if (failure_fraction > kMaxFailureFraction) {
    err << "failure fraction " << failure_fraction << " exceeds " << kMaxFailureFraction << "\n";
    return kQualityGate;
  }
  return kOk;
}

int cmd_cayley_demo(const Common& c, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const LmiSpectrahedron s = LmiSpectrahedron::cayley_cubic();
  SampleOptions opts;
  opts.trials = c.trials;
  opts.seed = c.seed;
  opts.workers = c.workers;
  opts.rank_tol = c.rank_tol;
  opts.solver = c.solver;
  const SampleReport rep = sample_extreme_points(s, opts);

  auto vertices = tetrahedron_vertices();
  std::size_t rank_one = 0, converged = 0, stray = 0;
  double worst = 0.0;
  for (const auto& r : rep.records) {
    if (r.status != SolveStatus::Converged) continue;
    ++converged;
    if (r.optimum_rank != 1) continue;
    ++rank_one;
    std::size_t best = 0;
    double best_dev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      double dev = 0.0;
      for (std::size_t i = 0; i < 3; ++i) dev = std::max(dev, std::abs(r.x_star[i] - vertices[k].x[i]));
      if (dev < best_dev) {
        best_dev = dev;
        best = k;
      }
    }
    if (best_dev > 1e-6) ++stray;
    vertices[best].hits++;
    vertices[best].max_deviation = std::max(vertices[best].max_deviation, best_dev);
    worst = std::max(worst, best_dev);
  }
  // Rank-1 optimizers that agree to well within the vertex spacing are one
  // optimizer seen through solver tolerance; each cluster is reported by its
  // centroid.
  struct Cluster {
    std::array<double, 3> sum{};
    std::size_t members = 0;
    std::array<double, 3> centroid() const {
      return {sum[0] / members, sum[1] / members, sum[2] / members};
    }
  };
  constexpr double kClusterRadius = 1e-3;
  std::vector<Cluster> clusters;
  for (const auto& r : rep.records) {
    if (r.status != SolveStatus::Converged || r.optimum_rank != 1) continue;
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& cl) {
      const auto ctr = cl.centroid();
      for (std::size_t i = 0; i < 3; ++i)
        if (std::abs(r.x_star[i] - ctr[i]) > kClusterRadius) return false;
      return true;
    });
    if (it == clusters.end()) it = clusters.insert(clusters.end(), Cluster{});
    for (std::size_t i = 0; i < 3; ++i) it->sum[i] += r.x_star[i];
    it->members++;
  }
  auto vertex_deviation = [&](const std::array<double, 3>& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) {
      double dev = 0.0;
      for (std::size_t i = 0; i < 3; ++i) dev = std::max(dev, std::abs(x[i] - v.x[i]));
      best = std::min(best, dev);
    }
    return best;
  };
  double worst_centroid = 0.0;
  for (const auto& cl : clusters) worst_centroid = std::max(worst_centroid, vertex_deviation(cl.centroid()));

  const double fraction = converged ? static_cast<double>(rank_one) / static_cast<double>(converged) : 0.0;
  // Four caps of angular radius arccos(1/sqrt 3) cover 2(1 - 1/sqrt 3) of the sphere.
  const double predicted = 2.0 * (1.0 - 1.0 / std::sqrt(3.0));
  std::size_t distinct = 0;
  for (const auto& v : vertices) distinct += v.hits > 0 ? 1 : 0;

  if (c.format == "table") {
    std::ostringstream s;
    s << "cayley cubic, " << c.trials << " trials, seed " << c.seed << "\n";
    s << "rank-1 fraction " << format_percent(fraction) << " (cap area " << format_percent(predicted)
      << ")\n";
    for (const auto& v : vertices)
      s << "vertex (" << v.x[0] << "," << v.x[1] << "," << v.x[2] << ")  hits " << v.hits
        << "  max deviation " << v.max_deviation << "\n";
    s << "distinct rank-1 optimizers " << clusters.size() << ", largest centroid deviation "
      << worst_centroid << "\n";
    s << "rank-1 optimizers away from a vertex: " << stray << "\n";
    s << "failures " << rep.failures << "\n";
    emit(s.str(), c, out);
  } else {
    Json j = report_header("cayley-demo");
    j["config"] = {{"trials", c.trials}, {"seed", c.seed}, {"workers", c.workers},
                   {"rank_tol", c.rank_tol}, {"solver", solver_json(c.solver)}};
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["histogram"] = histogram_json(rep);
    j["failures"] = rep.failures;
    j["rank1_fraction"] = fraction;
    j["cap_area_fraction"] = predicted;
    Json vs = Json::array();
    for (const auto& v : vertices)
      vs.push_back({{"vertex", v.x}, {"hits", v.hits}, {"max_deviation", v.max_deviation}});
    j["vertices"] = vs;
    j["distinct_rank1_vertices"] = distinct;
    j["rank1_off_vertex"] = stray;
    j["max_vertex_deviation"] = worst;
    Json cls = Json::array();
    for (const auto& cl : clusters)
      cls.push_back({{"centroid", cl.centroid()},
                     {"members", cl.members},
                     {"vertex_deviation", vertex_deviation(cl.centroid())}});
    j["rank1_optimizers"] = cls;
    j["distinct_rank1_optimizers"] = clusters.size();
    j["max_centroid_deviation"] = worst_centroid;
    j["duration_seconds"] = seconds_since(start);
    emit(j.dump(2) + "\n", c, out);
  }
  if (static_cast<double>(rep.failures) / static_cast<double>(c.trials) > kMaxFailureFraction) {
    err << "failure fraction exceeds " << kMaxFailureFraction << "\n";
    return kQualityGate;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// certify

Json certificate_json(const CoatomCertificate& cert, const std::vector<std::string>& labels) {
  Json j = {{"dimension", cert.dimension},
            {"span_dimension", cert.span_dimension},
            {"verdict", to_string(cert.verdict)},
            {"tolerance", cert.tolerance_used},
            {"gap_ratio", std::isfinite(cert.gap_ratio) ? Json(cert.gap_ratio) : Json("inf")}};
  Json gens = Json::array();
  for (const auto& coords : cert.intersection_coordinates) {
    Json g = Json::object();
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (std::abs(coords[i]) > 1e-12) g[i < labels.size() ? labels[i] : std::to_string(i)] = coords[i];
    gens.push_back(g);
  }
  j["generators"] = gens;
  return j;
}

int cmd_certify(const Common& c, const std::string& matrix_path, const std::string& support,
                std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (matrix_path.empty() == support.empty()) {
    throw std::invalid_argument("certify needs exactly one of --matrix or --support");
  }
  const Model model = resolve_model(c.model, c.algebra);
  if (!model.basis) throw std::invalid_argument("certify needs a local-space model, not cayley");
  const LocalSpaceBasis& basis = *model.basis;
  const std::size_t d = basis.d();

  Json j = report_header("certify");
  j["config"] = {{"model", c.model}, {"algebra", c.algebra}, {"rank_tol", c.rank_tol}};
  Projector p;
  if (!matrix_path.empty()) {
    const HermitianMatrix a = read_matrix_file(matrix_path);
    if (a.dim() != d) {
      throw std::invalid_argument("matrix is " + std::to_string(a.dim()) + "x" +
                                  std::to_string(a.dim()) + ", model needs " + std::to_string(d));
    }
    j["input"] = matrix_path;
    j["trace"] = a.trace();
    j["in_space"] = max_abs_diff(project_onto_space(a, basis), a) <= 1e-9;
    p = ground_projector(a);
  } else {
    SupportSet f = SupportSet::full(0);
    if (support.find(',') != std::string::npos || support.size() != d) {
      std::vector<Config> configs;
      std::stringstream ss(support);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.size() != static_cast<std::size_t>(std::countr_zero(d)) ||
            item.find_first_not_of("01") != std::string::npos) {
          throw std::invalid_argument("bad configuration '" + item + "' in --support");
        }
        configs.push_back(std::stoul(item, nullptr, 2));
      }
      f = SupportSet::from_configs(std::countr_zero(d), configs);
    } else {
      f = SupportSet::from_bitstring(support);
    }
    j["input"] = f.to_bitstring();
    p = f.to_projector();
  }
  j["projector_rank"] = p.rank();
  if (p.rank() == 0 || p.rank() == d) {
    j["verdict"] = "not_coatom";
    j["reason"] = p.rank() == 0 ? "projector is zero" : "ground projector is the identity";
  } else {
    const auto cert = coatom_certificate(p, basis);
    j["certificate"] = certificate_json(cert, basis.labels());
    j["verdict"] = to_string(cert.verdict);
    j["quick_reject"] = quick_reject(p, complement_basis(basis.hypergraph(), basis.algebras()));
  }
  j["duration_seconds"] = seconds_since(start);

  if (c.format == "table") {
    std::ostringstream s;
    s << "projector rank " << j["projector_rank"].get<std::size_t>() << "\n";
    if (j.contains("certificate")) s << "certificate dimension " << j["certificate"]["dimension"] << "\n";
    s << "verdict " << j["verdict"].get<std::string>() << "\n";
    if (j.contains("certificate"))
      for (const auto& g : j["certificate"]["generators"]) {
        s << "generator";
        for (const auto& [label, v] : g.items()) s << " " << v.get<double>() << "*" << label;
        s << "\n";
      }
    emit(s.str(), c, out);
  } else {
    emit(j.dump(2) + "\n", c, out);
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// enumerate-classical / factor-check

int cmd_enumerate(const Common& c, const std::string& model_name, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto model = parse_classical_model(model_name);
  if (!model) throw std::invalid_argument("unknown classical model '" + model_name + "'");
  const auto coatoms = enumerate_coatoms(*model);
  if (c.format == "table") {
    std::ostringstream s;
    s << "coatoms of the three-bit lattice, model " << model_name << ": " << coatoms.size() << "\n";
    s << " row  P'          diag(P')                     Pauli form of P'\n";
    for (std::size_t i = 0; i < coatoms.size(); ++i) {
      const SupportSet edge = coatoms[i].complement();
      s << std::setw(4) << i + 1 << "  " << std::left << std::setw(10) << edge_label(edge) << "  "
        << std::setw(27) << diag_pattern(edge) << "  " << pauli_expansion(edge) << std::right << "\n";
    }
    emit(s.str(), c, out);
  } else {
    Json j = report_header("enumerate-classical");
    j["config"] = {{"model", model_name}};
    j["count"] = coatoms.size();
    Json rows = Json::array();
    for (const auto& f : coatoms) {
      const SupportSet edge = f.complement();
      rows.push_back({{"edge", edge_label(edge)},
                      {"support", f.to_bitstring()},
                      {"diag", diag_pattern(edge)},
                      {"pauli", pauli_expansion(edge)}});
    }
    j["coatoms"] = rows;
    j["duration_seconds"] = seconds_since(start);
    emit(j.dump(2) + "\n", c, out);
  }
  return kOk;
}

std::string factor_label(const CylinderFactor& f) {
  std::string units = unit_set_to_string(f.nu);
  std::string excluded;
  const int k = std::popcount(f.nu);
  for (std::size_t i = 0; i < f.excluded.size(); ++i) {
    if (i) excluded += ",";
    excluded += config_label(f.excluded[i], k);
  }
  return "P" + units + " = {" + excluded + "}'";
}

int cmd_factor_check(const Common& c, const std::string& support, const std::string& graph,
                     std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  Hypergraph g;
  if (graph == "c3") g = Hypergraph::c3();
  else if (graph == "p3") g = Hypergraph::p3();
  else throw std::invalid_argument("--graph must be c3 or p3");

  SupportSet f = SupportSet::empty(3);
  if (support.size() == 8 && support.find(',') == std::string::npos) {
    f = SupportSet::from_bitstring(support);
  } else {
    std::vector<Config> configs;
    std::stringstream ss(support);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.size() != 3 || item.find_first_not_of("01") != std::string::npos) {
        throw std::invalid_argument("bad configuration '" + item + "' in --support");
      }
      configs.push_back(std::stoul(item, nullptr, 2));
    }
    f = SupportSet::from_configs(3, configs);
  }
  const bool feasible = is_m_feasible(f, g);
  const auto decomposition = ff_ground_projector_form(f, g);

  if (c.format == "table") {
    std::ostringstream s;
    s << "support " << f.to_bitstring() << " on " << graph << ": "
      << (feasible ? "M-feasible" : "not M-feasible") << "\n";
    if (decomposition) {
      if (decomposition->factors.empty()) s << "  no cylinder factors (F is everything)\n";
      for (const auto& factor : decomposition->factors) s << "  " << factor_label(factor) << "\n";
    }
    emit(s.str(), c, out);
  } else {
    Json j = report_header("factor-check");
    j["config"] = {{"support", f.to_bitstring()}, {"graph", graph}};
    j["m_feasible"] = feasible;
    j["decomposition_exists"] = decomposition.has_value();
    if (decomposition) {
      Json factors = Json::array();
      for (const auto& factor : decomposition->factors) {
        Json ex = Json::array();
        for (Config y : factor.excluded) ex.push_back(config_label(y, std::popcount(factor.nu)));
        factors.push_back({{"units", unit_set_members(factor.nu)},
                           {"excluded", ex},
                           {"label", factor_label(factor)}});
      }
      j["factors"] = factors;
    }
    j["duration_seconds"] = seconds_since(start);
    emit(j.dump(2) + "\n", c, out);
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify-family

int cmd_verify_family(const Common& c, const std::string& a_text, const std::string& t_text,
                      bool include_special, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const auto a_grid = a_text.empty() ? default_a_grid() : parse_number_list(a_text);
  const auto t_grid = t_text.empty() ? default_t_grid() : parse_number_list(t_text);
  const auto rows = certify_family(a_grid, t_grid);
  bool all_ok = true;
  for (const auto& r : rows)
    if (!family_is_special(r.a, r.t) &&
        (r.certificate.verdict != CertificateVerdict::Coatom || r.rank != 3 ||
         r.projector_rank != 5 || !r.generator_collinear || r.kernel_residual > 1e-10)) {
      all_ok = false;
    }
  std::vector<SpecialValueRow> special;
  if (include_special) special = special_values_report();
  for (const auto& s : special)
    if (s.extreme != s.expected_extreme || s.rank != s.expected_rank) all_ok = false;

  if (c.format == "table") {
    std::ostringstream s;
    s << std::setprecision(6);
    s << "| a | t | rank | projector rank | certificate dim | verdict | collinear |\n";
    s << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows)
      s << "| " << r.a << " | " << r.t << " | " << r.rank << " | " << r.projector_rank << " | "
        << r.certificate.dimension << " | " << to_string(r.certificate.verdict) << " | "
        << (r.generator_collinear ? "yes" : "no") << " |\n";
    if (include_special) {
      s << "\n| regime | a | t | rank | expected rank | point | verdict | extreme | expected |\n";
      s << "|---|---|---|---|---|---|---|---|---|\n";
      for (const auto& r : special)
        s << "| " << r.regime << " | " << r.a << " | " << r.t << " | " << r.rank << " | "
          << r.expected_rank << " | " << to_string(r.point_class) << " | " << to_string(r.verdict)
          << " | " << (r.extreme ? "yes" : "no") << " | " << (r.expected_extreme ? "yes" : "no")
          << " |\n";
    }
    emit(s.str(), c, out);
  } else {
    Json j = report_header("verify-family");
    j["config"] = {{"a_grid", a_grid}, {"t_grid", t_grid}, {"include_special", include_special}};
    Json table = Json::array();
    for (const auto& r : rows)
      table.push_back({{"a", r.a},
                       {"t", r.t},
                       {"rank", r.rank},
                       {"projector_rank", r.projector_rank},
                       {"min_eigenvalue", r.min_eigenvalue},
                       {"kernel_residual", r.kernel_residual},
                       {"certificate_dim", r.certificate.dimension},
                       {"verdict", to_string(r.certificate.verdict)},
                       {"generator_collinear", r.generator_collinear}});
    j["grid"] = table;
    if (include_special) {
      Json sp = Json::array();
      for (const auto& r : special)
        sp.push_back({{"regime", r.regime},
                      {"a", r.a},
                      {"t", r.t},
                      {"rank", r.rank},
                      {"expected_rank", r.expected_rank},
                      {"point", to_string(r.point_class)},
                      {"verdict", to_string(r.verdict)},
                      {"certificate_dim", r.certificate_dim},
                      {"extreme", r.extreme},
                      {"expected_extreme", r.expected_extreme}});
      j["special_values"] = sp;
    }
    j["all_consistent"] = all_ok;
    j["duration_seconds"] = seconds_since(start);
    emit(j.dump(2) + "\n", c, out);
  }
  if (!all_ok) {
    err << "family verification found inconsistent rows\n";
    return kQualityGate;
  }
  return kOk;
}

}  // namespace

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Search for and certify coatoms of ground-projector lattices", "coatom-forge"};
  app.set_version_flag("--version", std::string(COATOM_VERSION));
  app.require_subcommand(1);

  Common c;
  std::uint64_t seed_value = 0;
  bool certify = false, full_records = false, include_special = false;
  std::string export_path, matrix_path, support, graph = "c3", classical_model = "c3";
  std::string a_grid, t_grid;

  auto* sample = app.add_subcommand("sample", "Minimize random linear functionals");
  sample->add_option("--model", c.model, "c3-qubit, p3-qubit, c3-bit, p3-bit, c3-realtwo, "
                                         "cayley, or a JSON hypergraph like [[1,2],[2,3]]");
  sample->add_option("--algebra", c.algebra, "Unit algebra for JSON hypergraphs")
      ->check(CLI::IsMember({"qubit", "bit", "realtwo"}));
  sample->add_option("--trials", c.trials, "Number of random directions")->check(CLI::PositiveNumber);
  auto* sample_seed = sample->add_option("--seed", seed_value, "Base seed (default 0)");
  sample->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  sample->add_flag("--certify", certify, "Certify the kernel projector of every optimum");
  sample->add_flag("--full-records", full_records, "Include directions and optimizers in records");
  sample->add_option("--export-spectrahedron", export_path, "Also write the LMI basis as JSON");
  add_solver_flags(sample, c);
  add_output_flags(sample, c, {"json", "csv", "table"});

  auto* demo = app.add_subcommand("cayley-demo", "Rank-one cap fraction of the Cayley cubic");
  demo->add_option("--trials", c.trials, "Number of random directions")->check(CLI::PositiveNumber);
  auto* demo_seed = demo->add_option("--seed", seed_value, "Base seed (default 0)");
  demo->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  add_solver_flags(demo, c);
  add_output_flags(demo, c, {"json", "table"});

  auto* cert = app.add_subcommand("certify", "Coatom certificate for a ground projector");
  cert->add_option("--model", c.model, "Local-space model");
  cert->add_option("--algebra", c.algebra, "Unit algebra for JSON hypergraphs")
      ->check(CLI::IsMember({"qubit", "bit", "realtwo"}));
  cert->add_option("--matrix", matrix_path, "Hermitian matrix file; its ground projector is tested");
  cert->add_option("--support", support, "Diagonal projector: 0/1 string or configuration list");
  cert->add_option("--rank-tol", c.rank_tol, "Relative eigenvalue cutoff")->check(CLI::PositiveNumber);
  add_output_flags(cert, c, {"json", "table"});

  auto* enumerate = app.add_subcommand("enumerate-classical", "Three-bit coatom tables");
  enumerate->add_option("--model", classical_model, "c3, c3ff or p3")
      ->check(CLI::IsMember({"c3", "c3ff", "p3"}));
  add_output_flags(enumerate, c, {"json", "table"});

  auto* factor = app.add_subcommand("factor-check", "M-feasibility and cylinder decomposition");
  factor->add_option("--support", support, "8-character 0/1 mask or configuration list")->required();
  factor->add_option("--graph", graph, "c3 or p3")->check(CLI::IsMember({"c3", "p3"}));
  add_output_flags(factor, c, {"json", "table"});

  auto* family = app.add_subcommand("verify-family", "Certify the M(a,t) family on a grid");
  family->add_option("--a-grid", a_grid, "Comma-separated a values");
  family->add_option("--t-grid", t_grid, "Comma-separated t values (pi/8 style allowed)");
  family->add_flag("--include-special", include_special, "Add the special-value report");
  add_output_flags(family, c, {"json", "table"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << COATOM_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kUsage;
  }

  try {
    if (sample->parsed()) {
      c.seed = resolve_seed(sample_seed, seed_value);
      return cmd_sample(c, certify, full_records, export_path, out, err);
    }
    if (demo->parsed()) {
      c.seed = resolve_seed(demo_seed, seed_value);
      if (demo->count("--trials") == 0) c.trials = 20000;
      return cmd_cayley_demo(c, out, err);
    }
    if (cert->parsed()) return cmd_certify(c, matrix_path, support, out);
    if (enumerate->parsed()) return cmd_enumerate(c, classical_model, out);
    if (factor->parsed()) return cmd_factor_check(c, support, graph, out);
    if (family->parsed()) return cmd_verify_family(c, a_grid, t_grid, include_special, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace coatom::cli
