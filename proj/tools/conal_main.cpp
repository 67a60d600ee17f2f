// Command-line front end: order checks, cone membership, monotonicity
// experiments and consensus simulations, with machine-readable reports.
//
// Exit codes: 0 success / positive verdict, 1 negative verdict,
// 2 usage or domain error, 3 runtime failure (integration breach).

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "conal/conal_order.hpp"
#include "conal/consensus.hpp"
#include "conal/diffpos.hpp"
#include "conal/matrix_parse.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace conal;

namespace {

constexpr const char* kToolVersion = "0.1.0";

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json margins_to_json(const ConeMargin& margins) {
  json entries = json::array();
  for (const auto& [name, value] : margins.margins) {
    entries.push_back(json{{"name", name}, {"value", value}});
  }
  return json{{"margins", entries}, {"member", margins.member},
              {"min_margin", margins.min_margin()}};
}

json verdict_to_json(const OrderVerdict& v) {
  json out = margins_to_json(v.margins);
  out["ordered"] = v.ordered;
  if (v.witness) out["witness"] = *v.witness;
  return out;
}

json report_skeleton(const std::string& command, json config) {
  return json{{"tool", "conal"},
              {"version", kToolVersion},
              {"command", command},
              {"config", std::move(config)}};
}

// Matrix argument: inline token/array, or @path to a file holding one.
Matrix load_matrix_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    const fs::path path = arg.substr(1);
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open matrix file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_matrix(buffer.str());
  }
  return parse_matrix(arg);
}

ConeSpec make_spd_cone(const std::string& cone, double mu, int n) {
  if (cone == "loewner") return ConeSpec::loewner(n);
  if (cone == "quad") return ConeSpec::quadratic(mu, n);
  throw ValidationError("unknown cone '" + cone + "', expected loewner or quad");
}

MapSpec parse_map(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "power") {
    if (tail.empty()) throw ValidationError("map: power needs an exponent, e.g. power:0.5");
    return MapSpec::power(parse_scalar(tail));
  }
  if (head == "inversion") return MapSpec::inversion();
  if (head == "congruence") {
    if (tail.empty()) throw ValidationError("map: congruence needs a matrix argument");
    return MapSpec::congruence_map(load_matrix_arg(tail));
  }
  if (head == "translation") {
    if (tail.empty()) throw ValidationError("map: translation needs a matrix argument");
    return MapSpec::translation(SymMatrix(load_matrix_arg(tail)));
  }
  throw ValidationError("unknown map '" + head +
                        "', expected power:R, inversion, congruence:M, translation:M");
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, path);
}

std::uint64_t cell_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("CONAL_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// ---------------------------------------------------------------- order

int cmd_order(const std::string& cone, double mu, const std::string& a_text,
              const std::string& b_text) {
  const Matrix a = load_matrix_arg(a_text);
  const Matrix b = load_matrix_arg(b_text);
  const SpdPoint s1(a), s2(b);
  const ConeSpec spec = make_spd_cone(cone, mu, s1.dim());
  const OrderVerdict verdict = spd_order(spec, s1, s2);

  json config{{"cone", spec.describe()},
              {"a", matrix_to_json(a)},
              {"b", matrix_to_json(b)}};
  json report = report_skeleton("order", config);
  report["verdict"] = verdict_to_json(verdict);
  std::cout << report.dump(2) << "\n";
  return verdict.ordered ? 0 : 1;
}

// ----------------------------------------------------------- cone-check

int cmd_cone_check(const std::string& cone, double mu, const std::string& sigma_text,
                   const std::string& x_text) {
  const Matrix x = load_matrix_arg(x_text);
  const SymMatrix direction(x);
  const SpdPoint sigma = sigma_text.empty() ? SpdPoint::Identity(direction.dim())
                                            : SpdPoint(load_matrix_arg(sigma_text));
  const ConeSpec spec = make_spd_cone(cone, mu, sigma.dim());
  const ConeMargin margins = cone_margin(spec, sigma, direction);

  json config{{"cone", spec.describe()},
              {"sigma", matrix_to_json(sigma.mat())},
              {"x", matrix_to_json(x)}};
  json report = report_skeleton("cone-check", config);
  report["result"] = margins_to_json(margins);
  std::cout << report.dump(2) << "\n";
  return margins.member ? 0 : 1;
}

// ------------------------------------------------------------- monotone

int cmd_monotone(const std::string& map_text, const std::string& cone, double mu, int n,
                 int pairs, int points, int dirs, std::uint64_t seed) {
  const MapSpec map = parse_map(map_text);
  const ConeSpec spec = make_spd_cone(cone, mu, n);
  const auto violations = monotone_scan(map, spec, pairs, seed);
  const PositivityReport positivity = diff_positivity_check(map, spec, points, dirs, seed + 1);

  json config{{"map", map.name()}, {"cone", spec.describe()}, {"n", n},
              {"pairs", pairs},    {"points", points},        {"dirs", dirs},
              {"seed", seed}};
  json report = report_skeleton("monotone", config);
  report["violations"] = violations.size();
  report["min_post_margin"] = positivity.min_post_margin;
  json witness_list = json::array();
  for (const MonotonicityViolation& v : violations) {
    witness_list.push_back(json{{"first", matrix_to_json(v.first.mat())},
                                {"second", matrix_to_json(v.second.mat())},
                                {"pre", margins_to_json(v.pre_margins)},
                                {"post", margins_to_json(v.post_margins)}});
    if (witness_list.size() >= 16) break;  // cap the report size
  }
  report["witnesses"] = witness_list;
  std::cout << report.dump(2) << "\n";
  return violations.empty() ? 0 : 1;
}

// ---------------------------------------------------------- probe-axioms

int cmd_probe_axioms(const std::string& cone, double mu, int n, int trials,
                     std::uint64_t seed) {
  const ConeSpec spec = make_spd_cone(cone, mu, n);
  const AxiomReport probe = order_axiom_probe(spec, n, trials, seed);

  json config{{"cone", spec.describe()}, {"n", n}, {"trials", trials}, {"seed", seed}};
  json report = report_skeleton("probe-axioms", config);
  report["reflexive_failures"] = probe.reflexive_failures;
  report["transitive_failures"] = probe.transitive_failures;
  report["antisymmetry_failures"] = probe.antisymmetry_failures;
  report["boundary_flags"] = probe.boundary_flags;
  std::cout << report.dump(2) << "\n";
  const bool clean = probe.reflexive_failures == 0 && probe.transitive_failures == 0 &&
                     probe.antisymmetry_failures == 0;
  return clean ? 0 : 1;
}

// ---------------------------------------------------------- loewner-heinz

struct SweepCell {
  std::string cone;  // "quad" or "loewner"
  double mu = 0.0;   // meaningful for quad only
  double r = 1.0;
  int n = 2;
};

json run_sweep_cell(const SweepCell& cell, int pairs, int budget, std::uint64_t seed) {
  const ConeSpec spec = cell.cone == "quad" ? ConeSpec::quadratic(cell.mu, cell.n)
                                            : ConeSpec::loewner(cell.n);
  const auto violations = monotone_scan(MapSpec::power(cell.r), spec, pairs, seed, -1e-9);

  json out{{"cone", cell.cone}, {"r", cell.r}, {"n", cell.n}, {"pairs", pairs},
           {"violations", violations.size()}};
  if (cell.cone == "quad") out["mu"] = cell.mu;

  if (!violations.empty()) {
    double worst = std::numeric_limits<double>::infinity();
    json witnesses = json::array();
    for (const auto& v : violations) {
      worst = std::min(worst, v.post_margins.min_margin());
      if (witnesses.size() < 4) {
        witnesses.push_back(json{{"first", matrix_to_json(v.first.mat())},
                                 {"second", matrix_to_json(v.second.mat())},
                                 {"post_min_margin", v.post_margins.min_margin()}});
      }
    }
    out["min_post_margin"] = worst;
    out["witnesses"] = witnesses;
  } else {
    out["min_post_margin"] = json();
  }

  if (cell.r > 1.0) {
    const auto found = counterexample_search(cell.r, spec, budget, seed + 1);
    out["counterexample_found"] = found.has_value();
    if (found) {
      out["counterexample"] = json{{"first", matrix_to_json(found->first.mat())},
                                   {"second", matrix_to_json(found->second.mat())},
                                   {"post_min_margin", found->post_margins.min_margin()}};
    }
  }
  return out;
}

int cmd_loewner_heinz(const std::optional<fs::path>& config_path,
                      const std::optional<fs::path>& out_dir, std::uint64_t seed_flag) {
  json config{{"r_grid", {0.25, 0.5, 0.75, 1.0}},
              {"mu_grid", {0.5, 1.0, 1.5}},
              {"n_list", {2}},
              {"pairs", 500},
              {"include_loewner", true},
              {"counterexample_budget", 10000},
              {"seed", seed_flag}};
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw ValidationError("cannot open config " + config_path->string());
    config.merge_patch(json::parse(in));
  }

  const auto r_grid = config["r_grid"].get<std::vector<double>>();
  const auto mu_grid = config["mu_grid"].get<std::vector<double>>();
  const auto n_list = config["n_list"].get<std::vector<int>>();
  const int pairs = config["pairs"].get<int>();
  const int budget = config["counterexample_budget"].get<int>();
  const bool include_loewner = config["include_loewner"].get<bool>();
  const std::uint64_t seed = config["seed"].get<std::uint64_t>();

  std::vector<SweepCell> cells;
  for (int n : n_list) {
    for (double r : r_grid) {
      for (double mu : mu_grid) {
        if (mu > 0.0 && mu < n) cells.push_back(SweepCell{"quad", mu, r, n});
      }
      if (include_loewner) cells.push_back(SweepCell{"loewner", 0.0, r, n});
    }
  }

  // Cells run concurrently; each derives its stream from the master seed
  // and its own index, so scheduling cannot change the results.
  std::vector<json> results(cells.size());
  std::atomic<std::size_t> next{0};
  const unsigned thread_count = static_cast<unsigned>(
      std::min<std::size_t>(sweep_threads(), std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < thread_count; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t index = next.fetch_add(1);
        if (index >= cells.size()) return;
        results[index] = run_sweep_cell(cells[index], pairs, budget, cell_seed(seed, index));
      }
    });
  }
  for (std::thread& w : workers) w.join();

  json report = report_skeleton("loewner-heinz", config);
  report["cells"] = results;

  std::ostringstream csv;
  csv.precision(17);
  csv << "cone,mu,r,n,pairs,violations,min_post_margin\n";
  for (const json& cell : results) {
    csv << cell["cone"].get<std::string>() << ",";
    if (cell.contains("mu")) csv << cell["mu"].get<double>();
    csv << "," << cell["r"].get<double>() << "," << cell["n"].get<int>() << ","
        << cell["pairs"].get<int>() << "," << cell["violations"].get<std::size_t>() << ",";
    if (!cell["min_post_margin"].is_null()) csv << cell["min_post_margin"].get<double>();
    csv << "\n";
  }

  if (out_dir) {
    fs::create_directories(*out_dir);
    write_file_atomic(*out_dir / "loewner_heinz.csv", csv.str());
    write_file_atomic(*out_dir / "loewner_heinz.json", report.dump(2) + "\n");
  } else {
    report["csv"] = csv.str();
    std::cout << report.dump(2) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------ consensus

Vector resolve_vector(const json& node, int n, double fallback_half_range,
                      std::uint64_t fallback_seed, const char* what) {
  if (node.is_array()) {
    if (static_cast<int>(node.size()) != n) {
      throw ValidationError(std::string(what) + ": expected " + std::to_string(n) +
                            " entries");
    }
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = node[i].get<double>();
    return v;
  }
  double lo = -fallback_half_range, hi = fallback_half_range;
  std::uint64_t seed = fallback_seed;
  if (node.is_object()) {
    if (node.contains("range")) {
      lo = node["range"][0].get<double>();
      hi = node["range"][1].get<double>();
    }
    if (node.contains("seed")) seed = node["seed"].get<std::uint64_t>();
  }
  Rng rng(seed);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

int cmd_consensus(const fs::path& config_path, const fs::path& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw ValidationError("cannot open config " + config_path.string());
  json config = json::parse(in);

  const int n = config.at("n").get<int>();
  const double gain = config.value("gain", 1.0);
  const std::string coupling_name = config.value("coupling", std::string("barrier_tan"));
  CouplingKind coupling;
  if (coupling_name == "barrier_tan") {
    coupling = CouplingKind::BarrierTan;
  } else if (coupling_name == "sine") {
    coupling = CouplingKind::Sine;
  } else {
    throw ValidationError("consensus: unknown coupling '" + coupling_name + "'");
  }

  std::vector<Edge> edges;
  const std::string topology = config.value("topology", std::string("ring"));
  if (config.contains("edges")) {
    for (const json& e : config["edges"]) {
      edges.push_back(Edge{e[0].get<int>(), e[1].get<int>(), coupling, gain});
    }
  } else if (topology == "ring") {
    edges = ring_edges(n, coupling, gain);
  } else {
    throw ValidationError("consensus: topology must be 'ring' or explicit edges");
  }
  if (config.contains("chords")) {
    for (const json& chord : config["chords"]) {
      add_bidirectional_edge(edges, chord[0].get<int>(), chord[1].get<int>(), coupling, gain);
    }
  }

  const std::uint64_t seed = config.value("seed", 42ULL);
  const InteractionSign sign = config.value("sign", std::string("attractive")) == "repulsive"
                                   ? InteractionSign::Repulsive
                                   : InteractionSign::Attractive;
  const Vector omega = resolve_vector(config.value("omega", json()), n, 0.2, seed, "omega");
  const Vector theta0 =
      resolve_vector(config.value("theta0", json()), n, 0.6, seed + 1, "theta0");
  const double horizon = config.value("horizon", 200.0);
  const double dt = config.value("dt", 1e-2);
  const double window = config.value("window", 0.1 * horizon);
  const double tol = config.value("tol", 1e-6);
  const double tau = config.value("tau", 1.0);
  const int phi_vectors = config.value("phi_vectors", 20);

  json resolved = config;
  resolved["omega"] = std::vector<double>(omega.begin(), omega.end());
  resolved["theta0"] = std::vector<double>(theta0.begin(), theta0.end());
  resolved["horizon"] = horizon;
  resolved["dt"] = dt;
  resolved["window"] = window;
  resolved["tol"] = tol;
  resolved["tau"] = tau;

  const OscillatorNetwork net(n, edges, omega, sign);
  fs::create_directories(out_dir);

  Trajectory traj;
  try {
    traj = simulate(net, theta0, horizon, dt);
  } catch (const IntegrationError& e) {
    json failure = report_skeleton("consensus", resolved);
    failure["error"] = json{{"kind", "integration_failure"},
                            {"message", e.what()},
                            {"time", e.time},
                            {"edge", {e.edge_from, e.edge_to}}};
    write_file_atomic(out_dir / "diagnostics.json", failure.dump(2) + "\n");
    std::cerr << "consensus: " << e.what() << "\n";
    return 3;
  }

  std::ostringstream csv;
  write_trajectory_csv(traj, csv);
  write_file_atomic(out_dir / "trajectory.csv", csv.str());

  const VariationalFlow flow = variational(net, traj);
  const ContractionReport contraction = contraction_report(flow, tau);
  const PhaseLockReport lock = phase_lock_detect(traj, window, tol);

  Rng rng(seed + 2);
  json phi_summary = json::array();
  for (int k = 0; k < phi_vectors; ++k) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(0.05, 1.0);
    phi_summary.push_back(json{{"initial", phi_ratio(flow, v, 0.0)},
                               {"final", phi_ratio(flow, v, horizon)}});
  }

  json report = report_skeleton("consensus", resolved);
  report["phase_lock"] = json{
      {"locked", lock.locked},
      {"sync_frequency", lock.sync_frequency},
      {"asymptotic_gaps",
       std::vector<double>(lock.asymptotic_gaps.begin(), lock.asymptotic_gaps.end())}};
  report["contraction"] = json{{"strictly_positive", contraction.strictly_positive},
                               {"hilbert_diameter", contraction.hilbert_diameter},
                               {"birkhoff_ratio", contraction.birkhoff_ratio},
                               {"window", contraction.window}};
  report["phi_ratios"] = phi_summary;
  report["steps"] = traj.times.size();
  write_file_atomic(out_dir / "diagnostics.json", report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant cone fields, conal orders and monotonicity on SPD and torus models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string cone = "loewner";
  double mu = 1.0;
  int n = 2;
  std::uint64_t seed = 42;
  std::string a_text, b_text, sigma_text, x_text, map_text;
  int pairs = 500, points = 50, dirs = 10, trials = 500;
  std::optional<fs::path> config_path, out_dir;

  CLI::App* order = app.add_subcommand("order", "Decide whether two SPD points are ordered");
  order->add_option("--cone", cone, "loewner or quad")->capture_default_str();
  order->add_option("--mu", mu, "quadratic cone parameter")->capture_default_str();
  order->add_option("--a", a_text, "first point (I<k>, diag(...), [[...]], or @file)")
      ->required();
  order->add_option("--b", b_text, "second point")->required();

  CLI::App* cone_check =
      app.add_subcommand("cone-check", "Membership margins of a tangent direction");
  cone_check->add_option("--cone", cone, "loewner or quad")->capture_default_str();
  cone_check->add_option("--mu", mu, "quadratic cone parameter")->capture_default_str();
  cone_check->add_option("--sigma", sigma_text, "base point (default identity)");
  cone_check->add_option("--x", x_text, "tangent direction")->required();

  CLI::App* monotone = app.add_subcommand("monotone", "Monotonicity scan for a map");
  monotone->add_option("--map", map_text, "power:R, inversion, congruence:M, translation:M")
      ->required();
  monotone->add_option("--cone", cone, "loewner or quad")->capture_default_str();
  monotone->add_option("--mu", mu, "quadratic cone parameter")->capture_default_str();
  monotone->add_option("--n", n, "matrix dimension")->capture_default_str();
  monotone->add_option("--pairs", pairs, "ordered pairs to scan")->capture_default_str();
  monotone->add_option("--points", points, "positivity sample points")->capture_default_str();
  monotone->add_option("--dirs", dirs, "directions per point")->capture_default_str();
  monotone->add_option("--seed", seed, "random seed")->capture_default_str();

  CLI::App* lh = app.add_subcommand("loewner-heinz", "Power-map monotonicity sweep");
  lh->add_option("--config", config_path, "sweep config JSON");
  lh->add_option("--out", out_dir, "output directory (default: print to stdout)");
  lh->add_option("--seed", seed, "master seed when no config is given")->capture_default_str();

  CLI::App* consensus = app.add_subcommand("consensus", "Oscillator network simulation");
  consensus->add_option("--config", config_path, "network config JSON")->required();
  consensus->add_option("--out", out_dir, "output directory")->required();

  CLI::App* probe = app.add_subcommand("probe-axioms", "Partial-order axiom probe");
  probe->add_option("--cone", cone, "loewner or quad")->capture_default_str();
  probe->add_option("--mu", mu, "quadratic cone parameter")->capture_default_str();
  probe->add_option("--n", n, "matrix dimension")->capture_default_str();
  probe->add_option("--trials", trials, "probe trials")->capture_default_str();
  probe->add_option("--seed", seed, "random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (order->parsed()) return cmd_order(cone, mu, a_text, b_text);
    if (cone_check->parsed()) return cmd_cone_check(cone, mu, sigma_text, x_text);
    if (monotone->parsed())
      return cmd_monotone(map_text, cone, mu, n, pairs, points, dirs, seed);
    if (lh->parsed()) return cmd_loewner_heinz(config_path, out_dir, seed);
    if (consensus->parsed()) return cmd_consensus(*config_path, *out_dir);
    if (probe->parsed()) return cmd_probe_axioms(cone, mu, n, trials, seed);
  } catch (const IntegrationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
