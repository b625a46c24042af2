// Command-line front end: load or generate an instance, run one of the
// packing algorithms (or the LP / exact solver), and emit a JSON report or
// CSV bench rows. Exit codes: 0 success, 1 usage/input errors, 2 when an
// output fails its own feasibility re-check (should never happen).

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geopack/geopack.hpp"

namespace {

using nlohmann::json;
using namespace geopack;

struct Options {
  std::string command;
  std::string instance_file;
  std::string gen_file;
  std::string config_file;
  std::string out_file;
  std::string format;  // "", "json", "csv"
  std::optional<std::uint64_t> seed;
  bool with_oracle = false;
  std::optional<int> trials;
  std::optional<double> alpha;
  int phi = 1;
  int b = 3;
  double fatness = 16.0;
  int count = 1;
  std::string algos = "pack";
};

struct LoadedInput {
  bool is_geometric = false;
  GeometricInstance geometric;
  Hypergraph hypergraph;   // built from the geometric instance when present
  std::string digest;      // fnv1a over the canonical instance JSON
};

// Accepts either a path to a JSON file or inline JSON (first non-space
// character '{' or '[').
json read_json_input(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '['))
    return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw std::invalid_argument("cannot open file: " + arg);
  json j;
  in >> j;
  return j;
}

LoadedInput load_input(const Options& opt) {
  if (opt.instance_file.empty() == opt.gen_file.empty())
    throw std::invalid_argument("provide exactly one of --instance or --gen");
  LoadedInput in;
  if (!opt.gen_file.empty()) {
    GeneratorSpec spec = generator_spec_from_json(read_json_input(opt.gen_file));
    if (opt.seed) spec.seed = *opt.seed;
    in.geometric = generate_instance(spec);
    in.is_geometric = true;
  } else {
    const json j = read_json_input(opt.instance_file);
    if (json_is_hypergraph(j)) {
      in.hypergraph = hypergraph_from_json(j);
      in.digest = fnv1a_hex(hypergraph_to_json(in.hypergraph).dump());
      return in;
    }
    in.geometric = geometric_from_json(j);
    in.is_geometric = true;
  }
  in.hypergraph = build_hypergraph(in.geometric).hypergraph;
  in.digest = fnv1a_hex(geometric_to_json(in.geometric).dump());
  return in;
}

SolverConfig load_config(const Options& opt) {
  SolverConfig cfg;
  if (!opt.config_file.empty()) cfg = solver_config_from_json(read_json_input(opt.config_file));
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.trials) cfg.trials = *opt.trials;
  if (opt.alpha) cfg.alpha = *opt.alpha;
  if (const char* env = std::getenv("GEOPACK_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) cfg.threads = std::min(cfg.threads, cap);
  }
  return cfg;
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out_file.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(opt.out_file);
  if (!out) throw std::invalid_argument("cannot write file: " + opt.out_file);
  out << text << "\n";
}

json solution_to_json(const PackingSolution& sol) {
  json j;
  j["weight"] = sol.weight;
  j["chosen"] = sol.chosen;
  j["feasible"] = sol.feasible;
  j["beta"] = sol.bicriteria_bound;
  return j;
}

// Re-validates a solution against the hypergraph it claims to pack; a failure
// here is an internal bug surfaced as exit code 2.
void require_feasible(const Hypergraph& h, const PackingSolution& sol) {
  const PackingSolution check = check_packing(h, sol.chosen, sol.bicriteria_bound);
  if (!check.feasible || !sol.feasible) {
    std::cerr << "internal error: reported solution violates its capacity bound\n";
    std::exit(2);
  }
}

struct RunOutcome {
  PackingSolution solution;
  json extra;  // command-specific report fields
};

RunOutcome run_algorithm(const std::string& name, const LoadedInput& in, const SolverConfig& cfg,
                         const Options& opt) {
  RunOutcome out;
  if (name == "pack") {
    if (opt.phi > 1) {
      out.solution = uniform_capacity_peel(in.hypergraph, opt.phi, [&](const Hypergraph& sub) {
        return pack_hypergraph(sub, cfg).best;
      });
      out.extra["phi"] = opt.phi;
    } else {
      PackReport rep = pack_hypergraph(in.hypergraph, cfg);
      out.solution = rep.best;
      out.extra["lp_objective"] = rep.fractional.objective;
      out.extra["lp_energy"] = rep.fractional.energy;
      out.extra["scale"] = {{"rho", rep.scale.rho},
                            {"gamma", rep.scale.gamma_value},
                            {"doublings", rep.scale.doublings},
                            {"calibration_warning", rep.scale.calibration_warning},
                            {"conflict_free", rep.scale.conflict_free}};
      out.extra["trials_run"] = rep.trials_run;
    }
  } else if (name == "exact") {
    OracleResult r = exact_pack(in.hypergraph);
    out.solution = check_packing(in.hypergraph, r.optimal_set, 1);
    out.extra["proven_optimal"] = r.proven_optimal;
    out.extra["nodes_explored"] = r.nodes_explored;
  } else if (name == "pack-rects") {
    if (!in.is_geometric) throw std::invalid_argument(name + " needs a geometric instance");
    out.solution = pack_rects_into_points(in.geometric, cfg);
  } else if (name == "pack-boxes") {
    if (!in.is_geometric) throw std::invalid_argument(name + " needs a geometric instance");
    out.solution = pack_boxes_into_points(in.geometric, cfg);
  } else if (name == "pack-points-rects") {
    if (!in.is_geometric) throw std::invalid_argument(name + " needs a geometric instance");
    bool fallback = false;
    out.solution = pack_points_into_rects(in.geometric, cfg, &fallback);
    out.extra["sparsify_fallback"] = fallback;
  } else if (name == "pack-points-fattri") {
    if (!in.is_geometric) throw std::invalid_argument(name + " needs a geometric instance");
    bool fallback = false;
    out.solution = pack_points_into_fat_triangles(in.geometric, cfg, opt.fatness, &fallback);
    out.extra["sparsify_fallback"] = fallback;
    out.extra["fatness_bound"] = opt.fatness;
  } else if (name == "local-search") {
    if (!in.is_geometric) throw std::invalid_argument(name + " needs a geometric instance");
    out.solution = local_search_disks(in.geometric, opt.b);
    out.extra["b"] = opt.b;
    if (in.geometric.regions.size() <= 40)
      out.extra["locally_optimal"] =
          verify_b_local_optimality(in.geometric, out.solution.chosen, opt.b).locally_optimal;
  } else {
    throw std::invalid_argument("unknown algorithm: " + name);
  }
  require_feasible(in.hypergraph, out.solution);
  return out;
}

int cmd_lp(const Options& opt) {
  const LoadedInput in = load_input(opt);
  const SolverConfig cfg = load_config(opt);
  const auto t0 = std::chrono::steady_clock::now();
  const LpSolveReport rep = build_and_solve_lp_with_info(in.hypergraph, cfg.lp_tol);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  json j;
  j["command"] = "lp";
  j["instance_digest"] = in.digest;
  j["config"] = solver_config_to_json(cfg);
  j["objective"] = rep.solution.objective;
  j["energy"] = rep.solution.energy;
  j["values"] = rep.solution.values;
  j["feasibility_slack"] = rep.solution.feasibility_slack;
  j["dual_objective"] = rep.certificate.dual_objective;
  j["iterations"] = rep.certificate.iterations;
  j["energy_warning"] = rep.certificate.energy_warning;
  j["wall_ms"] = ms;
  emit(opt, j.dump(2));
  return 0;
}

int cmd_single(const Options& opt) {
  const LoadedInput in = load_input(opt);
  const SolverConfig cfg = load_config(opt);
  const auto t0 = std::chrono::steady_clock::now();
  const RunOutcome out = run_algorithm(opt.command, in, cfg, opt);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  json j;
  j["command"] = opt.command;
  j["instance_digest"] = in.digest;
  j["config"] = solver_config_to_json(cfg);
  j["result"] = solution_to_json(out.solution);
  for (auto it = out.extra.begin(); it != out.extra.end(); ++it) j[it.key()] = it.value();
  if (opt.with_oracle) {
    const OracleResult oracle = exact_pack(in.hypergraph);
    j["oracle"] = {{"optimal_weight", oracle.optimal_weight},
                   {"proven_optimal", oracle.proven_optimal},
                   {"nodes_explored", oracle.nodes_explored}};
    if (oracle.optimal_weight > 0) j["ratio"] = out.solution.weight / oracle.optimal_weight;
  }
  j["wall_ms"] = ms;
  emit(opt, j.dump(2));
  return 0;
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  if (out.empty()) throw std::invalid_argument("--algos must name at least one algorithm");
  return out;
}

int cmd_bench(const Options& opt) {
  if (opt.gen_file.empty())
    throw std::invalid_argument("bench requires --gen with a generator spec template");
  GeneratorSpec base = generator_spec_from_json(read_json_input(opt.gen_file));
  if (opt.seed) base.seed = *opt.seed;
  const std::vector<std::string> algos = split_csv_list(opt.algos);

  struct Row {
    std::string instance_id, algo;
    std::uint64_t seed;
    double weight, lp_obj;
    std::optional<double> oracle_opt;
    double ratio;
    bool feasible;
    int beta;
    double wall_ms;
  };
  std::vector<Row> rows;
  for (int i = 0; i < std::max(1, opt.count); ++i) {
    GeneratorSpec spec = base;
    spec.seed = base.seed + static_cast<std::uint64_t>(i);
    LoadedInput in;
    in.geometric = generate_instance(spec);
    in.is_geometric = true;
    in.hypergraph = build_hypergraph(in.geometric).hypergraph;
    in.digest = fnv1a_hex(geometric_to_json(in.geometric).dump());
    SolverConfig cfg = load_config(opt);
    cfg.seed = spec.seed;
    const double lp_obj = build_and_solve_lp(in.hypergraph, cfg.lp_tol).objective;
    std::optional<double> oracle_opt;
    if (opt.with_oracle) oracle_opt = exact_pack(in.hypergraph).optimal_weight;
    for (const std::string& algo : algos) {
      const auto t0 = std::chrono::steady_clock::now();
      const RunOutcome out = run_algorithm(algo, in, cfg, opt);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      Row r;
      r.instance_id = spec.kind + "-" + std::to_string(spec.seed);
      r.algo = algo;
      r.seed = spec.seed;
      r.weight = out.solution.weight;
      r.lp_obj = lp_obj;
      r.oracle_opt = oracle_opt;
      const double denom = oracle_opt ? *oracle_opt : lp_obj;
      r.ratio = denom > 0 ? out.solution.weight / denom : 1.0;
      r.feasible = out.solution.feasible;
      r.beta = out.solution.bicriteria_bound;
      r.wall_ms = ms;
      rows.push_back(std::move(r));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
    if (a.algo != b.algo) return a.algo < b.algo;
    return a.seed < b.seed;
  });

  if (opt.format == "json") {
    json arr = json::array();
    for (const Row& r : rows) {
      json j = {{"instance_id", r.instance_id}, {"algo", r.algo},     {"seed", r.seed},
                {"weight", r.weight},           {"lp_obj", r.lp_obj}, {"ratio", r.ratio},
                {"feasible", r.feasible},       {"beta", r.beta},     {"wall_ms", r.wall_ms}};
      if (r.oracle_opt) j["oracle_opt"] = *r.oracle_opt;
      arr.push_back(j);
    }
    emit(opt, arr.dump(2));
    return 0;
  }
  std::ostringstream csv;
  csv << "instance_id,algo,seed,weight,lp_obj,oracle_opt,ratio,feasible,beta,wall_ms\n";
  csv.precision(12);
  for (const Row& r : rows) {
    csv << r.instance_id << "," << r.algo << "," << r.seed << "," << r.weight << "," << r.lp_obj
        << ",";
    if (r.oracle_opt) csv << *r.oracle_opt;
    csv << "," << r.ratio << "," << (r.feasible ? 1 : 0) << "," << r.beta << "," << r.wall_ms
        << "\n";
  }
  std::string text = csv.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  emit(opt, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"packing toolkit: LP relaxation, randomized rounding, geometric pipelines"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"lp",
                                             "pack",
                                             "pack-rects",
                                             "pack-boxes",
                                             "pack-points-rects",
                                             "pack-points-fattri",
                                             "local-search",
                                             "exact",
                                             "bench"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--instance", opt.instance_file, "instance JSON: file path or inline (geometric or hypergraph)");
    sub->add_option("--gen", opt.gen_file, "generator spec JSON: file path or inline");
    sub->add_option("--seed", opt.seed, "seed override");
    sub->add_option("--config", opt.config_file, "solver config JSON: file path or inline");
    sub->add_option("--out", opt.out_file, "write the report here instead of stdout");
    sub->add_option("--format", opt.format, "csv|json (bench defaults to csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--with-oracle", opt.with_oracle, "also run the exact solver and report ratio");
    sub->add_option("--trials", opt.trials, "rounding trials");
    sub->add_option("--alpha", opt.alpha, "sampling-scale multiplier");
    sub->add_option("--phi", opt.phi, "capacity-relaxation rounds for pack (beta = phi)");
    sub->add_option("--b", opt.b, "local-search swap bound");
    sub->add_option("--fatness", opt.fatness, "fatness bound for pack-points-fattri");
    if (name == "bench") {
      sub->add_option("--count", opt.count, "number of consecutive seeds");
      sub->add_option("--algos", opt.algos, "comma-separated algorithms to run");
    }
    sub->callback([&opt, name]() { opt.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 1;
  }
  try {
    if (opt.command == "lp") return cmd_lp(opt);
    if (opt.command == "bench") return cmd_bench(opt);
    return cmd_single(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
