#include "rsmv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rsmv/cardinality.hpp"
#include "rsmv/closed_form.hpp"
#include "rsmv/dc_solver.hpp"
#include "rsmv/exact_oracle.hpp"
#include "rsmv/io.hpp"
#include "rsmv/market_model.hpp"

namespace rsmv::cli {

namespace {

int default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct InputOptions {
  std::string returns;
  std::string market;
  int synthetic = 0;
  std::uint64_t seed = 0;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  auto* r = cmd->add_option("--returns", in.returns, "Returns CSV (header of asset ids)");
  auto* m = cmd->add_option("--market", in.market, "Market JSON with mean and cov");
  auto* s = cmd->add_option("--synthetic", in.synthetic, "Synthetic equity-like market with N assets")
                ->check(CLI::PositiveNumber);
  r->excludes(m)->excludes(s);
  m->excludes(s);
  cmd->add_option("--seed", in.seed, "Seed for synthetic data");
}

MarketModel load_market(const InputOptions& in) {
  if (!in.returns.empty()) return estimate_market(read_returns_csv(in.returns));
  if (!in.market.empty()) return read_market_json(in.market);
  if (in.synthetic > 0) return synth_equity_market(in.seed, in.synthetic);
  throw std::invalid_argument("one of --returns, --market or --synthetic is required");
}

std::optional<double> try_number(const std::string& s) {
  try {
    const auto g = parse_grid(s);
    if (g.size() == 1 && s.find(':') == std::string::npos) return g.front();
  } catch (const std::invalid_argument&) {
  }
  return std::nullopt;
}

double parse_scalar(const std::string& s, const std::string& flag) {
  const auto v = try_number(s);
  if (!v) throw std::invalid_argument(flag + " expects a number, got '" + s + "'");
  return *v;
}

/// Scalar phi expands to phi * e; anything else is read as a vector file.
Vector parse_phi_vector(const std::string& s, Eigen::Index n) {
  if (const auto v = try_number(s)) return Vector::Constant(n, *v);
  Vector phi = read_vector_file(s);
  if (phi.size() != n)
    throw std::invalid_argument("--phi file has " + std::to_string(phi.size()) + " entries, expected " +
                                std::to_string(n));
  return phi;
}

/// "auto" uses the library default; "inv2n" is 1/(2n); otherwise a number.
std::optional<double> parse_t(const std::string& s, Eigen::Index n) {
  if (s == "auto") return std::nullopt;
  if (s == "inv2n") return 0.5 / static_cast<double>(n);
  const double t = parse_scalar(s, "--t");
  if (!(t > 0.0)) throw std::invalid_argument("--t must be positive");
  return t;
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return kExitOk;
    case SolveStatus::MaxIter: return kExitMaxIter;
    case SolveStatus::NumericalFailure: return kExitNumericalFailure;
  }
  return kExitNumericalFailure;
}

struct SolverOptions {
  double tol = 1e-5;
  int max_outer = 5000;

  SolverConfig config() const {
    SolverConfig c;
    c.outer_tol = tol;
    c.max_outer = max_outer;
    c.validate();
    return c;
  }
};

void add_solver_options(CLI::App* cmd, SolverOptions& so) {
  cmd->add_option("--tol", so.tol, "Relative step tolerance of the outer loop")->capture_default_str();
  cmd->add_option("--max-outer", so.max_outer, "Outer iteration cap")->capture_default_str();
}

/// Wraps an exact enumeration result in the report layout of the iterative solvers.
SolveReport exact_report(const DcProblem& p, const SupportSolution& s, double seconds) {
  SolveReport r;
  r.portfolio.weights = s.weights;
  r.rsmv_objective = rsmv_objective(p, s.weights);
  r.portfolio.value = r.rsmv_objective;
  r.dc_objective = dc_objective(p, s.weights);
  r.cardinality = static_cast<int>(support_of(s.weights).size());
  r.wall_time = seconds;
  r.status = SolveStatus::Converged;
  r.solver = "exact";
  r.init = "enumeration";
  r.t = p.t;
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveReport dispatch(const std::string& solver, const DcProblem& p, const SolverConfig& config,
                     std::optional<int> max_card, int workers) {
  if (solver == "pdca") return solve_pdca(p, config);
  if (solver == "ac-pdca") return solve_accelerated(p, config);
  if (solver == "l1mv") return solve_l1mv(p, config);
  if (solver == "exact") {
    const auto t0 = std::chrono::steady_clock::now();
    const SupportSolution s =
        solve_exact(*p.market, p.kappa, p.epsilon, p.phi, max_card, OracleObjective::Robust, workers);
    return exact_report(p, s, seconds_since(t0));
  }
  throw std::invalid_argument("unknown solver '" + solver + "'");
}

const std::vector<std::string> kSolvers = {"pdca", "ac-pdca", "l1mv", "exact"};

// ---------------------------------------------------------------- solve

struct SolveArgs {
  InputOptions in;
  SolverOptions so;
  double kappa = 1.0;
  std::string epsilon = "0";
  std::string phi = "1e-3";
  std::string solver = "pdca";
  std::string t = "auto";
  std::string out;
  std::string reference;
  int max_card = 0;
  int workers = 1;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const auto market = std::make_shared<const MarketModel>(load_market(a.in));
  const double eps = parse_scalar(a.epsilon, "--epsilon");
  const Vector phi = parse_phi_vector(a.phi, market->n());
  DcProblem p = build_problem(*market, a.kappa, eps, phi, parse_t(a.t, market->n()));
  p.market = market;
  const std::optional<int> max_card = a.max_card > 0 ? std::optional<int>(a.max_card) : std::nullopt;
  const SolveReport r = dispatch(a.solver, p, a.so.config(), max_card, std::max(1, a.workers));

  const std::string csv = report_csv_header() + report_csv_row(r);
  if (!a.out.empty()) {
    write_text_file(a.out + ".json", report_to_json(r, p).dump(2) + "\n");
    write_text_file(a.out + ".csv", csv);
  }
  out << csv;
  if (!a.reference.empty()) {
    const Json ref = Json::parse(read_text_file(a.reference));
    if (!ref.contains("objective") || !ref["objective"].is_number())
      throw std::invalid_argument(a.reference + ": report has no numeric \"objective\"");
    out << "relative_gap," << format_double(relative_gap(r.rsmv_objective, ref["objective"].get<double>()))
        << "\n";
  }
  return exit_code(r.status);
}

// ---------------------------------------------------------------- frontier

struct FrontierArgs {
  InputOptions in;
  std::string kappa;
  std::string epsilon;
  std::string out;
};

int cmd_frontier(const FrontierArgs& a, std::ostream& out) {
  const MarketModel m = load_market(a.in);
  const std::vector<double> kappas = parse_grid(a.kappa);
  if (kappas.empty()) throw std::invalid_argument("--kappa grid is empty");
  const std::vector<double> eps = parse_grid(a.epsilon);
  std::string csv = frontier_csv_header();
  for (const auto& pt : frontier(m, kappas)) csv += frontier_csv_row("mv", 0.0, pt);
  for (double e : eps)
    for (const auto& pt : rmv_frontier(m, kappas, e)) csv += frontier_csv_row("rmv", e, pt);
  if (a.out.empty()) out << csv;
  else write_text_file(a.out, csv);
  return kExitOk;
}

// ---------------------------------------------------------------- surface

struct SurfaceArgs {
  InputOptions in;
  SolverOptions so;
  double kappa = 1.0;
  std::string epsilon;
  std::string phi;
  std::string solver = "exact";
  std::string t = "auto";
  std::string out;
  std::string json;
  int workers = default_workers();
};

int cmd_surface(const SurfaceArgs& a, std::ostream& out) {
  const MarketModel m = load_market(a.in);
  const std::vector<double> eps = parse_grid(a.epsilon);
  const std::vector<double> phis = parse_grid(a.phi);
  if (eps.empty() || phis.empty()) throw std::invalid_argument("--epsilon and --phi grids must be nonempty");
  SurfaceOptions opt;
  opt.backend = a.solver == "exact" ? SurfaceBackend::Exact : SurfaceBackend::Pdca;
  opt.workers = std::max(1, a.workers);
  opt.solver = a.so.config();
  opt.t = parse_t(a.t, m.n());
  const auto cells = cardinality_surface(m, a.kappa, eps, phis, opt);
  const std::string csv = surface_csv(cells);
  if (a.out.empty()) out << csv;
  else write_text_file(a.out, csv);
  if (!a.json.empty()) write_text_file(a.json, surface_to_json(cells, eps, phis, a.solver).dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  InputOptions in;
  SolverOptions so;
  int seeds = 1;
  double kappa = 1.0;
  std::string epsilon = "1";
  std::string phi = "1e-3";
  std::string t = "inv2n";
  std::string solvers = "exact,pdca,ac-pdca,l1mv";
  std::string out;
  int workers = default_workers();
};

struct BenchRow {
  std::string instance;
  Eigen::Index n = 0;
  std::string solver;
  std::string status;
  double objective = std::numeric_limits<double>::quiet_NaN();
  int cardinality = 0;
  int iterations = 0;
  double time = 0.0;
  std::optional<double> gap;
  std::optional<bool> subset_of_l1mv;
  std::vector<int> support;
};

std::vector<BenchRow> bench_instance(const std::string& id, const MarketModel& m, const BenchArgs& a,
                                     const std::vector<std::string>& solvers) {
  const double eps = parse_scalar(a.epsilon, "--epsilon");
  const Vector phi = parse_phi_vector(a.phi, m.n());
  DcProblem p = build_problem(m, a.kappa, eps, phi, parse_t(a.t, m.n()));
  p.market = std::make_shared<const MarketModel>(m);
  const SolverConfig config = a.so.config();

  std::vector<BenchRow> rows;
  for (const auto& s : solvers) {
    BenchRow row;
    row.instance = id;
    row.n = m.n();
    row.solver = s;
    if (s == "exact" && (m.n() > 20 || support_count(static_cast<int>(m.n()), static_cast<int>(m.n())) >
                                           kEnumerationBudget)) {
      continue;
    }
    try {
      const SolveReport r = dispatch(s, p, config, std::nullopt, 1);
      row.status = std::string(to_string(r.status));
      row.objective = r.rsmv_objective;
      row.cardinality = r.cardinality;
      row.iterations = r.outer_iterations;
      row.time = r.wall_time;
      row.support = support_of(r.portfolio.weights);
    } catch (const std::exception& e) {
      row.status = "error";
    }
    rows.push_back(std::move(row));
  }
  const BenchRow* exact = nullptr;
  const BenchRow* l1 = nullptr;
  for (const auto& r : rows) {
    if (r.solver == "exact" && r.status == "converged") exact = &r;
    if (r.solver == "l1mv" && r.status != "error") l1 = &r;
  }
  for (auto& r : rows) {
    if (r.status == "error") continue;
    if (exact) r.gap = relative_gap(r.objective, exact->objective);
    if (l1 && (r.solver == "pdca" || r.solver == "ac-pdca"))
      r.subset_of_l1mv = std::includes(l1->support.begin(), l1->support.end(), r.support.begin(), r.support.end());
  }
  return rows;
}

std::vector<std::string> parse_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> solvers;
  for (const auto& s : parse_list(a.solvers)) {
    if (std::find(kSolvers.begin(), kSolvers.end(), s) == kSolvers.end())
      throw std::invalid_argument("unknown solver '" + s + "' in --solvers");
    solvers.push_back(s);
  }
  if (solvers.empty()) throw std::invalid_argument("--solvers is empty");

  std::vector<std::pair<std::string, std::function<MarketModel()>>> instances;
  if (a.in.synthetic > 0) {
    if (a.seeds < 1) throw std::invalid_argument("--seeds must be positive");
    for (int k = 0; k < a.seeds; ++k) {
      const std::uint64_t seed = a.in.seed + static_cast<std::uint64_t>(k);
      const int n = a.in.synthetic;
      instances.emplace_back("synthetic-n" + std::to_string(n) + "-seed" + std::to_string(seed),
                             [seed, n] { return synth_equity_market(seed, n); });
    }
  } else {
    MarketModel m = load_market(a.in);
    const std::string id = !a.in.returns.empty() ? a.in.returns : a.in.market;
    instances.emplace_back(std::filesystem::path(id).filename().string(), [m] { return m; });
  }

  // Flag errors surface once as usage errors instead of once per instance.
  {
    const Eigen::Index n = a.in.synthetic > 0 ? a.in.synthetic : instances.front().second().n();
    const Vector phi = parse_phi_vector(a.phi, n);
    build_problem(MarketModel::from_moments(Vector::Zero(n), Matrix::Identity(n, n)), a.kappa,
                  parse_scalar(a.epsilon, "--epsilon"), phi, parse_t(a.t, n));
    a.so.config();
  }

  std::vector<std::vector<BenchRow>> results(instances.size());
  std::vector<std::string> errors(instances.size());
  const int workers = std::clamp(a.workers, 1, static_cast<int>(instances.size()));
  auto work = [&](int w) {
    for (std::size_t i = static_cast<std::size_t>(w); i < instances.size(); i += static_cast<std::size_t>(workers)) {
      try {
        results[i] = bench_instance(instances[i].first, instances[i].second(), a, solvers);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  std::string csv = "instance,n,solver,status,objective,cardinality,iterations,time,gap,support_subset_l1mv\n";
  std::map<std::string, std::vector<double>> gaps, times;
  std::map<std::string, std::pair<int, int>> subset;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!errors[i].empty()) {
      err << instances[i].first << ": " << errors[i] << "\n";
      csv += instances[i].first + ",,,error,,,,,,\n";
      continue;
    }
    for (const auto& r : results[i]) {
      csv += r.instance + "," + format_int(r.n) + "," + r.solver + "," + r.status + "," +
             (r.status == "error" ? "" : format_double(r.objective)) + "," + format_int(r.cardinality) + "," +
             format_int(r.iterations) + "," + format_double(r.time) + "," + (r.gap ? format_double(*r.gap) : "") +
             "," + (r.subset_of_l1mv ? (*r.subset_of_l1mv ? "1" : "0") : "") + "\n";
      if (r.status == "error") continue;
      if (r.gap) gaps[r.solver].push_back(*r.gap);
      times[r.solver].push_back(r.time);
      if (r.subset_of_l1mv) {
        subset[r.solver].first += *r.subset_of_l1mv ? 1 : 0;
        subset[r.solver].second += 1;
      }
    }
  }
  std::ostream& summary = a.out.empty() ? err : out;
  if (a.out.empty()) out << csv;
  else write_text_file(a.out, csv);
  for (const auto& s : solvers) {
    if (!times.count(s)) continue;
    summary << "summary solver=" << s << " runs=" << times[s].size()
            << " median_time=" << format_double(median(times[s]));
    if (gaps.count(s)) summary << " median_gap=" << format_double(median(gaps[s]));
    if (subset.count(s))
      summary << " support_subset_l1mv=" << subset[s].first << "/" << subset[s].second;
    summary << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- fit-cov

struct FitCovArgs {
  InputOptions in;
  std::string out;
};

int cmd_fit_cov(const FitCovArgs& a, std::ostream& out) {
  const MarketModel m = load_market(a.in);
  const ParamCov pc = fit_param_cov(m.cov());
  Json j;
  j["n"] = pc.n;
  j["sigma"] = pc.sigma;
  j["rho"] = pc.rho;
  j["residual"] = param_cov_residual(pc, m.cov());
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty()) out << text;
  else write_text_file(a.out, text);
  return kExitOk;
}

}  // namespace

std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ": line " + std::to_string(line_no) + ": expected key = value");
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty() || key.find(' ') != std::string::npos)
      throw std::invalid_argument(path + ": line " + std::to_string(line_no) + ": invalid key");
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust and sparse mean-variance portfolios", "rsmv"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value file whose entries override flags");
  };

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Solve one sparse robust portfolio problem");
  add_input_options(c_solve, solve.in);
  add_solver_options(c_solve, solve.so);
  c_solve->add_option("--kappa", solve.kappa, "Risk aversion")->capture_default_str();
  c_solve->add_option("--epsilon", solve.epsilon, "Robustness level")->capture_default_str();
  c_solve->add_option("--phi", solve.phi, "Per-asset cost: a number or a vector file")->capture_default_str();
  c_solve->add_option("--solver", solve.solver, "pdca, ac-pdca, l1mv or exact")
      ->check(CLI::IsMember(kSolvers))
      ->capture_default_str();
  c_solve->add_option("--t", solve.t, "Capped-l1 cap: a number, auto or inv2n")->capture_default_str();
  c_solve->add_option("--out", solve.out, "Output prefix for <out>.json and <out>.csv");
  c_solve->add_option("--reference", solve.reference, "Earlier report JSON; prints the relative gap to it");
  c_solve->add_option("--max-card", solve.max_card, "Cardinality cap for the exact solver");
  c_solve->add_option("--workers", solve.workers, "Threads for the exact solver")->capture_default_str();
  add_config(c_solve);

  FrontierArgs fr;
  auto* c_fr = app.add_subcommand("frontier", "MV and RMV efficient frontiers");
  add_input_options(c_fr, fr.in);
  c_fr->add_option("--kappa", fr.kappa, "kappa grid: a:b:step, log:a:b:count or a list")->required();
  c_fr->add_option("--epsilon", fr.epsilon, "epsilon values for RMV rows");
  c_fr->add_option("--out", fr.out, "CSV path (stdout when omitted)");
  add_config(c_fr);

  SurfaceArgs sf;
  auto* c_sf = app.add_subcommand("surface", "Cardinality surface over (epsilon, phi)");
  add_input_options(c_sf, sf.in);
  add_solver_options(c_sf, sf.so);
  c_sf->add_option("--kappa", sf.kappa, "Risk aversion")->capture_default_str();
  c_sf->add_option("--epsilon", sf.epsilon, "epsilon grid")->required();
  c_sf->add_option("--phi", sf.phi, "phi grid")->required();
  c_sf->add_option("--solver", sf.solver, "exact or pdca")
      ->check(CLI::IsMember({"exact", "pdca"}))
      ->capture_default_str();
  c_sf->add_option("--t", sf.t, "Capped-l1 cap for pdca: a number, auto or inv2n")->capture_default_str();
  c_sf->add_option("--out", sf.out, "CSV path (stdout when omitted)");
  c_sf->add_option("--json", sf.json, "Also write the grid as JSON");
  c_sf->add_option("--workers", sf.workers, "Worker threads")->capture_default_str();
  add_config(c_sf);

  BenchArgs bn;
  auto* c_bn = app.add_subcommand("bench", "Compare solvers on a batch of instances");
  add_input_options(c_bn, bn.in);
  add_solver_options(c_bn, bn.so);
  c_bn->add_option("--seeds", bn.seeds, "Number of synthetic seeds, starting at --seed")->capture_default_str();
  c_bn->add_option("--kappa", bn.kappa, "Risk aversion")->capture_default_str();
  c_bn->add_option("--epsilon", bn.epsilon, "Robustness level")->capture_default_str();
  c_bn->add_option("--phi", bn.phi, "Per-asset cost: a number or a vector file")->capture_default_str();
  c_bn->add_option("--t", bn.t, "Capped-l1 cap: a number, auto or inv2n")->capture_default_str();
  c_bn->add_option("--solvers", bn.solvers, "Comma-separated solver list")->capture_default_str();
  c_bn->add_option("--out", bn.out, "CSV path (stdout when omitted)");
  c_bn->add_option("--workers", bn.workers, "Worker threads")->capture_default_str();
  add_config(c_bn);

  FitCovArgs fc;
  auto* c_fc = app.add_subcommand("fit-cov", "Nearest equicorrelation covariance");
  add_input_options(c_fc, fc.in);
  c_fc->add_option("--out", fc.out, "JSON path (stdout when omitted)");
  add_config(c_fc);

  try {
    std::vector<std::string> args = args_in;
    for (std::size_t i = 0; i < args_in.size(); ++i) {
      std::string path;
      if (args_in[i] == "--config" && i + 1 < args_in.size()) path = args_in[i + 1];
      else if (args_in[i].rfind("--config=", 0) == 0) path = args_in[i].substr(9);
      if (!path.empty()) {
        const auto extra = config_arguments(path);
        args.insert(args.end(), extra.begin(), extra.end());
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "rsmv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "rsmv: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (c_solve->parsed()) return cmd_solve(solve, out);
    if (c_fr->parsed()) return cmd_frontier(fr, out);
    if (c_sf->parsed()) return cmd_surface(sf, out);
    if (c_bn->parsed()) return cmd_bench(bn, out, err);
    if (c_fc->parsed()) return cmd_fit_cov(fc, out);
  } catch (const std::invalid_argument& e) {
    err << "rsmv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "rsmv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CovarianceNotPdError& e) {
    // A non-PD covariance comes from the input files, not from a solver.
    err << "rsmv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "rsmv: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return kExitUsage;
}

}  // namespace rsmv::cli
