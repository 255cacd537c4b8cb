#include <Eigen/Core>
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "supg/assembly.hpp"
#include "supg/benchmarks.hpp"
#include "supg/mlp.hpp"
#include "supg/stabilization.hpp"
#include "supg/trainer.hpp"
#include "supg/vtk.hpp"

namespace fs = std::filesystem;
using namespace supg;

namespace {

constexpr int kExitBadConfig = 2;
constexpr int kExitSolverFailure = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string example{"1"};
  // Custom problem data, used when example = custom.
  double epsilon{1e-8};
  double b1{1.0};
  double b2{0.0};
  double source{1.0};
  double boundary{0.0};

  int n_cells{40};
  std::string tau{"standard"};
  std::uint64_t seed{0};
  int epochs{500};
  double lr{1e-4};
  double gamma{0.1};
  int step_size{100};
  double grad_floor{kDefaultGradientFloor};
  std::string features{"pe"};
  std::string ns{"10,20,40,80"};
  std::string checkpoint;
  std::string out{"out"};
  std::string config_file;
};

ProblemSpec make_problem(const RunConfig& c) {
  if (c.example == "custom") {
    if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon)) throw ConfigError("epsilon must be positive");
    ProblemSpec p = constant_problem(c.epsilon, {c.b1, c.b2}, c.source, c.boundary);
    p.name = "custom";
    return p;
  }
  int id = 0;
  try {
    std::size_t used = 0;
    id = std::stoi(c.example, &used);
    if (used != c.example.size()) id = 0;
  } catch (const std::exception&) {
    id = 0;
  }
  if (id < 1 || id > 4) throw ConfigError("example must be 1..4 or custom, got '" + c.example + "'");
  return example(example_from_int(id));
}

std::vector<int> parse_ns(const std::string& s) {
  std::vector<int> ns;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size() || n < 1) throw std::invalid_argument(item);
      ns.push_back(n);
    } catch (const std::exception&) {
      throw ConfigError("ns must be a comma-separated list of positive integers, got '" + s + "'");
    }
  }
  if (ns.empty()) throw ConfigError("ns is empty");
  return ns;
}

TrainConfig make_train_config(const RunConfig& c) {
  TrainConfig t;
  t.n_epochs = c.epochs;
  t.seed = c.seed;
  t.lr = c.lr;
  t.gamma = c.gamma;
  t.step_size = c.step_size;
  t.grad_floor = c.grad_floor;
  t.n_cells = c.n_cells;
  t.feature_mode = parse_feature_mode(c.features);
  t.validate();
  return t;
}

void validate(const RunConfig& c) {
  if (c.n_cells < 1) throw ConfigError("n-cells must be >= 1");
  make_problem(c);
  make_train_config(c);
  const TauMode mode = parse_tau_mode(c.tau);
  if (c.command == "train" && mode != TauMode::trained) throw ConfigError("train requires tau = trained");
  if (c.command == "study") parse_ns(c.ns);
  if (!c.checkpoint.empty() && !fs::exists(c.checkpoint)) {
    throw ConfigError("checkpoint file not found: " + c.checkpoint);
  }
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(10) << std::scientific << v;
  return os.str();
}

void write_manifest(const RunConfig& c, const fs::path& dir, const std::vector<std::string>& argv,
                    const std::vector<std::string>& outputs) {
  std::ofstream os = open_out(dir / "manifest.txt");
  os << "# replay: supg " << c.command << " --config manifest.txt\n";
  os << "# argv:";
  for (const auto& a : argv) os << ' ' << a;
  os << '\n';
#if defined(__VERSION__)
  os << "# compiler: " << __VERSION__ << '\n';
#endif
  os << "# eigen: " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION << '\n';
  os << "# openmp threads: " << max_threads() << '\n';
  os << "# outputs:";
  for (const auto& o : outputs) os << ' ' << o;
  os << '\n';
  os << std::setprecision(17);
  os << "example=" << c.example << '\n';
  if (c.example == "custom") {
    os << "epsilon=" << c.epsilon << "\nb1=" << c.b1 << "\nb2=" << c.b2 << "\nf=" << c.source
       << "\nub=" << c.boundary << '\n';
  }
  os << "n-cells=" << c.n_cells << '\n'
     << "tau=" << c.tau << '\n'
     << "seed=" << c.seed << '\n'
     << "epochs=" << c.epochs << '\n'
     << "lr=" << c.lr << '\n'
     << "gamma=" << c.gamma << '\n'
     << "step-size=" << c.step_size << '\n'
     << "grad-floor=" << c.grad_floor << '\n'
     << "features=" << c.features << '\n';
  if (c.command == "study") os << "ns=\"" << c.ns << "\"\n";
  if (!c.checkpoint.empty()) os << "checkpoint=\"" << fs::absolute(c.checkpoint).string() << "\"\n";
  os << "out=\"" << c.out << "\"\n";
}

const char* kErrorsHeader = "example,n_cells,h,tau_mode,tau_scalar,l2,rel_l2,h1,h1_semi,linf,residual,overshoot";

void write_error_row(std::ostream& os, const RunConfig& c, const ProblemSpec& problem, const FeFunction& u,
                     const std::string& mode, double tau_scalar) {
  double l2 = NAN, rel = NAN, h1 = NAN, semi = NAN, linf = NAN, over = NAN;
  double residual = std::sqrt(total_cost(u, problem).residual_part);
  if (problem.exact) {
    const ErrorReport e = compute_errors(u, problem);
    l2 = e.l2;
    rel = e.rel_l2;
    h1 = e.h1;
    semi = e.h1_semi;
    linf = e.linf;
    residual = e.residual;
    over = nodal_overshoot(u, problem);
  }
  os << c.example << ',' << u.space->cells_per_side() << ',' << fmt(u.space->h()) << ',' << mode << ','
     << fmt(tau_scalar) << ',' << fmt(l2) << ',' << fmt(rel) << ',' << fmt(h1) << ',' << fmt(semi) << ','
     << fmt(linf) << ',' << fmt(residual) << ',' << fmt(over) << '\n';
}

void write_fields(const fs::path& dir, const FeFunction& u, const std::optional<TauField>& tau,
                  std::vector<std::string>& outputs) {
  std::ofstream su = open_out(dir / "solution.vtk");
  write_vtk_p2(su, u, "u");
  outputs.push_back("solution.vtk");
  if (tau) {
    std::ofstream st = open_out(dir / "tau.vtk");
    write_vtk_cells(st, *u.space, *tau, "tau");
    outputs.push_back("tau.vtk");
  }
}

void write_training(const fs::path& dir, const TrainRecord& rec, const TrainConfig& cfg,
                    std::vector<std::string>& outputs) {
  std::ofstream csv = open_out(dir / "train.csv");
  write_train_csv(csv, rec);
  outputs.push_back("train.csv");
  std::ofstream ck = open_out(dir / "checkpoint.txt");
  write_checkpoint(ck, rec.best_params, {cfg.seed, static_cast<int>(rec.best_epoch), rec.best_cost});
  outputs.push_back("checkpoint.txt");
  if (rec.aborted) std::cerr << "warning: training stopped early: " << rec.abort_reason << '\n';
}

// Trained tau from a stored network: tau_hat = net(features), normalized by
// the Galerkin gradient norms of this instance.
SolveOutcome solve_from_checkpoint(const ProblemSpec& problem, const SpacePtr& space, const RunConfig& c,
                                   const TrainConfig& cfg) {
  std::ifstream is(c.checkpoint);
  const MlpParams params = read_checkpoint(is);
  const SupgOperator op(problem, space);
  const double tau_hat = forward(params, features_for(problem, *space), cfg.feature_mode).tau_hat;
  TauField tau = normalize_tau(tau_hat, gradient_norms(op.solve(nullptr)), cfg.grad_floor);
  FeFunction u = op.solve(&tau);
  return {std::move(u), std::move(tau), tau_hat, std::nullopt};
}

int run_solve_or_train(const RunConfig& c, const fs::path& dir, const std::vector<std::string>& argv) {
  const ProblemSpec problem = make_problem(c);
  const TrainConfig cfg = make_train_config(c);
  const TauMode mode = parse_tau_mode(c.tau);
  const SpacePtr space = make_space(c.n_cells);

  const SolveOutcome out = (mode == TauMode::trained && !c.checkpoint.empty())
                               ? solve_from_checkpoint(problem, space, c, cfg)
                               : solve_with_mode(problem, space, mode, cfg);

  std::vector<std::string> outputs;
  write_fields(dir, out.solution, out.tau, outputs);
  {
    std::ofstream os = open_out(dir / "errors.csv");
    os << kErrorsHeader << '\n';
    write_error_row(os, c, problem, out.solution, to_string(mode), out.tau_scalar);
    outputs.push_back("errors.csv");
  }
  if (out.training) write_training(dir, *out.training, cfg, outputs);
  write_manifest(c, dir, argv, outputs);
  std::cout << kErrorsHeader << '\n';
  write_error_row(std::cout, c, problem, out.solution, to_string(mode), out.tau_scalar);
  return 0;
}

int run_study(const RunConfig& c, const fs::path& dir, const std::vector<std::string>& argv) {
  const ProblemSpec problem = make_problem(c);
  if (!problem.exact) throw ConfigError("study needs an example with an exact solution");
  const TrainConfig cfg = make_train_config(c);
  const TauMode mode = parse_tau_mode(c.tau);
  const auto rows = convergence_study(problem, mode, parse_ns(c.ns), cfg);

  std::ostringstream table;
  table << "n_cells,h,l2,rel_l2,h1,h1_semi,linf,residual,l2_order\n";
  for (const auto& r : rows) {
    table << r.n_cells << ',' << fmt(r.h) << ',' << fmt(r.errors.l2) << ',' << fmt(r.errors.rel_l2) << ','
          << fmt(r.errors.h1) << ',' << fmt(r.errors.h1_semi) << ',' << fmt(r.errors.linf) << ','
          << fmt(r.errors.residual) << ',' << (r.l2_order ? fmt(*r.l2_order) : "") << '\n';
  }
  open_out(dir / "errors.csv") << table.str();
  write_manifest(c, dir, argv, {"errors.csv"});
  std::cout << table.str();
  return 0;
}

void add_options(CLI::App& app, RunConfig& c) {
  app.add_option("--example", c.example, "Benchmark 1..4, or custom");
  app.add_option("--epsilon", c.epsilon, "Diffusion (custom problems)");
  app.add_option("--b1", c.b1, "Convection x (custom problems)");
  app.add_option("--b2", c.b2, "Convection y (custom problems)");
  app.add_option("--f", c.source, "Constant source (custom problems)");
  app.add_option("--ub", c.boundary, "Constant boundary value (custom problems)");
  app.add_option("--n-cells", c.n_cells, "Cells per side N");
  app.add_option("--tau", c.tau, "galerkin|standard|standard-normalized|trained");
  app.add_option("--seed", c.seed, "Network initialization seed");
  app.add_option("--epochs", c.epochs, "Training epochs");
  app.add_option("--lr", c.lr, "Initial Adam learning rate");
  app.add_option("--gamma", c.gamma, "StepLR decay factor");
  app.add_option("--step-size", c.step_size, "StepLR period in epochs");
  app.add_option("--grad-floor", c.grad_floor, "Floor on the Galerkin gradient norm");
  app.add_option("--features", c.features, "Network input: pe or raw");
  app.add_option("--ns", c.ns, "Study mesh sizes, e.g. 10,20,40,80");
  app.add_option("--checkpoint", c.checkpoint, "Network checkpoint for solve --tau trained");
  app.add_option("--out", c.out, "Output directory (created if missing)");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"SUPG P2 convection-diffusion solver with a learned stabilization parameter"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  add_options(app, cfg);
  for (const char* name : {"solve", "train", "study"}) {
    app.add_subcommand(name, "")->fallthrough();
  }
  app.get_subcommand("solve")->description("Solve one instance and write fields and errors");
  app.get_subcommand("train")->description("Train the tau network and write its record and checkpoint");
  app.get_subcommand("study")->description("Mesh-refinement study with successive L2 orders");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command == "train" && app.count("--tau") == 0) cfg.tau = "trained";

  std::vector<std::string> args(argv, argv + argc);
  try {
    validate(cfg);
    const fs::path dir(cfg.out);
    fs::create_directories(dir);
    if (cfg.command == "study") return run_study(cfg, dir, args);
    return run_solve_or_train(cfg, dir, args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
