// Command-line front end: mar <verb> [--scenario FILE] [options]
//
// Exit status: 0 success, 1 soft failure (report still written), 2 error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "mar/mar.hpp"

namespace {

struct Options {
  std::string scenario_path;
  std::string out_path;
  std::string format = "csv";
  std::string demo_name;
  std::optional<std::uint64_t> seed;
  std::optional<double> gap_tol;
  std::optional<std::size_t> restarts;
};

std::shared_ptr<spdlog::logger> make_logger() {
  auto logger = spdlog::stderr_logger_st("mar");
  logger->set_pattern("[%l] %v");
  const char* env = std::getenv("MAR_LOG");
  const std::string level = env ? env : "off";
  if (level == "debug")
    logger->set_level(spdlog::level::debug);
  else if (level == "info")
    logger->set_level(spdlog::level::info);
  else
    logger->set_level(spdlog::level::off);
  return logger;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mar::Error(mar::ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mar::Error(mar::ErrorCode::kIoError, "cannot write " + path);
  out << text;
  if (!out) throw mar::Error(mar::ErrorCode::kIoError, "failed writing " + path);
}

void apply_overrides(mar::Scenario& sc, const Options& opt) {
  if (opt.seed) {
    sc.equilibrium.seed = *opt.seed;
    sc.optimum.seed = *opt.seed;
  }
  if (opt.gap_tol) {
    if (!(*opt.gap_tol > 0.0)) throw mar::Error(mar::ErrorCode::kInvalidParameter, "--gap-tol must be > 0");
    sc.equilibrium.gap_tolerance = *opt.gap_tol;
  }
  if (opt.restarts) {
    if (*opt.restarts < 1) throw mar::Error(mar::ErrorCode::kInvalidParameter, "--restarts must be >= 1");
    sc.optimum.restarts = *opt.restarts;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-autonomy routing: equilibria, optima and price-of-anarchy bounds"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
    auto* s = cmd->add_option("--scenario", opt.scenario_path, "Scenario JSON file");
    if (needs_scenario) s->required();
    cmd->add_option("--out", opt.out_path, "Output file (default stdout)");
    cmd->add_option("--seed", opt.seed, "Seed for equilibrium start and optimum restarts");
    cmd->add_option("--gap-tol", opt.gap_tol, "Relative Wardrop gap tolerance");
    cmd->add_option("--restarts", opt.restarts, "Optimum restarts");
    cmd->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  };

  struct Verb {
    const char* name;
    const char* help;
    std::optional<mar::Experiment> experiment;
  };
  const std::vector<Verb> verbs = {
      {"eq", "Solve for a Wardrop equilibrium", mar::Experiment::kEquilibrium},
      {"opt", "Search for the social optimum", mar::Experiment::kOptimum},
      {"bounds", "Report k, sigma, xi and the price-of-anarchy bounds", mar::Experiment::kBounds},
      {"poa", "Empirical price of anarchy against the bounds", mar::Experiment::kPoa},
      {"bicriteria", "Compare equilibrium cost with the optimum under inflated demand", mar::Experiment::kBicriteria},
      {"sweep", "Sweep one parameter and emit one row per step", mar::Experiment::kSweep},
      {"run", "Run the experiment named in the scenario", std::nullopt},
  };
  std::vector<std::pair<CLI::App*, const Verb*>> commands;
  for (const Verb& v : verbs) {
    CLI::App* cmd = app.add_subcommand(v.name, v.help);
    add_common(cmd, true);
    commands.emplace_back(cmd, &v);
  }
  CLI::App* demo = app.add_subcommand("demo", "Run a built-in demonstration");
  std::vector<std::string> demo_names;
  for (const auto& d : mar::kBuiltinDemos) demo_names.emplace_back(d.name);
  demo->add_option("name", opt.demo_name, "Demonstration name")->required()->check(CLI::IsMember(demo_names));
  add_common(demo, false);
  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a scenario only");
  validate->add_option("--scenario", opt.scenario_path, "Scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);
  auto log = make_logger();

  try {
    if (validate->parsed()) {
      const mar::Scenario sc = mar::parse_scenario(read_file(opt.scenario_path));
      std::cout << "ok: " << opt.scenario_path;
      if (sc.experiment) std::cout << " (" << mar::to_string(*sc.experiment) << ")";
      std::cout << "\n";
      return 0;
    }

    mar::Scenario sc;
    if (demo->parsed()) {
      sc = mar::parse_scenario(*mar::builtin_demo(opt.demo_name));
      log->info("demo {}", opt.demo_name);
    } else {
      sc = mar::parse_scenario(read_file(opt.scenario_path));
      log->info("scenario {}", opt.scenario_path);
      for (const auto& [cmd, verb] : commands)
        if (cmd->parsed() && verb->experiment) sc.experiment = verb->experiment;
    }
    apply_overrides(sc, opt);
    if (sc.experiment) log->info("experiment {}", mar::to_string(*sc.experiment));
    log->debug("equilibrium: tol={} max_iter={} seed={}", sc.equilibrium.gap_tolerance,
               sc.equilibrium.max_iterations, sc.equilibrium.seed);
    log->debug("optimum: restarts={} max_iter={} seed={}", sc.optimum.restarts, sc.optimum.max_iterations,
               sc.optimum.seed);

    const auto started = std::chrono::steady_clock::now();
    const mar::Report rep = mar::run(sc);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    log->info("finished in {:.3f} s", elapsed);
    for (const std::string& d : rep.diagnostics) log->info("diagnostic: {}", d);

    write_output(opt.out_path, mar::render(rep, opt.format == "json" ? mar::Format::kJson : mar::Format::kCsv));
    if (rep.soft_failure) {
      std::cerr << "warning: soft failure";
      for (const std::string& d : rep.diagnostics) std::cerr << "; " << d;
      std::cerr << "\n";
      return 1;
    }
    return 0;
  } catch (const mar::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
