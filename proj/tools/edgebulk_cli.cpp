// Command-line front end: one subcommand per experiment, each writing
// report.csv and report.json into --out and exiting 0 iff every check passes.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "edgebulk/config.hpp"
#include "edgebulk/experiments.hpp"

namespace {

struct Globals {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 1;
  std::string out;
};

eb::ExperimentConfig resolve(const Globals& g) {
  eb::ExperimentConfig cfg = g.config_path.empty() ? eb::ExperimentConfig{} : eb::load_config(g.config_path);
  if (g.seed_set) cfg.seed = g.seed;
  if (!g.out.empty()) cfg.output_dir = g.out;
  cfg.validate();
  return cfg;
}

int finish(const eb::StatsReport& report, const eb::ExperimentConfig& cfg) {
  report.write(cfg.output_dir);
  std::size_t failed = 0;
  for (const auto& row : report.rows) {
    if (row.pass && !*row.pass) {
      ++failed;
      std::fprintf(stderr, "FAIL %s/%s = %.6g (E=%g)\n", row.statistic.c_str(), row.quantile.c_str(), row.value,
                   row.E);
    }
  }
  std::printf("%s: %zu checks, %zu failed; report in %s\n", report.command.c_str(), report.checks(), failed,
              cfg.output_dir.c_str());
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard-edge to bulk convergence experiments for the stochastic Bessel and sine operators"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Flat key=value configuration file")->check(CLI::ExistingFile);
  app.add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& s) { g.seed = s, g.seed_set = true; }, "Experiment seed (overrides config)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", g.out, "Output directory (overrides config)");

  struct Command {
    const char* name;
    const char* help;
    eb::StatsReport (*run)(const eb::ExperimentConfig&, unsigned);
  };
  const Command commands[] = {
      {"vague", "Vague convergence statistic of the coefficient matrices",
       [](const eb::ExperimentConfig& c, unsigned t) { return eb::run_vague_convergence(c, t); }},
      {"spectra", "Eigenvalue spacing and Hausdorff comparison", eb::run_spectral_convergence},
      {"weyl", "Weyl-Titchmarsh function comparison", eb::run_wt_convergence},
      {"asymptotics", "Reversed-time amplitude and phase asymptotics", eb::run_asymptotics},
      {"coupling", "Coupling, GBM, Re-HBM and averaging decay", eb::run_coupling_decay},
      {"gamma-masses", "Sine spectral masses against the Gamma law", eb::run_gamma_masses},
      {"selftest", "Closed-form oracle suite",
       [](const eb::ExperimentConfig& c, unsigned) { return eb::run_selftest(c); }},
  };
  const Command* chosen = nullptr;
  for (const auto& cmd : commands) {
    app.add_subcommand(cmd.name, cmd.help)->fallthrough()->callback([&chosen, &cmd] { chosen = &cmd; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    const eb::ExperimentConfig cfg = resolve(g);
    return finish(chosen->run(cfg, g.threads), cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
