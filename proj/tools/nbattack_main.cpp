// Command-line driver: simulate | exact | bound | sweep.

#include <iostream>

#include "CLI11.hpp"
#include "nbattack/cli.hpp"
#include "nbattack/exact.hpp"
#include "nbattack/version.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> cap;
};

void add_common(CLI::App* sub, Options& opts) {
  sub->add_option("--config", opts.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", opts.out, "output directory (overrides output_dir in the config)");
  sub->add_option("--seed", opts.seed, "64-bit seed (overrides chain.seed)");
  sub->add_option("--cap", opts.cap, "exact-enumeration node cap (max 20)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighborhood Attack voter model: simulation, exact oracle and normal-approximation bounds"};
  app.set_version_flag("--version", nbattack::kVersion);
  app.require_subcommand(1);

  Options opts;
  CLI::App* simulate = app.add_subcommand("simulate", "run the chain and estimate moments, bounds and distances");
  CLI::App* exact = app.add_subcommand("exact", "solve the chain exactly on all 2^N states");
  CLI::App* bound = app.add_subcommand("bound", "evaluate the normal-approximation bounds");
  CLI::App* sweep = app.add_subcommand("sweep", "tabulate bounds over a list of family sizes");
  for (CLI::App* sub : {simulate, exact, bound, sweep}) add_common(sub, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    nbattack::cli::RunConfig cfg = nbattack::cli::load_run_config(opts.config);
    if (opts.seed) cfg.chain.seed = *opts.seed;
    if (opts.cap) {
      if (*opts.cap < 1 || *opts.cap > nbattack::kMaxStateCap) {
        throw nbattack::Error(nbattack::ErrorCode::state_space_too_large, "--cap must lie in 1..20");
      }
      cfg.cap = *opts.cap;
    }
    std::filesystem::path out = !opts.out.empty() ? opts.out : (!cfg.output_dir.empty() ? cfg.output_dir : "out");

    if (*simulate) nbattack::cli::run_simulate(cfg, out);
    if (*exact) nbattack::cli::run_exact(cfg, out);
    if (*bound) nbattack::cli::run_bound(cfg, out);
    if (*sweep) nbattack::cli::run_sweep(cfg, out);
    std::cout << "wrote " << out.string() << "\n";
    return 0;
  } catch (const nbattack::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nbattack::cli::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
