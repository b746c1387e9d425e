#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "xtwave/driver.hpp"
#include "xtwave/error.hpp"
#include "xtwave/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Space-time Petrov-Galerkin solver for the 1D wave equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;

  for (const char* name : {"solve", "convergence", "stability", "infsup"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run in ") + name + " mode");
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--threads", threads, "worker threads (fallback: XTWAVE_THREADS)")
        ->check(CLI::PositiveNumber);
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { seed = s; seed_given = true; }, "seed of the sampled data checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : xtwave::kExitConfig;
  }

  if (threads == 0)
    if (const char* env = std::getenv("XTWAVE_THREADS")) threads = std::atoi(env);
  if (threads > 0) xtwave::set_num_threads(threads);

  xtwave::RunConfig config;
  try {
    config = xtwave::load_config(config_path);
  } catch (const xtwave::Error& e) {
    std::cerr << "xtwave: " << e.what() << '\n';
    return xtwave::kExitConfig;
  }
  config.mode = xtwave::mode_from_string(app.get_subcommands().front()->get_name());
  if (!out_dir.empty()) config.output = out_dir;
  if (seed_given) config.seed = seed;

  const xtwave::RunResult r = xtwave::run(config, std::cerr);
  if (r.exit_code != 0) std::cerr << "xtwave: " << r.message << '\n';
  return r.exit_code;
}
