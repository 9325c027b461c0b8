#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nusample/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = nusample::cli;
  CLI::App app{"Non-uniform sampling experiments"};
  std::string command, config, out = "out";
  int threads = 0;
  std::int64_t seed = -1;
  app.add_option("command", command, "covering | frame-bounds | reconstruct | identity | stft | gabor | psido")->required();
  app.add_option("--config", config, "experiment config (JSON)")->required();
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "worker cap (default: NUSAMPLE_THREADS, else 1)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "overrides the config seed")->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << cli::usage();
    return cli::exit_usage;
  }
  cli::RunOptions opts;
  opts.out = out;
  opts.threads = threads;
  if (seed >= 0) opts.seed = static_cast<std::uint64_t>(seed);
  return cli::run(command, config, opts);
}
