// Command-line harness: runs a JSON-configured experiment (kernel
// validation, a single solve, Picard certification, or a convergence
// study) and writes its artifacts to the output directory.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "memwave/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"memwave: Galerkin solver for hyperbolic equations with memory"};

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "path to the JSON config file")
      ->required();
  app.add_option("--out", out_dir, "output directory for artifacts");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_flag("--quiet", quiet, "suppress the run summary");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config file: " << config_path << "\n";
    return memwave::kConfigError;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  const memwave::ConfigParseResult parsed = memwave::parse_config(buf.str());
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
    return memwave::kConfigError;
  }

  try {
    return memwave::run(*parsed.config, out_dir, seed, quiet, std::cout);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return memwave::kConfigError;
  }
}
