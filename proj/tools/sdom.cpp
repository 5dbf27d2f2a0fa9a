// sdom: command-line front end for the experiment runner.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sdom/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sparse domination workbench"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir = ".";
  int threads = -1;
  for (const std::string& cmd : sdom::kCommands) {
    CLI::App* sub = app.add_subcommand(cmd, "run the '" + cmd + "' experiment");
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  if (threads < 0) {
    threads = 0;
    if (const char* env = std::getenv("SDOM_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        std::cerr << "sdom: SDOM_THREADS must be a nonnegative integer\n";
        return 1;
      }
      if (threads < 0) {
        std::cerr << "sdom: SDOM_THREADS must be a nonnegative integer\n";
        return 1;
      }
    }
  }
  sdom::set_thread_count(static_cast<unsigned>(threads));

  std::ifstream in(config_path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  sdom::ParseResult parsed = sdom::parse_config(ss.str());
  if (!parsed.config) {
    for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
    return 1;
  }
  if (parsed.config->command != command) {
    std::cerr << "sdom: config is for '" << parsed.config->command << "' but '" << command << "' was requested\n";
    return 1;
  }
  try {
    const sdom::RunOutcome out = sdom::run_experiment(*parsed.config, out_dir);
    for (const auto& f : out.files) std::cout << f.string() << "\n";
    for (const auto& v : out.violations) std::cerr << "invariant violation: " << v << "\n";
    return out.status;
  } catch (const std::exception& e) {
    std::cerr << "sdom: " << e.what() << "\n";
    return 1;
  }
}
