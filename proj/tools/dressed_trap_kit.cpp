#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "dressed_trap/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"RF-dressed potential landscapes in a quadrupole trap"};
  app.require_subcommand(1);

  std::string config, out;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Run configuration (JSON or key = value)")->required();
    sub->add_option("--out", out, "Output file");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    return sub;
  };
  add("grid", "Evaluate the potential on a grid and write CSV");
  add("derive", "Report ring radius, well separation and critical gradient");
  add("track", "Follow the moving well of a time-dependent scenario");
  add("simulate", "Integrate a classical atom trajectory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dressed_trap::exit_code::config;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return dressed_trap::run_command(command, config, out, threads, {std::cout, std::cerr});
}
