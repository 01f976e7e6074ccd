#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mixgeo/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral-decomposition metric toolkit for mixed quantum states"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  mixgeo::cli::Options opt;

  for (const auto& name : mixgeo::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--tol", opt.tol, "validation tolerance");
    sub->add_option("--seed", opt.seed, "seed for fuzz runs");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config '" << config_path << "'\n";
    return 2;
  }
  std::stringstream text;
  text << in.rdbuf();

  // Buffer so that a failing command leaves no partial output file.
  std::ostringstream buffer;
  const int code = mixgeo::cli::run_command_text(command, text.str(), opt, buffer, std::cerr);
  if (code != 0) return code;

  if (out_path.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 2;
    }
    out << buffer.str();
  }
  return 0;
}
