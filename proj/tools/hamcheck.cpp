#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hamcheck/dsl.hpp"
#include "hamcheck/report.hpp"
#include "hamcheck/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Checks Hamiltonian structures of differential equations"};
  app.require_subcommand(1);
  std::string file, report_path;
  unsigned depth = 4;
  bool text = false, timing = false;
  CLI::App* run = app.add_subcommand("run", "Run every task of a hamcheck file");
  run->add_option("file", file, "Input file")->required()->check(CLI::ExistingFile);
  run->add_option("--report", report_path, "Write the JSON report to this path");
  run->add_option("--passivity-depth", depth, "Default passivity check depth")->check(CLI::Range(1u, 64u));
  run->add_flag("--text", text, "Print a human-readable report");
  run->add_flag("--timing", timing, "Include per-task timings");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(file, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string source = buf.str();

  hamcheck::dsl::Program program;
  try {
    program = hamcheck::dsl::parse_program(source, depth);
  } catch (const hamcheck::dsl::ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return 2;
  }
  const hamcheck::RunReport report = hamcheck::run_program(program, source);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    out << hamcheck::report_json(report, timing);
    if (!out) {
      std::cerr << "cannot write " << report_path << "\n";
      return 2;
    }
  }
  if (text) std::cout << hamcheck::report_text(report, timing);
  else if (report_path.empty()) std::cout << hamcheck::report_json(report, timing);
  return report.all_ok() ? 0 : 1;
}
