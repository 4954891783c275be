// Batch front end: reads an instance file, runs its analyses, prints a report.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kleppner/config.hpp"
#include "kleppner/report.hpp"

int main(int argc, char** argv) {
  using namespace kleppner;
  CLI::App app{"Twisted group algebra inclusions: Kleppner conditions and irreducibility verdicts"};
  std::string input;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  app.add_option("--input", input, "instance file")->required();
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", seed, "random seed, overrides [run] seed");
  app.add_option("--cap", cap, "conjugacy search cap, overrides [run] cap")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ifstream in(input, std::ios::binary);
  if (!in) {
    std::cerr << input << ": cannot open file\n";
    return kExitUsage;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  InstanceConfig config;
  try {
    config = parse_config(buffer.str(), ConfigOverrides{seed, cap});
  } catch (const ConfigError& e) {
    std::cerr << input << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return kExitUsage;
  }

  Report report;
  try {
    report = run(config);
  } catch (const std::exception& e) {
    std::cerr << input << ": " << e.what() << "\n";
    return kExitUsage;
  }
  std::cout << (format == "json" ? to_json(report) + "\n" : to_text(report));
  if (!report.oracle || report.oracle->error.empty())
    return report.exit_code;
  std::cerr << input << ": " << report.oracle->error << "\n";
  return report.exit_code;
}
