#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "tropreg/cli.hpp"

using namespace tropreg;

namespace {

const std::map<std::string, std::string> kHelp{
    {"check", "conditions ZC and TC, normality, envelope table"},
    {"assign", "optimal assignment with dual potentials (finite kernels)"},
    {"unique", "uniqueness of the optimal assignment, or local check of a bijection"},
    {"normalize", "similarity to a normal kernel"},
    {"closure", "closure of the deviation kernel"},
    {"potentials", "row and column potentials with their fixed-point identities"},
    {"sat", "saturation graph of the file's function and its structure"},
    {"perestroika", "strict potential by peeling end points, with a per-round trace"},
    {"regular", "strong regularity: certificate, refutation or neither"},
    {"invariance", "property preservation under a random similarity drawn from --seed"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tropreg: strong regularity of max-plus kernels"};
  app.require_subcommand(1);
  app.fallthrough();

  CommandOptions opt;
  std::string mode = "compact", format = "text", file;
  app.add_option("--window", opt.window, "half-width of the window on N and Z")->check(CLI::NonNegativeNumber);
  app.add_option("--distance", opt.distance, "largest displacement M of competing bijections")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--budget-eps", opt.budget_eps, "scale of the perestroika budget")->check(CLI::PositiveNumber);
  app.add_option("--mode", mode, "solution notion")->check(CLI::IsMember({"compact", "balls"}));
  app.add_option("--seed", opt.seed, "seed for randomised commands");
  app.add_option("--tol", opt.tol, "tolerance of the closure identities")->check(CLI::NonNegativeNumber);
  app.add_option("--enlargement", opt.enlargement, "search-range factor of the conjugacy")
      ->check(CLI::Range(1.0, 1e6));
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "machine"}));

  std::string command;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, kHelp.at(name));
    sub->add_option("file", file, "kernel file")->required();
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::InputError);
  }
  opt.mode = mode == "compact" ? SolutionMode::Compact : SolutionMode::RestrictedBalls;
  auto fmt = format == "machine" ? ReportFormat::Machine : ReportFormat::Text;

  CommandResult result;
  try {
    result = run_command(command, read_kernel_file(file), opt);
  } catch (const ParseError& e) {
    result = input_error(command, file + ": " + e.what(), opt);
  }
  std::cout << render(result, fmt);
  if (result.code == ExitCode::InputError && fmt == ReportFormat::Machine) std::cerr << result.text;
  return static_cast<int>(result.code);
}
