#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tropreg/assignment.hpp"
#include "tropreg/io.hpp"

namespace tropreg {

/// 0 positive verdict, 1 definite refutation or finding, 2 inconclusive, 3 input error.
enum class ExitCode : int { Positive = 0, Refuted = 1, Inconclusive = 2, InputError = 3 };
std::string exit_name(ExitCode c);

enum class ReportFormat { Text, Machine };

inline constexpr const char* kReportSchema = "tropreg-report/1";

struct CommandOptions {
  Index window = 20;  // half-width on N and Z; finite sets always use every point
  Index distance = 2;
  double budget_eps = 0.25;
  SolutionMode mode = SolutionMode::Compact;
  std::uint64_t seed = 1;
  double tol = 1e-9;         // closure identities
  double enlargement = 2.0;  // conjugacy search range
};

struct CommandResult {
  ExitCode code = ExitCode::InputError;
  std::string text;
  /// Trace records first, then exactly one "result" or "error" record.
  std::vector<nlohmann::json> records;
};

const std::vector<std::string>& command_names();

/// Runs one command; never throws. Errors raised by the modules on invalid
/// input become ExitCode::InputError.
CommandResult run_command(const std::string& command, const KernelFile& file, const CommandOptions& opt);

/// Error result for input that never reached a command (unreadable file, bad flags).
CommandResult input_error(const std::string& command, const std::string& message, const CommandOptions& opt);

/// Text: the human report. Machine: one compact JSON object per line.
std::string render(const CommandResult& r, ReportFormat f);

}  // namespace tropreg
