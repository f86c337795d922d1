#pragma once

#include "slackcert/certify.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slackcert {

enum class Subcommand { Certify, Parametrize, Orient, Verify, CheckFinal, Batch };
enum class OutputFormat { Text, Json };

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNoCertificate = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitInternal = 3;
inline constexpr int kExitTimeLimit = 4;

struct RunConfig {
  Subcommand subcommand = Subcommand::Certify;
  std::string input;
  /// Sphere file for `verify`.
  std::string against;
  std::uint32_t k = 2;
  std::uint32_t l = 2;
  HeuristicConfig heuristics;
  std::optional<std::vector<std::uint32_t>> flag;
  std::map<std::uint32_t, std::vector<std::uint32_t>> bases;
  std::map<std::uint32_t, int> orientation;
  OutputFormat format = OutputFormat::Text;
  std::optional<double> time_limit;
  std::size_t trials = 100;
  bool dump_matrices = false;
  std::string dump_tableau;
  /// Certificate JSON destination for certify.
  std::string out;
  bool timings = false;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> grid;
};

/// Throws InvalidInput when k, l, trials or the time limit are out of range.
void validate(const RunConfig& config);

struct Report {
  nlohmann::ordered_json data;
  int exit_code = kExitOk;
};

/// Runs one subcommand. Errors become exit codes 2-4 with the message and
/// stage recorded in the report.
Report run(const RunConfig& config);
/// `batch` over every sphere file in config.input.
Report batch(const RunConfig& config);

std::string render(const Report& report, OutputFormat format);

/// Full command line front end; returns the exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slackcert
