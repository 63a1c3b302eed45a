#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kvext/transforms.hpp"

namespace kvext::cli {

enum class ExitCode : int {
  Ok = 0,
  Diagnostics = 1,  // report produced, but inputs were incomplete
  Usage = 2,        // bad flags, unreadable or malformed input
};

enum class OutputFormat { Json, Table };

/// Everything a subcommand needs, validated before any input is read.
struct RunConfig {
  std::string subcommand;  // transform | evaluate | stats | import
  std::string metric;      // htr | ner | iehhr (evaluate)
  std::string input;
  std::string output;
  std::string refs;
  std::string hyps;
  std::string vocab;
  double threshold = 0.30;
  LabelAxis axis = LabelAxis::Full;
  OutputFormat format = OutputFormat::Json;
  unsigned jobs = 0;  // 0 = all processors
  bool details = false;

  // transform
  Regime regime = Regime::HtrNer;
  std::optional<ScopeMode> scope;
  std::optional<std::uint64_t> shuffle_seed;

  // import columnar
  std::vector<std::string> columns;
  char delimiter = '\t';
  bool header = false;
  std::string split = "test";
  std::string level = "line";
  std::string id_prefix = "row";
};

/// Runs the tool. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kvext::cli
