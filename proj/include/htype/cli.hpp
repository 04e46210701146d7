#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "htype/errors.hpp"
#include "htype/hstructure.hpp"
#include "htype/mcp.hpp"

namespace htype::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kPropertyFailure = 2,
  kMalformedInput = 3,
};

int exit_code_for(ErrorCode code);

/// Where the group comes from: a JSON config path or a catalog name.
struct GroupSource {
  std::string config_path;
  std::string group_name;
  std::optional<std::uint64_t> seed;  // overrides the config seed
};

struct OutputOptions {
  bool quiet = false;
  int workers = 0;  // 0: OpenMP default
};

struct ExpArgs {
  std::string u;
  std::string v;
  int steps = 16;
  std::string out_path;  // empty: stdout
};

struct LogArgs {
  std::string x;
  std::string z;
};

struct McpArgs {
  double K = 0.0;
  std::optional<double> N;  // default k + 3p
  std::string box = "default";
  std::string t_grid = "0.1:0.9:9";
  int quad = 8;
  std::string out_path;
};

struct SharpnessArgs {
  double epsilon = 0.5;
  int quad = 8;
  std::string out_path;
};

/// "1,0,2.5" -> {1, 0, 2.5}
std::vector<double> parse_list(const std::string& text);
/// Either a comma list or start:stop:count (inclusive endpoints).
std::vector<double> parse_t_grid(const std::string& text);
/// "default", "sharpness" or n comma-separated lo:hi ranges in (u, v) order.
CovectorBox parse_box(const StructureConstants& sc, const std::string& text);

int cmd_validate(const GroupSource& source, const OutputOptions& opts, std::ostream& out, std::ostream& err);
int cmd_exp(const GroupSource& source, const ExpArgs& args, const OutputOptions& opts, std::ostream& out,
            std::ostream& err);
int cmd_log(const GroupSource& source, const LogArgs& args, const OutputOptions& opts, std::ostream& out,
            std::ostream& err);
int cmd_mcp(const GroupSource& source, const McpArgs& args, const OutputOptions& opts, std::ostream& out,
            std::ostream& err);
int cmd_sharpness(const GroupSource& source, const SharpnessArgs& args, const OutputOptions& opts,
                  std::ostream& out, std::ostream& err);

/// Full command line entry point; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace htype::cli
