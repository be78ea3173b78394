#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "harmonode/descriptor.hpp"
#include "harmonode/generator.hpp"

namespace harmonode::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

/// Bad flags or unusable paths; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  DescriptorOptions descriptor;
  DemandOptions demands;
  std::optional<std::string> load_case;
  int k = kDefaultClusters;
  std::uint64_t seed = 0;
  int dimension = 2;           // mds
  bool circle = true;          // mds: draw the bounding circle
  bool expansions = false;     // descriptors: per-node a_lm files
  std::size_t n_samples = 20;  // sweep
  bool artifacts = true;       // sweep: per-design files
  std::string family_path;     // sweep/generate: family JSON, empty = built-in
  std::vector<double> parameters;  // generate
};

/// Design family from a JSON params file; absent keys keep the built-in
/// family's values (see docs/schema.md). Throws SchemaError on bad values.
DesignFamily parse_family(std::string_view json);
DesignFamily load_family(const std::string& path);

/// Throws UsageError when a value is out of range.
void check(const RunConfig& config);

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_descriptors(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_distances(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_mds(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_cluster(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_complexity(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs one configured subcommand and maps exceptions to exit codes,
/// reporting them on `err`.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line: parse, dispatch, exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace harmonode::cli
