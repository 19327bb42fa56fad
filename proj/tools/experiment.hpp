#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sinrperc::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentInfo {
  std::string kind;
  std::string description;
  std::vector<std::string> required;
};

const std::vector<ExperimentInfo>& registry();
void print_registry(std::ostream& os);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<long> replicas;
  std::optional<int> workers;
};

/// Schema violation; `path` names the offending field.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

enum ExitCode : int { kOk = 0, kBadConfig = 2, kInvariant = 3 };

/// Runs the experiment described by `config`, writing results.jsonl,
/// plot.tsv and run_meta.json into the output directory. Diagnostics go to
/// `log`.
int run(const std::filesystem::path& config, const Overrides& overrides, std::ostream& log);

}  // namespace sinrperc::cli
