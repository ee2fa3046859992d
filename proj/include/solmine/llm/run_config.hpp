#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "solmine/llm/pipeline.hpp"

namespace solmine::llm {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "config line " + std::to_string(line) + ": " + what : "config: " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Parsed, validated run configuration. See config_reference() for keys.
struct RunConfig {
  std::size_t iterations = 0;
  std::string catalog = "builtin";  // or a group file
  std::size_t max_order = 1000;
  std::string facts = "builtin";    // or a facts file
  double dedup_threshold = 0.95;
  DedupMode dedup_mode = DedupMode::cosine;
  bool wall_clock = false;          // timestamps = wall | logical
  std::filesystem::path output_dir;
  std::filesystem::path base_dir;   // relative paths resolve here
  ProviderConfig conjecture;
  ProviderConfig code;
  dsl::EvalBudget budget;
  dsl::EvalOptions options;
  std::string source;               // the file as read, for the archive
};

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Loads the catalog and facts the config names. Throws ConfigError.
MineSettings make_settings(const RunConfig& cfg);
PromptState make_prompt_state(const RunConfig& cfg);

std::string config_reference();

}  // namespace solmine::llm
