#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "risssk/engine.hpp"

namespace risssk::cli {

/// Malformed input. `line` is 0 for command-line assignments.
class ParseError : public engine::ConfigError {
 public:
  ParseError(std::string source, std::size_t line, std::string key, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string key_;
};

struct Assignment {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Splits `key=value` tokens separated by whitespace; `#` starts a comment.
std::vector<Assignment> tokenize(std::string_view text, std::string_view source);

/// Non-negative integer, also accepted in exponent form such as 1e8.
std::optional<std::uint64_t> parse_count(std::string_view text);

/// `start:step:stop` (inclusive), a comma list, or a single value.
std::vector<double> parse_grid(std::string_view text);

/// Overrides applied after preset expansion or key parsing.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> min_bit_errors;
  std::optional<std::uint64_t> max_trials;
};

/// Builds the validated config list. A `preset` key expands the named preset
/// and only accepts seed, min_errors and max_trials alongside it. Otherwise
/// comma lists in N, Nt, Nr, kappa and d expand as a cartesian product.
std::vector<engine::SimConfig> build_configs(std::span<const Assignment> assignments,
                                             std::string_view source,
                                             const Overrides& overrides = {});

std::vector<engine::SimConfig> parse_config_text(std::string_view text, std::string_view source,
                                                 const Overrides& overrides = {});

/// Throws std::runtime_error when the file cannot be read.
std::vector<engine::SimConfig> parse_config_file(const std::filesystem::path& path,
                                                 const Overrides& overrides = {});

std::vector<std::string_view> known_keys();

}  // namespace risssk::cli
