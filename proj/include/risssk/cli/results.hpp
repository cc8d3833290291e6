#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "risssk/engine.hpp"

namespace risssk::cli {

enum class Format { csv, json };

std::optional<Format> parse_format(std::string_view name) noexcept;

inline constexpr std::string_view kCsvHeader =
    "scheme,N,Nt,Nr,kappa,snr_db,curve,aber,trials,bit_errors,ci95,unreliable";

void write_csv(std::ostream& out, std::span<const engine::SweepResult> results);
void write_json(std::ostream& out, std::span<const engine::SweepResult> results);

std::string to_csv(std::span<const engine::SweepResult> results);
std::string to_json(std::span<const engine::SweepResult> results);

/// Inverse of to_json for the result payload.
std::vector<engine::SweepResult> parse_json(std::string_view text);

/// Config echo used in the JSON output and the preset golden file.
std::string config_json(const engine::SimConfig& cfg, int indent = -1);

/// Writes to `path`, or stdout when the path is empty or "-". Throws
/// std::runtime_error naming the path on failure.
void emit_results(std::span<const engine::SweepResult> results, Format format,
                  const std::filesystem::path& path);

/// One row per scheme per N, columns scheme,N,S,M.
std::string complexity_csv(std::span<const std::size_t> reflectors);
std::string complexity_text(std::span<const std::size_t> reflectors);

std::string link_budget_text(const channel::LinkBudget& budget);

}  // namespace risssk::cli
