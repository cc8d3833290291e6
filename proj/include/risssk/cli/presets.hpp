#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "risssk/engine.hpp"

namespace risssk::cli {

/// Bumped whenever a preset expansion changes.
inline constexpr int kPresetVersion = 1;

struct Preset {
  std::string name;
  std::vector<engine::SimConfig> configs;
};

/// fig2, fig3, fig4_left, fig4_right, fig5, fig6.
std::vector<std::string_view> preset_names();

/// Pure: the same name always yields the same list. nullopt for unknown names.
std::optional<Preset> expand_preset(std::string_view name);

/// Intelligent-scheme grid for N reflectors: -34:2:-14 at N = 64, shifted by
/// 6 dB per halving of N.
std::vector<double> intelligent_grid(std::size_t reflectors, double extra_high_db = 0.0);

}  // namespace risssk::cli
