#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "risssk/analytics.hpp"
#include "risssk/channel.hpp"
#include "risssk/scheme.hpp"

namespace risssk::engine {

/// Thrown for configurations that violate a constraint; raised before any
/// trial runs.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

class NotBracketed : public std::runtime_error {
 public:
  explicit NotBracketed(const std::string& what) : std::runtime_error(what) {}
};

struct StoppingRule {
  std::uint64_t min_bit_errors = 200;
  std::uint64_t max_trials = 100'000'000;
  bool operator==(const StoppingRule&) const = default;
};

struct SimConfig {
  SchemeKind scheme = SchemeKind::intelligent_ris_ssk;
  std::size_t reflectors = 64;
  std::size_t tx_antennas = 2;
  std::size_t rx_antennas = 1;
  std::vector<double> snr_grid_db;
  std::optional<double> kappa;  // unset: exact phase alignment
  std::optional<channel::LinkBudget> link_budget;
  double variance = 1.0;  // end-to-end path power; replaced by the link budget when set
  std::uint64_t seed = 1;
  StoppingRule stopping;
  bool noiseless = false;  // N0 = 0; for tests
  bool operator==(const SimConfig&) const = default;
};

void validate(const SimConfig& cfg);

/// sigma^2 actually used: path-loss variance when a link budget is present.
double effective_variance(const SimConfig& cfg);

struct BerEstimate {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
  double aber = 0.0;
  double ci95_halfwidth = 0.0;
  bool unreliable = false;
  bool operator==(const BerEstimate&) const = default;
};

struct RunOptions {
  unsigned workers = 1;
  std::uint64_t chunk_trials = 2048;
};

/// Monte Carlo ABER at one SNR. Trials are split into fixed chunks and the
/// stopping rule is checked at chunk boundaries in chunk order, so results
/// do not depend on the worker count.
BerEstimate run_point(const SimConfig& cfg, double snr_db, const RunOptions& options = {});

struct SweepResult {
  SimConfig config;
  double variance = 1.0;
  std::vector<BerEstimate> simulated;
  std::vector<analytics::AnalyticCurve> analytic;
  std::vector<std::string> warnings;
  bool operator==(const SweepResult&) const = default;
};

SweepResult run_sweep(const SimConfig& cfg, const RunOptions& options = {});

/// Analytic curves of cfg's scheme on cfg's grid, with the N_t union bound.
std::vector<analytics::AnalyticCurve> analytic_curves(const SimConfig& cfg);

/// Log-linear interpolation of log10(aber) against snr_db at the first
/// downward crossing of target. Throws NotBracketed when there is none.
double snr_at_target(std::span<const analytics::CurvePoint> curve, double target_aber);

std::vector<analytics::CurvePoint> as_curve(std::span<const BerEstimate> estimates);

/// Key of the random streams used at one SNR point.
std::uint64_t point_key(std::uint64_t seed, double snr_db) noexcept;

}  // namespace risssk::engine
