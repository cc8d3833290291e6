// ris-ssk: batch driver for the RIS-SSK error-rate simulator.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "risssk/cli/config.hpp"
#include "risssk/cli/presets.hpp"
#include "risssk/cli/results.hpp"
#include "risssk/engine.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

using namespace risssk;

std::vector<cli::Assignment> positional(const std::vector<std::string>& args) {
  std::string joined;
  for (const auto& a : args) joined += a + ' ';
  return cli::tokenize(joined, "command line");
}

int run(const std::string& preset, const std::string& config_path, const std::string& out_path,
        const std::string& format_name, const cli::Overrides& overrides, unsigned workers,
        const std::vector<std::string>& args, bool quiet) {
  const auto format = cli::parse_format(format_name);
  if (!format) throw engine::ConfigError("--format must be csv or json");

  std::vector<cli::Assignment> assignments;
  std::string source = "command line";
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw engine::ConfigError("cannot read config file " + config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    assignments = cli::tokenize(ss.str(), config_path);
    source = config_path;
  }
  // Command-line assignments replace file keys of the same name.
  for (auto& a : positional(args)) {
    std::erase_if(assignments, [&](const cli::Assignment& b) { return b.key == a.key; });
    assignments.push_back(std::move(a));
  }
  if (!preset.empty()) {
    std::erase_if(assignments, [](const cli::Assignment& b) { return b.key == "preset"; });
    assignments.push_back({"preset", preset, 0});
  }
  if (assignments.empty()) throw engine::ConfigError("nothing to run: give --preset, --config or key=value");

  const auto configs = cli::build_configs(assignments, source, overrides);

  engine::RunOptions options;
  options.workers = workers > 0 ? workers : std::max(1u, std::thread::hardware_concurrency());

  std::vector<engine::SweepResult> results;
  results.reserve(configs.size());
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    results.push_back(engine::run_sweep(configs[k], options));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!quiet) {
      const auto& c = configs[k];
      std::fprintf(stderr, "[%zu/%zu] %s N=%zu Nt=%zu Nr=%zu kappa=%s: %zu points, %.1f s\n", k + 1,
                   configs.size(), std::string(to_string(c.scheme)).c_str(), c.reflectors,
                   c.tx_antennas, c.rx_antennas,
                   c.kappa ? std::to_string(*c.kappa).c_str() : "inf", c.snr_grid_db.size(), secs);
    }
    for (const auto& w : results.back().warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  cli::emit_results(results, *format, out_path);
  return kOk;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(part, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != part.size() || part.empty() || part[0] == '-' || v < 1) {
      throw engine::ConfigError("N values must be integers >= 1, got '" + part + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::optional<std::uint64_t> count_flag(const char* name, const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = cli::parse_count(text);
  if (!v) throw engine::ConfigError(std::string(name) + " expects a non-negative integer, got '" + text + "'");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo and analytical error rates of RIS-assisted space shift keying"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Simulate a preset or a key=value configuration");
  std::string preset, config_path, out_path, format = "csv";
  std::string seed, min_errors, max_trials;
  unsigned workers = 0;
  bool quiet = false;
  std::vector<std::string> args;
  run_cmd->add_option("--preset", preset, "fig2, fig3, fig4_left, fig4_right, fig5 or fig6");
  run_cmd->add_option("--config", config_path, "File of key=value lines");
  run_cmd->add_option("--out", out_path, "Output file (stdout when omitted)");
  run_cmd->add_option("--format", format, "csv or json")->capture_default_str();
  run_cmd->add_option("--seed", seed, "Master seed");
  run_cmd->add_option("--min-errors", min_errors, "Bit errors per point before stopping");
  run_cmd->add_option("--max-trials", max_trials, "Trial cap per point");
  run_cmd->add_option("--workers", workers, "Worker threads (0: all cores)");
  run_cmd->add_flag("--quiet,-q", quiet, "No progress on stderr");
  run_cmd->add_option("assignments", args, "key=value pairs, e.g. scheme=blind N=32 snr=-10:2:10");

  auto* cx_cmd = app.add_subcommand("complexity", "Operation counts of the ML detectors");
  std::string cx_n = "1,16,64,256", cx_format = "text";
  cx_cmd->add_option("--N", cx_n, "Comma-separated reflector counts")->capture_default_str();
  cx_cmd->add_option("--format", cx_format, "text or csv")->capture_default_str();

  auto* lb_cmd = app.add_subcommand("link-budget", "Path loss and far-field report");
  std::vector<std::string> lb_args;
  lb_cmd->add_option("assignments", lb_args, "N, d1, d or d2, carrier_freq, wavelength, spacing, path_loss_mode")
      ->required();

  auto* ps_cmd = app.add_subcommand("presets", "List presets or show one expansion");
  std::string show;
  ps_cmd->add_option("--show", show, "Preset to expand as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) {
      const cli::Overrides overrides{count_flag("--seed", seed), count_flag("--min-errors", min_errors),
                                     count_flag("--max-trials", max_trials)};
      return run(preset, config_path, out_path, format, overrides, workers, args, quiet);
    }
    if (*cx_cmd) {
      const auto ns = parse_sizes(cx_n);
      if (cx_format == "csv") std::cout << cli::complexity_csv(ns);
      else if (cx_format == "text") std::cout << cli::complexity_text(ns);
      else throw engine::ConfigError("--format must be text or csv");
      return kOk;
    }
    if (*lb_cmd) {
      auto assignments = positional(lb_args);
      assignments.push_back({"scheme", "intelligent", 0});
      assignments.push_back({"snr", "0", 0});
      const auto configs = cli::build_configs(assignments, "command line");
      for (const auto& c : configs) {
        if (!c.link_budget) throw engine::ConfigError("give at least d1 and d");
        std::cout << "N=" << c.reflectors << " d=" << c.link_budget->d_m << '\n'
                  << cli::link_budget_text(*c.link_budget) << '\n';
      }
      return kOk;
    }
    if (*ps_cmd) {
      if (show.empty()) {
        for (auto name : cli::preset_names()) std::cout << name << '\n';
        return kOk;
      }
      const auto p = cli::expand_preset(show);
      if (!p) throw engine::ConfigError("unknown preset '" + show + "'");
      for (const auto& c : p->configs) std::cout << cli::config_json(c) << '\n';
      return kOk;
    }
  } catch (const engine::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
  return kOk;
}
