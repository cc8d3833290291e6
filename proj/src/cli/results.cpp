#include "risssk/cli/results.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "risssk/channel.hpp"

namespace risssk::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string num(std::uint64_t v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string kappa_text(const engine::SimConfig& cfg) {
  return cfg.kappa ? num(*cfg.kappa) : std::string("inf");
}

std::size_t reflectors_column(const engine::SimConfig& cfg) {
  return uses_ris(cfg.scheme) ? cfg.reflectors : 0;
}

json kappa_json(const std::optional<double>& kappa) {
  return kappa ? json(*kappa) : json("inf");
}

std::optional<double> kappa_from(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") throw std::invalid_argument("bad kappa value");
    return std::nullopt;
  }
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json budget_json(const channel::LinkBudget& b) {
  return {{"carrier_freq_hz", b.carrier_freq_hz}, {"wavelength_m", b.wavelength_m},
          {"d1_m", b.d1_m},
          {"d2_m", b.d2_m},
          {"d_m", b.d_m},
          {"reflectors", b.reflectors},
          {"element_spacing_m", b.element_spacing_m},
          {"path_loss_mode", channel::to_string(b.mode)}};
}

channel::LinkBudget budget_from(const json& j) {
  channel::LinkBudget b;
  b.carrier_freq_hz = j.at("carrier_freq_hz").get<double>();
  b.wavelength_m = j.at("wavelength_m").get<double>();
  b.d1_m = j.at("d1_m").get<double>();
  b.d2_m = j.at("d2_m").get<double>();
  b.d_m = j.at("d_m").get<double>();
  b.reflectors = j.at("reflectors").get<std::size_t>();
  b.element_spacing_m = j.at("element_spacing_m").get<double>();
  const auto mode = channel::parse_path_loss_mode(j.at("path_loss_mode").get<std::string>());
  if (!mode) throw std::invalid_argument("bad path_loss_mode");
  b.mode = *mode;
  return b;
}

json config_to_json(const engine::SimConfig& c) {
  json j = {{"scheme", to_string(c.scheme)},
            {"N", c.reflectors},
            {"Nt", c.tx_antennas},
            {"Nr", c.rx_antennas},
            {"snr_grid_db", c.snr_grid_db},
            {"kappa", kappa_json(c.kappa)},
            {"variance", c.variance},
            {"seed", c.seed},
            {"min_bit_errors", c.stopping.min_bit_errors},
            {"max_trials", c.stopping.max_trials}};
  j["link_budget"] = c.link_budget ? budget_json(*c.link_budget) : json(nullptr);
  if (c.noiseless) j["noiseless"] = true;
  return j;
}

engine::SimConfig config_from(const json& j) {
  engine::SimConfig c;
  const auto scheme = parse_scheme(j.at("scheme").get<std::string>());
  if (!scheme) throw std::invalid_argument("bad scheme");
  c.scheme = *scheme;
  c.reflectors = j.at("N").get<std::size_t>();
  c.tx_antennas = j.at("Nt").get<std::size_t>();
  c.rx_antennas = j.at("Nr").get<std::size_t>();
  c.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
  c.kappa = kappa_from(j.at("kappa"));
  c.variance = j.at("variance").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.stopping.min_bit_errors = j.at("min_bit_errors").get<std::uint64_t>();
  c.stopping.max_trials = j.at("max_trials").get<std::uint64_t>();
  if (!j.at("link_budget").is_null()) c.link_budget = budget_from(j.at("link_budget"));
  c.noiseless = j.value("noiseless", false);
  return c;
}

json row_base(const engine::SimConfig& c, double snr_db, std::string_view curve, double aber) {
  return {{"scheme", to_string(c.scheme)},
          {"N", reflectors_column(c)},
          {"Nt", c.tx_antennas},
          {"Nr", c.rx_antennas},
          {"kappa", kappa_json(c.kappa)},
          {"snr_db", snr_db},
          {"curve", curve},
          {"aber", aber}};
}

json to_json_value(std::span<const engine::SweepResult> results) {
  json runs = json::array();
  for (const auto& r : results) {
    json rows = json::array();
    for (const auto& e : r.simulated) {
      json row = row_base(r.config, e.snr_db, "simulated", e.aber);
      row["trials"] = e.trials;
      row["bit_errors"] = e.bit_errors;
      row["ci95"] = e.ci95_halfwidth;
      row["unreliable"] = e.unreliable;
      rows.push_back(std::move(row));
    }
    for (const auto& curve : r.analytic) {
      for (const auto& p : curve.points) {
        json row = row_base(r.config, p.snr_db, analytics::to_string(curve.expression), p.aber);
        row["trials"] = nullptr;
        row["bit_errors"] = nullptr;
        row["ci95"] = nullptr;
        row["unreliable"] = nullptr;
        rows.push_back(std::move(row));
      }
    }
    runs.push_back({{"config", config_to_json(r.config)},
                    {"variance", r.variance},
                    {"warnings", r.warnings},
                    {"rows", std::move(rows)}});
  }
  json doc = {{"seed", results.empty() ? json(nullptr) : json(results.front().config.seed)},
              {"columns", std::string(kCsvHeader)},
              {"runs", std::move(runs)}};
  return doc;
}

}  // namespace

std::optional<Format> parse_format(std::string_view name) noexcept {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  return std::nullopt;
}

void write_csv(std::ostream& out, std::span<const engine::SweepResult> results) {
  out << kCsvHeader << '\n';
  for (const auto& r : results) {
    const auto& c = r.config;
    const std::string prefix = std::string(to_string(c.scheme)) + ',' + num(std::uint64_t{reflectors_column(c)}) +
                               ',' + num(std::uint64_t{c.tx_antennas}) + ',' +
                               num(std::uint64_t{c.rx_antennas}) + ',' + kappa_text(c) + ',';
    for (const auto& e : r.simulated) {
      out << prefix << num(e.snr_db) << ",simulated," << num(e.aber) << ',' << num(e.trials) << ','
          << num(e.bit_errors) << ',' << num(e.ci95_halfwidth) << ','
          << (e.unreliable ? "true" : "false") << '\n';
    }
    for (const auto& curve : r.analytic) {
      for (const auto& p : curve.points) {
        out << prefix << num(p.snr_db) << ',' << analytics::to_string(curve.expression) << ','
            << num(p.aber) << ",,,,\n";
      }
    }
  }
}

std::string to_csv(std::span<const engine::SweepResult> results) {
  std::ostringstream ss;
  write_csv(ss, results);
  return ss.str();
}

void write_json(std::ostream& out, std::span<const engine::SweepResult> results) {
  out << to_json_value(results).dump(2) << '\n';
}

std::string to_json(std::span<const engine::SweepResult> results) {
  std::ostringstream ss;
  write_json(ss, results);
  return ss.str();
}

std::vector<engine::SweepResult> parse_json(std::string_view text) {
  const json doc = json::parse(text);
  std::vector<engine::SweepResult> out;
  for (const auto& run : doc.at("runs")) {
    engine::SweepResult r;
    r.config = config_from(run.at("config"));
    r.variance = run.at("variance").get<double>();
    r.warnings = run.at("warnings").get<std::vector<std::string>>();
    std::map<std::string, std::size_t> curve_index;
    for (const auto& row : run.at("rows")) {
      const auto curve = row.at("curve").get<std::string>();
      const double snr = row.at("snr_db").get<double>();
      const double aber = row.at("aber").get<double>();
      if (curve == "simulated") {
        engine::BerEstimate e;
        e.snr_db = snr;
        e.aber = aber;
        e.trials = row.at("trials").get<std::uint64_t>();
        e.bit_errors = row.at("bit_errors").get<std::uint64_t>();
        e.ci95_halfwidth = row.at("ci95").get<double>();
        e.unreliable = row.at("unreliable").get<bool>();
        r.simulated.push_back(e);
        continue;
      }
      const auto expr = analytics::parse_expression(curve);
      if (!expr) throw std::invalid_argument("unknown curve '" + curve + "'");
      auto [it, fresh] = curve_index.emplace(curve, r.analytic.size());
      if (fresh) r.analytic.push_back({*expr, {}});
      r.analytic[it->second].points.push_back({snr, aber});
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string config_json(const engine::SimConfig& cfg, int indent) {
  return config_to_json(cfg).dump(indent);
}

void emit_results(std::span<const engine::SweepResult> results, Format format,
                  const std::filesystem::path& path) {
  const auto write = [&](std::ostream& out) {
    if (format == Format::csv) write_csv(out, results);
    else write_json(out, results);
  };
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing results to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write(out);
  out.close();
  if (!out) throw std::runtime_error("failed writing results to " + path.string());
}

std::string complexity_csv(std::span<const std::size_t> reflectors) {
  std::ostringstream ss;
  ss << "scheme,N,S,M\n";
  for (std::size_t n : reflectors) {
    for (SchemeKind s : {SchemeKind::intelligent_ris_ssk, SchemeKind::blind_ris_ssk,
                         SchemeKind::traditional_ssk}) {
      const auto c = analytics::complexity(s, n);
      ss << to_string(s) << ',' << n << ',' << c.summations << ',' << c.multiplications << '\n';
    }
  }
  return ss.str();
}

std::string complexity_text(std::span<const std::size_t> reflectors) {
  std::ostringstream ss;
  char line[96];
  std::snprintf(line, sizeof line, "%-12s %8s %12s %12s\n", "scheme", "N", "summations",
                "mults");
  ss << line;
  for (std::size_t n : reflectors) {
    for (SchemeKind s : {SchemeKind::intelligent_ris_ssk, SchemeKind::blind_ris_ssk,
                         SchemeKind::traditional_ssk}) {
      const auto c = analytics::complexity(s, n);
      std::snprintf(line, sizeof line, "%-12s %8zu %12llu %12llu\n",
                    std::string(to_string(s)).c_str(), n, c.summations, c.multiplications);
      ss << line;
    }
  }
  return ss.str();
}

std::string link_budget_text(const channel::LinkBudget& budget) {
  const auto r = channel::describe(budget);
  std::ostringstream ss;
  ss << "wavelength_m            " << num(r.wavelength_m) << '\n'
     << "ris_area_m2             " << num(r.ris_area_m2) << '\n'
     << "far_field_boundary_m    " << num(r.far_field_boundary_m) << '\n'
     << "tx_in_far_field         " << (r.tx_in_far_field ? "yes" : "no") << '\n'
     << "rx_in_far_field         " << (r.rx_in_far_field ? "yes" : "no") << '\n'
     << "(d1+d2)^2               " << num(r.near_field_distance_sq) << '\n'
     << "(d1*d2)^2               " << num(r.far_field_distance_sq) << '\n'
     << "variance_ris            " << num(r.variance_ris) << " ("
     << num(analytics::to_db(r.variance_ris)) << " dB)\n"
     << "variance_traditional    " << num(r.variance_traditional) << " ("
     << num(analytics::to_db(r.variance_traditional)) << " dB)\n"
     << "path_loss_mode          " << channel::to_string(budget.mode) << '\n';
  return ss.str();
}

}  // namespace risssk::cli
