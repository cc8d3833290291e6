#include "risssk/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "risssk/cli/presets.hpp"

namespace risssk::cli {

namespace {

std::string format_message(const std::string& source, std::size_t line, const std::string& key,
                           const std::string& message) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line);
  out += ": ";
  if (!key.empty()) out += "key '" + key + "': ";
  return out + message;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool is_inf(std::string_view s) { return s == "inf" || s == "+inf" || s == "infinity"; }

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Integers, also written as 1e8.
std::optional<std::uint64_t> to_count(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return v;
  const auto d = to_double(s);
  if (!d || !(*d >= 0.0) || *d >= 1.8e19 || std::floor(*d) != *d) return std::nullopt;
  return static_cast<std::uint64_t>(*d);
}

constexpr std::string_view kKeys[] = {
    "preset", "scheme", "N",    "Nt", "Nr",      "snr",     "kappa",          "variance", "seed",
    "min_errors", "max_trials", "carrier_freq", "wavelength", "d1", "d2", "d", "spacing",
    "path_loss_mode"};

constexpr std::string_view kPresetCompatible[] = {"preset", "seed", "min_errors", "max_trials"};

constexpr std::string_view kBudgetKeys[] = {"carrier_freq", "wavelength", "d1",  "d2",
                                            "d",            "spacing",    "path_loss_mode"};

class Reader {
 public:
  Reader(std::span<const Assignment> assignments, std::string_view source)
      : source_(source) {
    for (const auto& a : assignments) {
      if (std::find(std::begin(kKeys), std::end(kKeys), a.key) == std::end(kKeys)) {
        fail(a, "unknown key");
      }
      if (!by_key_.emplace(a.key, a).second) fail(a, "given more than once");
    }
  }

  bool has(std::string_view key) const { return by_key_.count(std::string(key)) > 0; }
  const Assignment& get(std::string_view key) const { return by_key_.at(std::string(key)); }
  const std::map<std::string, Assignment>& all() const { return by_key_; }

  [[noreturn]] void fail(const Assignment& a, const std::string& message) const {
    throw ParseError(source_, a.line, a.key, message);
  }

  double number(std::string_view key) const {
    const auto& a = get(key);
    const auto v = to_double(a.value);
    if (!v || !std::isfinite(*v)) fail(a, "expected a finite number, got '" + a.value + "'");
    return *v;
  }

  std::uint64_t count(std::string_view key) const {
    const auto& a = get(key);
    const auto v = to_count(a.value);
    if (!v) fail(a, "expected a non-negative integer, got '" + a.value + "'");
    return *v;
  }

  std::vector<std::size_t> count_list(std::string_view key) const {
    const auto& a = get(key);
    std::vector<std::size_t> out;
    for (auto part : split(a.value, ',')) {
      const auto v = to_count(part);
      if (!v) fail(a, "expected integers, got '" + std::string(part) + "'");
      out.push_back(static_cast<std::size_t>(*v));
    }
    return out;
  }

  std::vector<double> number_list(std::string_view key) const {
    const auto& a = get(key);
    std::vector<double> out;
    for (auto part : split(a.value, ',')) {
      const auto v = to_double(part);
      if (!v || !std::isfinite(*v)) fail(a, "expected numbers, got '" + std::string(part) + "'");
      out.push_back(*v);
    }
    return out;
  }

  // nullopt entries stand for inf (phase errors off).
  std::vector<std::optional<double>> kappa_list() const {
    const auto& a = get("kappa");
    std::vector<std::optional<double>> out;
    for (auto part : split(a.value, ',')) {
      if (is_inf(part)) {
        out.emplace_back();
        continue;
      }
      const auto v = to_double(part);
      if (!v || !(*v >= 0.0)) fail(a, "expected kappa >= 0 or inf, got '" + std::string(part) + "'");
      out.emplace_back(*v);
    }
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, Assignment> by_key_;
};

void apply(engine::SimConfig& cfg, const Reader& r, const Overrides& o) {
  if (r.has("seed")) cfg.seed = r.count("seed");
  if (r.has("min_errors")) cfg.stopping.min_bit_errors = r.count("min_errors");
  if (r.has("max_trials")) cfg.stopping.max_trials = r.count("max_trials");
  if (o.seed) cfg.seed = *o.seed;
  if (o.min_bit_errors) cfg.stopping.min_bit_errors = *o.min_bit_errors;
  if (o.max_trials) cfg.stopping.max_trials = *o.max_trials;
}

void check(const engine::SimConfig& cfg, const std::string& source) {
  try {
    engine::validate(cfg);
  } catch (const engine::ConfigError& e) {
    throw ParseError(source, 0, "", e.what());
  }
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, std::string key,
                       const std::string& message)
    : engine::ConfigError(format_message(source, line, key, message)),
      source_(std::move(source)),
      line_(line),
      key_(std::move(key)) {}

std::optional<std::uint64_t> parse_count(std::string_view text) { return to_count(text); }

std::vector<std::string_view> known_keys() { return {std::begin(kKeys), std::end(kKeys)}; }

std::vector<Assignment> tokenize(std::string_view text, std::string_view source) {
  std::vector<Assignment> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t pos = 0;
    while (pos < line.size()) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string_view::npos) break;
      auto stop = line.find_first_of(" \t\r", pos);
      if (stop == std::string_view::npos) stop = line.size();
      const std::string_view token = line.substr(pos, stop - pos);
      const auto eq = token.find('=');
      if (eq == std::string_view::npos || eq == 0 || eq + 1 == token.size()) {
        throw ParseError(std::string(source), line_no, "",
                         "expected key=value, got '" + std::string(token) + "'");
      }
      out.push_back({std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)), line_no});
      pos = stop;
    }
    start = end + 1;
  }
  return out;
}

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  const auto bad = [&](const std::string& why) {
    return std::invalid_argument("bad SNR grid '" + std::string(text) + "': " + why);
  };
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw bad("expected start:step:stop");
    const auto a = to_double(parts[0]), s = to_double(parts[1]), b = to_double(parts[2]);
    if (!a || !s || !b || !std::isfinite(*a) || !std::isfinite(*s) || !std::isfinite(*b)) {
      throw bad("not a number");
    }
    if (!(*s > 0.0)) throw bad("step must be positive");
    if (*b < *a) throw bad("stop is below start");
    const double span = (*b - *a) / *s;
    if (span > 1e5) throw bad("too many points");
    const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double v = *a + static_cast<double>(k) * *s;
      grid[k] = v == 0.0 ? 0.0 : v;
    }
    return grid;
  }
  std::vector<double> grid;
  for (auto part : split(text, ',')) {
    const auto v = to_double(part);
    if (!v || !std::isfinite(*v)) throw bad("not a number");
    grid.push_back(*v);
  }
  return grid;
}

std::vector<engine::SimConfig> build_configs(std::span<const Assignment> assignments,
                                             std::string_view source_view,
                                             const Overrides& overrides) {
  const std::string source(source_view);
  const Reader r(assignments, source);

  if (r.has("preset")) {
    for (const auto& [key, a] : r.all()) {
      if (std::find(std::begin(kPresetCompatible), std::end(kPresetCompatible), key) ==
          std::end(kPresetCompatible)) {
        r.fail(a, "cannot be combined with preset");
      }
    }
    const auto& a = r.get("preset");
    if (a.value == "custom") r.fail(a, "custom is implied by giving keys without a preset");
    auto preset = expand_preset(a.value);
    if (!preset) r.fail(a, "unknown preset '" + a.value + "'");
    for (auto& cfg : preset->configs) {
      apply(cfg, r, overrides);
      check(cfg, source);
    }
    return std::move(preset->configs);
  }

  if (!r.has("scheme")) throw ParseError(source, 0, "scheme", "missing");
  if (!r.has("snr")) throw ParseError(source, 0, "snr", "missing");

  const auto& scheme_a = r.get("scheme");
  const auto scheme = parse_scheme(scheme_a.value);
  if (!scheme) r.fail(scheme_a, "unknown scheme '" + scheme_a.value + "'");

  std::vector<double> grid;
  try {
    grid = parse_grid(r.get("snr").value);
  } catch (const std::invalid_argument& e) {
    r.fail(r.get("snr"), e.what());
  }

  std::vector<std::size_t> ns{64};
  if (*scheme == SchemeKind::traditional_ssk) {
    if (r.has("N")) r.fail(r.get("N"), "traditional SSK has no reflectors");
    ns = {0};
  } else if (r.has("N")) {
    ns = r.count_list("N");
  }
  const std::vector<std::size_t> nts = r.has("Nt") ? r.count_list("Nt") : std::vector<std::size_t>{2};
  const std::vector<std::size_t> nrs = r.has("Nr") ? r.count_list("Nr") : std::vector<std::size_t>{1};
  const std::vector<std::optional<double>> kappas =
      r.has("kappa") ? r.kappa_list() : std::vector<std::optional<double>>{std::nullopt};

  const bool budget = std::any_of(std::begin(kBudgetKeys), std::end(kBudgetKeys),
                                  [&](std::string_view k) { return r.has(k); });
  std::vector<std::optional<double>> ds{std::nullopt};
  channel::LinkBudget base;
  if (budget) {
    if (r.has("variance")) r.fail(r.get("variance"), "conflicts with the path-loss keys");
    if (!r.has("d1")) throw ParseError(source, 0, "d1", "required by the path-loss keys");
    if (!r.has("d") && !r.has("d2")) throw ParseError(source, 0, "d", "d or d2 is required");
    if (r.has("d") && r.has("d2")) r.fail(r.get("d2"), "give d or d2, not both");
    base.d1_m = r.number("d1");
    if (r.has("carrier_freq")) {
      base.carrier_freq_hz = r.number("carrier_freq");
      base.wavelength_m = channel::kSpeedOfLight / base.carrier_freq_hz;
    }
    if (r.has("wavelength")) {
      base.wavelength_m = r.number("wavelength");
      if (!r.has("carrier_freq")) base.carrier_freq_hz = channel::kSpeedOfLight / base.wavelength_m;
    }
    base.element_spacing_m = r.has("spacing") ? r.number("spacing") : base.wavelength_m / 2.0;
    if (r.has("path_loss_mode")) {
      const auto& a = r.get("path_loss_mode");
      const auto mode = channel::parse_path_loss_mode(a.value);
      if (!mode) r.fail(a, "expected literal_paper or physical");
      base.mode = *mode;
    }
    if (r.has("d")) {
      ds.clear();
      for (double d : r.number_list("d")) ds.emplace_back(d);
    } else {
      ds = {base.d1_m + r.number("d2")};
    }
  }

  engine::SimConfig proto;
  proto.scheme = *scheme;
  proto.snr_grid_db = grid;
  if (r.has("variance")) proto.variance = r.number("variance");
  apply(proto, r, overrides);

  std::vector<engine::SimConfig> out;
  for (std::size_t n : ns) {
    for (std::size_t nt : nts) {
      for (std::size_t nr : nrs) {
        for (const auto& kappa : kappas) {
          for (const auto& d : ds) {
            engine::SimConfig cfg = proto;
            cfg.reflectors = n;
            cfg.tx_antennas = nt;
            cfg.rx_antennas = nr;
            cfg.kappa = kappa;
            if (d) {
              channel::LinkBudget b = base;
              b.d_m = *d;
              b.d2_m = *d - b.d1_m;
              b.reflectors = n;
              cfg.link_budget = b;
            }
            check(cfg, source);
            out.push_back(std::move(cfg));
          }
        }
      }
    }
  }
  return out;
}

std::vector<engine::SimConfig> parse_config_text(std::string_view text, std::string_view source,
                                                 const Overrides& overrides) {
  const auto assignments = tokenize(text, source);
  return build_configs(assignments, source, overrides);
}

std::vector<engine::SimConfig> parse_config_file(const std::filesystem::path& path,
                                                 const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string(), overrides);
}

}  // namespace risssk::cli
