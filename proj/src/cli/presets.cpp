#include "risssk/cli/presets.hpp"

#include <cmath>

#include "risssk/channel.hpp"

namespace risssk::cli {

namespace {

using engine::SimConfig;

std::vector<double> grid(double start, double stop, double step = 2.0) {
  std::vector<double> g;
  for (int k = 0;; ++k) {
    const double v = start + k * step;
    if (v > stop + 1e-9) break;
    g.push_back(v == 0.0 ? 0.0 : v);
  }
  return g;
}

// Nearest even dB, so shifted grids stay on the 2 dB lattice.
double even_db(double db) { return 2.0 * std::round(db / 2.0); }

std::vector<double> shifted(std::vector<double> g, double shift) {
  for (double& v : g) {
    v += shift;
    if (v == 0.0) v = 0.0;
  }
  return g;
}

SimConfig intelligent(std::size_t n, std::size_t nt, std::vector<double> snr) {
  SimConfig c;
  c.scheme = SchemeKind::intelligent_ris_ssk;
  c.reflectors = n;
  c.tx_antennas = nt;
  c.rx_antennas = 1;
  c.snr_grid_db = std::move(snr);
  return c;
}

SimConfig blind(std::size_t n, std::size_t nr, std::vector<double> snr) {
  SimConfig c;
  c.scheme = SchemeKind::blind_ris_ssk;
  c.reflectors = n;
  c.tx_antennas = 2;
  c.rx_antennas = nr;
  c.snr_grid_db = std::move(snr);
  return c;
}

SimConfig traditional(std::size_t nr, std::vector<double> snr) {
  SimConfig c;
  c.scheme = SchemeKind::traditional_ssk;
  c.reflectors = 0;
  c.tx_antennas = 2;
  c.rx_antennas = nr;
  c.snr_grid_db = std::move(snr);
  return c;
}

std::vector<double> traditional_grid() { return grid(0, 40); }
std::vector<double> blind_grid() { return grid(-10, 30); }

channel::LinkBudget mmwave(std::size_t n, double d) {
  channel::LinkBudget b;
  b.carrier_freq_hz = 28e9;
  b.wavelength_m = 0.01;
  b.d1_m = 0.6;
  b.d2_m = d - 0.6;
  b.d_m = d;
  b.reflectors = n;
  b.element_spacing_m = 0.005;
  b.mode = channel::PathLossMode::literal_paper;
  return b;
}

std::vector<SimConfig> fig2() {
  std::vector<SimConfig> out;
  for (std::size_t n : {8, 16, 32, 64, 128, 256}) out.push_back(intelligent(n, 2, intelligent_grid(n)));
  return out;
}

std::vector<SimConfig> fig3() {
  std::vector<SimConfig> out;
  for (std::size_t n : {16, 32, 64}) out.push_back(intelligent(n, 2, intelligent_grid(n)));
  for (std::size_t nt : {4, 64}) out.push_back(intelligent(64, nt, intelligent_grid(64, 4.0)));
  out.push_back(traditional(1, traditional_grid()));
  return out;
}

std::vector<SimConfig> fig4_left() {
  std::vector<SimConfig> out;
  for (std::size_t n : {16, 32, 64}) out.push_back(blind(n, 1, blind_grid()));
  out.push_back(traditional(1, traditional_grid()));
  return out;
}

std::vector<SimConfig> fig4_right() {
  std::vector<SimConfig> out;
  for (std::size_t nr : {1, 2, 4}) out.push_back(blind(32, nr, blind_grid()));
  for (std::size_t nr : {1, 2, 4}) out.push_back(traditional(nr, traditional_grid()));
  return out;
}

std::vector<SimConfig> fig5() {
  std::vector<SimConfig> out;
  for (double d : {10.0, 20.0, 30.0}) {
    for (std::size_t n : {128, 256, 512}) {
      SimConfig c = intelligent(n, 2, {});
      c.link_budget = mmwave(n, d);
      const double loss = -analytics::to_db(channel::path_loss_variance(*c.link_budget, c.scheme));
      c.snr_grid_db = shifted(intelligent_grid(n), even_db(loss));
      out.push_back(std::move(c));
    }
    SimConfig t = traditional(1, {});
    t.link_budget = mmwave(0, d);
    const double loss = -analytics::to_db(channel::path_loss_variance(*t.link_budget, t.scheme));
    t.snr_grid_db = shifted(traditional_grid(), even_db(loss));
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<SimConfig> fig6() {
  std::vector<SimConfig> out;
  for (std::optional<double> kappa : {std::optional<double>(2.0), std::optional<double>(5.0),
                                      std::optional<double>()}) {
    for (std::size_t n : {32, 64, 128, 256}) {
      SimConfig c = intelligent(n, 2, intelligent_grid(n, 6.0));
      c.kappa = kappa;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

std::vector<double> intelligent_grid(std::size_t reflectors, double extra_high_db) {
  const double shift = even_db(20.0 * std::log10(64.0 / static_cast<double>(reflectors)));
  return grid(-34.0 + shift, -14.0 + shift + extra_high_db);
}

std::vector<std::string_view> preset_names() {
  return {"fig2", "fig3", "fig4_left", "fig4_right", "fig5", "fig6"};
}

std::optional<Preset> expand_preset(std::string_view name) {
  std::vector<SimConfig> configs;
  if (name == "fig2") configs = fig2();
  else if (name == "fig3") configs = fig3();
  else if (name == "fig4_left") configs = fig4_left();
  else if (name == "fig4_right") configs = fig4_right();
  else if (name == "fig5") configs = fig5();
  else if (name == "fig6") configs = fig6();
  else return std::nullopt;
  return Preset{std::string(name), std::move(configs)};
}

}  // namespace risssk::cli
