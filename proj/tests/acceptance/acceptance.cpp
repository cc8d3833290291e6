// Acceptance checks. One PASS/FAIL line per criterion on stdout; per-point
// detail goes to stderr.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "risssk/analytics.hpp"
#include "risssk/channel.hpp"
#include "risssk/cli/presets.hpp"
#include "risssk/cli/results.hpp"
#include "risssk/engine.hpp"
#include "risssk/numerics.hpp"

namespace {

using namespace risssk;
using analytics::Expression;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note(const std::string& s) { std::fprintf(stderr, "    %s\n", s.c_str()); }

engine::RunOptions run_options() {
  engine::RunOptions o;
  o.workers = std::max(1u, std::thread::hardware_concurrency());
  return o;
}

// Largest miss count k with P(Binomial(n, 0.05) > k) > 0.01: the number of
// 95% intervals that may exclude the truth by chance alone.
int allowed_misses(int n) {
  const double p = 0.05;
  double pmf = std::pow(1.0 - p, n), cdf = pmf;
  int k = 0;
  while (1.0 - cdf > 0.01 && k < n) {
    pmf *= static_cast<double>(n - k) / (k + 1) * p / (1.0 - p);
    ++k;
    cdf += pmf;
  }
  return k;
}

// Coverage verdict for a set of sim-vs-analytic points. Misses of a 95%
// interval are tolerated up to the chance allowance; a point beyond the
// 99.9% interval (|z| > 3.29) is a definite disagreement.
struct Coverage {
  int points = 0, misses = 0, definite = 0;

  bool add(const engine::BerEstimate& e, double analytic) {
    ++points;
    const double se = e.ci95_halfwidth / 1.96;
    const double z = se > 0.0 ? std::abs(e.aber - analytic) / se : INFINITY;
    const bool in = !e.unreliable && z <= 1.96;
    if (!in) ++misses;
    if (e.unreliable || z > 3.29) ++definite;
    return in;
  }
  bool pass() const { return definite == 0 && misses <= allowed_misses(points); }
  std::string summary() const {
    return fmt("%d/%d points outside 95%% CI (chance allowance %d), %d beyond 99.9%%", misses, points,
               allowed_misses(points), definite);
  }
};

std::vector<double> fine_grid(double lo, double hi, double step = 0.05) {
  std::vector<double> g;
  for (int k = 0; lo + k * step <= hi + 1e-9; ++k) g.push_back(lo + k * step);
  return g;
}

double analytic_crossing(const analytics::CurveSpec& spec, double lo, double hi, double target) {
  const auto curve = analytics::make_curve(spec, fine_grid(lo, hi));
  return engine::snr_at_target(curve.points, target);
}

engine::SimConfig base(SchemeKind scheme, std::size_t n, std::uint64_t seed) {
  engine::SimConfig c;
  c.scheme = scheme;
  c.reflectors = scheme == SchemeKind::traditional_ssk ? 0 : n;
  c.seed = seed;
  return c;
}

// Walks up a 1 dB grid from start until the simulated ABER drops below
// target, then interpolates the crossing.
double simulated_crossing(engine::SimConfig cfg, double start_db, double target,
                          std::uint64_t min_errors, const char* label) {
  cfg.stopping.min_bit_errors = min_errors;
  cfg.stopping.max_trials = static_cast<std::uint64_t>(50.0 * min_errors / target);
  const auto opt = run_options();
  std::vector<engine::BerEstimate> pts;
  double db = start_db;
  for (int k = 0; k < 40; ++k, db += 1.0) {
    cfg.snr_grid_db = {db};
    const auto e = engine::run_point(cfg, db, opt);
    note(fmt("%s snr=%g aber=%.4g errors=%llu trials=%llu", label, db, e.aber,
             (unsigned long long)e.bit_errors, (unsigned long long)e.trials));
    if (pts.empty() && e.aber < target) {
      db -= 4.0;  // started below target; back off
      continue;
    }
    pts.push_back(e);
    if (e.aber < target) break;
  }
  return engine::snr_at_target(engine::as_curve(pts), target);
}

// 1. Intelligent simulation vs the exact CLT curve.
Outcome ac1() {
  Coverage cov;
  std::string worst;
  for (std::size_t n : {32u, 64u}) {
    const auto grid = cli::intelligent_grid(n);
    const auto ana = analytics::make_curve({Expression::exact_mgf, n, 2, 1, 1.0}, grid);
    engine::SimConfig cfg = base(SchemeKind::intelligent_ris_ssk, n, 1001 + n);
    for (const auto& p : ana.points) {
      if (p.aber < 1e-6) continue;
      cfg.snr_grid_db = {p.snr_db};
      cfg.stopping.min_bit_errors = 200;
      cfg.stopping.max_trials = static_cast<std::uint64_t>(std::min(4e9, 4000.0 / p.aber));
      const auto e = engine::run_point(cfg, p.snr_db, run_options());
      const bool ok = cov.add(e, p.aber);
      if (!ok) worst = fmt("N=%zu %gdB sim/ana=%.3f", n, p.snr_db, e.aber / p.aber);
      note(fmt("N=%zu snr=%g analytic=%.4g sim=%.4g ci95=%.3g errors=%llu %s", n, p.snr_db, p.aber,
               e.aber, e.ci95_halfwidth, (unsigned long long)e.bit_errors, ok ? "in" : "OUT"));
    }
  }
  return {cov.pass(), cov.summary() + (worst.empty() ? "" : "; deepest miss " + worst)};
}

// 2. Blind simulation vs the closed form.
Outcome ac2() {
  Coverage cov;
  for (std::size_t n : {16u, 32u}) {
    engine::SimConfig cfg = base(SchemeKind::blind_ris_ssk, n, 2002 + n);
    cfg.snr_grid_db = cli::expand_preset("fig4_left")->configs.front().snr_grid_db;
    const auto r = engine::run_sweep(cfg, run_options());
    const auto& ana = r.analytic.front().points;
    for (std::size_t k = 0; k < r.simulated.size(); ++k) {
      const auto& e = r.simulated[k];
      const bool ok = cov.add(e, ana[k].aber);
      note(fmt("N=%zu snr=%g analytic=%.4g sim=%.4g ci95=%.3g %s", n, e.snr_db, ana[k].aber, e.aber,
               e.ci95_halfwidth, ok ? "in" : "OUT"));
    }
  }
  return {cov.pass(), cov.summary()};
}

// 3. Doubling N from 64 to 128 at ABER 1e-4.
Outcome ac3() {
  const double a64 = analytic_crossing({Expression::exact_mgf, 64, 2, 1, 1.0}, -30, -10, 1e-4);
  const double a128 = analytic_crossing({Expression::exact_mgf, 128, 2, 1, 1.0}, -36, -16, 1e-4);
  const double gap_a = a64 - a128;
  const double s64 = simulated_crossing(base(SchemeKind::intelligent_ris_ssk, 64, 3003),
                                        std::floor(a64) - 1, 1e-4, 300, "N=64");
  const double s128 = simulated_crossing(base(SchemeKind::intelligent_ris_ssk, 128, 3004),
                                         std::floor(a128) - 1, 1e-4, 300, "N=128");
  const double gap_s = s64 - s128;
  const bool pass = std::abs(gap_a - 6.0) <= 0.5 && std::abs(gap_s - 6.0) <= 1.0;
  return {pass, fmt("analytic gap %.2f dB (%.2f vs %.2f), simulated gap %.2f dB (%.2f vs %.2f)",
                    gap_a, a64, a128, gap_s, s64, s128)};
}

// 4. Intelligent N=16 vs traditional SSK at 1e-3.
Outcome ac4() {
  const double ai = analytic_crossing({Expression::exact_mgf, 16, 2, 1, 1.0}, -20, 10, 1e-3);
  const double at = analytic_crossing({Expression::traditional_closed_form, 1, 2, 1, 1.0}, 10, 40, 1e-3);
  const double si = simulated_crossing(base(SchemeKind::intelligent_ris_ssk, 16, 4004),
                                       std::floor(ai) - 1, 1e-3, 300, "intelligent N=16");
  const double st = simulated_crossing(base(SchemeKind::traditional_ssk, 0, 4005),
                                       std::floor(at) - 1, 1e-3, 300, "traditional");
  const double gap_a = at - ai, gap_s = st - si;
  const bool pass = std::abs(gap_a - 30.0) <= 2.0 && std::abs(gap_s - 30.0) <= 3.0;
  return {pass, fmt("analytic gap %.2f dB, simulated gap %.2f dB", gap_a, gap_s)};
}

// 5. Blind N=16 vs traditional SSK at 1e-3.
Outcome ac5() {
  const double ab = analytic_crossing({Expression::blind_closed_form, 16, 2, 1, 1.0}, 0, 30, 1e-3);
  const double at = analytic_crossing({Expression::traditional_closed_form, 1, 2, 1, 1.0}, 10, 40, 1e-3);
  const double sb = simulated_crossing(base(SchemeKind::blind_ris_ssk, 16, 5005), std::floor(ab) - 1,
                                       1e-3, 300, "blind N=16");
  const double st = simulated_crossing(base(SchemeKind::traditional_ssk, 0, 5006),
                                       std::floor(at) - 1, 1e-3, 300, "traditional");
  const double gap_a = at - ab, gap_s = st - sb;
  const bool pass = std::abs(gap_a - 12.0) <= 1.5 && std::abs(gap_s - 12.0) <= 2.5;
  return {pass, fmt("analytic gap %.2f dB, simulated gap %.2f dB", gap_a, gap_s)};
}

// 6. Phase-error loss at N=128, ABER 1e-4.
Outcome ac6() {
  auto cfg = [](std::optional<double> kappa) {
    engine::SimConfig c = base(SchemeKind::intelligent_ris_ssk, 128, 6006);
    c.kappa = kappa;
    return c;
  };
  const double perfect = simulated_crossing(cfg(std::nullopt), -27, 1e-4, 300, "perfect");
  const double k5 = simulated_crossing(cfg(5.0), std::floor(perfect), 1e-4, 300, "kappa=5");
  const double k2 = simulated_crossing(cfg(2.0), std::floor(perfect) + 2, 1e-4, 300, "kappa=2");
  const double g2 = k2 - perfect, g5 = k5 - perfect;
  const bool pass = std::abs(g2 - 3.0) <= 1.0 && std::abs(g5 - 1.0) <= 0.5;
  return {pass, fmt("kappa=2 gap %.2f dB, kappa=5 gap %.2f dB (perfect crosses at %.2f dB)", g2, g5,
                    perfect)};
}

// 7. Exact <= upper bound; upper/asymptotic within 1% where N snr (32 - pi^2)/64 > 100.
Outcome ac7() {
  std::mt19937_64 gen(7007);
  std::uniform_int_distribution<std::size_t> pick_n(32, 512);
  std::uniform_real_distribution<double> pick_db(-40.0, 40.0);
  const double c = 32.0 - std::numbers::pi * std::numbers::pi;
  int order_fail = 0, regime = 0, ratio_fail = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = pick_n(gen);
    const double snr = analytics::from_db(pick_db(gen));
    const double exact = analytics::apep_intelligent_exact(n, snr);
    const double upper = analytics::apep_intelligent_upper(n, snr);
    if (!(exact <= upper)) {
      ++order_fail;
      note(fmt("order violated N=%zu snr=%g exact=%g upper=%g", n, snr, exact, upper));
    }
    if (static_cast<double>(n) * snr * c / 64.0 > 100.0) {
      ++regime;
      const double dev = std::abs(upper / analytics::apep_intelligent_asymptotic(n, snr) - 1.0);
      worst = std::max(worst, dev);
      if (dev >= 0.01) {
        ++ratio_fail;
        note(fmt("ratio off by %.3g at N=%zu snr=%.2f dB", dev, n, analytics::to_db(snr)));
      }
    }
  }
  return {order_fail == 0 && ratio_fail == 0,
          fmt("ordering violations %d/100; asymptotic ratio outside 1%% at %d/%d pairs in regime "
              "(worst %.3g)",
              order_fail, ratio_fail, regime, worst)};
}

// 8. Sampled B and C moments at N = 256.
Outcome ac8() {
  constexpr std::size_t n = 256;
  constexpr int draws = 100000;
  numerics::RngStream rng(8008, 0);
  channel::ChannelState ch(n, 2, 1);
  double b_re = 0, b_im = 0, b_re2 = 0, b_im2 = 0, c_re = 0, c_im = 0, c_abs2 = 0;
  for (int t = 0; t < draws; ++t) {
    channel::redraw_channel(rng, 1.0, ch);
    std::complex<double> b{}, cc{};
    for (std::size_t l = 0; l < n; ++l) {
      const double dtheta = ch.theta(l, 1) - ch.theta(l, 0);
      b += ch.beta(l) * (ch.alpha(l, 0) - ch.alpha(l, 1) * std::polar(1.0, -dtheta));
      cc += ch.g(l) * (ch.h(l, 0) - ch.h(l, 1));
    }
    b_re += b.real();
    b_im += b.imag();
    b_re2 += b.real() * b.real();
    b_im2 += b.imag() * b.imag();
    c_re += cc.real();
    c_im += cc.imag();
    c_abs2 += std::norm(cc);
  }
  const double d = draws;
  const auto m = analytics::clt_moments(n);
  const double mean_re = b_re / d, mean_im = b_im / d;
  const double var_b = (b_re2 / d - mean_re * mean_re) + (b_im2 / d - mean_im * mean_im);
  const double mc_re = c_re / d, mc_im = c_im / d;
  const double var_c = c_abs2 / d - mc_re * mc_re - mc_im * mc_im;
  const double e_mean = std::abs(mean_re / m.mu_B - 1.0);
  const double e_im = std::abs(mean_im) / m.mu_B;
  const double e_var = std::abs(var_b / m.var_B - 1.0);
  const double e_c = std::abs(var_c / (2.0 * n) - 1.0);
  const bool pass = e_mean < 0.01 && e_im < 0.01 && e_var < 0.03 && e_c < 0.03;
  return {pass, fmt("Re mean %.4g vs %.4g, |Im mean|/mu %.2g, var %.4g vs %.4g, var C %.4g vs %d",
                    mean_re, m.mu_B, e_im, var_b, m.var_B, var_c, int(2 * n))};
}

// 9. Nt = 4 blind: simulated ABER under the union bound 2 apep.
Outcome ac9() {
  engine::SimConfig cfg = base(SchemeKind::blind_ris_ssk, 32, 9009);
  cfg.tx_antennas = 4;
  cfg.snr_grid_db = cli::expand_preset("fig4_left")->configs.front().snr_grid_db;
  const auto r = engine::run_sweep(cfg, run_options());
  int checked = 0, above = 0;
  double worst = 0.0;
  for (const auto& e : r.simulated) {
    if (e.bit_errors < 200) continue;
    ++checked;
    const double bound = 2.0 * analytics::apep_blind(32, analytics::from_db(e.snr_db));
    worst = std::max(worst, e.aber / bound);
    const bool ok = e.aber <= bound + e.ci95_halfwidth;
    above += !ok;
    note(fmt("snr=%g sim=%.4g ci95=%.3g bound=%.4g %s", e.snr_db, e.aber, e.ci95_halfwidth, bound,
             ok ? "ok" : "ABOVE"));
  }
  return {above == 0 && checked > 0,
          fmt("%d/%d points above 2*apep beyond CI; max sim/bound %.3f", above, checked, worst)};
}

// 10. Far-field boundaries at lambda = 0.01 m.
Outcome ac10() {
  std::string got;
  bool pass = true;
  const double expected[] = {0.64, 1.28, 2.56};
  int k = 0;
  for (std::size_t n : {128u, 256u, 512u}) {
    channel::LinkBudget b;
    b.carrier_freq_hz = 28e9;
    b.wavelength_m = 0.01;
    b.element_spacing_m = 0.005;
    b.d1_m = 0.6;
    b.d2_m = 9.4;
    b.d_m = 10.0;
    b.reflectors = n;
    const double v = channel::far_field_boundary(b);
    pass = pass && v == expected[k++];
    got += fmt("%s%g", got.empty() ? "" : ", ", v);
  }
  return {pass, "boundaries " + got + " m"};
}

// 11. Complexity table.
Outcome ac11() {
  bool pass = true;
  for (unsigned long long n : {1ull, 16ull, 64ull, 256ull}) {
    pass = pass && analytics::complexity(SchemeKind::traditional_ssk, n) ==
                       analytics::ComplexityReport{4, 4};
    pass = pass && analytics::complexity(SchemeKind::blind_ris_ssk, n) ==
                       analytics::ComplexityReport{4 * n + 4, 3 * n + 2};
    pass = pass && analytics::complexity(SchemeKind::intelligent_ris_ssk, n) ==
                       analytics::ComplexityReport{n + 3, n + 1};
  }
  const std::vector<std::size_t> ns{1, 16, 64, 256};
  const std::string csv = cli::complexity_csv(ns);
  pass = pass && csv.find("intelligent,64,65,67\n") != std::string::npos &&
         csv.find("blind,1,5,8\n") != std::string::npos;
  return {pass, "N in {1, 16, 64, 256}, three schemes"};
}

// 12. CSV bytes independent of the worker count.
Outcome ac12() {
  std::vector<engine::SimConfig> cfgs;
  engine::SimConfig a = base(SchemeKind::blind_ris_ssk, 16, 12012);
  a.snr_grid_db = {-10, -5, 0, 5, 10};
  a.stopping = {300, 200000};
  cfgs.push_back(a);
  engine::SimConfig b = base(SchemeKind::intelligent_ris_ssk, 64, 12013);
  b.snr_grid_db = {-26, -24, -22};
  b.kappa = 5.0;
  b.stopping = {300, 200000};
  cfgs.push_back(b);
  engine::SimConfig c = base(SchemeKind::traditional_ssk, 0, 12014);
  c.rx_antennas = 2;
  c.snr_grid_db = {0, 10, 20};
  c.stopping = {300, 200000};
  cfgs.push_back(c);
  auto csv = [&](unsigned workers) {
    engine::RunOptions o;
    o.workers = workers;
    std::vector<engine::SweepResult> rs;
    for (const auto& cfg : cfgs) rs.push_back(engine::run_sweep(cfg, o));
    return cli::to_csv(rs);
  };
  const std::string one = csv(1), eight = csv(8);
  return {one == eight, fmt("%zu bytes with 1 worker, %zu with 8, %s", one.size(), eight.size(),
                            one == eight ? "identical" : "DIFFERENT")};
}

struct Entry {
  int id;
  const char* title;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion,-c", selected, "Criterion numbers to run (default: all)")
      ->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Entry> all = {
      {1, "intelligent sim vs exact curve", ac1},
      {2, "blind sim vs closed form", ac2},
      {3, "6 dB per doubling of N", ac3},
      {4, "30 dB over traditional SSK (N=16)", ac4},
      {5, "12 dB blind gain over traditional SSK (N=16)", ac5},
      {6, "phase-error loss at N=128", ac6},
      {7, "bound ordering and asymptotic ratio", ac7},
      {8, "CLT moments of B and C", ac8},
      {9, "Nt=4 union bound", ac9},
      {10, "far-field boundaries", ac10},
      {11, "complexity table", ac11},
      {12, "worker-count determinism", ac12},
  };
  bool all_pass = true;
  for (const auto& e : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), e.id) == selected.end()) {
      continue;
    }
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    all_pass = all_pass && o.pass;
    std::printf("AC%-2d %s  %s: %s\n", e.id, o.pass ? "PASS" : "FAIL", e.title, o.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
