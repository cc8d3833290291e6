#include <algorithm>
#include <cmath>
#include <numbers>

#include "risssk/analytics.hpp"
#include "risssk/numerics.hpp"

namespace risssk::analytics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

void require_positive_snr(double snr) {
  if (!(snr >= 0.0) || std::isnan(snr)) throw std::invalid_argument("snr must be >= 0");
}

void require_reflectors(std::size_t n) {
  if (n < 1) throw std::invalid_argument("reflector count N must be >= 1");
}

}  // namespace

CltMoments clt_moments(std::size_t reflectors) {
  require_reflectors(reflectors);
  const double n = static_cast<double>(reflectors);
  return {n * kPi / 4.0, n * (32.0 - kPi2) / 16.0};
}

double log_mgf_noncentral(double t, const CltMoments& m) {
  const double d = 1.0 - m.var_B * t;
  if (!(d > 0.0)) throw DomainError("MGF undefined: 1 - var_B t <= 0");
  return -0.5 * std::log(d) + m.mu_B * m.mu_B * t / d;
}

double mgf_noncentral(double t, const CltMoments& m) { return std::exp(log_mgf_noncentral(t, m)); }

double log_apep_intelligent_exact(std::size_t reflectors, double snr) {
  require_positive_snr(snr);
  const CltMoments m = clt_moments(reflectors);
  if (snr == 0.0) return std::log(0.5);
  // The integrand rises monotonically to its peak at eta = pi/2; integrate it
  // relative to that peak. At low snr it drops to zero in a thin layer near
  // eta = 0, so the range is split into dyadic pieces shrinking toward 0.
  const double peak = log_mgf_noncentral(-snr / 4.0, m);
  auto f = [&](double eta) {
    const double s = std::sin(eta);
    return std::exp(log_mgf_noncentral(-snr / (4.0 * s * s), m) - peak);
  };
  double scaled = 0.0;
  double hi = kPi / 2.0;
  for (int piece = 0; piece < 200; ++piece) {
    const double lo = hi / 2.0;
    scaled += numerics::integrate(f, lo, hi, 1e-10);
    hi = lo;
    if (hi * f(hi) <= 1e-12 * scaled) break;
  }
  return peak + std::log(scaled / kPi);
}

double apep_intelligent_exact(std::size_t reflectors, double snr) {
  return std::exp(log_apep_intelligent_exact(reflectors, snr));
}

double apep_intelligent_upper(std::size_t reflectors, double snr) {
  require_positive_snr(snr);
  return 0.5 * mgf_noncentral(-snr / 4.0, clt_moments(reflectors));
}

double apep_intelligent_lowsnr(std::size_t reflectors, double snr) {
  require_positive_snr(snr);
  require_reflectors(reflectors);
  const double n = static_cast<double>(reflectors);
  return std::exp(-n * n * kPi2 * snr / 64.0);
}

double apep_intelligent_asymptotic(std::size_t reflectors, double snr) {
  require_positive_snr(snr);
  require_reflectors(reflectors);
  const double n = static_cast<double>(reflectors);
  const double c = 32.0 - kPi2;
  return std::exp(-0.5 * std::log(n * snr * c / 16.0) - n * kPi2 / c);
}

double apep_blind(std::size_t reflectors, double snr) {
  require_positive_snr(snr);
  require_reflectors(reflectors);
  const double x = static_cast<double>(reflectors) * snr;
  // 1 - sqrt(x/(2+x)) = (2/(2+x)) / (1 + sqrt(x/(2+x))), no cancellation
  return (1.0 / (2.0 + x)) / (1.0 + std::sqrt(x / (2.0 + x)));
}

double aber_union_bound(double apep, std::size_t tx_antennas) {
  if (tx_antennas < 2 || (tx_antennas & (tx_antennas - 1)) != 0) {
    throw std::invalid_argument("N_t must be a power of two >= 2");
  }
  return std::min(1.0, static_cast<double>(tx_antennas) / 2.0 * apep);
}

double aber_traditional(double snr, double variance, std::size_t rx_antennas) {
  require_positive_snr(snr);
  if (!(variance > 0.0)) throw std::invalid_argument("variance must be positive");
  if (rx_antennas < 1) throw std::invalid_argument("N_r must be >= 1");
  const double gamma = snr * variance / 2.0;
  const double mu = std::sqrt(gamma / (1.0 + gamma));
  const double lo = 0.5 / (1.0 + gamma) / (1.0 + mu);  // (1 - mu) / 2 without cancellation
  const double hi = (1.0 + mu) / 2.0;
  double sum = 0.0, binom = 1.0, hi_pow = 1.0;
  const std::size_t l = rx_antennas;
  for (std::size_t k = 0; k < l; ++k) {
    sum += binom * hi_pow;
    binom = binom * static_cast<double>(l + k) / static_cast<double>(k + 1);
    hi_pow *= hi;
  }
  return std::pow(lo, static_cast<double>(l)) * sum;
}

ComplexityReport complexity(SchemeKind scheme, std::size_t reflectors) {
  require_reflectors(reflectors);
  const auto n = static_cast<unsigned long long>(reflectors);
  switch (scheme) {
    case SchemeKind::traditional_ssk: return {4, 4};
    case SchemeKind::blind_ris_ssk: return {4 * n + 4, 3 * n + 2};
    case SchemeKind::intelligent_ris_ssk: return {n + 3, n + 1};
  }
  return {0, 0};
}

std::string_view to_string(Expression e) noexcept {
  switch (e) {
    case Expression::exact_mgf: return "exact_mgf";
    case Expression::upper_bound: return "upper_bound";
    case Expression::asymptotic: return "asymptotic";
    case Expression::lowsnr_proportional: return "lowsnr_proportional";
    case Expression::blind_closed_form: return "blind_closed_form";
    case Expression::traditional_closed_form: return "traditional_closed_form";
  }
  return "?";
}

std::optional<Expression> parse_expression(std::string_view name) noexcept {
  for (Expression e : {Expression::exact_mgf, Expression::upper_bound, Expression::asymptotic,
                       Expression::lowsnr_proportional, Expression::blind_closed_form,
                       Expression::traditional_closed_form}) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

double from_db(double db) noexcept { return std::pow(10.0, db / 10.0); }
double to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

AnalyticCurve make_curve(const CurveSpec& spec, std::span<const double> grid) {
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("SNR grid must be strictly increasing");
  }
  if (!(spec.variance > 0.0)) throw std::invalid_argument("variance must be positive");
  if (spec.expression == Expression::lowsnr_proportional) {
    throw std::invalid_argument("lowsnr_proportional is not an error probability");
  }
  if (spec.expression == Expression::blind_closed_form && spec.rx_antennas != 1) {
    throw std::invalid_argument("blind closed form covers a single receive antenna");
  }
  AnalyticCurve curve{spec.expression, {}};
  curve.points.reserve(grid.size());
  for (double db : grid) {
    const double snr = from_db(db);
    const double eff = snr * spec.variance;
    double apep = 0.0;
    switch (spec.expression) {
      case Expression::exact_mgf: apep = apep_intelligent_exact(spec.reflectors, eff); break;
      case Expression::upper_bound: apep = apep_intelligent_upper(spec.reflectors, eff); break;
      case Expression::asymptotic: apep = apep_intelligent_asymptotic(spec.reflectors, eff); break;
      case Expression::blind_closed_form: apep = apep_blind(spec.reflectors, eff); break;
      case Expression::traditional_closed_form:
        apep = aber_traditional(snr, spec.variance, spec.rx_antennas);
        break;
      case Expression::lowsnr_proportional: break;
    }
    curve.points.push_back({db, aber_union_bound(apep, spec.tx_antennas)});
  }
  return curve;
}

std::vector<Expression> curves_for(SchemeKind scheme, std::size_t rx_antennas) {
  switch (scheme) {
    case SchemeKind::intelligent_ris_ssk:
      return {Expression::exact_mgf, Expression::upper_bound, Expression::asymptotic};
    case SchemeKind::blind_ris_ssk:
      if (rx_antennas == 1) return {Expression::blind_closed_form};
      return {};
    case SchemeKind::traditional_ssk: return {Expression::traditional_closed_form};
  }
  return {};
}

}  // namespace risssk::analytics
