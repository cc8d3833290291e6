#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "risssk/scheme.hpp"

namespace risssk::analytics {

/// Mean and variance of the decision statistic B = G_i - G_q of the
/// intelligent scheme under the central-limit approximation.
struct CltMoments {
  double mu_B;
  double var_B;
};

CltMoments clt_moments(std::size_t reflectors);

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// MGF of the non-central chi-square variable |B|^2:
/// (1 - var t)^{-1/2} exp(mu^2 t / (1 - var t)). Throws DomainError when
/// 1 - var t <= 0.
double mgf_noncentral(double t, const CltMoments& m);
double log_mgf_noncentral(double t, const CltMoments& m);

// All APEP functions take snr = E/N0 as a linear ratio at unit path variance;
// scale snr by sigma^2 to account for path loss.

/// (1/pi) int_0^{pi/2} M(-snr / (4 sin^2 eta)) d eta, evaluated in log space.
/// Propagates numerics::NonConvergence.
double apep_intelligent_exact(std::size_t reflectors, double snr);
double log_apep_intelligent_exact(std::size_t reflectors, double snr);

/// The integrand at sin eta = 1, halved. Upper bound on the exact value.
double apep_intelligent_upper(std::size_t reflectors, double snr);

/// exp(-N^2 pi^2 snr / 64). Proportional to the APEP for N snr << 3; not a
/// probability.
double apep_intelligent_lowsnr(std::size_t reflectors, double snr);

/// High-SNR form (N snr (32 - pi^2) / 16)^{-1/2} exp(-N pi^2 / (32 - pi^2)).
double apep_intelligent_asymptotic(std::size_t reflectors, double snr);

/// 1/2 (1 - sqrt(N snr / (2 + N snr))).
double apep_blind(std::size_t reflectors, double snr);

/// min(1, (N_t / 2) apep); exact for N_t = 2.
double aber_union_bound(double apep, std::size_t tx_antennas);

/// Pairwise error probability of SSK without an RIS over Rayleigh fading,
/// with gamma = snr sigma^2 / 2 per branch and maximal-ratio diversity across
/// rx_antennas branches. Reduces to 1/2 (1 - sqrt(gamma / (1 + gamma))) for
/// a single receive antenna.
double aber_traditional(double snr, double variance, std::size_t rx_antennas = 1);

struct ComplexityReport {
  unsigned long long multiplications;
  unsigned long long summations;
  bool operator==(const ComplexityReport&) const = default;
};

/// Real-valued operation counts of one ML decision metric.
ComplexityReport complexity(SchemeKind scheme, std::size_t reflectors);

enum class Expression {
  exact_mgf,
  upper_bound,
  asymptotic,
  lowsnr_proportional,
  blind_closed_form,
  traditional_closed_form,
};

std::string_view to_string(Expression e) noexcept;
std::optional<Expression> parse_expression(std::string_view name) noexcept;

struct CurvePoint {
  double snr_db;
  double aber;
  bool operator==(const CurvePoint&) const = default;
};

struct AnalyticCurve {
  Expression expression;
  std::vector<CurvePoint> points;
  bool operator==(const AnalyticCurve&) const = default;
};

struct CurveSpec {
  Expression expression;
  std::size_t reflectors = 1;
  std::size_t tx_antennas = 2;
  std::size_t rx_antennas = 1;
  double variance = 1.0;
};

/// Evaluates one expression over a strictly increasing dB grid, applying the
/// N_t union bound. Throws std::invalid_argument for lowsnr_proportional (not
/// an error probability), a blind curve with N_r > 1, or a non-increasing
/// grid.
AnalyticCurve make_curve(const CurveSpec& spec, std::span<const double> snr_grid_db);

/// Expressions with a defined ABER curve for a scheme.
std::vector<Expression> curves_for(SchemeKind scheme, std::size_t rx_antennas);

double from_db(double db) noexcept;
double to_db(double linear) noexcept;

}  // namespace risssk::analytics
