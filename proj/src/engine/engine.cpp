#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "risssk/engine.hpp"
#include "risssk/link.hpp"

namespace risssk::engine {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t point_key(std::uint64_t seed, double snr_db) noexcept {
  if (snr_db == 0.0) snr_db = 0.0;  // -0 and +0 share a key
  return splitmix64(seed ^ splitmix64(std::bit_cast<std::uint64_t>(snr_db)));
}

void validate(const SimConfig& cfg) {
  if (cfg.reflectors < 1 && uses_ris(cfg.scheme)) throw ConfigError("N must be >= 1");
  if (cfg.tx_antennas < 2 || !std::has_single_bit(cfg.tx_antennas)) {
    throw ConfigError("Nt must be a power of two >= 2");
  }
  if (cfg.tx_antennas > (std::size_t{1} << 20)) throw ConfigError("Nt is too large");
  if (cfg.rx_antennas < 1) throw ConfigError("Nr must be >= 1");
  if (cfg.scheme == SchemeKind::intelligent_ris_ssk && cfg.rx_antennas != 1) {
    throw ConfigError("intelligent RIS-SSK requires Nr = 1");
  }
  if (cfg.snr_grid_db.empty()) throw ConfigError("SNR grid is empty");
  for (std::size_t k = 0; k < cfg.snr_grid_db.size(); ++k) {
    if (!std::isfinite(cfg.snr_grid_db[k])) throw ConfigError("SNR grid values must be finite");
    if (k > 0 && !(cfg.snr_grid_db[k] > cfg.snr_grid_db[k - 1])) {
      throw ConfigError("SNR grid must be strictly increasing");
    }
  }
  if (cfg.kappa) {
    if (!(*cfg.kappa >= 0.0)) throw ConfigError("kappa must be >= 0");
    if (cfg.scheme != SchemeKind::intelligent_ris_ssk) {
      throw ConfigError("kappa applies to the intelligent scheme only");
    }
  }
  if (!(cfg.variance > 0.0) || !std::isfinite(cfg.variance)) {
    throw ConfigError("variance must be positive and finite");
  }
  if (cfg.link_budget) {
    try {
      channel::validate(*cfg.link_budget);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("link budget: ") + e.what());
    }
    if (uses_ris(cfg.scheme) && cfg.link_budget->reflectors != cfg.reflectors) {
      throw ConfigError("link budget reflector count differs from N");
    }
  }
  if (cfg.stopping.min_bit_errors < 1) throw ConfigError("min_bit_errors must be >= 1");
  if (cfg.stopping.max_trials < 1) throw ConfigError("max_trials must be >= 1");
}

double effective_variance(const SimConfig& cfg) {
  if (cfg.link_budget) return channel::path_loss_variance(*cfg.link_budget, cfg.scheme);
  return cfg.variance;
}

namespace {

struct Counts {
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
};

// Buffers reused across the trials of one worker.
class TrialRunner {
 public:
  TrialRunner(const SimConfig& cfg, double snr_db)
      : cfg_(cfg),
        key_(point_key(cfg.seed, snr_db)),
        energy_(analytics::from_db(snr_db)),
        noise_(cfg.noiseless ? 0.0 : 1.0),
        bits_mask_(cfg.tx_antennas - 1),
        refs_(cfg.tx_antennas * cfg.rx_antennas),
        y_(cfg.rx_antennas),
        noise_re_(cfg.rx_antennas),
        noise_im_(cfg.rx_antennas) {
    const double variance = effective_variance(cfg);
    if (cfg.scheme == SchemeKind::traditional_ssk) {
      direct_ = channel::DirectChannel(cfg.tx_antennas, cfg.rx_antennas);
      hop_variance_ = variance;
    } else {
      ris_ = channel::ChannelState(cfg.reflectors, cfg.tx_antennas, cfg.rx_antennas);
      hop_variance_ = std::sqrt(variance);
      phases_ = link::PhaseProfile(cfg.reflectors);
    }
    if (cfg.kappa) errors_ = link::PhaseErrorModel::von_mises(*cfg.kappa);
  }

  Counts run(std::uint64_t first_trial, std::uint64_t count) {
    Counts c;
    for (std::uint64_t t = first_trial; t < first_trial + count; ++t) {
      c.bit_errors += trial(t);
      ++c.trials;
    }
    return c;
  }

 private:
  unsigned trial(std::uint64_t index) {
    numerics::RngStream rng(key_, index);
    const std::size_t sent = static_cast<std::size_t>(rng.next_u64() & bits_mask_);
    const std::size_t nr = cfg_.rx_antennas;
    switch (cfg_.scheme) {
      case SchemeKind::intelligent_ris_ssk:
        channel::redraw_channel(rng, hop_variance_, ris_);
        link::intelligent_phases_into(ris_, sent, errors_, rng, scratch_, phases_);
        link::cascaded_references(ris_, phases_, refs_);
        break;
      case SchemeKind::blind_ris_ssk:
        channel::redraw_channel(rng, hop_variance_, ris_);
        for (std::size_t q = 0; q < cfg_.tx_antennas; ++q) {
          for (std::size_t r = 0; r < nr; ++r) {
            refs_[q * nr + r] =
                kernels::product_sum(ris_.h_re(q), ris_.h_im(q), ris_.g_re(r), ris_.g_im(r));
          }
        }
        break;
      case SchemeKind::traditional_ssk:
        channel::redraw_direct_channel(rng, hop_variance_, direct_);
        for (std::size_t q = 0; q < cfg_.tx_antennas; ++q) {
          for (std::size_t r = 0; r < nr; ++r) refs_[q * nr + r] = direct_.h(q, r);
        }
        break;
    }
    const double amp = std::sqrt(energy_);
    for (std::size_t r = 0; r < nr; ++r) y_[r] = amp * refs_[sent * nr + r];
    if (noise_ > 0.0) {
      rng.complex_gaussian(noise_, noise_re_, noise_im_);
      for (std::size_t r = 0; r < nr; ++r) y_[r] += numerics::Complex(noise_re_[r], noise_im_[r]);
    }
    const std::size_t detected = link::ml_decide(y_, refs_, cfg_.tx_antennas, energy_);
    return link::bit_errors(sent, detected);
  }

  const SimConfig& cfg_;
  std::uint64_t key_;
  double energy_;
  double noise_;
  std::uint64_t bits_mask_;
  double hop_variance_ = 1.0;
  channel::ChannelState ris_;
  channel::DirectChannel direct_;
  link::PhaseProfile phases_;
  link::PhaseScratch scratch_;
  link::PhaseErrorModel errors_;
  std::vector<numerics::Complex> refs_, y_;
  std::vector<double> noise_re_, noise_im_;
};

// Ordered reduction over chunk results; decides where the run stops.
class ChunkLedger {
 public:
  ChunkLedger(const StoppingRule& rule, std::uint64_t chunk_trials)
      : rule_(rule), chunk_(chunk_trials) {
    last_chunk_ = (rule.max_trials - 1) / chunk_trials;
  }

  std::uint64_t chunk_count_limit() const noexcept { return limit_.load(); }
  std::uint64_t last_chunk() const noexcept { return last_chunk_; }
  std::uint64_t chunk_trials() const noexcept { return chunk_; }

  std::uint64_t trials_in(std::uint64_t chunk) const noexcept {
    const std::uint64_t start = chunk * chunk_;
    return std::min(chunk_, rule_.max_trials - start);
  }

  void record(std::uint64_t chunk, Counts counts) {
    std::lock_guard lock(mutex_);
    if (chunk >= results_.size()) results_.resize(chunk + 1);
    results_[chunk] = counts;
    while (!done_ && next_ < results_.size() && results_[next_]) {
      total_.trials += results_[next_]->trials;
      total_.bit_errors += results_[next_]->bit_errors;
      if (total_.bit_errors >= rule_.min_bit_errors || next_ == last_chunk_) {
        done_ = true;
        limit_.store(next_);
      }
      ++next_;
    }
  }

  Counts total() const {
    std::lock_guard lock(mutex_);
    return total_;
  }

 private:
  StoppingRule rule_;
  std::uint64_t chunk_;
  std::uint64_t last_chunk_;
  mutable std::mutex mutex_;
  std::vector<std::optional<Counts>> results_;
  std::uint64_t next_ = 0;
  bool done_ = false;
  Counts total_;
  std::atomic<std::uint64_t> limit_{UINT64_MAX};
};

}  // namespace

BerEstimate run_point(const SimConfig& cfg, double snr_db, const RunOptions& options) {
  validate(cfg);
  if (options.chunk_trials < 1) throw std::invalid_argument("chunk size must be >= 1");
  ChunkLedger ledger(cfg.stopping, options.chunk_trials);
  std::atomic<std::uint64_t> next_chunk{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      TrialRunner runner(cfg, snr_db);
      for (;;) {
        const std::uint64_t c = next_chunk.fetch_add(1);
        if (c > ledger.last_chunk() || c > ledger.chunk_count_limit()) break;
        ledger.record(c, runner.run(c * ledger.chunk_trials(), ledger.trials_in(c)));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_chunk.store(UINT64_MAX / 2);
    }
  };

  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  const Counts total = ledger.total();
  BerEstimate est;
  est.snr_db = snr_db;
  est.trials = total.trials;
  est.bit_errors = total.bit_errors;
  const double bits = static_cast<double>(total.trials) *
                      static_cast<double>(std::countr_zero(cfg.tx_antennas));
  est.aber = static_cast<double>(total.bit_errors) / bits;
  est.ci95_halfwidth = 1.96 * std::sqrt(est.aber * (1.0 - est.aber) / bits);
  est.unreliable = total.bit_errors < cfg.stopping.min_bit_errors;
  return est;
}

std::vector<analytics::AnalyticCurve> analytic_curves(const SimConfig& cfg) {
  std::vector<analytics::AnalyticCurve> out;
  const double variance = effective_variance(cfg);
  for (analytics::Expression e : analytics::curves_for(cfg.scheme, cfg.rx_antennas)) {
    // Closed forms assume ideal phases.
    if (cfg.kappa && e != analytics::Expression::traditional_closed_form) continue;
    out.push_back(analytics::make_curve(
        {e, cfg.reflectors, cfg.tx_antennas, cfg.rx_antennas, variance}, cfg.snr_grid_db));
  }
  return out;
}

SweepResult run_sweep(const SimConfig& cfg, const RunOptions& options) {
  validate(cfg);
  SweepResult result;
  result.config = cfg;
  result.variance = effective_variance(cfg);
  if (cfg.scheme == SchemeKind::intelligent_ris_ssk && cfg.reflectors < 32) {
    result.warnings.push_back("N=" + std::to_string(cfg.reflectors) +
                              ": Gaussian approximation behind the intelligent-scheme curves is "
                              "loose below N=32");
  }
  if (cfg.scheme == SchemeKind::blind_ris_ssk && cfg.rx_antennas > 1) {
    result.warnings.push_back("no closed-form curve for the blind scheme with Nr > 1");
  }
  for (double db : cfg.snr_grid_db) {
    result.simulated.push_back(run_point(cfg, db, options));
    if (result.simulated.back().unreliable) {
      result.warnings.push_back("snr_db=" + std::to_string(db) +
                                ": max_trials reached before min_bit_errors");
    }
  }
  result.analytic = analytic_curves(cfg);
  return result;
}

double snr_at_target(std::span<const analytics::CurvePoint> curve, double target) {
  if (!(target > 0.0)) throw std::invalid_argument("target ABER must be positive");
  const double lt = std::log10(target);
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const auto& a = curve[k];
    const auto& b = curve[k + 1];
    if (a.aber == target) return a.snr_db;
    if (a.aber > target && b.aber <= target) {
      if (b.aber == target) return b.snr_db;
      if (b.aber <= 0.0) {
        throw NotBracketed("curve reaches zero at " + std::to_string(b.snr_db) +
                           " dB; cannot interpolate in log domain");
      }
      const double la = std::log10(a.aber), lb = std::log10(b.aber);
      return a.snr_db + (lt - la) * (b.snr_db - a.snr_db) / (lb - la);
    }
  }
  if (!curve.empty() && curve.back().aber == target) return curve.back().snr_db;
  throw NotBracketed("curve never crosses the target ABER");
}

std::vector<analytics::CurvePoint> as_curve(std::span<const BerEstimate> estimates) {
  std::vector<analytics::CurvePoint> out;
  out.reserve(estimates.size());
  for (const auto& e : estimates) out.push_back({e.snr_db, e.aber});
  return out;
}

}  // namespace risssk::engine
