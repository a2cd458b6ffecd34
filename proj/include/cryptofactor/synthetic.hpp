#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cryptofactor/types.hpp"

namespace cryptofactor {

/// Data-generating process for desk-scale verification: i.i.d. Gaussian
/// hourly log market returns; per-asset returns alpha + beta * market +
/// planted premium + idiosyncratic noise; log-normal volumes; caps =
/// fixed supply * price, reported daily. Every raw feed in the
/// characteristic dictionary is emitted daily.
struct SyntheticConfig {
    int n_assets = 20;
    TimePoint start = 0;  // first hour (inclusive)
    TimePoint end = 0;    // last hour (exclusive)
    std::string exchange_id = "SIM";
    std::string quote = "USD";

    double market_drift_hourly = 0.0;   // log-return drift
    double market_vol_hourly = 0.004;   // log-return volatility
    double idio_vol_hourly = 0.008;
    double alpha_hourly = 0.0;
    double beta_min = 0.5, beta_max = 1.5;

    double rf_annual = 0.02;

    double price0_min = 0.1, price0_max = 100.0;       // log-uniform
    double supply_min = 1e6, supply_max = 1e9;         // log-uniform
    double volume_hourly_min = 1e4, volume_hourly_max = 1e6;  // log-uniform scale
    double volume_noise = 0.5;          // log-normal sigma per hour
    double volume_growth_annual = 0.0;  // deterministic multiplicative trend

    /// Planted cross-sectional premium: assets are ranked into quintiles
    /// by a latent score and earn lambda * (q - 3) / 4 per week, so the
    /// 5-1 quintile spread on the named characteristic is lambda. When the
    /// characteristic is feed-backed, the feed is emitted as a noiseless
    /// monotone function of the score.
    std::string planted_char;
    double planted_lambda_weekly = 0.0;
    /// Emit only the planted characteristic's feed (keeps large sort-
    /// recovery datasets small; the missing-value policy then drops the
    /// other feed-backed characteristics from the panel).
    bool planted_feed_only = false;

    int stablecoin_count = 0;  // flagged at the end of the id range
    int synthetic_count = 0;

    double inflation_level0 = 0.02;
    double inflation_rho = 0.95;
    double inflation_shock = 0.0005;

    int n_event_dates = 5;
};

struct SyntheticResult {
    Dataset dataset;
    std::map<std::string, std::string> manifest;  // planted parameters
    std::vector<TimePoint> event_dates;
};

/// Pure function of (config, seed); the output passes load_dataset
/// validation. Throws std::invalid_argument when the date range is
/// shorter than 12 weeks (universe construction impossible).
SyntheticResult generate_synthetic(const SyntheticConfig& config, std::uint64_t seed);

void write_manifest(const std::map<std::string, std::string>& manifest, const std::string& path);
std::map<std::string, std::string> read_manifest(const std::string& path);

/// Raw feed behind a trailing-aggregate characteristic ("" when the
/// characteristic is not feed-backed).
std::string feed_for_characteristic(const std::string& char_name);

}  // namespace cryptofactor
