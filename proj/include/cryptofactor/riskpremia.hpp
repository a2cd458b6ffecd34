#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "cryptofactor/types.hpp"

namespace cryptofactor {

/// Asset return observations on a common time grid; NaN marks periods
/// where an asset is missing.
struct ReturnPanel {
    std::vector<TimePoint> grid;
    std::vector<std::string> asset_ids;
    // returns[a][t] for asset a at grid point t
    std::vector<std::vector<double>> returns;
};

/// First differences of a reference level aligned to a time grid:
/// innovation[i] = level(grid[i]) - level(grid[i-1]), NaN at the first
/// point and wherever either level is unknown.
std::vector<double> factor_innovations(const ReferenceSeries& levels,
                                       std::span<const TimePoint> grid);

struct BetaEstimate {
    std::string asset_id;
    Eigen::VectorXd loadings;  // per factor, intercept excluded
    int n_obs = 0;
};

/// Full-sample time-series OLS of each asset's returns on the factor
/// columns plus a constant. Assets whose history spans fewer than
/// `min_history_days` (observation count times the nominal period length)
/// are excluded. Throws when every asset is excluded.
std::vector<BetaEstimate> estimate_betas(const ReturnPanel& panel,
                                         const Eigen::MatrixXd& factors,  // grid x K, NaN gaps
                                         double min_history_days,
                                         double nominal_period_days = 7.0);

struct FMBResult {
    std::vector<std::string> names;  // "intercept" then factor names
    Eigen::VectorXd lambda;          // time-series mean of period slopes
    Eigen::VectorXd se;              // std(lambda_t)/sqrt(T); NaN when T == 1
    Eigen::VectorXd t;
    Eigen::MatrixXd betas;  // assets_used x K, row order = assets_used ids
    std::vector<std::string> assets_used_ids;
    int periods_used = 0;
    int periods_skipped = 0;  // cross-sectional rank deficiency
    int assets_used = 0;
};

/// Second pass: per period, cross-sectional OLS of asset returns on
/// (constant, betas); the premium is the time-series mean of the slopes
/// with plain Fama-MacBeth standard errors.
FMBResult fama_macbeth(const ReturnPanel& panel, const std::vector<BetaEstimate>& betas,
                       const std::vector<std::string>& factor_names);

/// Rolling-beta variant: each period's cross-section uses loadings
/// re-estimated on the trailing `beta_window` periods ending the period
/// before, still subject to the history floor. Periods whose trailing
/// window qualifies too few assets are skipped. FMBResult::betas holds
/// the last period's loadings.
FMBResult fama_macbeth_rolling(const ReturnPanel& panel, const Eigen::MatrixXd& factors,
                               int beta_window, double min_history_days,
                               double nominal_period_days,
                               const std::vector<std::string>& factor_names);

}  // namespace cryptofactor
