#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cryptofactor {

/// Result of a linear fit. `se` holds plain OLS standard errors until
/// newey_west_se replaces the inference; lags_used records the HAC lag
/// count (-1 when plain).
struct RegressionResult {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd se;
    double r_squared = 0.0;
    Eigen::VectorXd residuals;
    int n_obs = 0;
    int lags_used = -1;
};

/// OLS of y on X. X must contain the intercept column explicitly (first
/// column by convention); R^2 is computed against the centered total sum
/// of squares. Throws std::invalid_argument when n <= k or X is
/// rank-deficient.
RegressionResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

/// Newey-West HAC standard errors with Bartlett weights
/// w_l = 1 - l/(L+1). lags = 0 reproduces White (HC0) standard errors
/// exactly. Throws when lags < 0 or lags >= n.
Eigen::VectorXd newey_west_se(const RegressionResult& result, const Eigen::MatrixXd& X, int lags);

/// Automatic Bartlett lag rule: floor(4 * (n/100)^(2/9)).
int default_bartlett_lags(int n);

/// Pearson correlation of two equally-sized samples; NaN when either has
/// zero variance or fewer than 2 points.
double pearson(std::span<const double> x, std::span<const double> y);

/// Full correlation matrix of the columns of `cols`. Entries touching a
/// zero-variance column are NaN; the diagonal is 1 where defined.
Eigen::MatrixXd pearson_matrix(const Eigen::MatrixXd& cols);

/// Trailing-window correlation series, aligned to window ends:
/// result[i] = pearson over rows [i, i+window). NaN where undefined.
std::vector<double> rolling_pearson(std::span<const double> x, std::span<const double> y,
                                    int window);

struct PCResult {
    Eigen::VectorXd loadings;  // unit norm; largest-magnitude entry positive
    double explained_variance_ratio = 0.0;
    Eigen::VectorXd scores;  // one per observation row
};

/// First principal component of the column set. Columns are standardized
/// to mean zero and unit variance internally, so the decomposition is of
/// the correlation matrix. Throws std::invalid_argument on a constant
/// column, naming it (via `names` when given, else by index).
PCResult first_pc(const Eigen::MatrixXd& cols, const std::vector<std::string>* names = nullptr);

/// Plug-in mutual information in nats on a 10x10 equal-frequency grid
/// (per-marginal rank binning, ties split in input order). Requires at
/// least 50 pairs.
double mutual_information(std::span<const double> x, std::span<const double> y);

struct PerfStats {
    double mean_ann = 0.0;
    double vol_ann = 0.0;
    double sharpe_ann = 0.0;  // NaN when vol is zero
    double geometric_ann = 0.0;
    double skew = 0.0;
    double kurtosis_excess = 0.0;  // normal -> 0
    double pct_positive = 0.0;
    int n_obs = 0;
};

/// Annualized summary statistics of a weekly return series (52 periods
/// per year). Requires at least 8 observations.
PerfStats perf_stats(std::span<const double> weekly_returns);

/// Rolling annualized Sharpe over trailing windows, aligned to window
/// ends: result[i] covers [i, i+window).
std::vector<double> rolling_sharpe(std::span<const double> weekly_returns, int window);

/// Weekly-rebalanced blend w*a + (1-w)*b. Throws on size mismatch.
std::vector<double> blend(std::span<const double> a, std::span<const double> b, double w);

/// Bootstrap standard error of the mean: sample standard deviation of the
/// resampled-mean distribution over B draws with replacement.
/// Deterministic for a fixed seed. Requires B >= 100 and a non-empty
/// sample.
double bootstrap_se(std::span<const double> values, int B, std::uint64_t seed);

// Sample-moment helpers shared across modules.
double mean_of(std::span<const double> v);
double sample_std(std::span<const double> v);          // ddof = 1
double sample_skewness(std::span<const double> v);     // adjusted Fisher-Pearson
double sample_excess_kurtosis(std::span<const double> v);

}  // namespace cryptofactor
