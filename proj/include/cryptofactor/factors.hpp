#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cryptofactor/panel.hpp"

namespace cryptofactor {

/// One characteristic's weekly quintile sort: five value-weighted
/// portfolio series, the 5-1 long-short, and summary statistics.
struct SortResult {
    std::string characteristic;
    std::vector<TimePoint> weeks;  // weeks actually sorted
    std::array<std::vector<double>, 5> quintile_returns;
    std::vector<double> long_short;            // q5 - q1, pointwise
    std::array<double, 6> means{};             // q1..q5, long-short
    std::array<double, 6> t_stats{};           // NaN when undefined
    std::array<std::string, 6> stars;          // "", "*", "**", "***"
    double sharpe_ann = 0.0;                   // long-short annualized Sharpe
    bool monotone = false;                     // strictly monotone quintile means
    int weeks_used = 0;
    int weeks_skipped = 0;  // weeks with < 5 sortable assets
};

/// Rank-based quintile labels 1..5 (1 = smallest), splitting at ranks
/// ceil(n*k/5) with ties broken by lexicographic asset id. Throws when
/// fewer than 5 sortable values.
std::vector<int> assign_quintiles(std::span<const double> values,
                                  std::span<const std::string> asset_ids);

/// Cap-weighted mean return of one portfolio-week.
double portfolio_week_return(std::span<const double> returns, std::span<const double> caps);

/// Significance stars at two-sided normal critical values (10/5/1%).
std::string significance_stars(double t);

/// Fills means, t-stats, stars, Sharpe and the monotonicity flag of a
/// sort whose return series are already populated. Requires >= 8 weeks.
/// With `hac` set, the long-short t-stat uses Newey-West errors at the
/// automatic Bartlett lag.
void summarize(SortResult& sort, bool hac = false);

/// Weekly quintile sort of one characteristic: assets ranked on the
/// characteristic, portfolios tracked on the one-week-forward excess
/// return, value-weighted by formation-week caps.
SortResult run_sort(const Panel& panel, const std::string& characteristic, bool hac = false);

std::vector<SortResult> run_all_sorts(const Panel& panel, unsigned threads = 1, bool hac = false);

}  // namespace cryptofactor
