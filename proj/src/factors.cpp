#include "cryptofactor/factors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cryptofactor/metrics.hpp"
#include "cryptofactor/parallel.hpp"

namespace cryptofactor {

std::vector<int> assign_quintiles(std::span<const double> values,
                                  std::span<const std::string> asset_ids) {
    const std::size_t n = values.size();
    if (n != asset_ids.size()) throw std::invalid_argument("assign_quintiles: size mismatch");
    if (n < 5) throw std::invalid_argument("assign_quintiles: need >= 5 sortable assets");
    for (double v : values)
        if (std::isnan(v)) throw std::invalid_argument("assign_quintiles: NaN value");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return asset_ids[a] < asset_ids[b];
    });

    // Breakpoints at ranks ceil(n*k/5): quintile k covers ranks
    // (ceil(n*(k-1)/5), ceil(n*k/5)], 1-indexed.
    std::vector<int> labels(n);
    std::size_t rank = 1;
    for (int k = 1; k <= 5; ++k) {
        auto upper = static_cast<std::size_t>((n * static_cast<std::size_t>(k) + 4) / 5);
        for (; rank <= upper; ++rank) labels[order[rank - 1]] = k;
    }
    return labels;
}

double portfolio_week_return(std::span<const double> returns, std::span<const double> caps) {
    if (returns.empty() || returns.size() != caps.size())
        throw std::invalid_argument("portfolio_week_return: empty or mismatched inputs");
    double wr = 0.0, w = 0.0;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        if (caps[i] < 0.0) throw std::invalid_argument("portfolio_week_return: negative cap");
        wr += caps[i] * returns[i];
        w += caps[i];
    }
    if (!(w > 0.0)) throw std::invalid_argument("portfolio_week_return: zero total cap");
    return wr / w;
}

std::string significance_stars(double t) {
    if (std::isnan(t)) return "";
    double a = std::abs(t);
    if (a >= 2.5758) return "***";
    if (a >= 1.9600) return "**";
    if (a >= 1.6449) return "*";
    return "";
}

void summarize(SortResult& sort, bool hac) {
    const auto T = sort.long_short.size();
    if (T < 8) throw std::invalid_argument("summarize: need >= 8 weeks");
    for (int q = 0; q < 6; ++q) {
        const std::vector<double>& series =
            q < 5 ? sort.quintile_returns[static_cast<std::size_t>(q)] : sort.long_short;
        double m = mean_of(series);
        double sd = sample_std(series);
        sort.means[static_cast<std::size_t>(q)] = m;
        double t = std::nan("");
        if (sd > 0.0) {
            if (q == 5 && hac) {
                Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
                    series.data(), static_cast<Eigen::Index>(series.size()));
                Eigen::MatrixXd X = Eigen::MatrixXd::Ones(y.size(), 1);
                RegressionResult r = ols(y, X);
                Eigen::VectorXd se =
                    newey_west_se(r, X, default_bartlett_lags(static_cast<int>(y.size())));
                t = r.coefficients(0) / se(0);
            } else {
                t = m / (sd / std::sqrt(static_cast<double>(series.size())));
            }
        }
        sort.t_stats[static_cast<std::size_t>(q)] = t;
        sort.stars[static_cast<std::size_t>(q)] = significance_stars(t);
    }
    double ls_sd = sample_std(sort.long_short);
    sort.sharpe_ann = ls_sd > 0.0 ? sort.means[5] / ls_sd * std::sqrt(52.0) : std::nan("");
    bool incr = true, decr = true;
    for (int q = 1; q < 5; ++q) {
        incr = incr && sort.means[q] > sort.means[q - 1];
        decr = decr && sort.means[q] < sort.means[q - 1];
    }
    sort.monotone = incr || decr;
    sort.weeks_used = static_cast<int>(T);
}

SortResult run_sort(const Panel& panel, const std::string& characteristic, bool hac) {
    SortResult sort;
    sort.characteristic = characteristic;
    int col = panel.characteristic_column(characteristic);
    if (col < 0) throw std::invalid_argument("run_sort: unknown characteristic " + characteristic);
    const int fwd7 = 1;

    std::size_t i = 0;
    while (i < panel.rows.size()) {
        TimePoint week = panel.rows[i].week_start;
        std::vector<double> values, rets, caps;
        std::vector<std::string> ids;
        for (; i < panel.rows.size() && panel.rows[i].week_start == week; ++i) {
            const PanelRow& row = panel.rows[i];
            double v = row.characteristics[static_cast<std::size_t>(col)];
            double r = row.excess_return_fwd[fwd7];
            if (std::isnan(v) || std::isnan(r)) continue;
            values.push_back(v);
            rets.push_back(r);
            caps.push_back(row.market_cap_usd);
            ids.push_back(row.asset_id);
        }
        if (values.size() < 5) {
            ++sort.weeks_skipped;
            continue;
        }
        std::vector<int> labels = assign_quintiles(values, ids);
        std::array<std::vector<double>, 5> qret, qcap;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            auto q = static_cast<std::size_t>(labels[j] - 1);
            qret[q].push_back(rets[j]);
            qcap[q].push_back(caps[j]);
        }
        sort.weeks.push_back(week);
        for (std::size_t q = 0; q < 5; ++q)
            sort.quintile_returns[q].push_back(portfolio_week_return(qret[q], qcap[q]));
        sort.long_short.push_back(sort.quintile_returns[4].back() -
                                  sort.quintile_returns[0].back());
    }
    summarize(sort, hac);
    return sort;
}

std::vector<SortResult> run_all_sorts(const Panel& panel, unsigned threads, bool hac) {
    std::vector<SortResult> out(panel.characteristic_names.size());
    parallel_for(panel.characteristic_names.size(), threads, [&](std::size_t c) {
        out[c] = run_sort(panel, panel.characteristic_names[c], hac);
    });
    return out;
}

}  // namespace cryptofactor
