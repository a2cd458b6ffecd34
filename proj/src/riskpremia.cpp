#include "cryptofactor/riskpremia.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "cryptofactor/metrics.hpp"

namespace cryptofactor {

std::vector<double> factor_innovations(const ReferenceSeries& levels,
                                       std::span<const TimePoint> grid) {
    if (levels.points.size() < 2)
        throw std::invalid_argument("factor_innovations: need >= 2 observations");
    auto level_at = [&](TimePoint t) -> double {
        auto it = std::upper_bound(levels.points.begin(), levels.points.end(), t,
                                   [](TimePoint tt, const ReferencePoint& p) {
                                       return tt < p.timestamp;
                                   });
        if (it == levels.points.begin()) return std::nan("");
        return std::prev(it)->value;
    };
    std::vector<double> out(grid.size(), std::nan(""));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double a = level_at(grid[i - 1]);
        double b = level_at(grid[i]);
        if (!std::isnan(a) && !std::isnan(b)) out[i] = b - a;
    }
    return out;
}

std::vector<BetaEstimate> estimate_betas(const ReturnPanel& panel, const Eigen::MatrixXd& factors,
                                         double min_history_days, double nominal_period_days) {
    const auto T = static_cast<Eigen::Index>(panel.grid.size());
    const auto K = factors.cols();
    if (factors.rows() != T)
        throw std::invalid_argument("estimate_betas: factor rows do not match the grid");

    std::vector<BetaEstimate> out;
    for (std::size_t a = 0; a < panel.asset_ids.size(); ++a) {
        const auto& r = panel.returns[a];
        std::vector<Eigen::Index> usable;
        for (Eigen::Index ti = 0; ti < T; ++ti) {
            if (std::isnan(r[static_cast<std::size_t>(ti)])) continue;
            bool ok = true;
            for (Eigen::Index k = 0; k < K; ++k)
                if (std::isnan(factors(ti, k))) ok = false;
            if (ok) usable.push_back(ti);
        }
        double history_days = static_cast<double>(usable.size()) * nominal_period_days;
        if (history_days < min_history_days ||
            static_cast<Eigen::Index>(usable.size()) <= K + 1)
            continue;
        Eigen::VectorXd y(usable.size());
        Eigen::MatrixXd X(usable.size(), K + 1);
        for (std::size_t i = 0; i < usable.size(); ++i) {
            y(static_cast<Eigen::Index>(i)) = r[static_cast<std::size_t>(usable[i])];
            X(static_cast<Eigen::Index>(i), 0) = 1.0;
            for (Eigen::Index k = 0; k < K; ++k)
                X(static_cast<Eigen::Index>(i), k + 1) = factors(usable[i], k);
        }
        RegressionResult fit = ols(y, X);
        BetaEstimate est;
        est.asset_id = panel.asset_ids[a];
        est.loadings = fit.coefficients.tail(K);
        est.n_obs = fit.n_obs;
        out.push_back(std::move(est));
    }
    if (out.empty())
        throw std::runtime_error("estimate_betas: every asset fails the history floor");
    return out;
}

FMBResult fama_macbeth_rolling(const ReturnPanel& panel, const Eigen::MatrixXd& factors,
                               int beta_window, double min_history_days,
                               double nominal_period_days,
                               const std::vector<std::string>& factor_names) {
    const auto T = static_cast<Eigen::Index>(panel.grid.size());
    const auto K = factors.cols();
    if (beta_window < 2) throw std::invalid_argument("fama_macbeth_rolling: window too short");
    if (factors.rows() != T)
        throw std::invalid_argument("fama_macbeth_rolling: factor rows do not match the grid");

    FMBResult res;
    res.names.push_back("intercept");
    for (const auto& n : factor_names) res.names.push_back(n);
    if (static_cast<Eigen::Index>(factor_names.size()) != K)
        throw std::invalid_argument("fama_macbeth_rolling: factor name count mismatch");

    std::set<std::string> ever_used;
    std::vector<Eigen::VectorXd> period_slopes;
    for (Eigen::Index t = 1; t < T; ++t) {
        Eigen::Index w0 = std::max<Eigen::Index>(0, t - beta_window);
        // Trailing-window betas per asset.
        std::vector<Eigen::VectorXd> loadings(panel.asset_ids.size());
        std::vector<bool> has_beta(panel.asset_ids.size(), false);
        for (std::size_t a = 0; a < panel.asset_ids.size(); ++a) {
            std::vector<Eigen::Index> usable;
            for (Eigen::Index ti = w0; ti < t; ++ti) {
                if (std::isnan(panel.returns[a][static_cast<std::size_t>(ti)])) continue;
                bool ok = true;
                for (Eigen::Index k = 0; k < K; ++k)
                    if (std::isnan(factors(ti, k))) ok = false;
                if (ok) usable.push_back(ti);
            }
            if (static_cast<double>(usable.size()) * nominal_period_days < min_history_days ||
                static_cast<Eigen::Index>(usable.size()) <= K + 1)
                continue;
            Eigen::VectorXd y(usable.size());
            Eigen::MatrixXd X(usable.size(), K + 1);
            for (std::size_t i = 0; i < usable.size(); ++i) {
                y(static_cast<Eigen::Index>(i)) =
                    panel.returns[a][static_cast<std::size_t>(usable[i])];
                X(static_cast<Eigen::Index>(i), 0) = 1.0;
                for (Eigen::Index k = 0; k < K; ++k)
                    X(static_cast<Eigen::Index>(i), k + 1) = factors(usable[i], k);
            }
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
            if (qr.rank() < K + 1) continue;
            loadings[a] = qr.solve(y).tail(K);
            has_beta[a] = true;
        }
        // Cross-section at t on this period's betas.
        std::vector<double> y;
        std::vector<std::size_t> rows;
        for (std::size_t a = 0; a < panel.asset_ids.size(); ++a) {
            if (!has_beta[a]) continue;
            double r = panel.returns[a][static_cast<std::size_t>(t)];
            if (std::isnan(r)) continue;
            y.push_back(r);
            rows.push_back(a);
        }
        if (static_cast<Eigen::Index>(y.size()) <= K + 1) {
            ++res.periods_skipped;
            continue;
        }
        Eigen::VectorXd yv(y.size());
        Eigen::MatrixXd X(y.size(), K + 1);
        for (std::size_t i = 0; i < y.size(); ++i) {
            yv(static_cast<Eigen::Index>(i)) = y[i];
            X(static_cast<Eigen::Index>(i), 0) = 1.0;
            X.row(static_cast<Eigen::Index>(i)).tail(K) = loadings[rows[i]].transpose();
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        if (qr.rank() < K + 1) {
            ++res.periods_skipped;
            continue;
        }
        period_slopes.push_back(qr.solve(yv));
        for (std::size_t i : rows) ever_used.insert(panel.asset_ids[i]);
        // keep the most recent qualifying beta set for reporting
        res.betas.resize(static_cast<Eigen::Index>(rows.size()), K);
        res.assets_used_ids.clear();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            res.betas.row(static_cast<Eigen::Index>(i)) = loadings[rows[i]].transpose();
            res.assets_used_ids.push_back(panel.asset_ids[rows[i]]);
        }
    }
    res.periods_used = static_cast<int>(period_slopes.size());
    if (res.periods_used == 0)
        throw std::runtime_error("fama_macbeth_rolling: no period had a usable cross-section");
    res.assets_used = static_cast<int>(ever_used.size());

    res.lambda.resize(K + 1);
    res.se.resize(K + 1);
    res.t.resize(K + 1);
    for (Eigen::Index k = 0; k <= K; ++k) {
        std::vector<double> slopes;
        slopes.reserve(period_slopes.size());
        for (const auto& s : period_slopes) slopes.push_back(s(k));
        double m = mean_of(slopes);
        res.lambda(k) = m;
        if (slopes.size() > 1) {
            double sd = sample_std(slopes);
            res.se(k) = sd / std::sqrt(static_cast<double>(slopes.size()));
            res.t(k) = res.se(k) > 0.0 ? m / res.se(k) : std::nan("");
        } else {
            res.se(k) = std::nan("");
            res.t(k) = std::nan("");
        }
    }
    return res;
}

FMBResult fama_macbeth(const ReturnPanel& panel, const std::vector<BetaEstimate>& betas,
                       const std::vector<std::string>& factor_names) {
    if (betas.size() < 2) throw std::invalid_argument("fama_macbeth: need >= 2 assets with betas");
    const auto K = betas.front().loadings.size();
    const auto T = static_cast<Eigen::Index>(panel.grid.size());

    FMBResult res;
    res.names.push_back("intercept");
    for (const auto& n : factor_names) res.names.push_back(n);
    if (static_cast<Eigen::Index>(factor_names.size()) != K)
        throw std::invalid_argument("fama_macbeth: factor name count mismatch");

    // Map beta rows onto panel asset order.
    std::vector<std::ptrdiff_t> asset_row(panel.asset_ids.size(), -1);
    res.betas.resize(static_cast<Eigen::Index>(betas.size()), K);
    for (std::size_t b = 0; b < betas.size(); ++b) {
        res.betas.row(static_cast<Eigen::Index>(b)) = betas[b].loadings.transpose();
        res.assets_used_ids.push_back(betas[b].asset_id);
        for (std::size_t a = 0; a < panel.asset_ids.size(); ++a)
            if (panel.asset_ids[a] == betas[b].asset_id) asset_row[a] = static_cast<std::ptrdiff_t>(b);
    }
    res.assets_used = static_cast<int>(betas.size());

    std::vector<Eigen::VectorXd> period_slopes;
    for (Eigen::Index ti = 0; ti < T; ++ti) {
        std::vector<double> y;
        std::vector<Eigen::Index> rows;
        for (std::size_t a = 0; a < panel.asset_ids.size(); ++a) {
            if (asset_row[a] < 0) continue;
            double r = panel.returns[a][static_cast<std::size_t>(ti)];
            if (std::isnan(r)) continue;
            y.push_back(r);
            rows.push_back(static_cast<Eigen::Index>(asset_row[a]));
        }
        if (static_cast<Eigen::Index>(y.size()) <= K + 1) {
            ++res.periods_skipped;
            continue;
        }
        Eigen::VectorXd yv(y.size());
        Eigen::MatrixXd X(y.size(), K + 1);
        for (std::size_t i = 0; i < y.size(); ++i) {
            yv(static_cast<Eigen::Index>(i)) = y[i];
            X(static_cast<Eigen::Index>(i), 0) = 1.0;
            X.row(static_cast<Eigen::Index>(i)).tail(K) = res.betas.row(rows[i]);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        if (qr.rank() < K + 1) {
            ++res.periods_skipped;
            continue;
        }
        period_slopes.push_back(qr.solve(yv));
    }
    res.periods_used = static_cast<int>(period_slopes.size());
    if (res.periods_used == 0)
        throw std::runtime_error("fama_macbeth: every period was skipped (rank deficiency)");

    res.lambda.resize(K + 1);
    res.se.resize(K + 1);
    res.t.resize(K + 1);
    for (Eigen::Index k = 0; k <= K; ++k) {
        std::vector<double> slopes;
        slopes.reserve(period_slopes.size());
        for (const auto& s : period_slopes) slopes.push_back(s(k));
        double m = mean_of(slopes);
        res.lambda(k) = m;
        if (slopes.size() > 1) {
            double sd = sample_std(slopes);
            res.se(k) = sd / std::sqrt(static_cast<double>(slopes.size()));
            res.t(k) = res.se(k) > 0.0 ? m / res.se(k) : std::nan("");
        } else {
            res.se(k) = std::nan("");
            res.t(k) = std::nan("");
        }
    }
    return res;
}

}  // namespace cryptofactor
