#include "cryptofactor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cryptofactor/rng.hpp"

namespace cryptofactor {

double mean_of(std::span<const double> v) {
    if (v.empty()) return std::nan("");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
    if (v.size() < 2) return std::nan("");
    double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double sample_skewness(std::span<const double> v) {
    const auto n = static_cast<double>(v.size());
    if (v.size() < 3) return std::nan("");
    double m = mean_of(v);
    double m2 = 0.0, m3 = 0.0;
    for (double x : v) {
        double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 <= 0.0) return std::nan("");
    double g1 = m3 / std::pow(m2, 1.5);
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

double sample_excess_kurtosis(std::span<const double> v) {
    const auto n = static_cast<double>(v.size());
    if (v.size() < 4) return std::nan("");
    double m = mean_of(v);
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    if (m2 <= 0.0) return std::nan("");
    double g2 = m4 / (m2 * m2) - 3.0;
    return ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
}

RegressionResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    const auto n = X.rows();
    const auto k = X.cols();
    if (y.size() != n) throw std::invalid_argument("ols: y and X row counts differ");
    if (n <= k) throw std::invalid_argument("ols: need n > k");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < k) throw std::invalid_argument("ols: design matrix is rank-deficient");

    RegressionResult r;
    r.coefficients = qr.solve(y);
    r.residuals = y - X * r.coefficients;
    r.n_obs = static_cast<int>(n);

    double rss = r.residuals.squaredNorm();
    double ybar = y.mean();
    double tss = (y.array() - ybar).matrix().squaredNorm();
    r.r_squared = tss > 0.0 ? 1.0 - rss / tss : 0.0;

    double sigma2 = rss / static_cast<double>(n - k);
    Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
    r.se = (sigma2 * xtx_inv.diagonal()).array().sqrt();
    return r;
}

Eigen::VectorXd newey_west_se(const RegressionResult& result, const Eigen::MatrixXd& X, int lags) {
    const auto n = X.rows();
    if (lags < 0) throw std::invalid_argument("newey_west_se: lags must be >= 0");
    if (lags >= n) throw std::invalid_argument("newey_west_se: lags must be < n");
    if (result.residuals.size() != n)
        throw std::invalid_argument("newey_west_se: residuals and X row counts differ");

    // Score rows x_t * e_t.
    Eigen::MatrixXd scores = X.array().colwise() * result.residuals.array();
    Eigen::MatrixXd meat = scores.transpose() * scores;  // Gamma_0
    for (int l = 1; l <= lags; ++l) {
        double w = 1.0 - static_cast<double>(l) / (lags + 1.0);
        Eigen::MatrixXd gamma =
            scores.bottomRows(n - l).transpose() * scores.topRows(n - l);
        meat += w * (gamma + gamma.transpose());
    }
    Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
    Eigen::MatrixXd cov = xtx_inv * meat * xtx_inv;
    return cov.diagonal().array().max(0.0).sqrt();
}

int default_bartlett_lags(int n) {
    return static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0)));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) return std::nan("");
    double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nan("");
    return sxy / std::sqrt(sxx * syy);
}

Eigen::MatrixXd pearson_matrix(const Eigen::MatrixXd& cols) {
    const auto k = cols.cols();
    Eigen::MatrixXd out(k, k);
    std::vector<bool> degenerate(k);
    Eigen::VectorXd means = cols.colwise().mean();
    for (Eigen::Index j = 0; j < k; ++j)
        degenerate[j] = (cols.col(j).array() - means(j)).matrix().squaredNorm() <= 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i; j < k; ++j) {
            double v;
            if (degenerate[i] || degenerate[j])
                v = std::nan("");
            else if (i == j)
                v = 1.0;
            else
                v = pearson({cols.col(i).data(), static_cast<std::size_t>(cols.rows())},
                            {cols.col(j).data(), static_cast<std::size_t>(cols.rows())});
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

std::vector<double> rolling_pearson(std::span<const double> x, std::span<const double> y,
                                    int window) {
    if (x.size() != y.size()) throw std::invalid_argument("rolling_pearson: size mismatch");
    if (window < 2) throw std::invalid_argument("rolling_pearson: window must be >= 2");
    std::vector<double> out;
    if (x.size() < static_cast<std::size_t>(window)) return out;
    out.reserve(x.size() - window + 1);
    for (std::size_t i = 0; i + window <= x.size(); ++i)
        out.push_back(pearson(x.subspan(i, window), y.subspan(i, window)));
    return out;
}

PCResult first_pc(const Eigen::MatrixXd& cols, const std::vector<std::string>* names) {
    const auto n = cols.rows();
    const auto k = cols.cols();
    if (k < 2 || n < 2) throw std::invalid_argument("first_pc: need >= 2 columns and >= 2 rows");

    Eigen::MatrixXd z(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        double m = cols.col(j).mean();
        double sd = std::sqrt((cols.col(j).array() - m).square().sum() / (n - 1.0));
        if (!(sd > 0.0)) {
            std::string label = names && static_cast<std::size_t>(j) < names->size()
                                    ? (*names)[j]
                                    : "column " + std::to_string(j);
            throw std::invalid_argument("first_pc: constant column: " + label);
        }
        z.col(j) = (cols.col(j).array() - m) / sd;
    }
    Eigen::MatrixXd corr = (z.transpose() * z) / (n - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("first_pc: eigendecomposition failed");

    PCResult r;
    r.loadings = solver.eigenvectors().col(k - 1);  // ascending eigenvalues
    double total = solver.eigenvalues().sum();
    r.explained_variance_ratio = total > 0.0 ? solver.eigenvalues()(k - 1) / total : 0.0;

    Eigen::Index imax = 0;
    r.loadings.cwiseAbs().maxCoeff(&imax);
    if (r.loadings(imax) < 0.0) r.loadings = -r.loadings;
    r.scores = z * r.loadings;
    return r;
}

namespace {
// Equal-frequency bin labels: stable rank order, bin = floor(rank*bins/n).
std::vector<int> rank_bins(std::span<const double> v, int bins) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<int> bin(n);
    for (std::size_t rank = 0; rank < n; ++rank) {
        int b = static_cast<int>(rank * static_cast<std::size_t>(bins) / n);
        bin[order[rank]] = std::min(b, bins - 1);
    }
    return bin;
}
}  // namespace

double mutual_information(std::span<const double> x, std::span<const double> y) {
    constexpr int kBins = 10;
    if (x.size() != y.size()) throw std::invalid_argument("mutual_information: size mismatch");
    if (x.size() < 50) throw std::invalid_argument("mutual_information: need >= 50 pairs");
    const auto n = static_cast<double>(x.size());
    auto bx = rank_bins(x, kBins);
    auto by = rank_bins(y, kBins);
    double joint[kBins][kBins] = {};
    double px[kBins] = {}, py[kBins] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        joint[bx[i]][by[i]] += 1.0;
        px[bx[i]] += 1.0;
        py[by[i]] += 1.0;
    }
    double mi = 0.0;
    for (int a = 0; a < kBins; ++a) {
        for (int b = 0; b < kBins; ++b) {
            if (joint[a][b] <= 0.0) continue;
            double pij = joint[a][b] / n;
            mi += pij * std::log(pij * n * n / (px[a] * py[b]));
        }
    }
    return std::max(mi, 0.0);
}

PerfStats perf_stats(std::span<const double> weekly_returns) {
    if (weekly_returns.size() < 8)
        throw std::invalid_argument("perf_stats: need >= 8 observations");
    PerfStats s;
    s.n_obs = static_cast<int>(weekly_returns.size());
    double m = mean_of(weekly_returns);
    double sd = sample_std(weekly_returns);
    s.mean_ann = 52.0 * m;
    s.vol_ann = std::sqrt(52.0) * sd;
    s.sharpe_ann = sd > 0.0 ? m / sd * std::sqrt(52.0) : std::nan("");
    double log_growth = 0.0;
    bool wiped_out = false;
    for (double r : weekly_returns) {
        if (1.0 + r <= 0.0) {
            wiped_out = true;
            break;
        }
        log_growth += std::log1p(r);
    }
    s.geometric_ann = wiped_out
                          ? -1.0
                          : std::expm1(log_growth * 52.0 / static_cast<double>(s.n_obs));
    s.skew = sample_skewness(weekly_returns);
    s.kurtosis_excess = sample_excess_kurtosis(weekly_returns);
    std::size_t pos = 0;
    for (double r : weekly_returns) pos += r > 0.0;
    s.pct_positive = static_cast<double>(pos) / static_cast<double>(s.n_obs);
    return s;
}

std::vector<double> rolling_sharpe(std::span<const double> weekly_returns, int window) {
    std::vector<double> out;
    if (window < 2 || weekly_returns.size() < static_cast<std::size_t>(window)) return out;
    out.reserve(weekly_returns.size() - window + 1);
    for (std::size_t i = 0; i + window <= weekly_returns.size(); ++i) {
        auto w = weekly_returns.subspan(i, window);
        double sd = sample_std(w);
        out.push_back(sd > 0.0 ? mean_of(w) / sd * std::sqrt(52.0) : std::nan(""));
    }
    return out;
}

std::vector<double> blend(std::span<const double> a, std::span<const double> b, double w) {
    if (a.size() != b.size()) throw std::invalid_argument("blend: series are misaligned");
    if (w < 0.0 || w > 1.0) throw std::invalid_argument("blend: weight must be in [0, 1]");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = w * a[i] + (1.0 - w) * b[i];
    return out;
}

double bootstrap_se(std::span<const double> values, int B, std::uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("bootstrap_se: empty sample");
    if (B < 100) throw std::invalid_argument("bootstrap_se: need B >= 100");
    const std::size_t n = values.size();
    std::vector<double> stats(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(b));
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += values[rng.bounded(n)];
        stats[static_cast<std::size_t>(b)] = sum / static_cast<double>(n);
    }
    return sample_std(stats);
}

}  // namespace cryptofactor
