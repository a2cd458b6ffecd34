#include "cryptofactor/characteristics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cryptofactor/metrics.hpp"
#include "cryptofactor/parallel.hpp"

namespace cryptofactor {

const char* category_name(CharCategory c) {
    switch (c) {
        case CharCategory::Onchain: return "onchain";
        case CharCategory::Exchange: return "exchange";
        case CharCategory::Social: return "social";
        case CharCategory::Momentum: return "momentum";
        case CharCategory::Microstructure: return "microstructure";
        case CharCategory::Financial: return "financial";
    }
    return "?";
}

const char* source_name(CharSource s) {
    switch (s) {
        case CharSource::DerivedFromReturns: return "derived_from_returns";
        case CharSource::DerivedFromFeed: return "derived_from_feed";
        case CharSource::RawFeed: return "raw_feed";
    }
    return "?";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<CharacteristicSpec> make_dictionary() {
    using C = CharCategory;
    using S = CharSource;
    std::vector<CharacteristicSpec> d;
    auto add = [&](const char* name, C cat, int window, S src, const char* formula) {
        d.push_back({name, cat, window, src, formula});
    };

    // onchain
    add("tx_volume_tm7", C::Onchain, 7, S::RawFeed,
        "total transaction volume in native units over the trailing 7 days");
    add("active_addresses_tm7", C::Onchain, 7, S::RawFeed,
        "active addresses over the trailing 7 days");
    add("delta_log_new_addresses_tm14_tm7", C::Onchain, 14, S::DerivedFromFeed,
        "log(new addresses over days [-7,0)) - log(new addresses over days [-14,-7))");
    add("new_addresses_tm7", C::Onchain, 7, S::RawFeed,
        "new addresses over the trailing 7 days");
    add("total_addresses", C::Onchain, 0, S::RawFeed, "total unique addresses, latest value");
    add("circulation_tm7", C::Onchain, 7, S::RawFeed,
        "unique native units transferred over the trailing 7 days");
    add("age_destroyed_tm7", C::Onchain, 7, S::RawFeed,
        "native units transferred times days since previous transfer, trailing 7-day sum");
    add("delta_flow_distribution_tm7", C::Onchain, 7, S::DerivedFromFeed,
        "entity transfer volume over the trailing week divided by the summed absolute first "
        "differences of the entity flow series");
    add("delta_holders_distribution_tm7", C::Onchain, 7, S::DerivedFromFeed,
        "holder-bucket transfer volume over the trailing week divided by the summed absolute "
        "first differences of the holder-bucket supply series");
    add("pct_supply_in_profit", C::Onchain, 0, S::RawFeed,
        "share of supply last moved below the current price, latest value");

    // exchange
    add("pct_supply_cex", C::Exchange, 0, S::RawFeed,
        "share of circulating supply on centralized exchanges, latest value");
    add("pct_supply_dex", C::Exchange, 0, S::RawFeed,
        "share of circulating supply on decentralized exchanges, latest value");
    add("pct_supply_defi", C::Exchange, 0, S::RawFeed,
        "share of circulating supply in DeFi platforms, latest value");
    add("pct_supply_traders", C::Exchange, 0, S::RawFeed,
        "share of circulating supply held by active traders, latest value");
    add("exchange_inflow_tm7", C::Exchange, 7, S::RawFeed,
        "native units moved onto exchanges over the trailing 7 days");
    add("exchange_outflow_tm7", C::Exchange, 7, S::RawFeed,
        "native units moved off exchanges over the trailing 7 days");
    add("num_trading_pairs", C::Exchange, 0, S::RawFeed,
        "listed trading pairs on centralized exchanges, latest value");

    // social
    add("social_volume_tm7", C::Social, 7, S::RawFeed,
        "documents mentioning the asset across tracked platforms, trailing 7-day sum");
    add("social_volume_reddit_tm7", C::Social, 7, S::RawFeed,
        "documents mentioning the asset on Reddit, trailing 7-day sum");
    add("social_volume_twitter_tm7", C::Social, 7, S::RawFeed,
        "documents mentioning the asset on Twitter, trailing 7-day sum");
    add("sentiment_pos_reddit_tm7", C::Social, 7, S::RawFeed,
        "positive-sentiment score on Reddit, trailing 7-day sum");
    add("sentiment_pos_twitter_tm7", C::Social, 7, S::RawFeed,
        "positive-sentiment score on Twitter, trailing 7-day sum");
    add("sentiment_neg_reddit_tm7", C::Social, 7, S::RawFeed,
        "negative-sentiment score on Reddit, trailing 7-day sum");
    add("sentiment_neg_twitter_tm7", C::Social, 7, S::RawFeed,
        "negative-sentiment score on Twitter, trailing 7-day sum");
    add("developer_activity_tm7", C::Social, 7, S::RawFeed,
        "GitHub events over the trailing 7 days");
    add("vc_owned", C::Social, 0, S::RawFeed,
        "1 when funded by a tracked set of venture capital firms");

    // momentum
    add("return_tm7", C::Momentum, 7, S::DerivedFromReturns, "trailing 7-day simple return");
    add("return_tm14", C::Momentum, 14, S::DerivedFromReturns, "trailing 14-day simple return");
    add("return_tm30", C::Momentum, 30, S::DerivedFromReturns, "trailing 30-day simple return");
    add("return_tm60", C::Momentum, 60, S::DerivedFromReturns, "trailing 60-day simple return");
    add("return_tm90", C::Momentum, 90, S::DerivedFromReturns, "trailing 90-day simple return");
    add("reversal_tm14_tm7", C::Momentum, 14, S::DerivedFromReturns,
        "trailing 14-day return minus trailing 7-day return");
    add("reversal_tm30_tm14", C::Momentum, 30, S::DerivedFromReturns,
        "trailing 30-day return minus trailing 14-day return");
    add("reversal_tm90_tm30", C::Momentum, 90, S::DerivedFromReturns,
        "trailing 90-day return minus trailing 30-day return");
    add("return_from_ath", C::Momentum, 0, S::DerivedFromReturns,
        "current price over the all-time-high price, minus one");
    add("return_from_atl", C::Momentum, 0, S::DerivedFromReturns,
        "current price over the all-time-low price, minus one");
    add("return_industry_tm30", C::Momentum, 30, S::DerivedFromReturns,
        "value-weighted trailing 30-day return of same-industry assets");
    add("return_industry_tm60", C::Momentum, 60, S::DerivedFromReturns,
        "value-weighted trailing 60-day return of same-industry assets");

    // microstructure
    add("trades_tm7", C::Microstructure, 7, S::RawFeed,
        "exchange trades over the trailing 7 days");
    add("volume_usd_tm7", C::Microstructure, 7, S::DerivedFromReturns,
        "dollar trading volume over the trailing 7 days");
    add("spread_bps", C::Microstructure, 0, S::RawFeed, "quoted spread in bps, latest value");
    add("ask_size", C::Microstructure, 0, S::RawFeed,
        "market value of orders at best ask, latest value");
    add("bid_size", C::Microstructure, 0, S::RawFeed,
        "market value of orders at best bid, latest value");
    add("illiq_tm7", C::Microstructure, 7, S::DerivedFromReturns,
        "average absolute hourly return divided by average hourly dollar volume, trailing week");
    add("turnover_tm7", C::Microstructure, 7, S::DerivedFromFeed,
        "native-unit volume over the trailing week divided by circulating supply");

    // financial
    add("price", C::Financial, 0, S::DerivedFromReturns, "USD price, latest value");
    add("size", C::Financial, 0, S::DerivedFromReturns,
        "free-float market capitalization, latest value");
    add("mvrv", C::Financial, 0, S::RawFeed,
        "market capitalization over realized value, latest value");
    add("alpha_tm7", C::Financial, 7, S::DerivedFromReturns,
        "intercept of hourly excess returns on cmkt, trailing 7 days");
    add("alpha_tm30", C::Financial, 30, S::DerivedFromReturns,
        "intercept of hourly excess returns on cmkt, trailing 30 days");
    add("beta_tm7", C::Financial, 7, S::DerivedFromReturns,
        "slope of hourly excess returns on cmkt, trailing 7 days");
    add("beta_tm30", C::Financial, 30, S::DerivedFromReturns,
        "slope of hourly excess returns on cmkt, trailing 30 days");
    add("beta_down_tm30", C::Financial, 30, S::DerivedFromReturns,
        "slope of negative-clipped hourly excess returns on negative-clipped cmkt, trailing 30 "
        "days");
    add("coskew_tm30", C::Financial, 30, S::DerivedFromReturns,
        "slope on squared cmkt from regressing hourly excess returns on cmkt and cmkt^2, "
        "trailing 30 days");
    add("iskew_tm30", C::Financial, 30, S::DerivedFromReturns,
        "skewness of residuals from the cmkt + cmkt^2 regression, trailing 30 days");
    add("shortfall5_tm7", C::Financial, 7, S::DerivedFromReturns,
        "mean hourly excess return below the 5% quantile, trailing 7 days");
    add("var5_tm7", C::Financial, 7, S::DerivedFromReturns,
        "5% quantile of hourly excess returns, trailing 7 days");
    add("vol_tm7", C::Financial, 7, S::DerivedFromReturns,
        "standard deviation of hourly excess returns, trailing 7 days");
    add("vol_tm30", C::Financial, 30, S::DerivedFromReturns,
        "standard deviation of hourly excess returns, trailing 30 days");
    add("vol_tm90", C::Financial, 90, S::DerivedFromReturns,
        "standard deviation of hourly excess returns, trailing 90 days");
    add("ivol_tm7", C::Financial, 7, S::DerivedFromReturns,
        "standard deviation of residuals from the cmkt regression, trailing 7 days");
    add("ivol_tm30", C::Financial, 30, S::DerivedFromReturns,
        "standard deviation of residuals from the cmkt regression, trailing 30 days");
    add("ivol_tm90", C::Financial, 90, S::DerivedFromReturns,
        "standard deviation of residuals from the cmkt regression, trailing 90 days");
    return d;
}

}  // namespace

const std::vector<CharacteristicSpec>& characteristic_dictionary() {
    static const std::vector<CharacteristicSpec> dict = make_dictionary();
    return dict;
}

int characteristic_index(const std::string& name) {
    const auto& dict = characteristic_dictionary();
    for (std::size_t i = 0; i < dict.size(); ++i)
        if (dict[i].name == name) return static_cast<int>(i);
    return -1;
}

double quantile_linear(std::span<const double> sorted_ascending, double q) {
    const std::size_t n = sorted_ascending.size();
    if (n == 0) throw std::invalid_argument("quantile_linear: empty input");
    double rank = 1.0 + (static_cast<double>(n) - 1.0) * q;  // 1-indexed
    auto lo = static_cast<std::size_t>(std::floor(rank));
    double frac = rank - static_cast<double>(lo);
    if (lo >= n) return sorted_ascending[n - 1];
    double a = sorted_ascending[lo - 1];
    double b = lo < n ? sorted_ascending[lo] : a;
    return a + frac * (b - a);
}

VarShortfall var_shortfall(std::span<const double> returns, double q, int min_obs) {
    std::vector<double> clean;
    clean.reserve(returns.size());
    for (double r : returns)
        if (!std::isnan(r)) clean.push_back(r);
    if (static_cast<int>(clean.size()) < min_obs) return {kNaN, kNaN};
    std::sort(clean.begin(), clean.end());
    double var = quantile_linear(clean, q);
    double sum = 0.0;
    int n = 0;
    for (double r : clean) {
        if (r >= var) break;  // sorted: everything after is >= var
        sum += r;
        ++n;
    }
    return {var, n > 0 ? sum / n : kNaN};
}

int rolling_min_obs(int window_days) {
    return std::max(24, static_cast<int>(std::floor(0.1 * 24.0 * window_days)));
}

RollingRegressionStats regression_stats(std::span<const double> asset_returns,
                                        std::span<const double> market_returns, int window_days,
                                        int min_obs) {
    RollingRegressionStats out;
    out.window_days = window_days;
    out.alpha = out.beta = out.beta_down = out.coskew = out.iskew = out.ivol = kNaN;
    if (asset_returns.size() != market_returns.size())
        throw std::invalid_argument("regression_stats: window size mismatch");

    std::vector<double> ri, rm;
    ri.reserve(asset_returns.size());
    for (std::size_t i = 0; i < asset_returns.size(); ++i) {
        if (std::isnan(asset_returns[i]) || std::isnan(market_returns[i])) continue;
        ri.push_back(asset_returns[i]);
        rm.push_back(market_returns[i]);
    }
    const auto n = static_cast<Eigen::Index>(ri.size());
    out.n_obs = static_cast<int>(n);
    if (out.n_obs < min_obs || n < 3) return out;

    Eigen::Map<const Eigen::VectorXd> y(ri.data(), n);
    Eigen::Map<const Eigen::VectorXd> x(rm.data(), n);
    double var_m = (x.array() - x.mean()).square().sum();
    if (!(var_m > 0.0)) return out;

    Eigen::MatrixXd X(n, 2);
    X.col(0).setOnes();
    X.col(1) = x;
    Eigen::VectorXd ab = X.colPivHouseholderQr().solve(y);
    out.alpha = ab(0);
    out.beta = ab(1);
    Eigen::VectorXd resid = y - X * ab;
    out.ivol = std::sqrt(resid.squaredNorm() / static_cast<double>(n - 1));

    // Downside slope: negative-clipped returns on both sides.
    Eigen::VectorXd yd = y.array().min(0.0);
    Eigen::VectorXd xd = x.array().min(0.0);
    double var_d = (xd.array() - xd.mean()).square().sum();
    if (var_d > 0.0) {
        Eigen::MatrixXd Xd(n, 2);
        Xd.col(0).setOnes();
        Xd.col(1) = xd;
        out.beta_down = Xd.colPivHouseholderQr().solve(yd)(1);
    }

    // Quadratic-market regression for coskewness and residual skewness.
    Eigen::MatrixXd Xq(n, 3);
    Xq.col(0).setOnes();
    Xq.col(1) = x;
    Xq.col(2) = x.array().square();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xq);
    if (qr.rank() == 3) {
        Eigen::VectorXd coef = qr.solve(y);
        out.coskew = coef(2);
        Eigen::VectorXd rq = y - Xq * coef;
        // Exact fits leave only rounding noise; their skewness is
        // undefined rather than an artifact of that noise.
        if (rq.squaredNorm() > 1e-20 * y.squaredNorm())
            out.iskew = sample_skewness({rq.data(), static_cast<std::size_t>(n)});
    }
    return out;
}

CharacteristicEngine::CharacteristicEngine(const MarketData& md, const FeedTable& feeds,
                                           const ReferenceTable& refs,
                                           const std::vector<UniverseSnapshot>& universe,
                                           const std::vector<AssetMeta>& meta, unsigned threads)
    : md_(&md), feeds_(&feeds), refs_(&refs), universe_(&universe) {
    if (md.assets().empty()) return;
    grid_start_ = md.first_hour();
    n_slots_ = static_cast<std::size_t>((md.last_hour() - grid_start_) / kSecondsPerHour) + 1;

    rf_hourly_.assign(n_slots_, 0.0);
    for (std::size_t g = 0; g < n_slots_; ++g) {
        TimePoint t = grid_start_ + static_cast<TimePoint>(g) * kSecondsPerHour;
        double annual = refs.value_at("risk_free_1m", t - kSecondsPerHour);
        rf_hourly_[g] = std::isnan(annual) ? 0.0 : deannualize(annual, 1.0 / 24.0);
    }

    const auto assets = md.assets();
    states_.resize(assets.size());
    for (std::size_t i = 0; i < assets.size(); ++i) index_[assets[i].asset_id] = i;

    parallel_for(assets.size(), threads, [&](std::size_t i) {
        AssetState& s = states_[i];
        s.hourly = &assets[i];
        for (const auto& m : meta)
            if (m.asset_id == assets[i].asset_id) {
                s.meta = &m;
                break;
            }
        const auto& h = *s.hourly;
        s.excess.assign(n_slots_, kNaN);
        for (std::size_t k = 1; k < h.ts.size(); ++k) {
            if (h.ts[k] - h.ts[k - 1] != kSecondsPerHour) continue;
            auto g = static_cast<std::size_t>((h.ts[k] - grid_start_) / kSecondsPerHour);
            s.excess[g] = h.price[k] / h.price[k - 1] - 1.0 - rf_hourly_[g];
        }
        s.prefix_max.resize(h.ts.size());
        s.prefix_min.resize(h.ts.size());
        double mx = -std::numeric_limits<double>::infinity();
        double mn = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < h.ts.size(); ++k) {
            mx = std::max(mx, h.price[k]);
            mn = std::min(mn, h.price[k]);
            s.prefix_max[k] = mx;
            s.prefix_min[k] = mn;
        }
    });

    // Month index per slot, then membership per (asset, month).
    std::vector<YearMonth> months;
    std::vector<std::size_t> slot_month(n_slots_);
    for (std::size_t g = 0; g < n_slots_; ++g) {
        YearMonth ym = year_month_of(grid_start_ + static_cast<TimePoint>(g) * kSecondsPerHour);
        if (months.empty() || months.back() != ym) months.push_back(ym);
        slot_month[g] = months.size() - 1;
    }
    std::vector<std::vector<bool>> member(assets.size(),
                                          std::vector<bool>(months.size(), true));
    if (!universe.empty()) {
        for (std::size_t mi = 0; mi < months.size(); ++mi) {
            const UniverseSnapshot* snap = snapshot_for(universe, months[mi]);
            for (std::size_t i = 0; i < assets.size(); ++i)
                member[i][mi] = snap && snap->is_member(assets[i].asset_id);
        }
    }

    // Value-weighted market series, weights = cap at the hour before.
    std::vector<double> wsum(n_slots_, 0.0), wret(n_slots_, 0.0);
    for (std::size_t i = 0; i < assets.size(); ++i) {
        const auto& h = assets[i];
        for (std::size_t k = 1; k < h.ts.size(); ++k) {
            if (h.ts[k] - h.ts[k - 1] != kSecondsPerHour) continue;
            auto g = static_cast<std::size_t>((h.ts[k] - grid_start_) / kSecondsPerHour);
            if (!member[i][slot_month[g]]) continue;
            double r = states_[i].excess[g];
            double w = h.cap[k - 1];
            if (std::isnan(r) || std::isnan(w) || w <= 0.0) continue;
            wsum[g] += w;
            wret[g] += w * r;
        }
    }
    cmkt_.assign(n_slots_, kNaN);
    for (std::size_t g = 0; g < n_slots_; ++g)
        if (wsum[g] > 0.0) cmkt_[g] = wret[g] / wsum[g];
}

std::span<const double> CharacteristicEngine::hourly_excess_returns(
    const std::string& asset_id) const {
    auto it = index_.find(asset_id);
    if (it == index_.end())
        throw std::invalid_argument("unknown asset: " + asset_id);
    return states_[it->second].excess;
}

std::span<const double> CharacteristicEngine::market_window(TimePoint t, int days) const {
    if (n_slots_ == 0) return {};
    auto g_end = (t - grid_start_) / kSecondsPerHour;  // slot of hour t
    if (g_end < 0) return {};
    if (g_end >= static_cast<TimePoint>(n_slots_)) g_end = static_cast<TimePoint>(n_slots_) - 1;
    TimePoint g_begin = g_end - days * 24 + 1;
    if (g_begin < 0) g_begin = 0;
    return {cmkt_.data() + g_begin, static_cast<std::size_t>(g_end - g_begin + 1)};
}

double CharacteristicEngine::trailing_return(const AssetState& s, TimePoint t, int days) const {
    double p1 = s.hourly->price_at(t);
    double p0 = s.hourly->price_at(t - days * kSecondsPerDay);
    if (std::isnan(p0) || std::isnan(p1) || p0 <= 0.0) return kNaN;
    return p1 / p0 - 1.0;
}

double CharacteristicEngine::industry_momentum(const AssetState& s, TimePoint t, int days) const {
    if (!s.meta || s.meta->industry.empty()) return kNaN;
    const UniverseSnapshot* snap =
        universe_->empty() ? nullptr : snapshot_for(*universe_, year_month_of(t));
    double wsum = 0.0, wret = 0.0;
    auto accumulate = [&](const AssetState& other) {
        if (!other.meta || other.meta->industry != s.meta->industry) return;
        double r = trailing_return(other, t, days);
        double cap = other.hourly->cap_at(t);
        if (std::isnan(r) || std::isnan(cap) || cap <= 0.0) return;
        wsum += cap;
        wret += cap * r;
    };
    for (const auto& other : states_) {
        bool in_scope = &other == &s ||
                        (snap ? snap->is_member(other.hourly->asset_id) : true);
        if (in_scope) accumulate(other);
    }
    return wsum > 0.0 ? wret / wsum : kNaN;
}

double CharacteristicEngine::delta_distribution(const std::string& asset, TimePoint t,
                                                const char* numerator_feed,
                                                const std::vector<std::string>& level_feeds) const {
    double numerator = feeds_->window_sum(asset, numerator_feed, t - 7 * kSecondsPerDay, t);
    if (std::isnan(numerator)) return kNaN;
    double denom = 0.0;
    bool any = false;
    for (const auto& feed : level_feeds) {
        const FeedTable::Series* s = feeds_->series(asset, feed);
        if (!s) continue;
        auto lo = std::lower_bound(s->day.begin(), s->day.end(), t - 7 * kSecondsPerDay) -
                  s->day.begin();
        auto hi = std::lower_bound(s->day.begin(), s->day.end(), t) - s->day.begin();
        for (auto i = std::max<std::ptrdiff_t>(lo, 1); i < hi; ++i) {
            if (s->day[i] - s->day[i - 1] != kSecondsPerDay) continue;
            if (std::isnan(s->value[i]) || std::isnan(s->value[i - 1])) continue;
            denom += std::abs(s->value[i] - s->value[i - 1]);
            any = true;
        }
    }
    if (!any || denom <= 0.0) return kNaN;
    return numerator / denom;
}

std::vector<double> CharacteristicEngine::compute_row(const std::string& asset_id,
                                                      TimePoint t) const {
    auto it = index_.find(asset_id);
    if (it == index_.end()) throw std::invalid_argument("unknown asset: " + asset_id);
    const AssetState& s = states_[it->second];
    const auto& h = *s.hourly;
    const FeedTable& feeds = *feeds_;
    const TimePoint week_ago = t - 7 * kSecondsPerDay;

    std::vector<double> row(characteristic_dictionary().size(), kNaN);
    auto set = [&](const char* name, double v) {
        int idx = characteristic_index(name);
        row[static_cast<std::size_t>(idx)] = v;
    };
    auto sum7 = [&](const char* feed) { return feeds.window_sum(asset_id, feed, week_ago, t); };
    auto level = [&](const char* feed) { return feeds.level_before(asset_id, feed, t); };

    // --- onchain ---
    set("tx_volume_tm7", sum7("tx_volume"));
    set("active_addresses_tm7", sum7("active_addresses"));
    {
        double recent = feeds.window_sum(asset_id, "new_addresses", week_ago, t);
        double prior = feeds.window_sum(asset_id, "new_addresses", t - 14 * kSecondsPerDay,
                                        week_ago);
        set("delta_log_new_addresses_tm14_tm7",
            (!std::isnan(recent) && !std::isnan(prior) && recent > 0.0 && prior > 0.0)
                ? std::log(recent) - std::log(prior)
                : kNaN);
    }
    set("new_addresses_tm7", sum7("new_addresses"));
    set("total_addresses", level("total_addresses"));
    set("circulation_tm7", sum7("circulation"));
    set("age_destroyed_tm7", sum7("age_destroyed"));
    set("delta_flow_distribution_tm7",
        delta_distribution(asset_id, t, "entity_transfers",
                           {"flow_cex", "flow_dex", "flow_defi", "flow_whales"}));
    set("delta_holders_distribution_tm7",
        delta_distribution(asset_id, t, "holder_transfers",
                           {"holders_small", "holders_medium", "holders_large",
                            "holders_whale"}));
    set("pct_supply_in_profit", level("pct_supply_in_profit"));

    // --- exchange ---
    set("pct_supply_cex", level("pct_supply_cex"));
    set("pct_supply_dex", level("pct_supply_dex"));
    set("pct_supply_defi", level("pct_supply_defi"));
    set("pct_supply_traders", level("pct_supply_traders"));
    set("exchange_inflow_tm7", sum7("exchange_inflow"));
    set("exchange_outflow_tm7", sum7("exchange_outflow"));
    set("num_trading_pairs", level("num_trading_pairs"));

    // --- social ---
    set("social_volume_tm7", sum7("social_volume"));
    set("social_volume_reddit_tm7", sum7("social_volume_reddit"));
    set("social_volume_twitter_tm7", sum7("social_volume_twitter"));
    set("sentiment_pos_reddit_tm7", sum7("sentiment_pos_reddit"));
    set("sentiment_pos_twitter_tm7", sum7("sentiment_pos_twitter"));
    set("sentiment_neg_reddit_tm7", sum7("sentiment_neg_reddit"));
    set("sentiment_neg_twitter_tm7", sum7("sentiment_neg_twitter"));
    set("developer_activity_tm7", sum7("developer_activity"));
    set("vc_owned", s.meta ? (s.meta->vc_owned ? 1.0 : 0.0) : kNaN);

    // --- momentum ---
    double r7 = trailing_return(s, t, 7);
    double r14 = trailing_return(s, t, 14);
    double r30 = trailing_return(s, t, 30);
    double r60 = trailing_return(s, t, 60);
    double r90 = trailing_return(s, t, 90);
    set("return_tm7", r7);
    set("return_tm14", r14);
    set("return_tm30", r30);
    set("return_tm60", r60);
    set("return_tm90", r90);
    set("reversal_tm14_tm7", (!std::isnan(r14) && !std::isnan(r7)) ? r14 - r7 : kNaN);
    set("reversal_tm30_tm14", (!std::isnan(r30) && !std::isnan(r14)) ? r30 - r14 : kNaN);
    set("reversal_tm90_tm30", (!std::isnan(r90) && !std::isnan(r30)) ? r90 - r30 : kNaN);
    {
        auto bar = h.index_at(t);
        double p = h.price_at(t);
        if (bar >= 0 && !std::isnan(p)) {
            set("return_from_ath", p / s.prefix_max[static_cast<std::size_t>(bar)] - 1.0);
            set("return_from_atl", p / s.prefix_min[static_cast<std::size_t>(bar)] - 1.0);
        }
    }
    set("return_industry_tm30", industry_momentum(s, t, 30));
    set("return_industry_tm60", industry_momentum(s, t, 60));

    // --- microstructure ---
    set("trades_tm7", sum7("trades"));
    {
        auto lo = std::lower_bound(h.ts.begin(), h.ts.end(), week_ago + 1) - h.ts.begin();
        auto hi = std::upper_bound(h.ts.begin(), h.ts.end(), t) - h.ts.begin();
        double vol_sum = 0.0;
        for (auto k = lo; k < hi; ++k) vol_sum += h.volume_usd[k];
        set("volume_usd_tm7", hi > lo ? vol_sum : kNaN);

        // illiq: mean |hourly return| over mean hourly dollar volume.
        double abs_ret = 0.0;
        int n_ret = 0;
        auto g_end = (t - grid_start_) / kSecondsPerHour;
        if (g_end >= static_cast<TimePoint>(n_slots_))
            g_end = static_cast<TimePoint>(n_slots_) - 1;
        for (TimePoint g = std::max<TimePoint>(0, g_end - 167); g <= g_end; ++g) {
            double r = s.excess[static_cast<std::size_t>(g)];
            if (std::isnan(r)) continue;
            abs_ret += std::abs(r);
            ++n_ret;
        }
        double avg_vol = hi > lo ? vol_sum / static_cast<double>(hi - lo) : kNaN;
        set("illiq_tm7", (n_ret >= rolling_min_obs(7) && !std::isnan(avg_vol) && avg_vol > 0.0)
                             ? (abs_ret / n_ret) / avg_vol
                             : kNaN);

        // turnover: native-unit volume over circulating supply.
        double native = 0.0;
        for (auto k = lo; k < hi; ++k)
            if (h.price[k] > 0.0) native += h.volume_usd[k] / h.price[k];
        double supply = level("circulating_supply");
        set("turnover_tm7",
            (hi > lo && !std::isnan(supply) && supply > 0.0) ? native / supply : kNaN);
    }
    set("spread_bps", level("spread_bps"));
    set("ask_size", level("ask_size"));
    set("bid_size", level("bid_size"));

    // --- financial ---
    set("price", h.price_at(t));
    set("size", h.cap_at(t));
    set("mvrv", level("mvrv"));
    {
        auto asset_window = [&](int days) -> std::span<const double> {
            auto g_end = (t - grid_start_) / kSecondsPerHour;
            if (g_end < 0) return {};
            if (g_end >= static_cast<TimePoint>(n_slots_))
                g_end = static_cast<TimePoint>(n_slots_) - 1;
            TimePoint g_begin = std::max<TimePoint>(0, g_end - days * 24 + 1);
            return {s.excess.data() + g_begin, static_cast<std::size_t>(g_end - g_begin + 1)};
        };
        auto vol_of = [&](int days) {
            auto w = asset_window(days);
            std::vector<double> clean;
            clean.reserve(w.size());
            for (double r : w)
                if (!std::isnan(r)) clean.push_back(r);
            return static_cast<int>(clean.size()) >= rolling_min_obs(days) ? sample_std(clean)
                                                                           : kNaN;
        };
        RollingRegressionStats s7 =
            regression_stats(asset_window(7), market_window(t, 7), 7, rolling_min_obs(7));
        RollingRegressionStats s30 =
            regression_stats(asset_window(30), market_window(t, 30), 30, rolling_min_obs(30));
        RollingRegressionStats s90 =
            regression_stats(asset_window(90), market_window(t, 90), 90, rolling_min_obs(90));
        set("alpha_tm7", s7.alpha);
        set("alpha_tm30", s30.alpha);
        set("beta_tm7", s7.beta);
        set("beta_tm30", s30.beta);
        set("beta_down_tm30", s30.beta_down);
        set("coskew_tm30", s30.coskew);
        set("iskew_tm30", s30.iskew);
        set("ivol_tm7", s7.ivol);
        set("ivol_tm30", s30.ivol);
        set("ivol_tm90", s90.ivol);
        set("vol_tm7", vol_of(7));
        set("vol_tm30", vol_of(30));
        set("vol_tm90", vol_of(90));
        VarShortfall vs = var_shortfall(asset_window(7), 0.05, rolling_min_obs(7));
        set("var5_tm7", vs.var);
        set("shortfall5_tm7", vs.shortfall);
    }
    return row;
}

}  // namespace cryptofactor
