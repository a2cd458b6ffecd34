#include "cryptofactor/universe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cryptofactor {

const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::TrailingHistory: return "trailing_history";
        case Criterion::WhitelistedMarket: return "whitelisted_market";
        case Criterion::NotStablecoinOrSynthetic: return "not_stablecoin_or_synthetic";
        case Criterion::CapFloor: return "cap_floor";
        case Criterion::NonzeroWeeklyVolume: return "nonzero_weekly_volume";
        case Criterion::MedianWeeklyVolume: return "median_weekly_volume";
    }
    return "?";
}

bool UniverseSnapshot::is_member(const std::string& asset_id) const {
    return std::binary_search(members.begin(), members.end(), asset_id);
}

double total_market_cap(const MarketData& md, TimePoint t) {
    double total = 0.0;
    bool any = false;
    for (const auto& a : md.assets()) {
        double cap = a.cap_at(t);
        if (!std::isnan(cap)) {
            total += cap;
            any = true;
        }
    }
    if (!any) throw std::runtime_error("total_market_cap: no market caps at or before " +
                                       format_timestamp(t));
    return total;
}

double total_market_cap(const Dataset& d, TimePoint t) {
    return total_market_cap(MarketData(d), t);
}

namespace {

double median_inplace(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool has_whitelisted_market(const AssetMeta& m, const InclusionCriteria& c) {
    for (const auto& [exchange, quote] : m.listed_markets) {
        bool exchange_ok = c.exchange_whitelist.empty() ||
                           std::find(c.exchange_whitelist.begin(), c.exchange_whitelist.end(),
                                     exchange) != c.exchange_whitelist.end();
        bool quote_ok = std::find(c.quote_whitelist.begin(), c.quote_whitelist.end(), quote) !=
                        c.quote_whitelist.end();
        if (exchange_ok && quote_ok) return true;
    }
    return false;
}

}  // namespace

UniverseSnapshot build_snapshot(const MarketData& md, const std::vector<AssetMeta>& meta,
                                YearMonth month, const InclusionCriteria& criteria) {
    if (criteria.trailing_weeks < 1)
        throw std::invalid_argument("build_snapshot: trailing_weeks must be >= 1");
    const TimePoint month_start = month.first_day();
    const TimePoint window_start = month_start - criteria.trailing_weeks * kSecondsPerWeek;
    if (window_start < md.first_hour())
        throw std::runtime_error("build_snapshot: month " + month.str() + " precedes data start + " +
                                 std::to_string(criteria.trailing_weeks) + " trailing weeks");

    // Daily total caps over the trailing 91 days ending the day before the
    // month's first day (numerator and denominator averaged alike).
    const int kCapWindowDays = 91;
    const TimePoint cap_window_start = month_start - kCapWindowDays * kSecondsPerDay;
    std::vector<double> daily_total(kCapWindowDays, 0.0);
    std::vector<bool> daily_any(kCapWindowDays, false);
    for (const auto& a : md.assets()) {
        for (int di = 0; di < kCapWindowDays; ++di) {
            double cap = a.cap_at(cap_window_start + di * kSecondsPerDay);
            if (!std::isnan(cap)) {
                daily_total[di] += cap;
                daily_any[di] = true;
            }
        }
    }
    double total_avg = 0.0;
    int total_days = 0;
    for (int di = 0; di < kCapWindowDays; ++di) {
        if (daily_any[di]) {
            total_avg += daily_total[di];
            ++total_days;
        }
    }
    total_avg = total_days > 0 ? total_avg / total_days : std::nan("");
    const double cap_floor = total_avg * criteria.mcap_floor_bps_of_total * 1e-4;

    // Diagnostics cover every asset in the dataset, including ones known
    // only from meta (they fail the data-backed criteria).
    std::vector<std::pair<std::string, const AssetHourly*>> roster;
    for (const auto& a : md.assets()) roster.emplace_back(a.asset_id, &a);
    for (const auto& m : meta)
        if (!md.find(m.asset_id)) roster.emplace_back(m.asset_id, nullptr);
    std::sort(roster.begin(), roster.end());

    UniverseSnapshot snap;
    snap.effective_month = month;
    for (const auto& [asset_id, a] : roster) {
        UniverseSnapshot::Diagnostic diag;
        diag.asset_id = asset_id;

        // (1) at least trailing_weeks weeks of bar history
        diag.pass[int(Criterion::TrailingHistory)] =
            a && !a->ts.empty() && a->ts.front() <= window_start;

        // (2) listed market on a whitelisted exchange in a whitelisted quote
        const AssetMeta* m = nullptr;
        for (const auto& mm : meta)
            if (mm.asset_id == asset_id) {
                m = &mm;
                break;
            }
        diag.pass[int(Criterion::WhitelistedMarket)] = m && has_whitelisted_market(*m, criteria);

        // (3) not a stablecoin or synthetic asset
        diag.pass[int(Criterion::NotStablecoinOrSynthetic)] =
            m && !m->is_stablecoin && !m->is_synthetic;

        // (4) trailing-3-month average cap above the floor
        double asset_avg = std::nan("");
        if (a) {
            double sum = 0.0;
            int asset_days = 0;
            for (int di = 0; di < kCapWindowDays; ++di) {
                double cap = a->cap_at(cap_window_start + di * kSecondsPerDay);
                if (!std::isnan(cap)) {
                    sum += cap;
                    ++asset_days;
                }
            }
            if (asset_days > 0) asset_avg = sum / asset_days;
        }
        diag.pass[int(Criterion::CapFloor)] =
            !std::isnan(asset_avg) && !std::isnan(cap_floor) && asset_avg > cap_floor;

        // (5)/(6) weekly volume sums over the trailing blocks
        std::vector<double> weekly(static_cast<std::size_t>(criteria.trailing_weeks), 0.0);
        bool all_nonzero = true;
        for (int wk = 0; wk < criteria.trailing_weeks; ++wk) {
            TimePoint from = month_start - (wk + 1) * kSecondsPerWeek;
            double v = a ? a->volume_in(from, from + kSecondsPerWeek) : 0.0;
            weekly[static_cast<std::size_t>(wk)] = v;
            if (!(v > 0.0)) all_nonzero = false;
        }
        diag.pass[int(Criterion::NonzeroWeeklyVolume)] =
            !criteria.require_nonzero_volume_all_weeks || all_nonzero;
        diag.pass[int(Criterion::MedianWeeklyVolume)] =
            median_inplace(weekly) > criteria.min_median_weekly_volume_usd;

        if (diag.all_pass()) snap.members.push_back(asset_id);
        snap.diagnostics.push_back(std::move(diag));
    }
    return snap;
}

UniverseSnapshot build_snapshot(const Dataset& d, YearMonth month,
                                const InclusionCriteria& criteria) {
    return build_snapshot(MarketData(d), d.meta, month, criteria);
}

std::vector<UniverseSnapshot> build_universe_series(const MarketData& md,
                                                    const std::vector<AssetMeta>& meta,
                                                    YearMonth first, YearMonth last,
                                                    const InclusionCriteria& criteria) {
    if (last < first) throw std::invalid_argument("build_universe_series: invalid month range");
    std::vector<UniverseSnapshot> out;
    for (YearMonth m = first; m <= last; m = m.next())
        out.push_back(build_snapshot(md, meta, m, criteria));
    return out;
}

std::vector<UniverseSnapshot> build_universe_series(const Dataset& d, YearMonth first,
                                                    YearMonth last,
                                                    const InclusionCriteria& criteria) {
    return build_universe_series(MarketData(d), d.meta, first, last, criteria);
}

const UniverseSnapshot* snapshot_for(const std::vector<UniverseSnapshot>& series,
                                     YearMonth month) {
    if (series.empty()) return nullptr;
    const UniverseSnapshot* best = nullptr;
    for (const auto& s : series) {
        if (s.effective_month == month) return &s;
        if (s.effective_month < month && (!best || best->effective_month < s.effective_month))
            best = &s;
    }
    return best ? best : &series.front();
}

}  // namespace cryptofactor
