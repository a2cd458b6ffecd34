#include "cryptofactor/panel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cryptofactor/parallel.hpp"

namespace cryptofactor {

std::vector<TimePoint> Panel::week_starts() const {
    std::vector<TimePoint> out;
    for (const auto& r : rows)
        if (out.empty() || out.back() != r.week_start) out.push_back(r.week_start);
    return out;
}

int Panel::characteristic_column(const std::string& name) const {
    for (std::size_t i = 0; i < characteristic_names.size(); ++i)
        if (characteristic_names[i] == name) return static_cast<int>(i);
    return -1;
}

double vwap_price(std::span<const double> prices, std::span<const double> volumes) {
    if (prices.empty() || prices.size() != volumes.size())
        throw std::invalid_argument("vwap_price: empty or mismatched inputs");
    double pv = 0.0, v = 0.0, psum = 0.0;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (volumes[i] < 0.0) throw std::invalid_argument("vwap_price: negative volume");
        pv += prices[i] * volumes[i];
        v += volumes[i];
        psum += prices[i];
    }
    return v > 0.0 ? pv / v : psum / static_cast<double>(prices.size());
}

double vwap_price(std::span<const HourlyBar> bars) {
    std::vector<double> p, v;
    p.reserve(bars.size());
    v.reserve(bars.size());
    for (const auto& b : bars) {
        p.push_back(b.mid_price);
        v.push_back(b.volume_usd);
    }
    return vwap_price(p, v);
}

double excess_return(double p0, double p1, double rf_annual, int horizon_days) {
    if (std::isnan(p0) || std::isnan(p1)) return std::nan("");
    if (p0 <= 0.0) throw std::invalid_argument("excess_return: nonpositive start price");
    return p1 / p0 - 1.0 - deannualize(rf_annual, horizon_days);
}

namespace {

double rf_at(const ReferenceTable& refs, TimePoint t) {
    double v = refs.value_at("risk_free_1m", t);
    return std::isnan(v) ? 0.0 : v;
}

}  // namespace

Panel build_panel(const MarketData& md, const ReferenceTable& refs,
                  const std::vector<UniverseSnapshot>& universe,
                  const CharacteristicEngine& engine, const PanelOptions& options) {
    if (universe.empty()) throw std::invalid_argument("build_panel: empty universe series");

    Panel panel;
    panel.universe = universe;
    for (const auto& spec : characteristic_dictionary())
        panel.characteristic_names.push_back(spec.name);

    TimePoint anchor = options.week_anchor != 0 ? options.week_anchor
                                                : first_monday_on_or_after(md.first_hour());
    // (week_start, snapshot) tasks: a week belongs to the month containing
    // its start, and needs a snapshot for exactly that month.
    struct Task {
        TimePoint week_start;
        const UniverseSnapshot* snap;
    };
    std::vector<Task> tasks;
    for (TimePoint t = anchor; t <= md.last_hour(); t += kSecondsPerWeek) {
        YearMonth ym = year_month_of(t);
        for (const auto& s : universe)
            if (s.effective_month == ym) {
                tasks.push_back({t, &s});
                break;
            }
    }

    std::vector<std::vector<PanelRow>> per_week(tasks.size());
    parallel_for(tasks.size(), options.threads, [&](std::size_t wi) {
        const Task& task = tasks[wi];
        const TimePoint t = task.week_start;
        for (const auto& asset_id : task.snap->members) {
            const AssetHourly* h = md.find(asset_id);
            if (!h) continue;
            double cap = h->cap_at(t);
            if (std::isnan(cap) || cap <= 0.0) continue;
            PanelRow row;
            row.week_start = t;
            row.asset_id = asset_id;
            row.market_cap_usd = cap;
            double p_t = h->price_at(t);
            for (std::size_t hi = 0; hi < kReturnHorizonsDays.size(); ++hi) {
                int horizon = kReturnHorizonsDays[hi];
                double r;
                if (horizon == 0) {
                    double p_prev = h->price_at(t - 7 * kSecondsPerDay);
                    r = (std::isnan(p_prev) || std::isnan(p_t))
                            ? std::nan("")
                            : excess_return(p_prev, p_t,
                                            rf_at(refs, t - 7 * kSecondsPerDay), 7);
                } else {
                    double p_fwd = h->price_at(t + horizon * kSecondsPerDay);
                    r = (std::isnan(p_t) || std::isnan(p_fwd))
                            ? std::nan("")
                            : excess_return(p_t, p_fwd, rf_at(refs, t), horizon);
                }
                row.excess_return_fwd[hi] = r;
            }
            row.characteristics = engine.compute_row(asset_id, t);
            per_week[wi].push_back(std::move(row));
        }
    });
    for (auto& rows : per_week)
        for (auto& row : rows) panel.rows.push_back(std::move(row));
    // Tasks are time-ordered and members lexicographic, so rows already
    // sit in (week_start, asset_id) order.
    return panel;
}

Panel fill_missing(Panel p) {
    const std::size_t n_chars = p.characteristic_names.size();
    if (n_chars == 0 || p.rows.empty()) return p;

    // Group row indices per week.
    std::map<TimePoint, std::vector<std::size_t>> weeks;
    for (std::size_t i = 0; i < p.rows.size(); ++i) weeks[p.rows[i].week_start].push_back(i);

    // Pass 1: find characteristics missing for a majority of members in
    // any week; those are dropped panel-wide.
    std::vector<bool> drop(n_chars, false);
    for (const auto& [week, idx] : weeks) {
        for (std::size_t c = 0; c < n_chars; ++c) {
            if (drop[c]) continue;
            std::size_t missing = 0;
            for (std::size_t i : idx) missing += std::isnan(p.rows[i].characteristics[c]);
            if (2 * missing > idx.size()) drop[c] = true;
        }
    }

    // Pass 2: cross-sectional median fill for surviving characteristics.
    for (const auto& [week, idx] : weeks) {
        for (std::size_t c = 0; c < n_chars; ++c) {
            if (drop[c]) continue;
            std::vector<double> present;
            std::vector<std::size_t> gaps;
            for (std::size_t i : idx) {
                double v = p.rows[i].characteristics[c];
                if (std::isnan(v))
                    gaps.push_back(i);
                else
                    present.push_back(v);
            }
            if (gaps.empty() || present.empty()) continue;
            std::sort(present.begin(), present.end());
            std::size_t n = present.size();
            double med = n % 2 == 1 ? present[n / 2] : 0.5 * (present[n / 2 - 1] + present[n / 2]);
            for (std::size_t i : gaps) p.rows[i].characteristics[c] = med;
        }
    }

    if (std::any_of(drop.begin(), drop.end(), [](bool b) { return b; })) {
        std::vector<std::string> kept_names;
        for (std::size_t c = 0; c < n_chars; ++c)
            if (!drop[c]) kept_names.push_back(p.characteristic_names[c]);
        for (auto& row : p.rows) {
            std::vector<double> kept;
            kept.reserve(kept_names.size());
            for (std::size_t c = 0; c < n_chars; ++c)
                if (!drop[c]) kept.push_back(row.characteristics[c]);
            row.characteristics = std::move(kept);
        }
        p.characteristic_names = std::move(kept_names);
    }
    return p;
}

MarketReturnSeries cmkt(const Panel& p) {
    MarketReturnSeries out;
    const int fwd7 = 1;  // index of the 7-day horizon in kReturnHorizonsDays
    std::map<TimePoint, std::pair<double, double>> acc;  // week -> (w*r sum, w sum)
    for (const auto& row : p.rows) {
        double r = row.excess_return_fwd[fwd7];
        if (std::isnan(r)) continue;
        auto& [wr, w] = acc[row.week_start];
        wr += row.market_cap_usd * r;
        w += row.market_cap_usd;
    }
    for (const auto& [week, pair] : acc) {
        if (!(pair.second > 0.0))
            throw std::runtime_error("cmkt: zero total market cap in week " + format_date(week));
        out.week_start.push_back(week);
        out.ret.push_back(pair.first / pair.second);
    }
    return out;
}

}  // namespace cryptofactor
