#include "cryptofactor/events.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cryptofactor/metrics.hpp"
#include "cryptofactor/rng.hpp"

namespace cryptofactor {

std::vector<double> daily_changes(const DailySeries& s) {
    std::vector<double> out(s.values.size(), std::nan(""));
    for (std::size_t i = 1; i < s.values.size(); ++i) {
        if (s.days[i] - s.days[i - 1] != kSecondsPerDay) continue;
        if (std::isnan(s.values[i]) || std::isnan(s.values[i - 1])) continue;
        out[i] = s.kind == ChangeKind::SimpleReturn
                     ? (s.values[i - 1] != 0.0 ? s.values[i] / s.values[i - 1] - 1.0
                                               : std::nan(""))
                     : s.values[i] - s.values[i - 1];
    }
    return out;
}

namespace {

// Effect for one event index j over the change series; NaN if any change
// in the two windows is undefined.
double effect_at(const std::vector<double>& changes, std::ptrdiff_t j, int w) {
    std::ptrdiff_t n = static_cast<std::ptrdiff_t>(changes.size());
    if (j - w < 1 || j + w > n - 1) return std::nan("");
    double pre = 0.0, post = 0.0;
    for (int k = 1; k <= w; ++k) {
        double a = changes[static_cast<std::size_t>(j - k)];
        double b = changes[static_cast<std::size_t>(j + k)];
        if (std::isnan(a) || std::isnan(b)) return std::nan("");
        pre += a;
        post += b;
    }
    return (post - pre) / w;
}

}  // namespace

EventEffect event_effect(const DailySeries& s, std::span<const TimePoint> events,
                         int window_days) {
    if (window_days < 1) throw std::invalid_argument("event_effect: window must be >= 1");
    std::vector<double> changes = daily_changes(s);
    EventEffect out;
    double sum = 0.0;
    for (TimePoint e : events) {
        auto it = std::lower_bound(s.days.begin(), s.days.end(), floor_day(e));
        if (it == s.days.end() || *it != floor_day(e)) {
            ++out.n_events_dropped;
            continue;
        }
        double eff = effect_at(changes, it - s.days.begin(), window_days);
        if (std::isnan(eff)) {
            ++out.n_events_dropped;
            continue;
        }
        sum += eff;
        ++out.n_events_used;
    }
    if (out.n_events_used == 0)
        throw std::runtime_error("event_effect: no usable events for series " + s.name);
    out.estimate = sum / out.n_events_used;
    return out;
}

double event_bootstrap_se(const DailySeries& s, int n_events, int window_days, int B,
                          std::uint64_t seed) {
    if (n_events < 1) throw std::invalid_argument("event_bootstrap_se: need >= 1 event");
    if (B < 100) throw std::invalid_argument("event_bootstrap_se: need B >= 100");
    std::vector<double> changes = daily_changes(s);

    std::vector<std::ptrdiff_t> eligible;
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(changes.size()); ++j)
        if (!std::isnan(effect_at(changes, j, window_days))) eligible.push_back(j);
    if (eligible.empty())
        throw std::runtime_error("event_bootstrap_se: no eligible placebo days for series " +
                                 s.name);

    std::vector<double> draws(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(b));
        double sum = 0.0;
        for (int e = 0; e < n_events; ++e) {
            auto j = eligible[rng.bounded(eligible.size())];
            sum += effect_at(changes, j, window_days);
        }
        draws[static_cast<std::size_t>(b)] = sum / n_events;
    }
    return sample_std(draws);
}

std::vector<EventStudyRow> run_event_study(std::span<const DailySeries> series,
                                           std::span<const TimePoint> events,
                                           std::span<const int> windows, int bootstrap_B,
                                           std::uint64_t seed) {
    // The bootstrap resamples event days jointly: one placebo date set per
    // draw, applied to every series, sampled from days eligible for full
    // windows in all of them.
    std::vector<EventStudyRow> out;
    std::vector<std::vector<double>> changes;
    for (const auto& s : series) changes.push_back(daily_changes(s));

    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        int w = windows[wi];
        auto series_effect = [&](std::size_t si, TimePoint date) -> double {
            const DailySeries& s = series[si];
            auto it = std::lower_bound(s.days.begin(), s.days.end(), date);
            if (it == s.days.end() || *it != date) return std::nan("");
            return effect_at(changes[si], it - s.days.begin(), w);
        };

        // Events and placebo days usable in every series at this window.
        std::vector<TimePoint> usable_events;
        for (TimePoint e : events) {
            bool ok = true;
            for (std::size_t si = 0; si < series.size() && ok; ++si)
                ok = !std::isnan(series_effect(si, floor_day(e)));
            if (ok) usable_events.push_back(floor_day(e));
        }
        if (usable_events.empty())
            throw std::runtime_error("run_event_study: no usable events at window " +
                                     std::to_string(w));
        std::vector<TimePoint> eligible;
        for (TimePoint d : series.front().days) {
            bool ok = true;
            for (std::size_t si = 0; si < series.size() && ok; ++si)
                ok = !std::isnan(series_effect(si, d));
            if (ok) eligible.push_back(d);
        }
        if (eligible.empty())
            throw std::runtime_error("run_event_study: no eligible placebo days at window " +
                                     std::to_string(w));

        const int n_events = static_cast<int>(usable_events.size());
        std::vector<std::vector<double>> draws(series.size(),
                                               std::vector<double>(bootstrap_B));
        for (int b = 0; b < bootstrap_B; ++b) {
            Rng rng = Rng::derive(seed + 0x1000003ULL * (wi + 1), static_cast<std::uint64_t>(b));
            std::vector<TimePoint> dates(static_cast<std::size_t>(n_events));
            for (auto& d : dates) d = eligible[rng.bounded(eligible.size())];
            for (std::size_t si = 0; si < series.size(); ++si) {
                double sum = 0.0;
                for (TimePoint d : dates) sum += series_effect(si, d);
                draws[si][static_cast<std::size_t>(b)] = sum / n_events;
            }
        }
        for (std::size_t si = 0; si < series.size(); ++si) {
            double sum = 0.0;
            for (TimePoint e : usable_events) sum += series_effect(si, e);
            EventStudyRow row;
            row.series = series[si].name;
            row.window_days = w;
            row.estimate = sum / n_events;
            row.bootstrap_se = sample_std(draws[si]);
            row.n_events_used = n_events;
            out.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace cryptofactor
