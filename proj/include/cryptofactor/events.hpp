#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cryptofactor/time.hpp"

namespace cryptofactor {

/// Daily-change convention for a level series: first differences for
/// everything except price-like series, whose change is the daily simple
/// return.
enum class ChangeKind { FirstDifference, SimpleReturn };

struct DailySeries {
    std::string name;
    std::vector<TimePoint> days;  // strictly increasing day starts
    std::vector<double> values;
    ChangeKind kind = ChangeKind::FirstDifference;
};

/// Daily changes of a level series; changes[i] covers days[i-1] -> days[i]
/// and is NaN across gaps (non-consecutive days). Index 0 is NaN.
std::vector<double> daily_changes(const DailySeries& s);

struct EventEffect {
    double estimate = 0.0;  // mean across events of (post mean - pre mean)
    int n_events_used = 0;
    int n_events_dropped = 0;  // too close to a boundary or not in the series
};

/// Difference between the average daily change over days +1..+w and days
/// -w..-1 around each event, averaged across events. Events without full
/// windows are dropped and counted.
EventEffect event_effect(const DailySeries& s, std::span<const TimePoint> events, int window_days);

/// Placebo bootstrap: the standard deviation of the effect recomputed on
/// B draws of n_events dates sampled uniformly with replacement from the
/// days eligible for full windows. Deterministic per seed (per-draw
/// substreams). Throws when no eligible placebo days exist.
double event_bootstrap_se(const DailySeries& s, int n_events, int window_days, int B,
                          std::uint64_t seed);

struct EventStudyRow {
    std::string series;
    int window_days = 0;
    double estimate = 0.0;
    double bootstrap_se = 0.0;
    int n_events_used = 0;
};

/// Effect and bootstrap SE per (series, window); the default windows
/// mirror the two-day / one-week / two-week robustness set.
std::vector<EventStudyRow> run_event_study(std::span<const DailySeries> series,
                                           std::span<const TimePoint> events,
                                           std::span<const int> windows, int bootstrap_B,
                                           std::uint64_t seed);

}  // namespace cryptofactor
