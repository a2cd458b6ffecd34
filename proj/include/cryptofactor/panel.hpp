#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cryptofactor/characteristics.hpp"
#include "cryptofactor/marketdata.hpp"
#include "cryptofactor/types.hpp"
#include "cryptofactor/universe.hpp"

namespace cryptofactor {

/// Forward-return horizons (days). Horizon 0 is the excess return of the
/// week ending at the row date (contemporaneous with the characteristics);
/// horizon h > 0 is the cumulative excess return over [t, t+h], so the 30
/// and 90 day columns overlap across weekly rows.
inline constexpr std::array<int, 5> kReturnHorizonsDays{0, 7, 14, 30, 90};

struct PanelRow {
    TimePoint week_start = 0;
    std::string asset_id;
    double market_cap_usd = 0.0;
    std::array<double, 5> excess_return_fwd{};  // NaN = absent
    std::vector<double> characteristics;        // aligned with Panel::characteristic_names
};

struct Panel {
    std::vector<PanelRow> rows;  // sorted by (week_start, asset_id)
    std::vector<UniverseSnapshot> universe;
    std::vector<std::string> characteristic_names;

    std::vector<TimePoint> week_starts() const;  // sorted unique
    int characteristic_column(const std::string& name) const;  // -1 if absent
};

/// Volume-weighted mean price of one asset-hour's bars across exchanges;
/// unweighted mean when all volumes are zero. Throws on an empty set.
double vwap_price(std::span<const HourlyBar> bars);
double vwap_price(std::span<const double> prices, std::span<const double> volumes);

/// Simple excess return between two price observations h days apart:
/// p1/p0 - 1 minus the annual risk-free rate compounded over h days.
double excess_return(double p0, double p1, double rf_annual, int horizon_days);

struct PanelOptions {
    /// Week grid anchor; 0 = first UTC Monday on/after the data start.
    TimePoint week_anchor = 0;
    unsigned threads = 1;
};

/// Weekly rows for every month's snapshot members, with forward excess
/// returns at all five horizons and the full characteristic set computed
/// from each asset's complete history (so a re-entering asset keeps its
/// pre-exit windows).
Panel build_panel(const MarketData& md, const ReferenceTable& refs,
                  const std::vector<UniverseSnapshot>& universe,
                  const CharacteristicEngine& engine, const PanelOptions& options = {});

/// Missing-value policy, applied per (week, characteristic): when more
/// than half of that week's members lack a value the characteristic is
/// removed from the whole panel, otherwise gaps take the week's
/// cross-sectional median. Idempotent.
Panel fill_missing(Panel p);

struct MarketReturnSeries {
    std::vector<TimePoint> week_start;
    std::vector<double> ret;  // value-weighted excess return of the week
};

/// CMKT: cap-weighted mean of members' one-week-forward excess returns,
/// weights taken at the week start. Throws on a week whose members carry
/// zero total cap.
MarketReturnSeries cmkt(const Panel& p);

}  // namespace cryptofactor
