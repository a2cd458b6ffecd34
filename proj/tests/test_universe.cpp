#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cryptofactor/rng.hpp"
#include "cryptofactor/synthetic.hpp"
#include "cryptofactor/universe.hpp"
#include "fixtures.hpp"
#include "universe_oracle.hpp"

using namespace cryptofactor;

TEST_CASE("total market cap sums latest forward-filled caps") {
    fixtures::DatasetBuilder b;
    TimePoint t0 = parse_timestamp("2021-01-01");
    b.add_hourly_bars("a", t0, t0 + 10 * kSecondsPerDay, [](TimePoint) { return 1.0; },
                      [](TimePoint) { return 0.0; },
                      [t0](TimePoint t) { return t == t0 ? 10.0 : std::nan(""); });
    b.add_hourly_bars("b", t0, t0 + 10 * kSecondsPerDay, [](TimePoint) { return 1.0; },
                      [](TimePoint) { return 0.0; },
                      [t0](TimePoint t) { return t == t0 ? 30.0 : std::nan(""); });
    b.add_meta("a");
    b.add_meta("b");
    Dataset d = b.build();
    CHECK(total_market_cap(d, t0) == doctest::Approx(40.0));
    // forward-filled 3 days out
    CHECK(total_market_cap(d, t0 + 3 * kSecondsPerDay) == doctest::Approx(40.0));
    CHECK_THROWS_AS(total_market_cap(d, t0 - kSecondsPerDay), std::runtime_error);

    Dataset empty;
    CHECK_THROWS_AS(total_market_cap(empty, t0), std::runtime_error);
}

TEST_CASE("criteria fixture: six months match the brute-force oracle") {
    fixtures::CriteriaFixture fx = fixtures::make_criteria_fixture();
    InclusionCriteria crit;
    MarketData md(fx.dataset);

    for (int m = 7; m <= 12; ++m) {
        YearMonth month{2021, m};
        UniverseSnapshot snap = build_snapshot(md, fx.dataset.meta, month, crit);
        auto expected = oracles::universe_bruteforce(fx.dataset, month, crit);
        CHECK_MESSAGE(snap.members == expected, month.str());
        // diagnostics completeness: every asset, all six criteria
        CHECK(snap.diagnostics.size() == 10);
    }
}

TEST_CASE("criteria fixture: hand-derived boundary memberships") {
    fixtures::CriteriaFixture fx = fixtures::make_criteria_fixture();
    InclusionCriteria crit;
    auto series = build_universe_series(fx.dataset, {2021, 7}, {2021, 12}, crit);
    REQUIRE(series.size() == 6);
    auto member = [&](int m, const std::string& id) { return series[m - 7].is_member(id); };

    for (int m = 7; m <= 12; ++m) {
        CHECK(member(m, "GOOD"));
        CHECK(member(m, "SMALL"));
        CHECK_FALSE(member(m, "MEDVOL"));  // median exactly $500,000 is not above it
        CHECK_FALSE(member(m, "STABLE"));
        CHECK_FALSE(member(m, "SYNTH"));
        CHECK_FALSE(member(m, "QUOTE"));
    }
    // LOWCAP sits exactly on the 1bp floor once every asset carries a cap.
    CHECK(member(7, "LOWCAP"));
    CHECK(member(9, "LOWCAP"));
    CHECK_FALSE(member(10, "LOWCAP"));
    CHECK_FALSE(member(12, "LOWCAP"));
    // YOUNG needs twelve trailing weeks from its 2021-06-15 listing.
    CHECK_FALSE(member(7, "YOUNG"));
    CHECK_FALSE(member(9, "YOUNG"));
    CHECK(member(10, "YOUNG"));
    CHECK(member(12, "YOUNG"));
    // ZEROWEEK fails only while the silent 2021-09-10 week is in the window.
    CHECK(member(7, "ZEROWEEK"));
    CHECK(member(9, "ZEROWEEK"));
    CHECK_FALSE(member(10, "ZEROWEEK"));
    CHECK_FALSE(member(11, "ZEROWEEK"));
    CHECK_FALSE(member(12, "ZEROWEEK"));
    // REENTER exits during the low-volume stretch, then comes back.
    CHECK(member(7, "REENTER"));
    CHECK_FALSE(member(8, "REENTER"));
    CHECK_FALSE(member(9, "REENTER"));
    CHECK(member(10, "REENTER"));
    CHECK(member(12, "REENTER"));
}

TEST_CASE("criteria fixture: diagnostics name the failing rule") {
    fixtures::CriteriaFixture fx = fixtures::make_criteria_fixture();
    UniverseSnapshot snap = build_snapshot(fx.dataset, {2021, 11}, InclusionCriteria{});
    auto diag_of = [&](const std::string& id) {
        for (const auto& d : snap.diagnostics)
            if (d.asset_id == id) return d;
        FAIL("missing diagnostic");
        return snap.diagnostics.front();
    };
    CHECK_FALSE(diag_of("STABLE").pass[int(Criterion::NotStablecoinOrSynthetic)]);
    CHECK(diag_of("STABLE").pass[int(Criterion::MedianWeeklyVolume)]);
    CHECK_FALSE(diag_of("QUOTE").pass[int(Criterion::WhitelistedMarket)]);
    CHECK_FALSE(diag_of("MEDVOL").pass[int(Criterion::MedianWeeklyVolume)]);
    CHECK_FALSE(diag_of("LOWCAP").pass[int(Criterion::CapFloor)]);
    CHECK_FALSE(diag_of("ZEROWEEK").pass[int(Criterion::NonzeroWeeklyVolume)]);
    CHECK(diag_of("GOOD").all_pass());
}

TEST_CASE("meta-only assets still receive full diagnostics") {
    fixtures::CriteriaFixture fx = fixtures::make_criteria_fixture();
    fixtures::DatasetBuilder extra;
    extra.d = std::move(fx.dataset);
    extra.add_meta("NOBARS");
    Dataset d = extra.build();
    UniverseSnapshot snap = build_snapshot(d, {2021, 11}, InclusionCriteria{});
    CHECK(snap.diagnostics.size() == 11);
    bool found = false;
    for (const auto& diag : snap.diagnostics) {
        if (diag.asset_id != "NOBARS") continue;
        found = true;
        CHECK_FALSE(diag.pass[int(Criterion::TrailingHistory)]);
        CHECK(diag.pass[int(Criterion::WhitelistedMarket)]);
        CHECK_FALSE(diag.pass[int(Criterion::CapFloor)]);
        CHECK_FALSE(diag.pass[int(Criterion::MedianWeeklyVolume)]);
    }
    CHECK(found);
    CHECK_FALSE(snap.is_member("NOBARS"));
}

TEST_CASE("exchange whitelist filters listings") {
    fixtures::CriteriaFixture fx = fixtures::make_criteria_fixture();
    InclusionCriteria crit;
    crit.exchange_whitelist = {"ex1"};
    UniverseSnapshot snap = build_snapshot(fx.dataset, {2021, 11}, crit);
    CHECK(snap.is_member("GOOD"));
    crit.exchange_whitelist = {"other_exchange"};
    UniverseSnapshot none = build_snapshot(fx.dataset, {2021, 11}, crit);
    CHECK(none.members.empty());
}

TEST_CASE("month too early is rejected") {
    fixtures::CriteriaFixture fx = fixtures::make_criteria_fixture();
    CHECK_THROWS_AS(build_snapshot(fx.dataset, {2021, 2}, InclusionCriteria{}),
                    std::runtime_error);
}

TEST_CASE("raising any threshold never adds a member") {
    SyntheticConfig cfg;
    cfg.n_assets = 12;
    cfg.start = parse_timestamp("2021-01-04");
    cfg.end = parse_timestamp("2021-10-04");
    cfg.volume_hourly_min = 1e2;
    cfg.volume_hourly_max = 1e4;
    Dataset d = generate_synthetic(cfg, 99).dataset;
    MarketData md(d);

    Rng rng(4242);
    InclusionCriteria base;
    base.min_median_weekly_volume_usd = 1e5;
    base.mcap_floor_bps_of_total = 1.0;
    UniverseSnapshot snap = build_snapshot(md, d.meta, {2021, 8}, base);
    for (int trial = 0; trial < 20; ++trial) {
        InclusionCriteria tighter = base;
        tighter.min_median_weekly_volume_usd *= 1.0 + rng.uniform01() * 5.0;
        tighter.mcap_floor_bps_of_total *= 1.0 + rng.uniform01() * 20.0;
        UniverseSnapshot t = build_snapshot(md, d.meta, {2021, 8}, tighter);
        for (const auto& id : t.members) CHECK(snap.is_member(id));
    }
}

TEST_CASE("determinism: identical inputs give identical snapshots") {
    fixtures::CriteriaFixture fx = fixtures::make_criteria_fixture();
    auto a = build_universe_series(fx.dataset, {2021, 7}, {2021, 12}, InclusionCriteria{});
    auto b = build_universe_series(fx.dataset, {2021, 7}, {2021, 12}, InclusionCriteria{});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].members == b[i].members);
}

TEST_CASE("growing synthetic universe has non-decreasing membership") {
    SyntheticConfig cfg;
    cfg.n_assets = 12;
    cfg.start = parse_timestamp("2021-01-04");
    cfg.end = parse_timestamp("2022-07-04");
    cfg.volume_hourly_min = 20.0;
    cfg.volume_hourly_max = 4e3;
    cfg.volume_growth_annual = 49.0;  // 50x per year
    cfg.supply_min = 1e8;
    cfg.supply_max = 2e8;
    cfg.price0_min = 1.0;
    cfg.price0_max = 10.0;
    Dataset d = generate_synthetic(cfg, 17).dataset;
    auto series = build_universe_series(d, {2021, 6}, {2022, 6}, InclusionCriteria{});
    std::size_t prev = 0;
    bool grew = false;
    for (const auto& s : series) {
        CHECK(s.members.size() >= prev);
        grew = grew || s.members.size() > prev;
        prev = s.members.size();
    }
    CHECK(grew);
}
