// Acceptance gate: eight criteria, one pass/fail line each. Every
// tolerance is pinned in code; the binary exits nonzero if any criterion
// fails or overruns its time budget.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "cryptofactor/characteristics.hpp"
#include "cryptofactor/events.hpp"
#include "cryptofactor/factors.hpp"
#include "cryptofactor/metrics.hpp"
#include "cryptofactor/panel.hpp"
#include "cryptofactor/pipeline.hpp"
#include "cryptofactor/riskpremia.hpp"
#include "cryptofactor/rng.hpp"
#include "cryptofactor/synthetic.hpp"
#include "cryptofactor/universe.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "universe_oracle.hpp"

using namespace cryptofactor;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Check {
    bool ok = true;
    std::string detail;
    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

void criterion(int number, const std::string& name, double budget_seconds,
               const std::function<void(Check&)>& body) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.expect(false, std::string("exception: ") + e.what());
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > budget_seconds)
        check.expect(false, "runtime " + std::to_string(elapsed) + "s exceeds budget " +
                                std::to_string(budget_seconds) + "s");
    if (check.ok) {
        std::printf("C%d %-22s PASS  (%.1fs)\n", number, name.c_str(), elapsed);
    } else {
        std::printf("C%d %-22s FAIL  (%.1fs)  %s\n", number, name.c_str(), elapsed,
                    check.detail.c_str());
        ++g_failures;
    }
    std::fflush(stdout);
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---------------------------------------------------------------------
// C1: kernel implementations match brute-force oracles to 1e-10 on >=100
// randomized instances each.
void c1_kernel_oracles(Check& check) {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        // OLS
        int n = 40 + static_cast<int>(rng.bounded(80));
        Eigen::MatrixXd X(n, 3);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = 1.0;
            X(i, 1) = rng.normal();
            X(i, 2) = rng.normal();
            y(i) = 0.1 + 0.7 * X(i, 1) - 1.3 * X(i, 2) + rng.normal();
        }
        RegressionResult fit = ols(y, X);
        Eigen::VectorXd oracle = oracles::normal_equations(y, X);
        for (int k = 0; k < 3; ++k)
            check.expect(close(fit.coefficients(k), oracle(k), 1e-10), "ols mismatch");

        // Pearson
        std::vector<double> a(100), b(100);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = rng.normal();
            b[i] = 0.4 * a[i] + rng.normal();
        }
        check.expect(close(pearson(a, b), oracles::pearson_bruteforce(a, b), 1e-10),
                     "pearson mismatch");

        // VaR / shortfall
        std::vector<double> r(30 + rng.bounded(300));
        for (auto& v : r) v = 0.01 * rng.normal();
        VarShortfall vs = var_shortfall(r, 0.05, 24);
        check.expect(close(vs.var, oracles::quantile_bruteforce(r, 0.05), 1e-10),
                     "var mismatch");
        double sf = oracles::shortfall_bruteforce(r, 0.05);
        if (!std::isnan(sf)) check.expect(close(vs.shortfall, sf, 1e-10), "shortfall mismatch");

        // MI on small tables
        std::vector<double> mx(60 + rng.bounded(200)), my(mx.size());
        for (std::size_t i = 0; i < mx.size(); ++i) {
            mx[i] = rng.normal();
            my[i] = rng.normal() + 0.5 * mx[i];
        }
        check.expect(close(mutual_information(mx, my), oracles::mi_bruteforce(mx, my, 10), 1e-10),
                     "mi mismatch");

        // quintile assignment
        std::size_t nq = 5 + rng.bounded(60);
        std::vector<double> qv(nq);
        for (auto& v : qv) v = std::floor(8.0 * rng.uniform01());
        std::vector<std::string> ids(nq);
        for (std::size_t i = 0; i < nq; ++i) ids[i] = "A" + std::to_string(100 + i);
        check.expect(assign_quintiles(qv, ids) == oracles::quintiles_bruteforce(qv, ids),
                     "quintile mismatch");
    }
}

// ---------------------------------------------------------------------
// C2: Newey-West. L=0 equals White exactly; under AR(1) errors the HAC SE
// tracks the Monte-Carlo sampling std of the slope within 15%.
void c2_newey_west(Check& check) {
    {
        Rng rng(202);
        int n = 120;
        Eigen::MatrixXd X(n, 2);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = 1.0;
            X(i, 1) = rng.normal();
            y(i) = 0.5 + X(i, 1) + (1.0 + std::abs(X(i, 1))) * rng.normal();
        }
        RegressionResult fit = ols(y, X);
        Eigen::VectorXd nw = newey_west_se(fit, X, 0);
        Eigen::VectorXd white = oracles::white_se(fit.residuals, X);
        for (int k = 0; k < 2; ++k)
            check.expect(close(nw(k), white(k), 1e-12), "L=0 differs from White");
    }

    const int n = 500, reps = 1000;
    const double phi = 0.5, rho = 0.5, slope = 1.0;
    std::vector<double> slopes(reps);
    double se_sum = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        Rng rng(3000 + rep);
        Eigen::MatrixXd X(n, 2);
        Eigen::VectorXd y(n);
        double x = 0.0, u = 0.0;
        for (int i = 0; i < n; ++i) {
            x = phi * x + rng.normal();
            u = rho * u + rng.normal();
            X(i, 0) = 1.0;
            X(i, 1) = x;
            y(i) = slope * x + u;
        }
        RegressionResult fit = ols(y, X);
        Eigen::VectorXd se = newey_west_se(fit, X, default_bartlett_lags(n));
        slopes[static_cast<std::size_t>(rep)] = fit.coefficients(1);
        se_sum += se(1);
    }
    double mc_std = sample_std(slopes);
    double mean_se = se_sum / reps;
    check.expect(std::abs(mean_se - mc_std) / mc_std < 0.15,
                 "HAC SE " + std::to_string(mean_se) + " vs MC std " + std::to_string(mc_std));
}

// ---------------------------------------------------------------------
// C3: the ten-asset criteria fixture over six consecutive months, exact
// $500,000 and 1bp boundaries strict, membership vs hand derivation and
// the brute-force oracle, plus re-entry history.
void c3_universe_gate(Check& check) {
    fixtures::CriteriaFixture fx = fixtures::make_criteria_fixture();
    InclusionCriteria crit;
    MarketData md(fx.dataset);

    auto series = build_universe_series(md, fx.dataset.meta, {2021, 7}, {2021, 12}, crit);
    check.expect(series.size() == 6, "expected six snapshots");
    for (const auto& snap : series) {
        auto expected = oracles::universe_bruteforce(fx.dataset, snap.effective_month, crit);
        check.expect(snap.members == expected,
                     "oracle mismatch in " + snap.effective_month.str());
        check.expect(snap.diagnostics.size() == 10, "diagnostics incomplete");
    }
    auto member = [&](int m, const std::string& id) { return series[m - 7].is_member(id); };
    // exact boundaries are strict
    for (int m = 7; m <= 12; ++m)
        check.expect(!member(m, "MEDVOL"), "MEDVOL admitted at the $500,000 boundary");
    for (int m = 10; m <= 12; ++m)
        check.expect(!member(m, "LOWCAP"), "LOWCAP admitted at the 1bp boundary");
    // hand derivation of the dynamic assets
    check.expect(member(7, "REENTER") && !member(8, "REENTER") && !member(9, "REENTER") &&
                     member(10, "REENTER"),
                 "REENTER exit/re-entry wrong");
    check.expect(!member(9, "YOUNG") && member(10, "YOUNG"), "YOUNG history floor wrong");
    check.expect(member(9, "ZEROWEEK") && !member(10, "ZEROWEEK"), "ZEROWEEK wrong");

    // post-re-entry characteristic windows reach pre-exit history
    FeedTable feeds(fx.dataset);
    ReferenceTable refs(fx.dataset);
    CharacteristicEngine engine(md, feeds, refs, series, fx.dataset.meta);
    Panel panel = build_panel(md, refs, series, engine);
    int col = -1;
    for (std::size_t i = 0; i < panel.characteristic_names.size(); ++i)
        if (panel.characteristic_names[i] == "return_tm90") col = static_cast<int>(i);
    check.expect(col >= 0, "return_tm90 missing from the fixture panel");
    bool found = false;
    for (const auto& row : panel.rows) {
        if (row.asset_id != "REENTER" || year_month_of(row.week_start).month != 10) continue;
        found = true;
        check.expect(col >= 0 && !std::isnan(row.characteristics[static_cast<std::size_t>(col)]),
                     "re-entry row lost its pre-exit window");
        break;
    }
    check.expect(found, "no October REENTER rows");
}

// ---------------------------------------------------------------------
// C4: sort recovery. Full pipeline on a planted 1% weekly premium
// (100 assets x 260 weeks), then the placebo false-significance rate on
// directly-constructed no-premium panels across 50 seeds.
void c4_sort_recovery(Check& check) {
    {
        SyntheticConfig cfg;
        cfg.n_assets = 100;
        cfg.start = parse_timestamp("2018-01-01");
        cfg.end = cfg.start + 260 * kSecondsPerWeek;
        cfg.idio_vol_hourly = 0.004;
        cfg.beta_min = cfg.beta_max = 1.0;
        cfg.rf_annual = 0.0;
        cfg.supply_min = 1e8;
        cfg.supply_max = 1.5e8;
        cfg.price0_min = 1.0;
        cfg.price0_max = 2.0;
        cfg.planted_char = "developer_activity_tm7";
        cfg.planted_lambda_weekly = 0.01;
        cfg.planted_feed_only = true;
        SyntheticResult synth = generate_synthetic(cfg, 4);
        // the planted premium comes from the sidecar manifest, not the config
        const double lambda = std::stod(synth.manifest.at("planted_lambda_weekly"));

        MarketData md(synth.dataset);
        FeedTable feeds(synth.dataset);
        ReferenceTable refs(synth.dataset);
        auto universe = build_universe_series(md, synth.dataset.meta, {2018, 4}, {2022, 12},
                                              InclusionCriteria{});
        CharacteristicEngine engine(md, feeds, refs, universe, synth.dataset.meta, 1);
        Panel panel = fill_missing(build_panel(md, refs, universe, engine));
        SortResult sort = run_sort(panel, cfg.planted_char);

        double se = oracles::stdev(sort.long_short) /
                    std::sqrt(static_cast<double>(sort.long_short.size()));
        check.expect(close(sort.means[5], lambda, 2.0 * se),
                     "planted spread " + std::to_string(sort.means[5]) + " se " +
                         std::to_string(se));
        check.expect(sort.monotone, "planted sort not monotone");
        check.expect(sort.weeks_used > 200, "too few sorted weeks");
    }

    // Placebo: 63 iid characteristics per seed, no premium anywhere.
    int significant = 0, total = 0;
    for (int seed = 0; seed < 50; ++seed) {
        Rng rng(7000 + seed);
        const int n_assets = 100, weeks = 260, n_chars = 63;
        Panel panel;
        for (int c = 0; c < n_chars; ++c) panel.characteristic_names.push_back("p" + std::to_string(c));
        std::vector<double> caps(n_assets);
        for (auto& c : caps) c = std::exp(rng.uniform(std::log(1e7), std::log(1e10)));
        TimePoint w0 = parse_timestamp("2018-01-01");
        for (int w = 0; w < weeks; ++w) {
            for (int a = 0; a < n_assets; ++a) {
                PanelRow row;
                row.week_start = w0 + w * kSecondsPerWeek;
                row.asset_id = "A" + std::to_string(100 + a);
                row.market_cap_usd = caps[static_cast<std::size_t>(a)];
                row.excess_return_fwd = {std::nan(""), 0.03 * rng.normal(), std::nan(""),
                                         std::nan(""), std::nan("")};
                row.characteristics.resize(n_chars);
                for (int c = 0; c < n_chars; ++c)
                    row.characteristics[static_cast<std::size_t>(c)] = rng.normal();
                panel.rows.push_back(std::move(row));
            }
        }
        for (const auto& name : panel.characteristic_names) {
            SortResult s = run_sort(panel, name);
            if (!std::isnan(s.t_stats[5]) && std::abs(s.t_stats[5]) > 1.96) ++significant;
            ++total;
        }
    }
    double rate = static_cast<double>(significant) / total;
    check.expect(rate >= 0.02 && rate <= 0.08,
                 "false-significance rate " + std::to_string(rate));
}

// ---------------------------------------------------------------------
// C5: Fama-MacBeth. Planted weekly premium of 31 bps recovered within two
// standard errors; t-test size under a zero premium within [2%, 10%].
void c5_fama_macbeth(Check& check) {
    {
        Rng rng(505);
        const int N = 50, T = 260;
        const double lambda_star = 0.0031;
        std::vector<double> beta(N), f(T);
        for (auto& b : beta) b = rng.uniform(0.5, 1.5);
        for (auto& v : f) v = 0.02 * rng.normal();
        ReturnPanel panel;
        panel.grid.resize(T);
        TimePoint w0 = parse_timestamp("2018-01-01");
        for (int t = 0; t < T; ++t) panel.grid[static_cast<std::size_t>(t)] = w0 + t * kSecondsPerWeek;
        Eigen::MatrixXd factors(T, 1);
        for (int t = 0; t < T; ++t) factors(t, 0) = f[static_cast<std::size_t>(t)];
        for (int a = 0; a < N; ++a) {
            panel.asset_ids.push_back("A" + std::to_string(100 + a));
            std::vector<double> r(T);
            for (int t = 0; t < T; ++t)
                r[static_cast<std::size_t>(t)] =
                    beta[static_cast<std::size_t>(a)] *
                        (f[static_cast<std::size_t>(t)] + lambda_star) +
                    0.02 * rng.normal();
            panel.returns.push_back(std::move(r));
        }
        auto betas = estimate_betas(panel, factors, 200.0);
        FMBResult res = fama_macbeth(panel, betas, {"f"});
        check.expect(std::abs(res.lambda(1) - lambda_star) < 2.0 * res.se(1),
                     "lambda " + std::to_string(res.lambda(1)) + " se " +
                         std::to_string(res.se(1)));
        check.expect(res.assets_used == N && res.periods_used == T, "sample lost");
    }

    int rejections = 0;
    const int sims = 500;
    for (int sim = 0; sim < sims; ++sim) {
        Rng rng(9000 + sim);
        const int N = 30, T = 104;
        std::vector<double> beta(N), f(T);
        for (auto& b : beta) b = rng.uniform(0.5, 1.5);
        for (auto& v : f) v = 0.02 * rng.normal();
        ReturnPanel panel;
        panel.grid.resize(T);
        TimePoint w0 = parse_timestamp("2018-01-01");
        for (int t = 0; t < T; ++t) panel.grid[static_cast<std::size_t>(t)] = w0 + t * kSecondsPerWeek;
        Eigen::MatrixXd factors(T, 1);
        for (int t = 0; t < T; ++t) factors(t, 0) = f[static_cast<std::size_t>(t)];
        for (int a = 0; a < N; ++a) {
            panel.asset_ids.push_back("A" + std::to_string(100 + a));
            std::vector<double> r(T);
            for (int t = 0; t < T; ++t)
                r[static_cast<std::size_t>(t)] =
                    beta[static_cast<std::size_t>(a)] * f[static_cast<std::size_t>(t)] +
                    0.02 * rng.normal();
            panel.returns.push_back(std::move(r));
        }
        auto betas = estimate_betas(panel, factors, 200.0);
        FMBResult res = fama_macbeth(panel, betas, {"f"});
        if (std::abs(res.t(1)) > 1.96) ++rejections;
    }
    double size = static_cast<double>(rejections) / sims;
    check.expect(size >= 0.02 && size <= 0.10, "size " + std::to_string(size));
}

// ---------------------------------------------------------------------
// C6: event study power, placebo size, and bootstrap determinism.
void c6_event_study(Check& check) {
    auto make_walk = [](Rng& rng, int days) {
        DailySeries s;
        s.name = "x";
        s.kind = ChangeKind::FirstDifference;
        TimePoint d0 = parse_timestamp("2015-01-01");
        double level = 0.0;
        for (int i = 0; i < days; ++i) {
            level += rng.normal();
            s.days.push_back(d0 + static_cast<TimePoint>(i) * kSecondsPerDay);
            s.values.push_back(level);
        }
        return s;
    };
    const int days = 2000, w = 7;
    const double jump = 5.0;  // 5x the unit daily standard deviation

    int powered = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng(11000 + seed);
        DailySeries s = make_walk(rng, days);
        // event days separated by more than 2w so planted windows never overlap
        std::vector<std::size_t> idxs;
        while (idxs.size() < 5) {
            std::size_t idx = 100 + rng.bounded(days - 200);
            bool clear = true;
            for (std::size_t other : idxs)
                if (std::llabs(static_cast<long long>(idx) - static_cast<long long>(other)) <=
                    2 * w + 1)
                    clear = false;
            if (clear) idxs.push_back(idx);
        }
        std::vector<TimePoint> events;
        for (std::size_t idx : idxs) {
            events.push_back(s.days[idx]);
            for (int k = 1; k <= w; ++k)
                for (std::size_t j = idx + static_cast<std::size_t>(k); j < s.values.size(); ++j)
                    s.values[j] += jump;  // +5 sigma added to each post-window day's change
        }
        EventEffect eff = event_effect(s, events, w);
        double se = event_bootstrap_se(s, eff.n_events_used, w, 10000,
                                       static_cast<std::uint64_t>(seed));
        if (std::abs(eff.estimate - jump) <= 0.2 * jump && eff.estimate > 2.0 * se) ++powered;
    }
    check.expect(powered >= 90, "power " + std::to_string(powered) + "/100");

    {  // determinism at B = 10,000
        Rng rng(12000);
        DailySeries s = make_walk(rng, days);
        double a = event_bootstrap_se(s, 5, w, 10000, 77);
        double b = event_bootstrap_se(s, 5, w, 10000, 77);
        check.expect(a == b, "bootstrap not deterministic per seed");
    }

    int rejected = 0;
    const int placebo_runs = 500;
    for (int run = 0; run < placebo_runs; ++run) {
        Rng rng(13000 + run);
        DailySeries s = make_walk(rng, days);
        std::vector<TimePoint> events;
        for (int e = 0; e < 5; ++e)
            events.push_back(s.days[100 + rng.bounded(days - 200)]);
        EventEffect eff = event_effect(s, events, w);
        double se = event_bootstrap_se(s, eff.n_events_used, w, 2000,
                                       static_cast<std::uint64_t>(run));
        if (std::abs(eff.estimate) > 1.96 * se) ++rejected;
    }
    double size = static_cast<double>(rejected) / placebo_runs;
    check.expect(size >= 0.02 && size <= 0.08, "placebo size " + std::to_string(size));
}

// ---------------------------------------------------------------------
// C7: signal-diagnostics shape on the bundled fixture; MI placebo level;
// planted one-factor PCA.
void c7_signal_shape(Check& check) {
    RunConfig cfg = RunConfig::from_file(FIXTURE_DIR "/golden_fixture.cfg");
    std::string out = (fs::temp_directory_path() / "cf_accept_c7").string();
    fs::remove_all(out);
    cfg.set("out_dir", out);
    SyntheticResult synth = generate_synthetic(cfg.synth, cfg.seed);
    Pipeline p(cfg);
    p.adopt(std::move(synth.dataset));
    p.build_panel_stage();
    p.write_signal_csv();

    // all five horizons x all characteristics with coefficient/SE/R^2
    std::ifstream in(out + "/signal.csv");
    check.expect(in.good(), "signal.csv missing");
    std::string line;
    std::getline(in, line);
    int rows = 0, populated = 0;
    while (std::getline(in, line)) {
        ++rows;
        // characteristic,horizon,coefficient,se,t,stars,r2,n,lags
        std::vector<std::string> f;
        std::size_t start = 0;
        while (start <= line.size()) {
            auto end = line.find(',', start);
            f.push_back(line.substr(start, end == std::string::npos ? std::string::npos
                                                                    : end - start));
            if (end == std::string::npos) break;
            start = end + 1;
        }
        if (f.size() == 9 && !f[2].empty() && !f[3].empty() && !f[6].empty()) ++populated;
    }
    check.expect(rows == 63 * 5, "signal rows " + std::to_string(rows));
    check.expect(populated == rows, "unpopulated signal rows");
    check.expect(p.panel().characteristic_names.size() == 63,
                 "characteristics dropped from the fixture panel");

    // MI of an independent placebo characteristic at n = 10,000
    Rng rng(707);
    std::vector<double> x(10000), y(10000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
    }
    check.expect(mutual_information(x, y) < 0.02, "placebo MI too large");

    // planted 90%-common-variance group
    Rng rng2(708);
    const int n = 2000, k = 6;
    Eigen::MatrixXd m(n, k);
    for (int i = 0; i < n; ++i) {
        double f = rng2.normal();
        for (int j = 0; j < k; ++j)
            m(i, j) = std::sqrt(0.9) * f + std::sqrt(0.1) * rng2.normal();
    }
    PCResult pc = first_pc(m);
    check.expect(pc.explained_variance_ratio >= 0.85,
                 "explained ratio " + std::to_string(pc.explained_variance_ratio));
    fs::remove_all(out);
}

// ---------------------------------------------------------------------
// C8: end-to-end determinism of the CLI pipeline across runs and thread
// counts, byte for byte.
void c8_determinism(Check& check) {
    std::string root = (fs::temp_directory_path() / "cf_accept_c8").string();
    fs::remove_all(root);
    fs::create_directories(root);
    auto sh = [&](const std::string& args) {
        int rc = std::system((std::string(CLI_BINARY_PATH) + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(rc);
    };
    std::string cfgpath = FIXTURE_DIR "/golden_fixture.cfg";
    check.expect(sh("synth --config " + cfgpath + " --seed 7 --out " + root + "/data") == 0,
                 "synth failed");
    check.expect(sh("pipeline --config " + cfgpath + " --seed 7 --data " + root +
                    "/data --out " + root + "/a") == 0,
                 "pipeline run 1 failed");
    check.expect(sh("pipeline --config " + cfgpath + " --seed 7 --data " + root +
                    "/data --out " + root + "/b") == 0,
                 "pipeline run 2 failed");
    check.expect(sh("pipeline --config " + cfgpath + " --seed 7 --data " + root +
                    "/data --out " + root + "/c --threads 4") == 0,
                 "pipeline threaded run failed");
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    };
    for (const auto& entry : fs::directory_iterator(root + "/a")) {
        std::string name = entry.path().filename().string();
        check.expect(slurp(entry.path().string()) == slurp(root + "/b/" + name),
                     name + " differs across runs");
        check.expect(slurp(entry.path().string()) == slurp(root + "/c/" + name),
                     name + " differs across thread counts");
    }
    fs::remove_all(root);
}

}  // namespace

int main() {
    std::printf("acceptance criteria\n");
    criterion(1, "kernel oracles", 10.0, c1_kernel_oracles);
    criterion(2, "newey-west", 60.0, c2_newey_west);
    criterion(3, "universe gate", 120.0, c3_universe_gate);
    criterion(4, "sort recovery", 300.0, c4_sort_recovery);
    criterion(5, "fama-macbeth", 300.0, c5_fama_macbeth);
    criterion(6, "event study", 120.0, c6_event_study);
    criterion(7, "signal diagnostics", 120.0, c7_signal_shape);
    criterion(8, "determinism", 120.0, c8_determinism);
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
