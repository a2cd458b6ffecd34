#include "cryptofactor/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "cryptofactor/csv.hpp"
#include "cryptofactor/factors.hpp"
#include "cryptofactor/metrics.hpp"
#include "cryptofactor/riskpremia.hpp"
#include "cryptofactor/rng.hpp"

namespace cryptofactor {

namespace {

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

TimePoint to_time(const std::string& key, const std::string& v) {
    try {
        return parse_timestamp(v);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a timestamp: '" + v + "'");
    }
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        std::size_t end = v.find(';', start);
        std::string item =
            v.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!item.empty()) out.push_back(item);
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    raw[key] = value;
    if (key == "data_dir") data_dir = value;
    else if (key == "out_dir") out_dir = value;
    else if (key == "seed") seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "threads") threads = static_cast<unsigned>(to_long(key, value));
    else if (key == "from") from = value;
    else if (key == "to") to = value;
    else if (key == "week_anchor") week_anchor = to_time(key, value);
    else if (key == "trailing_weeks") criteria.trailing_weeks = static_cast<int>(to_long(key, value));
    else if (key == "min_median_weekly_volume_usd")
        criteria.min_median_weekly_volume_usd = to_double(key, value);
    else if (key == "mcap_floor_bps") criteria.mcap_floor_bps_of_total = to_double(key, value);
    else if (key == "quote_whitelist") criteria.quote_whitelist = split_list(value);
    else if (key == "exchange_whitelist") criteria.exchange_whitelist = split_list(value);
    else if (key == "require_nonzero_volume_all_weeks")
        criteria.require_nonzero_volume_all_weeks = to_bool(key, value);
    else if (key == "fmb_min_history_days") fmb_min_history_days = to_double(key, value);
    else if (key == "fmb_rolling_beta") fmb_rolling_beta = to_bool(key, value);
    else if (key == "fmb_beta_window_periods")
        fmb_beta_window_periods = static_cast<int>(to_long(key, value));
    else if (key == "fmb_frequency") {
        if (value != "weekly" && value != "monthly")
            throw ConfigError("config key 'fmb_frequency': expected weekly or monthly");
        fmb_frequency = value;
    } else if (key == "event_asset") event_asset = value;
    else if (key == "event_windows") {
        event_windows.clear();
        for (const auto& w : split_list(value))
            event_windows.push_back(static_cast<int>(to_long(key, w)));
        if (event_windows.empty()) throw ConfigError("config key 'event_windows': empty");
    } else if (key == "event_bootstrap_b") event_bootstrap_b = static_cast<int>(to_long(key, value));
    else if (key == "events_file") events_file = value;
    else if (key == "blend_weight") blend_weight = to_double(key, value);
    else if (key == "rolling_window_weeks") rolling_window_weeks = static_cast<int>(to_long(key, value));
    else if (key == "sorts_hac") sorts_hac = to_bool(key, value);
    else if (key == "synth_n_assets") synth.n_assets = static_cast<int>(to_long(key, value));
    else if (key == "synth_start") synth.start = to_time(key, value);
    else if (key == "synth_end") synth.end = to_time(key, value);
    else if (key == "synth_exchange") synth.exchange_id = value;
    else if (key == "synth_quote") synth.quote = value;
    else if (key == "synth_market_drift_hourly") synth.market_drift_hourly = to_double(key, value);
    else if (key == "synth_market_vol_hourly") synth.market_vol_hourly = to_double(key, value);
    else if (key == "synth_idio_vol_hourly") synth.idio_vol_hourly = to_double(key, value);
    else if (key == "synth_alpha_hourly") synth.alpha_hourly = to_double(key, value);
    else if (key == "synth_beta_min") synth.beta_min = to_double(key, value);
    else if (key == "synth_beta_max") synth.beta_max = to_double(key, value);
    else if (key == "synth_rf_annual") synth.rf_annual = to_double(key, value);
    else if (key == "synth_price0_min") synth.price0_min = to_double(key, value);
    else if (key == "synth_price0_max") synth.price0_max = to_double(key, value);
    else if (key == "synth_supply_min") synth.supply_min = to_double(key, value);
    else if (key == "synth_supply_max") synth.supply_max = to_double(key, value);
    else if (key == "synth_volume_hourly_min") synth.volume_hourly_min = to_double(key, value);
    else if (key == "synth_volume_hourly_max") synth.volume_hourly_max = to_double(key, value);
    else if (key == "synth_volume_noise") synth.volume_noise = to_double(key, value);
    else if (key == "synth_volume_growth_annual")
        synth.volume_growth_annual = to_double(key, value);
    else if (key == "synth_planted_char") synth.planted_char = value;
    else if (key == "synth_planted_lambda_weekly")
        synth.planted_lambda_weekly = to_double(key, value);
    else if (key == "synth_planted_feed_only") synth.planted_feed_only = to_bool(key, value);
    else if (key == "synth_stablecoin_count") synth.stablecoin_count = static_cast<int>(to_long(key, value));
    else if (key == "synth_synthetic_count") synth.synthetic_count = static_cast<int>(to_long(key, value));
    else if (key == "synth_inflation_level0") synth.inflation_level0 = to_double(key, value);
    else if (key == "synth_inflation_rho") synth.inflation_rho = to_double(key, value);
    else if (key == "synth_inflation_shock") synth.inflation_shock = to_double(key, value);
    else if (key == "synth_n_event_dates") synth.n_event_dates = static_cast<int>(to_long(key, value));
    else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig RunConfig::from_keys(const std::map<std::string, std::string>& keys) {
    RunConfig cfg;
    for (const auto& [k, v] : keys) cfg.set(k, v);
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        cfg.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

std::uint64_t RunConfig::config_hash() const {
    // Paths and thread counts never change results, so they stay out of
    // the hash; everything analytical goes in.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : raw) {
        if (k == "out_dir" || k == "data_dir" || k == "threads" || k == "events_file") continue;
        h = fnv1a64(k, h);
        h = fnv1a64("=", h);
        h = fnv1a64(v, h);
        h = fnv1a64("\n", h);
    }
    return h;
}

Pipeline::Pipeline(RunConfig cfg) : cfg_(std::move(cfg)) {}

std::string Pipeline::out_path(const std::string& name) const {
    std::filesystem::create_directories(cfg_.out_dir);
    return cfg_.out_dir + "/" + name;
}

void Pipeline::load() {
    if (cfg_.data_dir.empty()) throw ConfigError("data_dir is not set");
    DatasetPaths paths = DatasetPaths::in_dir(cfg_.data_dir);
    for (const std::string& p : {paths.bars, paths.feeds, paths.meta, paths.reference})
        if (!std::filesystem::exists(p)) throw ConfigError("missing data path: " + p);
    adopt(load_dataset(paths));
}

void Pipeline::adopt(Dataset d) {
    dataset_ = std::move(d);
    md_.emplace(dataset_);
    feeds_.emplace(dataset_);
    refs_.emplace(dataset_);
}

void Pipeline::build_universe() {
    if (!md_) load();
    if (md_->assets().empty()) throw std::runtime_error("dataset has no bars");
    TimePoint from_t = cfg_.from.empty() ? md_->first_hour() : parse_timestamp(cfg_.from);
    TimePoint to_t = cfg_.to.empty() ? md_->last_hour() : parse_timestamp(cfg_.to);
    YearMonth first = year_month_of(from_t);
    while (first.first_day() < md_->first_hour() + cfg_.criteria.trailing_weeks * kSecondsPerWeek)
        first = first.next();
    if (first.first_day() < from_t) first = first.next();
    YearMonth last = year_month_of(to_t);
    if (last < first)
        throw std::runtime_error("no feasible universe months in the requested range");
    universe_ = build_universe_series(*md_, dataset_.meta, first, last, cfg_.criteria);
}

void Pipeline::require_universe() {
    if (universe_.empty()) build_universe();
}

void Pipeline::build_panel_stage() {
    require_universe();
    if (!engine_)
        engine_.emplace(*md_, *feeds_, *refs_, universe_, dataset_.meta, cfg_.threads);
    PanelOptions opts;
    opts.week_anchor = cfg_.week_anchor;
    opts.threads = cfg_.threads;
    panel_ = fill_missing(build_panel(*md_, *refs_, universe_, *engine_, opts));
    market_ = cmkt(panel_);
}

void Pipeline::require_panel() {
    if (panel_.rows.empty()) build_panel_stage();
}

void Pipeline::write_universe_csv() const {
    {
        CsvWriter w(out_path("universe.csv"));
        w.row({"effective_month", "asset_id"});
        for (const auto& snap : universe_)
            for (const auto& id : snap.members) w.row({snap.effective_month.str(), id});
    }
    {
        CsvWriter w(out_path("universe_diag.csv"));
        w.row({"effective_month", "asset_id", "criterion", "pass"});
        for (const auto& snap : universe_)
            for (const auto& diag : snap.diagnostics)
                for (int c = 0; c < kCriterionCount; ++c)
                    w.row({snap.effective_month.str(), diag.asset_id,
                           criterion_name(static_cast<Criterion>(c)),
                           diag.pass[static_cast<std::size_t>(c)] ? "1" : "0"});
    }
}

void Pipeline::write_characteristics_csv() const {
    CsvWriter w(out_path("characteristics.csv"));
    w.row({"name", "category", "window_days", "source", "formula"});
    for (const auto& spec : characteristic_dictionary())
        w.row({spec.name, category_name(spec.category), std::to_string(spec.window_days),
               source_name(spec.source), spec.formula});
}

void Pipeline::write_panel_csv() const {
    CsvWriter w(out_path("panel.csv"));
    std::vector<std::string> header = {"week_start",  "asset_id",    "market_cap_usd",
                                       "ret_fwd_0d",  "ret_fwd_7d",  "ret_fwd_14d",
                                       "ret_fwd_30d", "ret_fwd_90d"};
    for (const auto& n : panel_.characteristic_names) header.push_back(n);
    w.row(header);
    std::vector<std::string> fields;
    for (const auto& row : panel_.rows) {
        fields.clear();
        fields.push_back(format_date(row.week_start));
        fields.push_back(row.asset_id);
        fields.push_back(format_double(row.market_cap_usd));
        for (double r : row.excess_return_fwd) fields.push_back(format_double(r));
        for (double c : row.characteristics) fields.push_back(format_double(c));
        w.row(fields);
    }
}

void Pipeline::write_sorts_csv() {
    require_panel();
    std::vector<SortResult> sorts = run_all_sorts(panel_, cfg_.threads, cfg_.sorts_hac);
    CsvWriter w(out_path("sorts.csv"));
    w.row({"characteristic", "q1_mean", "q2_mean", "q3_mean", "q4_mean", "q5_mean", "ls_mean",
           "q1_t", "q2_t", "q3_t", "q4_t", "q5_t", "ls_t", "ls_stars", "sharpe_ann", "monotone",
           "weeks_used", "weeks_skipped"});
    for (const auto& s : sorts) {
        std::vector<std::string> row{s.characteristic};
        for (int q = 0; q < 6; ++q) row.push_back(format_double(s.means[q]));
        for (int q = 0; q < 6; ++q) row.push_back(format_double(s.t_stats[q]));
        row.push_back(s.stars[5]);
        row.push_back(format_double(s.sharpe_ann));
        row.push_back(s.monotone ? "1" : "0");
        row.push_back(std::to_string(s.weeks_used));
        row.push_back(std::to_string(s.weeks_skipped));
        w.row(row);
    }
}

void Pipeline::write_signal_csv() {
    require_panel();
    CsvWriter w(out_path("signal.csv"));
    w.row({"characteristic", "horizon_days", "coefficient", "se_nw", "t", "stars", "r_squared",
           "n_obs", "lags"});
    for (std::size_t c = 0; c < panel_.characteristic_names.size(); ++c) {
        for (std::size_t hi = 0; hi < kReturnHorizonsDays.size(); ++hi) {
            std::vector<double> x, y;
            for (const auto& row : panel_.rows) {
                double xv = row.characteristics[c];
                double yv = row.excess_return_fwd[hi];
                if (std::isnan(xv) || std::isnan(yv)) continue;
                x.push_back(xv);
                y.push_back(yv);
            }
            std::vector<std::string> fields{panel_.characteristic_names[c],
                                            std::to_string(kReturnHorizonsDays[hi])};
            bool constant = true;
            for (double v : x)
                if (v != x.front()) {
                    constant = false;
                    break;
                }
            if (x.size() >= 8 && !constant) {
                auto n = static_cast<Eigen::Index>(x.size());
                Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
                Eigen::MatrixXd X(n, 2);
                X.col(0).setOnes();
                X.col(1) = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
                RegressionResult r = ols(yv, X);
                int lags = default_bartlett_lags(static_cast<int>(n));
                Eigen::VectorXd se = newey_west_se(r, X, lags);
                double t = se(1) > 0.0 ? r.coefficients(1) / se(1) : std::nan("");
                fields.push_back(format_double(r.coefficients(1)));
                fields.push_back(format_double(se(1)));
                fields.push_back(format_double(t));
                fields.push_back(significance_stars(t));
                fields.push_back(format_double(r.r_squared));
                fields.push_back(std::to_string(r.n_obs));
                fields.push_back(std::to_string(lags));
            } else {
                fields.insert(fields.end(), {"", "", "", "", "", std::to_string(x.size()), ""});
            }
            w.row(fields);
        }
    }
}

void Pipeline::write_mi_csv() {
    require_panel();
    CsvWriter w(out_path("mi_by_year.csv"));
    w.row({"characteristic", "year", "mi_nats", "n_obs"});
    const int fwd7 = 1;
    std::set<int> years;
    for (const auto& row : panel_.rows) years.insert(year_of(row.week_start));
    for (std::size_t c = 0; c < panel_.characteristic_names.size(); ++c) {
        auto emit = [&](const std::string& label, int year_or_zero) {
            std::vector<double> x, y;
            for (const auto& row : panel_.rows) {
                if (year_or_zero != 0 && year_of(row.week_start) != year_or_zero) continue;
                double xv = row.characteristics[c];
                double yv = row.excess_return_fwd[fwd7];
                if (std::isnan(xv) || std::isnan(yv)) continue;
                x.push_back(xv);
                y.push_back(yv);
            }
            std::string mi = x.size() >= 50 ? format_double(mutual_information(x, y)) : "";
            w.row({panel_.characteristic_names[c], label, mi, std::to_string(x.size())});
        };
        emit("all", 0);
        for (int y : years) emit(std::to_string(y), y);
    }
}

void Pipeline::write_pca_csv() {
    require_panel();
    CsvWriter loadings(out_path("pca.csv"));
    loadings.row({"category", "characteristic", "loading", "explained_variance_ratio"});
    std::vector<std::pair<std::string, Eigen::VectorXd>> category_scores;

    for (int cat = 0; cat < 6; ++cat) {
        auto category = static_cast<CharCategory>(cat);
        std::vector<std::string> names;
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < panel_.characteristic_names.size(); ++c) {
            int di = characteristic_index(panel_.characteristic_names[c]);
            if (di < 0 || characteristic_dictionary()[di].category != category) continue;
            // Constant columns cannot be standardized; leave them out.
            double first = std::nan("");
            bool constant = true, complete = true;
            for (const auto& row : panel_.rows) {
                double v = row.characteristics[c];
                if (std::isnan(v)) {
                    complete = false;
                    break;
                }
                if (std::isnan(first)) first = v;
                else if (v != first) constant = false;
            }
            if (!complete || constant) continue;
            names.push_back(panel_.characteristic_names[c]);
            cols.push_back(c);
        }
        if (cols.size() < 2) continue;
        Eigen::MatrixXd m(static_cast<Eigen::Index>(panel_.rows.size()),
                          static_cast<Eigen::Index>(cols.size()));
        for (std::size_t i = 0; i < panel_.rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    panel_.rows[i].characteristics[cols[j]];
        PCResult pc = first_pc(m, &names);
        for (std::size_t j = 0; j < names.size(); ++j)
            loadings.row({category_name(category), names[j],
                          format_double(pc.loadings(static_cast<Eigen::Index>(j))),
                          format_double(pc.explained_variance_ratio)});
        category_scores.emplace_back(category_name(category), pc.scores);
    }

    CsvWriter corr(out_path("pca_corr.csv"));
    corr.row({"category_a", "category_b", "pearson"});
    for (std::size_t a = 0; a < category_scores.size(); ++a)
        for (std::size_t b = a + 1; b < category_scores.size(); ++b) {
            const auto& sa = category_scores[a].second;
            const auto& sb = category_scores[b].second;
            double r = pearson({sa.data(), static_cast<std::size_t>(sa.size())},
                               {sb.data(), static_cast<std::size_t>(sb.size())});
            corr.row({category_scores[a].first, category_scores[b].first, format_double(r)});
        }
}

void Pipeline::write_fmb_csv() {
    require_panel();
    const ReferenceSeries* inflation = dataset_.reference("expected_inflation_1y");
    if (!inflation) throw std::runtime_error("fmb: reference series expected_inflation_1y missing");

    ReturnPanel rp;
    double nominal_days = 7.0;
    std::vector<double> innovations, market_col;

    if (cfg_.fmb_frequency == "weekly") {
        std::vector<TimePoint> weeks = panel_.week_starts();
        if (weeks.size() < 3) throw std::runtime_error("fmb: too few panel weeks");
        // Period i spans [weeks[i-1], weeks[i]]; returns and innovations
        // are labeled by the period end.
        rp.grid.assign(weeks.begin() + 1, weeks.end());
        std::vector<double> innov_full = factor_innovations(*inflation, weeks);
        innovations.assign(innov_full.begin() + 1, innov_full.end());
        std::map<TimePoint, double> cmkt_by_week;
        for (std::size_t i = 0; i < market_.week_start.size(); ++i)
            cmkt_by_week[market_.week_start[i]] = market_.ret[i];
        market_col.resize(rp.grid.size());
        for (std::size_t i = 0; i < rp.grid.size(); ++i) {
            auto it = cmkt_by_week.find(weeks[i]);
            market_col[i] = it == cmkt_by_week.end() ? std::nan("") : it->second;
        }
        std::set<std::string> ids;
        for (const auto& row : panel_.rows) ids.insert(row.asset_id);
        rp.asset_ids.assign(ids.begin(), ids.end());
        rp.returns.assign(rp.asset_ids.size(),
                          std::vector<double>(rp.grid.size(), std::nan("")));
        std::map<std::pair<std::string, TimePoint>, double> fwd7;
        for (const auto& row : panel_.rows)
            fwd7[{row.asset_id, row.week_start}] = row.excess_return_fwd[1];
        for (std::size_t a = 0; a < rp.asset_ids.size(); ++a)
            for (std::size_t i = 0; i < rp.grid.size(); ++i) {
                auto it = fwd7.find({rp.asset_ids[a], weeks[i]});
                if (it != fwd7.end()) rp.returns[a][i] = it->second;
            }
    } else {
        nominal_days = 30.4375;
        std::vector<TimePoint> month_starts;
        for (const auto& snap : universe_) month_starts.push_back(snap.effective_month.first_day());
        month_starts.push_back(universe_.back().effective_month.next().first_day());
        if (month_starts.size() < 3) throw std::runtime_error("fmb: too few months");
        rp.grid.assign(month_starts.begin() + 1, month_starts.end());
        std::vector<double> innov_full = factor_innovations(*inflation, month_starts);
        innovations.assign(innov_full.begin() + 1, innov_full.end());
        for (const auto& a : md_->assets()) rp.asset_ids.push_back(a.asset_id);
        rp.returns.assign(rp.asset_ids.size(),
                          std::vector<double>(rp.grid.size(), std::nan("")));
        market_col.assign(rp.grid.size(), std::nan(""));
        for (std::size_t i = 0; i + 1 < month_starts.size(); ++i) {
            TimePoint t0 = month_starts[i], t1 = month_starts[i + 1];
            double rf = refs_->value_at("risk_free_1m", t0);
            if (std::isnan(rf)) rf = 0.0;
            int days = static_cast<int>((t1 - t0) / kSecondsPerDay);
            double wsum = 0.0, wret = 0.0;
            const UniverseSnapshot& snap = universe_[i];
            for (std::size_t a = 0; a < rp.asset_ids.size(); ++a) {
                const AssetHourly* h = md_->find(rp.asset_ids[a]);
                double p0 = h->price_at(t0), p1 = h->price_at(t1);
                if (std::isnan(p0) || std::isnan(p1)) continue;
                double r = excess_return(p0, p1, rf, days);
                rp.returns[a][i] = r;
                double cap = h->cap_at(t0);
                if (snap.is_member(rp.asset_ids[a]) && !std::isnan(cap) && cap > 0.0) {
                    wsum += cap;
                    wret += cap * r;
                }
            }
            if (wsum > 0.0) market_col[i] = wret / wsum;
        }
    }

    Eigen::MatrixXd factors(static_cast<Eigen::Index>(rp.grid.size()), 2);
    for (std::size_t i = 0; i < rp.grid.size(); ++i) {
        factors(static_cast<Eigen::Index>(i), 0) = innovations[i];
        factors(static_cast<Eigen::Index>(i), 1) = market_col[i];
    }
    const std::vector<std::string> factor_names = {"expected_inflation_1y", "cmkt"};
    FMBResult res;
    if (cfg_.fmb_rolling_beta) {
        res = fama_macbeth_rolling(rp, factors, cfg_.fmb_beta_window_periods,
                                   cfg_.fmb_min_history_days, nominal_days, factor_names);
    } else {
        std::vector<BetaEstimate> betas =
            estimate_betas(rp, factors, cfg_.fmb_min_history_days, nominal_days);
        res = fama_macbeth(rp, betas, factor_names);
    }

    CsvWriter w(out_path("fmb.csv"));
    w.row({"factor", "lambda", "se", "t", "periods_used", "assets_used"});
    for (std::size_t k = 0; k < res.names.size(); ++k)
        w.row({res.names[k], format_double(res.lambda(static_cast<Eigen::Index>(k))),
               format_double(res.se(static_cast<Eigen::Index>(k))),
               format_double(res.t(static_cast<Eigen::Index>(k))),
               std::to_string(res.periods_used), std::to_string(res.assets_used)});
}

void Pipeline::write_events_csv() {
    if (!md_) load();
    std::string events_path =
        cfg_.events_file.empty() ? cfg_.data_dir + "/events_input.csv" : cfg_.events_file;
    if (!std::filesystem::exists(events_path))
        throw ConfigError("missing data path: " + events_path);
    std::vector<TimePoint> dates;
    {
        CsvReader r(events_path);
        std::vector<std::string> f;
        if (!r.next(f) || f.size() != 2 || f[0] != "name" || f[1] != "date")
            throw CsvError(events_path, 1, 1, "expected header 'name,date'");
        while (r.next(f)) {
            if (f.size() == 1 && f[0].empty()) continue;
            if (f.size() != 2) throw CsvError(events_path, r.line(), 1, "expected 2 columns");
            dates.push_back(parse_timestamp(f[1]));
        }
    }
    if (dates.empty()) throw std::runtime_error("events: no event dates in " + events_path);

    // Event-study asset: configured id or the largest average cap.
    std::string asset = cfg_.event_asset;
    if (asset.empty()) {
        double best = -1.0;
        for (const auto& a : md_->assets()) {
            double sum = 0.0;
            int n = 0;
            for (double c : a.cap)
                if (!std::isnan(c)) {
                    sum += c;
                    ++n;
                }
            double avg = n ? sum / n : -1.0;
            if (avg > best) {
                best = avg;
                asset = a.asset_id;
            }
        }
    }
    const AssetHourly* h = md_->find(asset);
    if (!h) throw std::runtime_error("events: unknown asset " + asset);

    TimePoint d0 = floor_day(h->ts.front());
    TimePoint d1 = floor_day(h->ts.back());
    std::vector<DailySeries> series;
    DailySeries price{"return", {}, {}, ChangeKind::SimpleReturn};
    DailySeries volume{"trading_volume", {}, {}, ChangeKind::FirstDifference};
    for (TimePoint d = d0; d <= d1; d += kSecondsPerDay) {
        double p = h->price_at(d);
        if (!std::isnan(p)) {
            price.days.push_back(d);
            price.values.push_back(p);
        }
        double v = h->volume_in(d, d + kSecondsPerDay);
        volume.days.push_back(d);
        volume.values.push_back(v);
    }
    series.push_back(std::move(price));
    series.push_back(std::move(volume));
    for (const char* feed :
         {"active_addresses", "developer_activity", "social_volume", "miner_hash_rate"}) {
        const FeedTable::Series* fs = feeds_->series(asset, feed);
        if (!fs) continue;
        DailySeries s{feed, {}, {}, ChangeKind::FirstDifference};
        for (std::size_t i = 0; i < fs->day.size(); ++i) {
            if (std::isnan(fs->value[i])) continue;
            s.days.push_back(fs->day[i]);
            s.values.push_back(fs->value[i]);
        }
        series.push_back(std::move(s));
    }

    std::vector<EventStudyRow> rows =
        run_event_study(series, dates, cfg_.event_windows, cfg_.event_bootstrap_b,
                        Rng::derive(cfg_.seed, fnv1a64("events")).next_u64());
    CsvWriter w(out_path("events.csv"));
    w.row({"series", "window", "estimate", "bootstrap_se", "n_events_used"});
    for (const auto& r : rows)
        w.row({r.series, std::to_string(r.window_days), format_double(r.estimate),
               format_double(r.bootstrap_se), std::to_string(r.n_events_used)});
}

std::map<std::string, std::vector<double>> Pipeline::benchmark_weekly_returns(
    const std::vector<TimePoint>& weeks) const {
    std::map<std::string, std::vector<double>> out;
    for (const char* name : {"nasdaq", "sp500", "gold"}) {
        if (!dataset_.reference(name)) continue;
        std::vector<double> r(weeks.size(), std::nan(""));
        for (std::size_t i = 0; i < weeks.size(); ++i) {
            double p0 = refs_->value_at(name, weeks[i]);
            double p1 = refs_->value_at(name, weeks[i] + kSecondsPerWeek);
            double rf = refs_->value_at("risk_free_1m", weeks[i]);
            if (std::isnan(rf)) rf = 0.0;
            if (!std::isnan(p0) && !std::isnan(p1) && p0 > 0.0)
                r[i] = excess_return(p0, p1, rf, 7);
        }
        out[name] = std::move(r);
    }
    return out;
}

void Pipeline::write_perf_csv() {
    require_panel();
    std::vector<TimePoint> weeks = market_.week_start;
    std::map<std::string, std::vector<double>> series;  // aligned to weeks, NaN gaps
    series["cmkt"] = market_.ret;
    for (auto& [name, r] : benchmark_weekly_returns(weeks)) series[name] = std::move(r);
    if (series.count("nasdaq")) {
        const auto& a = series["nasdaq"];
        const auto& b = series["cmkt"];
        std::vector<double> mix(weeks.size(), std::nan(""));
        for (std::size_t i = 0; i < weeks.size(); ++i)
            if (!std::isnan(a[i]) && !std::isnan(b[i]))
                mix[i] = cfg_.blend_weight * a[i] + (1.0 - cfg_.blend_weight) * b[i];
        series["blend_nasdaq_cmkt"] = std::move(mix);
    }

    CsvWriter w(out_path("perf.csv"));
    w.row({"series", "mean_ann", "vol_ann", "sharpe_ann", "geometric_ann", "skew",
           "kurtosis_excess", "pct_positive", "n_weeks"});
    auto emit = [&](const std::string& name, const std::vector<double>& aligned) {
        std::vector<double> clean;
        for (double v : aligned)
            if (!std::isnan(v)) clean.push_back(v);
        if (clean.size() < 8) return;
        PerfStats s = perf_stats(clean);
        w.row({name, format_double(s.mean_ann), format_double(s.vol_ann),
               format_double(s.sharpe_ann), format_double(s.geometric_ann),
               format_double(s.skew), format_double(s.kurtosis_excess),
               format_double(s.pct_positive), std::to_string(s.n_obs)});
    };
    for (const auto& [name, r] : series) emit(name, r);
    std::map<std::string, std::vector<double>> asset_returns;
    for (const auto& row : panel_.rows)
        if (!std::isnan(row.excess_return_fwd[1]))
            asset_returns["asset:" + row.asset_id].push_back(row.excess_return_fwd[1]);
    for (const auto& [name, r] : asset_returns) emit(name, r);

    CsvWriter corr(out_path("corr.csv"));
    corr.row({"series_a", "series_b", "pearson"});
    std::vector<std::string> names;
    for (const auto& [name, r] : series) names.push_back(name);
    for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = a + 1; b < names.size(); ++b) {
            std::vector<double> xa, xb;
            const auto& ra = series[names[a]];
            const auto& rb = series[names[b]];
            for (std::size_t i = 0; i < weeks.size(); ++i)
                if (!std::isnan(ra[i]) && !std::isnan(rb[i])) {
                    xa.push_back(ra[i]);
                    xb.push_back(rb[i]);
                }
            corr.row({names[a], names[b], format_double(pearson(xa, xb))});
        }

    CsvWriter roll(out_path("rolling_sharpe.csv"));
    roll.row({"series", "week_start", "sharpe_ann"});
    for (const auto& [name, aligned] : series) {
        std::vector<double> clean;
        std::vector<TimePoint> clean_weeks;
        for (std::size_t i = 0; i < weeks.size(); ++i)
            if (!std::isnan(aligned[i])) {
                clean.push_back(aligned[i]);
                clean_weeks.push_back(weeks[i]);
            }
        std::vector<double> rs = rolling_sharpe(clean, cfg_.rolling_window_weeks);
        for (std::size_t i = 0; i < rs.size(); ++i)
            roll.row({name, format_date(clean_weeks[i + cfg_.rolling_window_weeks - 1]),
                      format_double(rs[i])});
    }

    CsvWriter rcorr(out_path("rolling_corr.csv"));
    rcorr.row({"series_a", "series_b", "week_start", "pearson"});
    const auto& cm = series.at("cmkt");
    for (const auto& [name, aligned] : series) {
        if (name == "cmkt") continue;
        std::vector<double> xa, xb;
        std::vector<TimePoint> wk;
        for (std::size_t i = 0; i < weeks.size(); ++i)
            if (!std::isnan(cm[i]) && !std::isnan(aligned[i])) {
                xa.push_back(cm[i]);
                xb.push_back(aligned[i]);
                wk.push_back(weeks[i]);
            }
        std::vector<double> rc = rolling_pearson(xa, xb, cfg_.rolling_window_weeks);
        for (std::size_t i = 0; i < rc.size(); ++i)
            rcorr.row({"cmkt", name, format_date(wk[i + cfg_.rolling_window_weeks - 1]),
                       format_double(rc[i])});
    }
}

void Pipeline::write_run_manifest() const {
    std::map<std::string, std::string> man;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(cfg_.config_hash()));
    man["config_hash"] = buf;
    man["seed"] = std::to_string(cfg_.seed);
    man["version"] = "0.1.0";
    write_manifest(man, out_path("run_manifest"));
}

void Pipeline::run_all() {
    load();
    build_universe();
    build_panel_stage();
    write_universe_csv();
    write_characteristics_csv();
    write_panel_csv();
    write_sorts_csv();
    write_signal_csv();
    write_mi_csv();
    write_pca_csv();
    write_fmb_csv();
    write_events_csv();
    write_perf_csv();
    write_run_manifest();
}

void run_synth(const RunConfig& cfg) {
    if (cfg.synth.start == 0 || cfg.synth.end == 0)
        throw ConfigError("synth requires synth_start and synth_end");
    if (cfg.synth.end - cfg.synth.start < 12 * kSecondsPerWeek)
        throw ConfigError(
            "synth date range is shorter than 12 weeks; universe construction impossible");
    SyntheticResult result = generate_synthetic(cfg.synth, cfg.seed);
    std::filesystem::create_directories(cfg.out_dir);
    write_dataset(result.dataset, DatasetPaths::in_dir(cfg.out_dir));
    {
        CsvWriter w(cfg.out_dir + "/events_input.csv");
        w.row({"name", "date"});
        for (TimePoint d : result.event_dates) w.row({"synthetic_event", format_date(d)});
    }
    write_manifest(result.manifest, cfg.out_dir + "/synth_manifest");
}

}  // namespace cryptofactor
