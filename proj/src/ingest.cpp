#include "cryptofactor/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "cryptofactor/csv.hpp"

namespace cryptofactor {

const AssetMeta* Dataset::meta_for(const std::string& asset_id) const {
    auto it = std::lower_bound(meta.begin(), meta.end(), asset_id,
                               [](const AssetMeta& m, const std::string& id) { return m.asset_id < id; });
    return (it != meta.end() && it->asset_id == asset_id) ? &*it : nullptr;
}

const ReferenceSeries* Dataset::reference(const std::string& name) const {
    for (const auto& r : references)
        if (r.name == name) return &r;
    return nullptr;
}

std::vector<std::string> Dataset::asset_ids() const {
    std::set<std::string> ids;
    for (const auto& b : bars) ids.insert(b.asset_id);
    for (const auto& m : meta) ids.insert(m.asset_id);
    return {ids.begin(), ids.end()};
}

DatasetPaths DatasetPaths::in_dir(const std::string& dir) {
    return DatasetPaths{dir + "/bars.csv", dir + "/feeds.csv", dir + "/meta.csv",
                        dir + "/reference.csv"};
}

namespace {

TimePoint parse_ts_field(const std::string& field, const std::string& file, std::size_t line,
                         std::size_t col) {
    try {
        return parse_timestamp(field);
    } catch (const std::invalid_argument& e) {
        throw CsvError(file, line, col, e.what());
    }
}

void expect_header(CsvReader& r, const std::vector<std::string>& expected) {
    std::vector<std::string> fields;
    if (!r.next(fields) || fields != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
        throw CsvError(r.path(), 1, 1, "expected header '" + want + "'");
    }
}

std::vector<std::pair<std::string, std::string>> parse_markets(const std::string& field,
                                                               const std::string& file,
                                                               std::size_t line, std::size_t col) {
    // "exchange:quote;exchange:quote"; empty field = no listed markets
    std::vector<std::pair<std::string, std::string>> out;
    if (field.empty()) return out;
    std::size_t start = 0;
    while (start <= field.size()) {
        std::size_t end = field.find(';', start);
        std::string item = field.substr(start, end == std::string::npos ? std::string::npos
                                                                        : end - start);
        std::size_t sep = item.find(':');
        if (sep == std::string::npos || sep == 0 || sep + 1 == item.size())
            throw CsvError(file, line, col, "malformed market entry '" + item + "'");
        out.emplace_back(item.substr(0, sep), item.substr(sep + 1));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string format_markets(const std::vector<std::pair<std::string, std::string>>& markets) {
    std::string out;
    for (std::size_t i = 0; i < markets.size(); ++i) {
        if (i) out += ';';
        out += markets[i].first + ":" + markets[i].second;
    }
    return out;
}

void load_bars(const std::string& path, std::vector<HourlyBar>& bars) {
    CsvReader r(path);
    expect_header(r, {"timestamp", "asset_id", "exchange_id", "mid_price", "volume_usd",
                      "market_cap_usd"});
    std::vector<std::string> f;
    while (r.next(f)) {
        if (f.size() == 1 && f[0].empty()) continue;  // trailing blank line
        if (f.size() != 6) throw CsvError(path, r.line(), 1, "expected 6 columns");
        HourlyBar b;
        b.timestamp = parse_ts_field(f[0], path, r.line(), 1);
        if (b.timestamp != floor_hour(b.timestamp))
            throw CsvError(path, r.line(), 1, "bar timestamp not a whole hour: " + f[0]);
        b.asset_id = f[1];
        b.exchange_id = f[2];
        if (b.asset_id.empty()) throw CsvError(path, r.line(), 2, "empty asset_id");
        if (b.exchange_id.empty()) throw CsvError(path, r.line(), 3, "empty exchange_id");
        b.mid_price = parse_double_field(f[3], path, r.line(), 4);
        if (!std::isfinite(b.mid_price) || b.mid_price <= 0.0)
            throw CsvError(path, r.line(), 4, "mid_price must be finite and positive");
        b.volume_usd = parse_double_field(f[4], path, r.line(), 5);
        if (!std::isfinite(b.volume_usd) || b.volume_usd < 0.0)
            throw CsvError(path, r.line(), 5, "volume_usd must be finite and non-negative");
        double cap = parse_double_field(f[5], path, r.line(), 6);
        if (!std::isnan(cap)) {
            if (cap < 0.0) throw CsvError(path, r.line(), 6, "market_cap_usd must be >= 0");
            b.market_cap_usd = cap;
        }
        bars.push_back(std::move(b));
    }
}

void load_feeds(const std::string& path, std::vector<RawFeedRow>& feeds) {
    CsvReader r(path);
    expect_header(r, {"timestamp", "asset_id", "feed_name", "value"});
    std::vector<std::string> f;
    while (r.next(f)) {
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 4) throw CsvError(path, r.line(), 1, "expected 4 columns");
        RawFeedRow row;
        row.timestamp = parse_ts_field(f[0], path, r.line(), 1);
        row.asset_id = f[1];
        row.feed_name = f[2];
        if (row.asset_id.empty()) throw CsvError(path, r.line(), 2, "empty asset_id");
        if (row.feed_name.empty()) throw CsvError(path, r.line(), 3, "empty feed_name");
        double v = parse_double_field(f[3], path, r.line(), 4);
        if (!std::isnan(v)) row.value = v;
        feeds.push_back(std::move(row));
    }
}

void load_meta(const std::string& path, std::vector<AssetMeta>& meta) {
    CsvReader r(path);
    expect_header(r, {"asset_id", "is_stablecoin", "is_synthetic", "industry", "usage",
                      "listed_markets", "vc_owned"});
    std::vector<std::string> f;
    while (r.next(f)) {
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 7) throw CsvError(path, r.line(), 1, "expected 7 columns");
        AssetMeta m;
        m.asset_id = f[0];
        if (m.asset_id.empty()) throw CsvError(path, r.line(), 1, "empty asset_id");
        m.is_stablecoin = parse_bool_field(f[1], path, r.line(), 2);
        m.is_synthetic = parse_bool_field(f[2], path, r.line(), 3);
        m.industry = f[3];
        m.usage = f[4];
        if (m.industry.empty()) throw CsvError(path, r.line(), 4, "empty industry label");
        if (m.usage.empty()) throw CsvError(path, r.line(), 5, "empty usage label");
        m.listed_markets = parse_markets(f[5], path, r.line(), 6);
        m.vc_owned = parse_bool_field(f[6], path, r.line(), 7);
        meta.push_back(std::move(m));
    }
}

void load_reference(const std::string& path, std::vector<ReferenceSeries>& refs) {
    CsvReader r(path);
    expect_header(r, {"name", "timestamp", "value"});
    std::vector<std::string> f;
    std::vector<std::tuple<std::string, TimePoint, double>> rows;
    while (r.next(f)) {
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 3) throw CsvError(path, r.line(), 1, "expected 3 columns");
        if (f[0].empty()) throw CsvError(path, r.line(), 1, "empty series name");
        TimePoint ts = parse_ts_field(f[1], path, r.line(), 2);
        double v = parse_double_field(f[2], path, r.line(), 3);
        if (std::isnan(v)) throw CsvError(path, r.line(), 3, "reference value must be present");
        rows.emplace_back(f[0], ts, v);
    }
    std::sort(rows.begin(), rows.end());
    for (auto& [name, ts, v] : rows) {
        if (refs.empty() || refs.back().name != name) refs.push_back(ReferenceSeries{name, {}});
        auto& pts = refs.back().points;
        if (!pts.empty() && pts.back().timestamp >= ts)
            throw std::runtime_error("reference series '" + name +
                                     "' has duplicate timestamp " + format_timestamp(ts));
        pts.push_back(ReferencePoint{ts, v});
    }
}

}  // namespace

Dataset load_dataset(const DatasetPaths& paths) {
    Dataset d;
    load_bars(paths.bars, d.bars);
    load_feeds(paths.feeds, d.feeds);
    load_meta(paths.meta, d.meta);
    load_reference(paths.reference, d.references);

    std::sort(d.bars.begin(), d.bars.end(), [](const HourlyBar& a, const HourlyBar& b) {
        return std::tie(a.asset_id, a.timestamp, a.exchange_id) <
               std::tie(b.asset_id, b.timestamp, b.exchange_id);
    });
    for (std::size_t i = 1; i < d.bars.size(); ++i) {
        const auto& a = d.bars[i - 1];
        const auto& b = d.bars[i];
        if (a.asset_id == b.asset_id && a.timestamp == b.timestamp &&
            a.exchange_id == b.exchange_id)
            throw std::runtime_error("duplicate bar key (" + format_timestamp(b.timestamp) + ", " +
                                     b.asset_id + ", " + b.exchange_id + ") in " + paths.bars);
    }

    std::sort(d.feeds.begin(), d.feeds.end(), [](const RawFeedRow& a, const RawFeedRow& b) {
        return std::tie(a.asset_id, a.feed_name, a.timestamp) <
               std::tie(b.asset_id, b.feed_name, b.timestamp);
    });
    for (std::size_t i = 1; i < d.feeds.size(); ++i) {
        const auto& a = d.feeds[i - 1];
        const auto& b = d.feeds[i];
        if (a.asset_id == b.asset_id && a.feed_name == b.feed_name && a.timestamp == b.timestamp)
            throw std::runtime_error("duplicate feed key (" + format_date(b.timestamp) + ", " +
                                     b.asset_id + ", " + b.feed_name + ") in " + paths.feeds);
    }

    std::sort(d.meta.begin(), d.meta.end(),
              [](const AssetMeta& a, const AssetMeta& b) { return a.asset_id < b.asset_id; });
    for (std::size_t i = 1; i < d.meta.size(); ++i)
        if (d.meta[i - 1].asset_id == d.meta[i].asset_id)
            throw std::runtime_error("duplicate asset_id '" + d.meta[i].asset_id + "' in " +
                                     paths.meta);
    return d;
}

void write_dataset(const Dataset& d, const DatasetPaths& paths) {
    {
        CsvWriter w(paths.bars);
        w.row({"timestamp", "asset_id", "exchange_id", "mid_price", "volume_usd",
               "market_cap_usd"});
        for (const auto& b : d.bars)
            w.row({format_timestamp(b.timestamp), b.asset_id, b.exchange_id,
                   format_double(b.mid_price), format_double(b.volume_usd),
                   b.market_cap_usd ? format_double(*b.market_cap_usd) : ""});
    }
    {
        CsvWriter w(paths.feeds);
        w.row({"timestamp", "asset_id", "feed_name", "value"});
        for (const auto& f : d.feeds)
            w.row({format_date(f.timestamp), f.asset_id, f.feed_name,
                   f.value ? format_double(*f.value) : ""});
    }
    {
        CsvWriter w(paths.meta);
        w.row({"asset_id", "is_stablecoin", "is_synthetic", "industry", "usage", "listed_markets",
               "vc_owned"});
        for (const auto& m : d.meta)
            w.row({m.asset_id, m.is_stablecoin ? "1" : "0", m.is_synthetic ? "1" : "0",
                   m.industry, m.usage, format_markets(m.listed_markets), m.vc_owned ? "1" : "0"});
    }
    {
        CsvWriter w(paths.reference);
        w.row({"name", "timestamp", "value"});
        for (const auto& s : d.references)
            for (const auto& p : s.points)
                w.row({s.name, format_date(p.timestamp), format_double(p.value)});
    }
}

ValidationReport validate_dataset(const Dataset& d) {
    ValidationReport report;
    // Hourly coverage gaps per asset across all exchanges.
    std::string current;
    TimePoint prev = 0;
    bool have_prev = false;
    auto flush_gap = [&](TimePoint from, TimePoint to, const std::string& asset) {
        if (to - from <= kSecondsPerHour) return;
        TimePoint first_missing = from + kSecondsPerHour;
        TimePoint last_missing = to - kSecondsPerHour;
        std::string detail = first_missing == last_missing
                                 ? "missing hour " + format_timestamp(first_missing)
                                 : "missing hours " + format_timestamp(first_missing) + ".." +
                                       format_timestamp(last_missing);
        report.issues.push_back({"coverage_gap", asset, detail});
    };
    for (const auto& b : d.bars) {
        if (b.asset_id != current) {
            current = b.asset_id;
            have_prev = false;
        }
        if (have_prev && b.timestamp > prev) flush_gap(prev, b.timestamp, b.asset_id);
        if (have_prev && b.timestamp < prev)
            report.issues.push_back({"nonmonotone_timestamp", b.asset_id,
                                     "bar at " + format_timestamp(b.timestamp)});
        prev = have_prev ? std::max(prev, b.timestamp) : b.timestamp;
        have_prev = true;
    }
    for (const auto& f : d.feeds) {
        if (f.value && !std::isfinite(*f.value))
            report.issues.push_back({"nan_feed_value", f.asset_id,
                                     f.feed_name + " at " + format_date(f.timestamp)});
        if (!f.value)
            report.issues.push_back({"nan_feed_value", f.asset_id,
                                     f.feed_name + " absent at " + format_date(f.timestamp)});
    }
    for (const auto& s : d.references) {
        for (std::size_t i = 1; i < s.points.size(); ++i)
            if (s.points[i].timestamp <= s.points[i - 1].timestamp)
                report.issues.push_back({"nonmonotone_timestamp", "",
                                         s.name + " at " + format_date(s.points[i].timestamp)});
    }
    for (const auto& b : d.bars) {
        if (b.market_cap_usd && *b.market_cap_usd < 0.0)
            report.issues.push_back({"negative_value", b.asset_id,
                                     "market_cap_usd at " + format_timestamp(b.timestamp)});
    }
    return report;
}

}  // namespace cryptofactor
