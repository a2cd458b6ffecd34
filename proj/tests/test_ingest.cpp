#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "cryptofactor/csv.hpp"
#include "cryptofactor/ingest.hpp"
#include "cryptofactor/rng.hpp"
#include "cryptofactor/synthetic.hpp"

using namespace cryptofactor;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cf_ingest_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

DatasetPaths minimal_paths(const TempDir& dir,
                           const std::string& bars_body,
                           const std::string& feeds_body = "",
                           const std::string& meta_body = "",
                           const std::string& ref_body = "") {
    DatasetPaths p = DatasetPaths::in_dir(dir.path.string());
    write_file(p.bars,
               "timestamp,asset_id,exchange_id,mid_price,volume_usd,market_cap_usd\n" + bars_body);
    write_file(p.feeds, "timestamp,asset_id,feed_name,value\n" + feeds_body);
    write_file(p.meta,
               "asset_id,is_stablecoin,is_synthetic,industry,usage,listed_markets,vc_owned\n" +
                   meta_body);
    write_file(p.reference, "name,timestamp,value\n" + ref_body);
    return p;
}

}  // namespace

TEST_CASE("well-formed three-row bar file loads") {
    TempDir dir;
    DatasetPaths p = minimal_paths(dir,
                                   "2021-01-04T00:00:00Z,btc,ex1,100,5,1000\n"
                                   "2021-01-04T01:00:00Z,btc,ex1,101,6,\n"
                                   "2021-01-04T00:00:00Z,eth,ex1,50,2,400\n",
                                   "", "btc,0,0,payments,currency,ex1:USD,0\n");
    Dataset d = load_dataset(p);
    CHECK(d.bars.size() == 3);
    CHECK(d.bars[0].asset_id == "btc");
    CHECK(d.bars[1].market_cap_usd == std::nullopt);
    CHECK(d.meta_for("btc") != nullptr);
    CHECK(d.meta_for("missing") == nullptr);
}

TEST_CASE("duplicate bar key is rejected with the colliding key named") {
    TempDir dir;
    DatasetPaths p = minimal_paths(dir,
                                   "2021-01-04T00:00:00Z,btc,ex1,100,5,\n"
                                   "2021-01-04T00:00:00Z,btc,ex1,101,6,\n");
    try {
        load_dataset(p);
        FAIL("expected duplicate-key error");
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("duplicate") != std::string::npos);
        CHECK(msg.find("btc") != std::string::npos);
        CHECK(msg.find("2021-01-04T00:00:00Z") != std::string::npos);
    }
}

TEST_CASE("negative price fails validation naming file and line") {
    TempDir dir;
    DatasetPaths p = minimal_paths(dir, "2021-01-04T00:00:00Z,btc,ex1,-1,5,\n");
    try {
        load_dataset(p);
        FAIL("expected CsvError");
    } catch (const CsvError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 4);
    }
}

TEST_CASE("adversarial rows never produce invariant-violating bars") {
    // Property: whatever load_dataset accepts satisfies the bar
    // invariants; everything else throws rather than slipping through.
    Rng rng(314);
    const char* prices[] = {"100", "-5", "0", "nan", "inf", "1e4", "abc", ""};
    const char* volumes[] = {"0", "5", "-2", "nan", "1e9", ""};
    const char* stamps[] = {"2021-01-04T00:00:00Z", "2021-01-04T00:30:00Z", "2021-01-04",
                            "not-a-time"};
    TempDir dir;
    for (int trial = 0; trial < 200; ++trial) {
        std::string row = std::string(stamps[rng.bounded(4)]) + ",a,x," +
                          prices[rng.bounded(8)] + "," + volumes[rng.bounded(6)] + ",\n";
        DatasetPaths p = minimal_paths(dir, row);
        try {
            Dataset d = load_dataset(p);
            for (const auto& b : d.bars) {
                CHECK(b.timestamp % kSecondsPerHour == 0);
                CHECK(std::isfinite(b.mid_price));
                CHECK(b.mid_price > 0.0);
                CHECK(b.volume_usd >= 0.0);
            }
        } catch (const CsvError&) {
            // rejection is the other acceptable outcome
        }
    }
}

TEST_CASE("write then load is the identity on a synthetic dataset") {
    SyntheticConfig cfg;
    cfg.n_assets = 3;
    cfg.start = parse_timestamp("2021-01-04");
    cfg.end = parse_timestamp("2021-04-12");
    Dataset d = generate_synthetic(cfg, 11).dataset;

    TempDir dir;
    DatasetPaths p = DatasetPaths::in_dir(dir.path.string());
    write_dataset(d, p);
    Dataset d2 = load_dataset(p);

    REQUIRE(d2.bars.size() == d.bars.size());
    for (std::size_t i = 0; i < d.bars.size(); ++i) {
        CHECK(d2.bars[i].timestamp == d.bars[i].timestamp);
        CHECK(d2.bars[i].asset_id == d.bars[i].asset_id);
        CHECK(d2.bars[i].mid_price == doctest::Approx(d.bars[i].mid_price).epsilon(1e-11));
    }
    REQUIRE(d2.meta.size() == d.meta.size());
    for (std::size_t i = 0; i < d.meta.size(); ++i) {
        CHECK(d2.meta[i].asset_id == d.meta[i].asset_id);
        CHECK(d2.meta[i].listed_markets == d.meta[i].listed_markets);
        CHECK(d2.meta[i].vc_owned == d.meta[i].vc_owned);
    }
    REQUIRE(d2.feeds.size() == d.feeds.size());
    REQUIRE(d2.references.size() == d.references.size());

    // Byte-level: writing the reloaded dataset reproduces the files.
    TempDir dir2;
    DatasetPaths p2 = DatasetPaths::in_dir(dir2.path.string());
    write_dataset(d2, p2);
    for (auto [a, b] : {std::pair{p.bars, p2.bars}, {p.feeds, p2.feeds}, {p.meta, p2.meta},
                        {p.reference, p2.reference}}) {
        std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
        std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
        std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
        CHECK(ca == cb);
    }
}

TEST_CASE("validate_dataset reports gaps, NaN feeds, and clean data") {
    SyntheticConfig cfg;
    cfg.n_assets = 2;
    cfg.start = parse_timestamp("2021-01-04");
    cfg.end = parse_timestamp("2021-04-12");
    Dataset d = generate_synthetic(cfg, 5).dataset;
    CHECK(validate_dataset(d).clean());

    // Remove one mid-series hour for one asset.
    Dataset gap = d;
    for (std::size_t i = 0; i < gap.bars.size(); ++i) {
        if (gap.bars[i].asset_id == "A000" &&
            gap.bars[i].timestamp == parse_timestamp("2021-02-01T07:00:00Z")) {
            gap.bars.erase(gap.bars.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    ValidationReport rep = validate_dataset(gap);
    REQUIRE_FALSE(rep.clean());
    bool found = false;
    for (const auto& issue : rep.issues)
        if (issue.kind == "coverage_gap" && issue.asset_id == "A000" &&
            issue.detail.find("2021-02-01T07:00:00Z") != std::string::npos)
            found = true;
    CHECK(found);

    Dataset nanfeed = d;
    nanfeed.feeds[0].value.reset();
    ValidationReport rep2 = validate_dataset(nanfeed);
    bool flagged = false;
    for (const auto& issue : rep2.issues)
        if (issue.kind == "nan_feed_value") flagged = true;
    CHECK(flagged);
}
