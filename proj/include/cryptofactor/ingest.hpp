#pragma once

#include <string>
#include <vector>

#include "cryptofactor/types.hpp"

namespace cryptofactor {

struct DatasetPaths {
    std::string bars;       // bars.csv
    std::string feeds;      // feeds.csv
    std::string meta;       // meta.csv
    std::string reference;  // reference.csv

    static DatasetPaths in_dir(const std::string& dir);
};

/// Loads and type-checks the four input files. Duplicate keys and invariant
/// violations raise CsvError naming file, line and column. Rows come back
/// in the Dataset's pinned sort orders.
Dataset load_dataset(const DatasetPaths& paths);

/// Serializes a Dataset back to the CSV layouts; load_dataset of the result
/// reproduces the Dataset exactly.
void write_dataset(const Dataset& d, const DatasetPaths& paths);

struct ValidationIssue {
    std::string kind;      // coverage_gap | nonmonotone_timestamp | negative_value | nan_feed_value
    std::string asset_id;  // empty when not asset-specific
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool clean() const { return issues.empty(); }
};

/// Report-only quality scan: per-asset hourly coverage gaps, non-monotone
/// reference timestamps, negative values, NaN feed values.
ValidationReport validate_dataset(const Dataset& d);

}  // namespace cryptofactor
