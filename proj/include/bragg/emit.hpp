/** \file emit.hpp
 * \brief Result records and their CSV/JSON serialization. */
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bragg {

using Cell = std::variant<double, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }

    bool operator==(const Table&) const = default;
};

/** Everything a run produces except wall-clock metadata, so that the same
 * configuration gives byte-identical files. */
struct ResultRecord {
    std::string tag;
    std::string version;
    std::vector<std::pair<std::string, std::string>> config;  ///< full effective configuration
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<Table> tables;       ///< tables[0] is the main table
    std::vector<std::string> warnings;

    bool operator==(const ResultRecord&) const = default;
};

/// %.{precision}g with '.' decimal; ties resolved by the C library (half-even).
std::string format_number(double x, int precision);
/// RFC 4180 quoting when needed.
std::string csv_field(const std::string& s);
std::string to_csv(const Table& t, int precision);

nlohmann::ordered_json to_json(const ResultRecord& r);
/// \throws ConfigError on schema mismatch
ResultRecord record_from_json(const nlohmann::ordered_json& j);

/** Write the record to dir. csv: one file per table (`<tag>.csv`,
 * `<tag>_<name>.csv`) plus `<tag>.record.json` with config, scalars and
 * warnings. json: a single `<tag>.json`.
 * \returns written paths
 * \throws NumericError on I/O failure */
std::vector<std::filesystem::path> emit(const ResultRecord& r, const std::string& format,
                                        const std::filesystem::path& dir, int precision);

/// Non-deterministic run metadata in `<tag>.run.json`.
std::filesystem::path emit_run_metadata(const std::filesystem::path& dir, const std::string& tag,
                                        const std::string& timestamp, double runtime_s, std::size_t threads);

} // namespace bragg
