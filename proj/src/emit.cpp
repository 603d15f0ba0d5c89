#include "bragg/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bragg/common.hpp"

namespace bragg {

std::string format_number(double x, int precision)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string to_csv(const Table& t, int precision)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
    out += "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (const double* d = std::get_if<double>(&row[i]))
                out += format_number(*d, precision);
            else
                out += csv_field(std::get<std::string>(row[i]));
        }
        out += "\r\n";
    }
    return out;
}

namespace {

nlohmann::ordered_json cell_json(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) return *d;
    return std::get<std::string>(c);
}

nlohmann::ordered_json meta_json(const ResultRecord& r)
{
    nlohmann::ordered_json j;
    j["tag"] = r.tag;
    j["version"] = r.version;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["config"] = cfg;
    nlohmann::ordered_json sc = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.scalars) sc[k] = v;
    j["scalars"] = sc;
    j["warnings"] = r.warnings;
    return j;
}

void write_file(const std::filesystem::path& p, const std::string& content)
{
    std::ofstream f(p, std::ios::binary);
    f << content;
    f.close();
    if (!f) throw NumericError("cannot write output file '" + p.string() + "'");
}

} // namespace

nlohmann::ordered_json to_json(const ResultRecord& r)
{
    nlohmann::ordered_json j = meta_json(r);
    nlohmann::ordered_json tables = nlohmann::ordered_json::array();
    for (const auto& t : r.tables) {
        nlohmann::ordered_json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json jr = nlohmann::ordered_json::array();
            for (const auto& c : row) jr.push_back(cell_json(c));
            rows.push_back(std::move(jr));
        }
        jt["rows"] = std::move(rows);
        tables.push_back(std::move(jt));
    }
    j["tables"] = std::move(tables);
    return j;
}

ResultRecord record_from_json(const nlohmann::ordered_json& j)
{
    try {
        ResultRecord r;
        r.tag = j.at("tag").get<std::string>();
        r.version = j.at("version").get<std::string>();
        for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
        for (const auto& [k, v] : j.at("scalars").items()) r.scalars.emplace_back(k, v.get<double>());
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        for (const auto& jt : j.at("tables")) {
            Table t;
            t.name = jt.at("name").get<std::string>();
            t.columns = jt.at("columns").get<std::vector<std::string>>();
            for (const auto& jr : jt.at("rows")) {
                std::vector<Cell> row;
                for (const auto& c : jr) {
                    if (c.is_string())
                        row.emplace_back(c.get<std::string>());
                    else
                        row.emplace_back(c.get<double>());
                }
                t.rows.push_back(std::move(row));
            }
            r.tables.push_back(std::move(t));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed result record: ") + e.what());
    }
}

std::vector<std::filesystem::path> emit(const ResultRecord& r, const std::string& format,
                                        const std::filesystem::path& dir, int precision)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw NumericError("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::vector<std::filesystem::path> written;
    if (format == "json") {
        const auto p = dir / (r.tag + ".json");
        write_file(p, to_json(r).dump(2) + "\n");
        written.push_back(p);
        return written;
    }
    if (format != "csv") throw ConfigError("unknown output format '" + format + "'");
    for (std::size_t i = 0; i < r.tables.size(); ++i) {
        const auto p = dir / (i == 0 ? r.tag + ".csv" : r.tag + "_" + r.tables[i].name + ".csv");
        write_file(p, to_csv(r.tables[i], precision));
        written.push_back(p);
    }
    const auto p = dir / (r.tag + ".record.json");
    write_file(p, meta_json(r).dump(2) + "\n");
    written.push_back(p);
    return written;
}

std::filesystem::path emit_run_metadata(const std::filesystem::path& dir, const std::string& tag,
                                        const std::string& timestamp, double runtime_s, std::size_t threads)
{
    nlohmann::ordered_json j;
    j["tag"] = tag;
    j["timestamp"] = timestamp;
    j["runtime_s"] = runtime_s;
    j["threads"] = threads;
    const auto p = dir / (tag + ".run.json");
    write_file(p, j.dump(2) + "\n");
    return p;
}

} // namespace bragg
