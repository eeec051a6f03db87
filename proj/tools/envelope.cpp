#include "envelope.hpp"

#include "ngi/model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#ifndef NGI_VERSION
#define NGI_VERSION "0.0.0"
#endif

namespace ngi::cli {

using ordered_json = nlohmann::ordered_json;

void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size()) {
        throw std::logic_error("table " + name + ": row has " + std::to_string(row.size()) + " cells, header has " +
                               std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

Format parse_format(const std::string& text)
{
    if (text == "json") return Format::json;
    if (text == "csv") return Format::csv;
    throw ValidationError("format must be json or csv, got '" + text + "'");
}

Table& OutputEnvelope::table(std::string name, std::vector<std::string> columns)
{
    tables.push_back({std::move(name), std::move(columns), {}});
    return tables.back();
}

const char* tool_name() noexcept { return "ng-incentives"; }
const char* tool_version() noexcept { return NGI_VERSION; }

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

ordered_json cell_json(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return nullptr;
            }
            return v;
        },
        c);
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::string>) return csv_escape(v);
            else return std::to_string(v);
        },
        c);
}

ordered_json metadata(const OutputEnvelope& env)
{
    return {{"tool", tool_name()},
            {"version", tool_version()},
            {"command", env.command},
            {"seeds", env.seeds},
            {"parameters", env.parameters}};
}

}  // namespace

void write_json(std::ostream& out, const OutputEnvelope& env)
{
    ordered_json tables = ordered_json::object();
    for (const Table& t : env.tables) {
        ordered_json rows = ordered_json::array();
        for (const auto& row : t.rows) {
            ordered_json obj = ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
            rows.push_back(std::move(obj));
        }
        tables[t.name] = std::move(rows);
    }
    const ordered_json doc{{"metadata", metadata(env)}, {"tables", std::move(tables)}};
    out << doc.dump(2) << '\n';
}

void write_csv(std::ostream& out, const OutputEnvelope& env)
{
    out << "# tool: " << tool_name() << '\n';
    out << "# version: " << tool_version() << '\n';
    out << "# command: " << env.command << '\n';
    out << "# seeds:";
    for (std::size_t i = 0; i < env.seeds.size(); ++i) out << (i ? "," : " ") << env.seeds[i];
    out << '\n';
    out << "# parameters: " << env.parameters.dump() << '\n';
    for (std::size_t k = 0; k < env.tables.size(); ++k) {
        const Table& t = env.tables[k];
        if (k > 0) out << '\n';
        out << "# table: " << t.name << '\n';
        for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_escape(t.columns[i]);
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
            out << '\n';
        }
    }
}

void write(std::ostream& out, const OutputEnvelope& env, Format format)
{
    if (format == Format::json) write_json(out, env);
    else write_csv(out, env);
}

}  // namespace ngi::cli
