#ifndef NGI_TOOLS_ENVELOPE_HPP
#define NGI_TOOLS_ENVELOPE_HPP

#include <json.hpp>

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace ngi::cli {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// Throws std::logic_error when the row width differs from the header.
    void add(std::vector<Cell> row);
};

enum class Format { json, csv };

Format parse_format(const std::string& text);

/// What every subcommand emits: run metadata plus named tables.
struct OutputEnvelope {
    std::string command;
    std::vector<std::uint64_t> seeds;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::deque<Table> tables;  ///< deque: table() references stay valid

    Table& table(std::string name, std::vector<std::string> columns);
};

const char* tool_name() noexcept;
const char* tool_version() noexcept;

/// %.17g, which round-trips through strtod.
std::string format_double(double x);

/// {"metadata": {...}, "tables": {"name": [{column: value, ...}, ...]}}
void write_json(std::ostream& out, const OutputEnvelope& env);

/// `# key: value` metadata lines, then for each table a `# table: name` line,
/// a header row and the data rows. Tables are separated by a blank line.
void write_csv(std::ostream& out, const OutputEnvelope& env);

void write(std::ostream& out, const OutputEnvelope& env, Format format);

}  // namespace ngi::cli

#endif  // NGI_TOOLS_ENVELOPE_HPP
