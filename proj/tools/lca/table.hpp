/** \file  table.hpp
 *  \brief Tabular output in CSV (RFC 4180), Markdown pipe tables and JSON lines, plus a CSV reader.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lca::cli {

enum class OutputFormat { csv, md, jsonl };

struct Column {
    std::string name;
    bool numeric = false;
};

struct Table {
    std::string title;
    std::vector<Column> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Empty numeric cells are omitted from JSON lines output.
void render(const Table &table, OutputFormat format, std::ostream &out);
/// Renders several tables separated by a blank line (a heading per table in Markdown).
void render(const std::vector<Table> &tables, OutputFormat format, std::ostream &out);

std::string csv_escape(std::string_view field);

/// Parses RFC 4180 text into rows of fields. Throws lca::ParseError on an unterminated quote.
std::vector<std::vector<std::string>> read_csv(std::string_view text);

} // namespace lca::cli
