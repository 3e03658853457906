#include "table.hpp"

#include <ostream>

#include <json.hpp>

#include "lca/errors.hpp"

namespace lca::cli {

namespace {

std::string markdown_escape(std::string_view field) {
    std::string escaped;
    for (const char ch : field) {
        if (ch == '|')
            escaped += "\\|";
        else if (ch == '\n' || ch == '\r')
            escaped.push_back(' ');
        else
            escaped.push_back(ch);
    }
    return escaped;
}

void render_csv(const Table &table, std::ostream &out) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << csv_escape(table.columns[c].name);
    out << "\r\n";
    for (const auto &row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << csv_escape(row[c]);
        out << "\r\n";
    }
}

void render_markdown(const Table &table, std::ostream &out) {
    out << '|';
    for (const auto &column : table.columns)
        out << ' ' << markdown_escape(column.name) << " |";
    out << "\n|";
    for (const auto &column : table.columns)
        out << (column.numeric ? " ---: |" : " --- |");
    out << '\n';
    for (const auto &row : table.rows) {
        out << '|';
        for (const auto &cell : row)
            out << ' ' << markdown_escape(cell) << " |";
        out << '\n';
    }
}

void render_jsonl(const Table &table, std::ostream &out) {
    for (const auto &row : table.rows) {
        out << '{';
        bool first = true;
        const auto key = [&](const std::string &name) {
            out << (first ? "" : ",") << nlohmann::json(name).dump() << ':';
            first = false;
        };
        if (!table.title.empty()) {
            key("table");
            out << nlohmann::json(table.title).dump();
        }
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
            const auto &column = table.columns[c];
            if (column.numeric) {
                if (row[c].empty())
                    continue;
                key(column.name);
                const auto parsed = nlohmann::json::parse(row[c], nullptr, false);
                out << (parsed.is_number() ? row[c] : nlohmann::json(row[c]).dump());
            } else {
                key(column.name);
                out << nlohmann::json(row[c]).dump();
            }
        }
        out << "}\n";
    }
}

} // unnamed namespace

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string quoted = "\"";
    for (const char ch : field) {
        if (ch == '"')
            quoted.push_back('"');
        quoted.push_back(ch);
    }
    quoted.push_back('"');
    return quoted;
}

void render(const Table &table, OutputFormat format, std::ostream &out) {
    switch (format) {
    case OutputFormat::csv: render_csv(table, out); break;
    case OutputFormat::md: render_markdown(table, out); break;
    case OutputFormat::jsonl: render_jsonl(table, out); break;
    }
}

void render(const std::vector<Table> &tables, OutputFormat format, std::ostream &out) {
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (format == OutputFormat::md) {
            if (i > 0)
                out << '\n';
            out << "## " << tables[i].title << "\n\n";
        } else if (format == OutputFormat::csv && i > 0) {
            out << "\r\n";
        }
        render(tables[i], format, out);
    }
}

std::vector<std::vector<std::string>> read_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (ch == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
            rows.push_back(std::move(row));
            row.clear();
        } else {
            field.push_back(ch);
            field_started = true;
        }
    }
    if (quoted)
        throw ParseError("unterminated quoted CSV field");
    if (field_started || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace lca::cli
