/** \file  ingest.cpp
 *  \brief Dublin Core / MARC-XML extraction and dataset persistence.
 */
#include "lca/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json_codec.hpp"
#include "lca/errors.hpp"
#include "lca/identifiers.hpp"
#include "xml.hpp"

namespace lca {

namespace {

constexpr std::string_view kDublinCoreNamespace = "http://purl.org/dc/elements/1.1/";
constexpr std::string_view kMarcNamespace = "http://www.loc.gov/MARC21/slim";

const std::set<std::string_view> kDublinCoreElements{
    "title",  "creator", "subject", "description", "publisher", "contributor", "date",  "type",
    "format", "identifier", "source", "language", "relation",   "coverage",    "rights"};

std::string trim(std::string_view text) {
    constexpr std::string_view kSpace = " \t\r\n\f\v";
    const auto first = text.find_first_not_of(kSpace);
    if (first == std::string_view::npos)
        return {};
    const auto last = text.find_last_not_of(kSpace);
    return std::string(text.substr(first, last - first + 1));
}

std::string upper(std::string_view text) {
    std::string result(text);
    for (auto &ch : result)
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return result;
}

bool is_digit(char ch) { return ch >= '0' && ch <= '9'; }

/// Parses leading digits (after optional ocm/ocn/on) as an OCLC number.
std::optional<OclcNumber> parse_oclc_digits(std::string_view text) {
    std::string rest = trim(text);
    for (const std::string_view prefix : {"ocm", "ocn", "on"})
        if (std::string_view(rest).starts_with(prefix)) {
            rest.erase(0, prefix.size());
            break;
        }
    std::uint64_t value = 0;
    std::size_t digits = 0;
    for (const char ch : rest) {
        if (!is_digit(ch))
            break;
        if (++digits > 18)
            return std::nullopt;
        value = value * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    if (digits == 0 || value == 0)
        return std::nullopt;
    return OclcNumber(value);
}

std::optional<int> first_four_digit_group(std::string_view text) {
    for (std::size_t i = 0; i + 4 <= text.size(); ++i)
        if (std::all_of(text.begin() + i, text.begin() + i + 4, is_digit))
            return std::stoi(std::string(text.substr(i, 4)));
    return std::nullopt;
}

std::optional<Isbn> isbn_from_field(std::string_view text) {
    std::string value = trim(text);
    const auto parenthesis = value.find('(');
    if (parenthesis != std::string::npos)
        value = trim(value.substr(0, parenthesis));
    if (auto isbn = try_normalize_isbn(value))
        return isbn;
    const auto space = value.find(' ');
    if (space != std::string::npos)
        return try_normalize_isbn(value.substr(0, space));
    return std::nullopt;
}

void add_isbn(BookRecord &record, Isbn isbn) {
    for (const auto &existing : record.isbns)
        if (existing.digits() == isbn.digits())
            return;
    record.isbns.push_back(std::move(isbn));
}

void sniff_identifier(BookRecord &record, std::string_view raw) {
    const std::string text = trim(raw);
    const std::string key = upper(text);
    if (key.starts_with("URN:ISBN:")) {
        if (auto isbn = isbn_from_field(std::string_view(text).substr(9)))
            add_isbn(record, std::move(*isbn));
    } else if (key.starts_with("ISBN")) {
        auto rest = std::string_view(text).substr(4);
        while (!rest.empty() && (rest.front() == ':' || rest.front() == ' ' || rest.front() == '-'))
            rest.remove_prefix(1);
        if (auto isbn = isbn_from_field(rest))
            add_isbn(record, std::move(*isbn));
    } else if (key.starts_with("(OCOLC)")) {
        if (!record.oclc)
            record.oclc = parse_oclc_digits(std::string_view(text).substr(7));
    } else if (key.starts_with("OCLC")) {
        auto rest = std::string_view(text).substr(4);
        while (!rest.empty() && (rest.front() == ':' || rest.front() == ' ' || rest.front() == '#'))
            rest.remove_prefix(1);
        if (!record.oclc)
            record.oclc = parse_oclc_digits(rest);
    } else if (!text.empty() && std::all_of(text.begin(), text.end(), [](char ch) {
                   return is_digit(ch) || ch == '-' || ch == ' ' || ch == 'X' || ch == 'x';
               })) {
        if (auto isbn = try_normalize_isbn(text))
            add_isbn(record, std::move(*isbn));
    }
}

/// Drops the ISBD punctuation that MARC cataloguers leave at the end of subfields.
std::string strip_trailing_punctuation(std::string_view text) {
    std::string value = trim(text);
    while (!value.empty() && std::string_view(" /:;,=").find(value.back()) != std::string_view::npos)
        value.pop_back();
    return trim(value);
}

std::string strip_trailing_comma(std::string_view text) {
    std::string value = trim(text);
    while (!value.empty() && value.back() == ',')
        value.pop_back();
    return trim(value);
}

/// Assigns derived ids, suffixing collisions within one document.
void assign_ids(std::vector<BookRecord> &records) {
    std::map<std::string, int> used;
    for (auto &record : records) {
        std::string id = derive_record_id(record);
        const int count = ++used[id];
        if (count > 1)
            id += "-" + std::to_string(count);
        record.record_id = std::move(id);
    }
}

bool in_dublin_core(const xml::Element &element) {
    if (element.namespace_uri == kDublinCoreNamespace)
        return true;
    return element.namespace_uri.empty() && element.prefix() == "dc";
}

ParseResult finish(std::vector<BookRecord> records, ParseReport report) {
    assign_ids(records);
    report.accepted = records.size();
    report.rejected = report.rejections.size();
    return {std::move(records), std::move(report)};
}

std::optional<Role> marc_relator(const xml::Element &field, const xml::Document &document) {
    for (const auto child : field.children) {
        const auto &subfield = document.at(child);
        const auto *code = subfield.attribute("code");
        if (subfield.local_name() != "subfield" || code == nullptr || (*code != "e" && *code != "4"))
            continue;
        const std::string relator = upper(trim(subfield.text));
        if (relator.starts_with("EDT") || relator.starts_with("ED"))
            return Role::editor;
        if (relator.starts_with("AUT"))
            return Role::author;
        if (relator.starts_with("CRE"))
            return Role::creator;
    }
    return std::nullopt;
}

std::vector<std::string> subfields(const xml::Element &field, const xml::Document &document, std::string_view wanted) {
    std::vector<std::string> values;
    for (const auto child : field.children) {
        const auto &subfield = document.at(child);
        const auto *code = subfield.attribute("code");
        if (subfield.local_name() == "subfield" && code != nullptr && *code == wanted)
            values.push_back(subfield.text);
    }
    return values;
}

bool has_record_descendant(const xml::Document &document, std::size_t index) {
    std::vector<std::size_t> pending(document.at(index).children);
    while (!pending.empty()) {
        const auto current = pending.back();
        pending.pop_back();
        const auto &element = document.at(current);
        if (element.local_name() == "record")
            return true;
        pending.insert(pending.end(), element.children.begin(), element.children.end());
    }
    return false;
}

} // unnamed namespace

std::string derive_record_id(const BookRecord &record) {
    if (record.oclc)
        return "ocn" + std::to_string(record.oclc->value());
    if (!record.isbns.empty())
        return "isbn" + record.isbns.front().digits();
    // FNV-1a over the work key and year.
    std::uint64_t hash = 1469598103934665603ULL;
    const auto mix = [&hash](std::string_view bytes) {
        for (const char ch : bytes) {
            hash ^= static_cast<unsigned char>(ch);
            hash *= 1099511628211ULL;
        }
        hash ^= 0xff;
        hash *= 1099511628211ULL;
    };
    mix(normalize_heading(record.title));
    mix(normalize_heading(primary_contributor(record)));
    mix(record.year ? std::to_string(*record.year) : std::string());
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return std::string("rec-") + buffer;
}

ParseResult parse_dublin_core(std::string_view document_text) {
    const auto document = xml::Document::parse(document_text);
    std::vector<BookRecord> records;
    ParseReport report;
    std::size_t ordinal = 0;

    for (const auto &element : document.elements()) {
        if (in_dublin_core(element))
            continue;
        const bool is_record = std::any_of(element.children.begin(), element.children.end(), [&](std::size_t child) {
            const auto &candidate = document.at(child);
            return in_dublin_core(candidate) && kDublinCoreElements.contains(candidate.local_name());
        });
        if (!is_record)
            continue;
        ++ordinal;

        BookRecord record;
        std::optional<std::string> title;
        for (const auto child : element.children) {
            const auto &field = document.at(child);
            if (!in_dublin_core(field))
                continue;
            const auto name = field.local_name();
            const std::string value = trim(field.text);
            if (name == "title") {
                if (!title && !value.empty())
                    title = value;
            } else if (name == "creator") {
                if (!value.empty())
                    record.contributors.push_back({value, Role::author});
            } else if (name == "contributor") {
                if (!value.empty())
                    record.contributors.push_back({value, Role::other});
            } else if (name == "identifier") {
                sniff_identifier(record, value);
            } else if (name == "date") {
                if (!record.year)
                    record.year = first_four_digit_group(value);
            } else if (name == "language") {
                if (!record.language && !value.empty())
                    record.language = value;
            } else if (name == "subject") {
                if (!record.lc_class && !value.empty())
                    record.lc_class = ClassCode(value);
            } else if (name == "format") {
                const std::string lowered = normalize_heading(value);
                if (lowered.find("ebook") != std::string::npos || lowered.find("electronic") != std::string::npos)
                    record.format = Format::ebook;
                else if (lowered.find("print") != std::string::npos)
                    record.format = Format::print;
            }
        }
        if (!title) {
            report.rejections.push_back({"record " + std::to_string(ordinal), "missing dc:title"});
            continue;
        }
        record.title = *title;
        records.push_back(std::move(record));
    }
    return finish(std::move(records), std::move(report));
}

ParseResult parse_marc_xml(std::string_view document_text) {
    const auto document = xml::Document::parse(document_text);
    std::vector<BookRecord> records;
    ParseReport report;
    std::size_t ordinal = 0;

    for (const auto &element : document.elements()) {
        if (element.local_name() != "record")
            continue;
        if (!element.namespace_uri.empty() && element.namespace_uri != kMarcNamespace)
            continue;
        if (has_record_descendant(document, document.index_of(element)))
            continue;
        ++ordinal;

        BookRecord record;
        std::optional<std::string> title;
        for (const auto child : element.children) {
            const auto &field = document.at(child);
            const auto *tag = field.attribute("tag");
            if (tag == nullptr)
                continue;
            if (field.local_name() == "controlfield") {
                if (*tag == "001" && !record.oclc) {
                    const std::string value = trim(field.text);
                    if (value.starts_with("(OCoLC)"))
                        record.oclc = parse_oclc_digits(std::string_view(value).substr(7));
                    else if (value.starts_with("ocm") || value.starts_with("ocn") || value.starts_with("on"))
                        record.oclc = parse_oclc_digits(value);
                } else if (*tag == "008") {
                    const std::string &value = field.text;
                    if (value.size() >= 11 && !record.year) {
                        const auto year = std::string_view(value).substr(7, 4);
                        if (std::all_of(year.begin(), year.end(), is_digit))
                            record.year = std::stoi(std::string(year));
                    }
                    if (value.size() >= 24 && (value[23] == 'o' || value[23] == 'q' || value[23] == 's'))
                        record.format = Format::ebook;
                    if (value.size() >= 38 && !record.language) {
                        const auto language = std::string_view(value).substr(35, 3);
                        if (std::all_of(language.begin(), language.end(),
                                        [](char ch) { return ch >= 'a' && ch <= 'z'; }))
                            record.language = std::string(language);
                    }
                }
                continue;
            }
            if (field.local_name() != "datafield")
                continue;
            if (*tag == "245") {
                for (const auto &value : subfields(field, document, "a")) {
                    auto cleaned = strip_trailing_punctuation(value);
                    if (!title && !cleaned.empty())
                        title = std::move(cleaned);
                }
            } else if (*tag == "100") {
                for (const auto &value : subfields(field, document, "a"))
                    if (auto name = strip_trailing_comma(value); !name.empty())
                        record.contributors.push_back({name, marc_relator(field, document).value_or(Role::author)});
            } else if (*tag == "700") {
                for (const auto &value : subfields(field, document, "a"))
                    if (auto name = strip_trailing_comma(value); !name.empty())
                        record.contributors.push_back({name, marc_relator(field, document).value_or(Role::other)});
            } else if (*tag == "020") {
                for (const auto &value : subfields(field, document, "a"))
                    if (auto isbn = isbn_from_field(value))
                        add_isbn(record, std::move(*isbn));
            } else if (*tag == "035") {
                for (const auto &value : subfields(field, document, "a")) {
                    const std::string cleaned = trim(value);
                    if (!record.oclc && cleaned.starts_with("(OCoLC)"))
                        record.oclc = parse_oclc_digits(std::string_view(cleaned).substr(7));
                }
            } else if (*tag == "050") {
                for (const auto &value : subfields(field, document, "a"))
                    if (!record.lc_class && !trim(value).empty())
                        record.lc_class = ClassCode(value);
            }
        }
        if (!title) {
            report.rejections.push_back({"record " + std::to_string(ordinal), "missing 245$a title"});
            continue;
        }
        record.title = *title;
        records.push_back(std::move(record));
    }
    return finish(std::move(records), std::move(report));
}

CatalogSnapshot read_dataset(std::istream &input) {
    std::vector<BookRecord> records;
    std::vector<LibraryOrg> libraries;
    std::vector<Holding> holdings;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(input, line)) {
        ++line_number;
        if (trim(line).empty())
            continue;
        nlohmann::json object;
        try {
            object = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception &error) {
            throw DatasetError(line_number, std::string("malformed JSON: ") + error.what());
        }
        if (!object.is_object())
            throw DatasetError(line_number, "expected a JSON object");
        const auto tag = object.find("t");
        if (tag == object.end() || !tag->is_string())
            throw DatasetError(line_number, "missing entity tag \"t\"");
        const auto entity = tag->get<std::string>();
        try {
            if (entity == "R")
                records.push_back(codec::decode_record(object));
            else if (entity == "L")
                libraries.push_back(codec::decode_library(object));
            else if (entity == "H")
                holdings.push_back(codec::decode_holding(object));
            else
                throw DatasetError(line_number, "unknown entity tag \"" + entity + "\"");
        } catch (const DatasetError &) {
            throw;
        } catch (const IntegrityError &) {
            throw;
        } catch (const Error &error) {
            throw DatasetError(line_number, error.what());
        }
    }
    return build_snapshot(std::move(records), std::move(libraries), std::move(holdings));
}

void write_dataset(const CatalogSnapshot &snapshot, std::ostream &output) {
    const auto emit = [&output](const char *tag, codec::OrderedJson body) {
        codec::OrderedJson line;
        line["t"] = tag;
        for (auto field = body.begin(); field != body.end(); ++field)
            line[field.key()] = std::move(field.value());
        output << line.dump() << '\n';
    };
    for (const auto &record : snapshot.records())
        emit("R", codec::encode_record(record));
    for (const auto &library : snapshot.libraries())
        emit("L", codec::encode_library(library));
    for (const auto &holding : snapshot.holdings())
        emit("H", codec::encode_holding(holding));
}

CatalogSnapshot load_dataset(const std::filesystem::path &path) {
    std::ifstream input(path, std::ios::binary);
    if (!input)
        throw Error("cannot open dataset " + path.string());
    return read_dataset(input);
}

void save_dataset(const CatalogSnapshot &snapshot, const std::filesystem::path &path) {
    auto temporary = path;
    temporary += ".tmp";
    {
        std::ofstream output(temporary, std::ios::binary | std::ios::trunc);
        if (!output)
            throw Error("cannot write dataset " + temporary.string());
        write_dataset(snapshot, output);
        output.flush();
        if (!output)
            throw Error("write failed for " + temporary.string());
    }
    std::filesystem::rename(temporary, path);
}

} // namespace lca
