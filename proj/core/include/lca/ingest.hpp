/** \file  ingest.hpp
 *  \brief Dublin Core and MARC-XML parsing into BookRecords, and the line-delimited JSON dataset
 *         format.
 *
 *  Dataset files hold one JSON object per line, tagged by entity:
 *
 *      {"t":"R","id":…,"oclc":…,"isbns":[…],"title":…,"contributors":[["name","role"],…],
 *       "year":…,"lang":…,"lc":…,"format":…,"citations":…}
 *      {"t":"L","id":…,"name":…,"country":…,"kind":…,"memberships":[…]}
 *      {"t":"H","record":…,"library":…,"channel":…}
 *
 *  Absent optional fields are omitted rather than written as null.
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lca/model.hpp"

namespace lca {

struct Rejection {
    std::string locator; // e.g. "record 3"
    std::string reason;
};

struct ParseReport {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::vector<Rejection> rejections;
};

struct ParseResult {
    std::vector<BookRecord> records;
    ParseReport report;
};

/// Throws ParseError for malformed XML. Records lacking dc:title are rejected in the report.
ParseResult parse_dublin_core(std::string_view document);

/// Reads 245$a, 100$a/700$a, 020$a, 001/035 "(OCoLC)", 008/07-10, 008/35-37, 008/23 and 050$a.
/// Throws ParseError for malformed XML. Records lacking 245$a are rejected in the report.
ParseResult parse_marc_xml(std::string_view document);

/// Deterministic id for a parsed record: "ocn<n>" when an OCLC number is known, else "isbn<13 digits>",
/// else "rec-" followed by a hash of the work key and year.
std::string derive_record_id(const BookRecord &record);

/// Throws DatasetError (with line number) for malformed lines and IntegrityError for dangling
/// references.
CatalogSnapshot read_dataset(std::istream &input);
void write_dataset(const CatalogSnapshot &snapshot, std::ostream &output);

CatalogSnapshot load_dataset(const std::filesystem::path &path);
/// Writes to a sibling temporary file, then renames over `path`.
void save_dataset(const CatalogSnapshot &snapshot, const std::filesystem::path &path);

} // namespace lca
