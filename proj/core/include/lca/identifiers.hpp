/** \file  identifiers.hpp
 *  \brief ISBN normalization and conversion, heading normalization, and edition-to-work clustering.
 */
#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lca/model.hpp"

namespace lca {

/// Strips hyphens and spaces, verifies the check digit and returns the 13-digit form. ISBN-10 input
/// is converted with the 978 prefix. Throws IsbnFormatError or IsbnChecksumError.
Isbn normalize_isbn(std::string_view raw);

/// Non-throwing variant for content sniffing.
std::optional<Isbn> try_normalize_isbn(std::string_view raw);

/// 10-character form of a 978-prefixed ISBN; the check digit may be 'X'.
/// Throws NotConvertibleError for any other prefix.
std::string isbn13_to_isbn10(const Isbn &isbn);

/// Check digit for the first 9 digits of an ISBN-10 ('0'-'9' or 'X').
char isbn10_check_digit(std::string_view first_nine);
/// Check digit for the first 12 digits of an ISBN-13.
char isbn13_check_digit(std::string_view first_twelve);

/// Casefolds, folds diacritics via compatibility decomposition, removes punctuation and collapses
/// whitespace. Input is UTF-8; invalid sequences are replaced.
std::string normalize_heading(std::string_view text);

struct WorkKey {
    std::string normalized_title;
    std::string primary_contributor;

    auto operator<=>(const WorkKey &) const = default;
};

/// Throws KeyError when the record's title normalizes to nothing.
WorkKey work_key(const BookRecord &record);

/// Name used as the record's primary contributor: the first author, else the first creator, else
/// the first contributor of any role. Empty when there are no contributors.
std::string primary_contributor(const BookRecord &record);

struct WorkCluster {
    /// Smallest member record id; stable across input order.
    std::string cluster_id;
    WorkKey work_key;
    std::set<std::string> member_record_ids;
};

/// Partitions the snapshot's records into works. Two records share a cluster iff they are connected
/// through a shared OCLC number, a shared ISBN, or an equal WorkKey. Clusters are ordered by id.
std::vector<WorkCluster> cluster_works(const CatalogSnapshot &snapshot);

} // namespace lca
