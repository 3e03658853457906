/** \file  model.hpp
 *  \brief Domain vocabulary for library catalog analysis: records, libraries, holdings and the
 *         immutable snapshot every indicator is computed from.
 */
#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lca {

class Isbn;

/// Defined by the identifiers module; the only way to obtain an Isbn.
Isbn normalize_isbn(std::string_view raw);

/// Canonical 13-digit ISBN. ISBN-10 input is stored converted.
class Isbn {
public:
    const std::string &digits() const noexcept { return digits_; }
    const std::string &original_form() const noexcept { return original_form_; }

    bool operator==(const Isbn &) const = default;

private:
    Isbn(std::string digits, std::string original_form)
        : digits_(std::move(digits)), original_form_(std::move(original_form)) {}
    friend Isbn normalize_isbn(std::string_view raw);

    std::string digits_;
    std::string original_form_;
};

class OclcNumber {
public:
    /// Throws InvalidValueError for 0.
    explicit OclcNumber(std::uint64_t value);
    std::uint64_t value() const noexcept { return value_; }
    auto operator<=>(const OclcNumber &) const = default;

private:
    std::uint64_t value_;
};

/// Classification heading such as an LC class; stored trimmed, never empty.
class ClassCode {
public:
    explicit ClassCode(std::string_view value);
    const std::string &value() const noexcept { return value_; }
    auto operator<=>(const ClassCode &) const = default;

private:
    std::string value_;
};

enum class Role { author, editor, other, creator };
enum class Format { print, ebook, unknown };
enum class LibraryKind { academic, public_library, other };
enum class Channel { librarian_order, approval_plan, pda, donation, package, unspecified };

std::string_view to_string(Role role);
std::string_view to_string(Format format);
std::string_view to_string(LibraryKind kind);
std::string_view to_string(Channel channel);

std::optional<Role> parse_role(std::string_view text);
std::optional<Format> parse_format(std::string_view text);
std::optional<LibraryKind> parse_library_kind(std::string_view text);
std::optional<Channel> parse_channel(std::string_view text);

struct Contributor {
    std::string name;
    Role role = Role::author;
    bool operator==(const Contributor &) const = default;
};

/// One cataloged edition.
struct BookRecord {
    std::string record_id;
    std::optional<OclcNumber> oclc;
    std::vector<Isbn> isbns;
    std::string title;
    std::vector<Contributor> contributors;
    std::optional<int> year;
    std::optional<std::string> language;
    std::optional<ClassCode> lc_class;
    Format format = Format::unknown;
    /// Externally supplied citation count.
    std::optional<std::uint64_t> citations;

    bool operator==(const BookRecord &) const = default;
};

struct LibraryOrg {
    std::string library_id;
    std::string name;
    std::string country;
    LibraryKind kind = LibraryKind::other;
    std::set<std::string> memberships;

    bool operator==(const LibraryOrg &) const = default;
};

/// One inclusion of a record in a library catalog, regardless of physical copies.
struct Holding {
    std::string record_id;
    std::string library_id;
    Channel channel = Channel::unspecified;

    bool operator==(const Holding &) const = default;
};

/// A population restriction. An absent or empty clause means "no restriction"; clauses compose
/// conjunctively.
struct LibraryFilter {
    std::optional<std::set<std::string>> countries;
    std::optional<std::set<LibraryKind>> kinds;
    std::optional<std::set<std::string>> required_memberships;
    std::optional<std::set<Channel>> excluded_channels;

    bool admits(const LibraryOrg &library) const;
    bool admits(Channel channel) const;
    bool is_unrestricted() const;

    bool operator==(const LibraryFilter &) const = default;
};

struct AggregateUnit {
    std::string unit_id;
    std::string label;
    std::set<std::string> member_record_ids;
};

using Timestamp = std::chrono::system_clock::time_point;

/// Immutable dataset of records, libraries and holdings. Copies share the underlying storage.
class CatalogSnapshot {
public:
    /// The empty snapshot.
    CatalogSnapshot();

    std::span<const BookRecord> records() const noexcept;
    std::span<const LibraryOrg> libraries() const noexcept;
    std::span<const Holding> holdings() const noexcept;
    Timestamp taken_at() const noexcept;

    std::optional<std::size_t> record_index(std::string_view record_id) const;
    std::optional<std::size_t> library_index(std::string_view library_id) const;
    const BookRecord *find_record(std::string_view record_id) const;
    const LibraryOrg *find_library(std::string_view library_id) const;

    /// Indices into libraries() of every library holding the record at `record_index`.
    std::span<const std::size_t> holders_of(std::size_t record_index) const;
    /// Indices into holdings() belonging to the record at `record_index`.
    std::span<const std::size_t> holdings_of(std::size_t record_index) const;

    /// Equality of records, libraries and holdings; the timestamp is ignored.
    bool structurally_equal(const CatalogSnapshot &other) const;

private:
    struct Data;
    explicit CatalogSnapshot(std::shared_ptr<const Data> data);
    friend CatalogSnapshot build_snapshot(std::vector<BookRecord>, std::vector<LibraryOrg>,
                                          std::vector<Holding>, std::optional<Timestamp>);

    std::shared_ptr<const Data> data_;
};

/// Validates referential integrity and collapses duplicate (record, library) holdings, keeping the
/// first occurrence. Throws IntegrityError naming the offending id.
CatalogSnapshot build_snapshot(std::vector<BookRecord> records, std::vector<LibraryOrg> libraries,
                               std::vector<Holding> holdings,
                               std::optional<Timestamp> taken_at = std::nullopt);

/// Keeps libraries admitted by `filter` and the holdings that reference them with an admitted
/// channel. Records are unchanged.
CatalogSnapshot apply_filter(const CatalogSnapshot &snapshot, const LibraryFilter &filter);

/// Entities to upsert into a snapshot.
struct SnapshotDelta {
    std::vector<BookRecord> records;
    std::vector<LibraryOrg> libraries;
    std::vector<Holding> holdings;
};

/// Records and libraries in `delta` replace same-id entries of `base`; holdings are unioned.
CatalogSnapshot merge_snapshot(const CatalogSnapshot &base, const SnapshotDelta &delta);

} // namespace lca
