/** \file  model.cpp
 *  \brief Snapshot construction, filtering and merging.
 */
#include "lca/model.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "lca/errors.hpp"

namespace lca {

namespace {

constexpr std::array<std::pair<Role, std::string_view>, 4> kRoleNames{{
    {Role::author, "author"}, {Role::editor, "editor"}, {Role::other, "other"}, {Role::creator, "creator"}}};
constexpr std::array<std::pair<Format, std::string_view>, 3> kFormatNames{{
    {Format::print, "print"}, {Format::ebook, "ebook"}, {Format::unknown, "unknown"}}};
constexpr std::array<std::pair<LibraryKind, std::string_view>, 3> kKindNames{{
    {LibraryKind::academic, "academic"}, {LibraryKind::public_library, "public"}, {LibraryKind::other, "other"}}};
constexpr std::array<std::pair<Channel, std::string_view>, 6> kChannelNames{{
    {Channel::librarian_order, "librarian_order"},
    {Channel::approval_plan, "approval_plan"},
    {Channel::pda, "pda"},
    {Channel::donation, "donation"},
    {Channel::package, "package"},
    {Channel::unspecified, "unspecified"}}};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N> &table, Enum value) {
    for (const auto &[candidate, name] : table)
        if (candidate == value)
            return name;
    return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum> value_of(const std::array<std::pair<Enum, std::string_view>, N> &table, std::string_view text) {
    for (const auto &[candidate, name] : table)
        if (name == text)
            return candidate;
    return std::nullopt;
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view kSpace = " \t\r\n\f\v";
    const auto first = text.find_first_not_of(kSpace);
    if (first == std::string_view::npos)
        return {};
    const auto last = text.find_last_not_of(kSpace);
    return text.substr(first, last - first + 1);
}

} // unnamed namespace

OclcNumber::OclcNumber(std::uint64_t value) : value_(value) {
    if (value == 0)
        throw InvalidValueError("OCLC number must be positive");
}

ClassCode::ClassCode(std::string_view value) : value_(trim(value)) {
    if (value_.empty())
        throw InvalidValueError("class code must not be empty");
}

std::string_view to_string(Role role) { return name_of(kRoleNames, role); }
std::string_view to_string(Format format) { return name_of(kFormatNames, format); }
std::string_view to_string(LibraryKind kind) { return name_of(kKindNames, kind); }
std::string_view to_string(Channel channel) { return name_of(kChannelNames, channel); }

std::optional<Role> parse_role(std::string_view text) { return value_of(kRoleNames, text); }
std::optional<Format> parse_format(std::string_view text) { return value_of(kFormatNames, text); }
std::optional<LibraryKind> parse_library_kind(std::string_view text) { return value_of(kKindNames, text); }
std::optional<Channel> parse_channel(std::string_view text) { return value_of(kChannelNames, text); }

bool LibraryFilter::admits(const LibraryOrg &library) const {
    if (countries && !countries->empty() && !countries->contains(library.country))
        return false;
    if (kinds && !kinds->empty() && !kinds->contains(library.kind))
        return false;
    if (required_memberships)
        for (const auto &tag : *required_memberships)
            if (!library.memberships.contains(tag))
                return false;
    return true;
}

bool LibraryFilter::admits(Channel channel) const {
    return !excluded_channels || !excluded_channels->contains(channel);
}

bool LibraryFilter::is_unrestricted() const {
    const auto empty = [](const auto &clause) { return !clause || clause->empty(); };
    return empty(countries) && empty(kinds) && empty(required_memberships) && empty(excluded_channels);
}

struct CatalogSnapshot::Data {
    std::vector<BookRecord> records;
    std::vector<LibraryOrg> libraries;
    std::vector<Holding> holdings;
    Timestamp taken_at{};

    std::map<std::string, std::size_t, std::less<>> record_by_id;
    std::map<std::string, std::size_t, std::less<>> library_by_id;

    // CSR layout: per record, the holdings and the holding libraries.
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> holding_indices;
    std::vector<std::size_t> holder_indices;
};

CatalogSnapshot::CatalogSnapshot() : CatalogSnapshot(build_snapshot({}, {}, {})) {}

CatalogSnapshot::CatalogSnapshot(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

std::span<const BookRecord> CatalogSnapshot::records() const noexcept { return data_->records; }
std::span<const LibraryOrg> CatalogSnapshot::libraries() const noexcept { return data_->libraries; }
std::span<const Holding> CatalogSnapshot::holdings() const noexcept { return data_->holdings; }
Timestamp CatalogSnapshot::taken_at() const noexcept { return data_->taken_at; }

std::optional<std::size_t> CatalogSnapshot::record_index(std::string_view record_id) const {
    const auto match = data_->record_by_id.find(record_id);
    if (match == data_->record_by_id.end())
        return std::nullopt;
    return match->second;
}

std::optional<std::size_t> CatalogSnapshot::library_index(std::string_view library_id) const {
    const auto match = data_->library_by_id.find(library_id);
    if (match == data_->library_by_id.end())
        return std::nullopt;
    return match->second;
}

const BookRecord *CatalogSnapshot::find_record(std::string_view record_id) const {
    const auto index = record_index(record_id);
    return index ? &data_->records[*index] : nullptr;
}

const LibraryOrg *CatalogSnapshot::find_library(std::string_view library_id) const {
    const auto index = library_index(library_id);
    return index ? &data_->libraries[*index] : nullptr;
}

std::span<const std::size_t> CatalogSnapshot::holders_of(std::size_t record_index) const {
    const auto begin = data_->offsets.at(record_index);
    const auto end = data_->offsets.at(record_index + 1);
    return std::span<const std::size_t>(data_->holder_indices).subspan(begin, end - begin);
}

std::span<const std::size_t> CatalogSnapshot::holdings_of(std::size_t record_index) const {
    const auto begin = data_->offsets.at(record_index);
    const auto end = data_->offsets.at(record_index + 1);
    return std::span<const std::size_t>(data_->holding_indices).subspan(begin, end - begin);
}

bool CatalogSnapshot::structurally_equal(const CatalogSnapshot &other) const {
    return data_->records == other.data_->records && data_->libraries == other.data_->libraries
           && data_->holdings == other.data_->holdings;
}

CatalogSnapshot build_snapshot(std::vector<BookRecord> records, std::vector<LibraryOrg> libraries,
                               std::vector<Holding> holdings, std::optional<Timestamp> taken_at) {
    auto data = std::make_shared<CatalogSnapshot::Data>();
    data->taken_at = taken_at.value_or(std::chrono::system_clock::now());

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &record = records[i];
        if (record.record_id.empty())
            throw IntegrityError("", "record with empty id");
        if (!data->record_by_id.emplace(record.record_id, i).second)
            throw IntegrityError(record.record_id, "duplicate record id: " + record.record_id);
        for (std::size_t a = 0; a < record.isbns.size(); ++a)
            for (std::size_t b = a + 1; b < record.isbns.size(); ++b)
                if (record.isbns[a].digits() == record.isbns[b].digits())
                    throw IntegrityError(record.record_id, "record " + record.record_id + " lists ISBN "
                                                               + record.isbns[a].digits() + " twice");
    }
    for (std::size_t i = 0; i < libraries.size(); ++i) {
        const auto &library = libraries[i];
        if (library.library_id.empty())
            throw IntegrityError("", "library with empty id");
        if (!data->library_by_id.emplace(library.library_id, i).second)
            throw IntegrityError(library.library_id, "duplicate library id: " + library.library_id);
    }

    struct Resolved {
        std::size_t record;
        std::size_t library;
        std::size_t holding;
    };
    std::vector<Resolved> resolved;
    resolved.reserve(holdings.size());
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<Holding> kept;
    kept.reserve(holdings.size());
    for (auto &holding : holdings) {
        const auto record = data->record_by_id.find(holding.record_id);
        if (record == data->record_by_id.end())
            throw IntegrityError(holding.record_id, "holding references unknown record " + holding.record_id);
        const auto library = data->library_by_id.find(holding.library_id);
        if (library == data->library_by_id.end())
            throw IntegrityError(holding.library_id, "holding references unknown library " + holding.library_id);
        if (!seen.emplace(record->second, library->second).second)
            continue;
        resolved.push_back({record->second, library->second, kept.size()});
        kept.push_back(std::move(holding));
    }

    data->offsets.assign(records.size() + 1, 0);
    for (const auto &entry : resolved)
        ++data->offsets[entry.record + 1];
    for (std::size_t i = 1; i < data->offsets.size(); ++i)
        data->offsets[i] += data->offsets[i - 1];
    data->holding_indices.resize(resolved.size());
    data->holder_indices.resize(resolved.size());
    auto cursor = data->offsets;
    for (const auto &entry : resolved) {
        const auto slot = cursor[entry.record]++;
        data->holding_indices[slot] = entry.holding;
        data->holder_indices[slot] = entry.library;
    }

    data->records = std::move(records);
    data->libraries = std::move(libraries);
    data->holdings = std::move(kept);
    return CatalogSnapshot(std::move(data));
}

CatalogSnapshot apply_filter(const CatalogSnapshot &snapshot, const LibraryFilter &filter) {
    if (filter.is_unrestricted())
        return snapshot;

    std::vector<LibraryOrg> libraries;
    std::set<std::string_view> admitted;
    for (const auto &library : snapshot.libraries())
        if (filter.admits(library)) {
            libraries.push_back(library);
            admitted.insert(library.library_id);
        }
    std::vector<Holding> holdings;
    for (const auto &holding : snapshot.holdings())
        if (filter.admits(holding.channel) && admitted.contains(holding.library_id))
            holdings.push_back(holding);

    const auto records = snapshot.records();
    return build_snapshot({records.begin(), records.end()}, std::move(libraries), std::move(holdings),
                          snapshot.taken_at());
}

CatalogSnapshot merge_snapshot(const CatalogSnapshot &base, const SnapshotDelta &delta) {
    std::vector<BookRecord> records(base.records().begin(), base.records().end());
    std::map<std::string, std::size_t> record_slot;
    for (std::size_t i = 0; i < records.size(); ++i)
        record_slot.emplace(records[i].record_id, i);
    for (const auto &record : delta.records) {
        const auto slot = record_slot.find(record.record_id);
        if (slot != record_slot.end()) {
            records[slot->second] = record;
        } else {
            records.push_back(record);
            record_slot.emplace(records.back().record_id, records.size() - 1);
        }
    }

    std::vector<LibraryOrg> libraries(base.libraries().begin(), base.libraries().end());
    std::map<std::string, std::size_t> library_slot;
    for (std::size_t i = 0; i < libraries.size(); ++i)
        library_slot.emplace(libraries[i].library_id, i);
    for (const auto &library : delta.libraries) {
        const auto slot = library_slot.find(library.library_id);
        if (slot != library_slot.end()) {
            libraries[slot->second] = library;
        } else {
            libraries.push_back(library);
            library_slot.emplace(libraries.back().library_id, libraries.size() - 1);
        }
    }

    std::vector<Holding> holdings(base.holdings().begin(), base.holdings().end());
    holdings.insert(holdings.end(), delta.holdings.begin(), delta.holdings.end());
    return build_snapshot(std::move(records), std::move(libraries), std::move(holdings));
}

} // namespace lca
