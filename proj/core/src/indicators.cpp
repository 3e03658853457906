/** \file  indicators.cpp
 *  \brief Indicator computations over a filtered snapshot.
 */
#include "lca/indicators.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "lca/errors.hpp"
#include "lca/rounding.hpp"

namespace lca {

struct IndicatorContext::ClassStats {
    std::string code;
    std::uint64_t sum = 0;
    std::size_t size = 0;
    std::vector<std::uint64_t> descending;
};

struct IndicatorContext::Lazy {
    std::once_flag clusters_once;
    std::vector<WorkCluster> clusters;
    std::vector<std::size_t> cluster_of_record;

    std::once_flag authors_once;
    // normalized heading -> (display heading, record indices)
    std::map<std::string, std::pair<std::string, std::vector<std::size_t>>> authors;
};

IndicatorContext::IndicatorContext(const CatalogSnapshot &snapshot, const LibraryFilter &filter)
    : filtered_(apply_filter(snapshot, filter)), lazy_(std::make_unique<Lazy>()) {
    const auto records = filtered_.records();
    counts_.resize(records.size());
    class_of_.assign(records.size(), -1);
    std::map<std::string, std::size_t> class_index;
    for (std::size_t i = 0; i < records.size(); ++i) {
        counts_[i] = filtered_.holders_of(i).size();
        if (!records[i].lc_class)
            continue;
        const auto [slot, inserted] = class_index.try_emplace(records[i].lc_class->value(), classes_.size());
        if (inserted)
            classes_.push_back({records[i].lc_class->value(), 0, 0, {}});
        auto &stats = classes_[slot->second];
        stats.sum += counts_[i];
        ++stats.size;
        stats.descending.push_back(counts_[i]);
        class_of_[i] = static_cast<std::ptrdiff_t>(slot->second);
    }
    for (auto &stats : classes_)
        std::sort(stats.descending.begin(), stats.descending.end(), std::greater<>());
}

IndicatorContext::~IndicatorContext() = default;
IndicatorContext::IndicatorContext(IndicatorContext &&) noexcept = default;
IndicatorContext &IndicatorContext::operator=(IndicatorContext &&) noexcept = default;

std::size_t IndicatorContext::require_record(std::string_view record_id) const {
    const auto index = filtered_.record_index(record_id);
    if (!index)
        throw LookupError("unknown record " + std::string(record_id));
    return *index;
}

const IndicatorContext::ClassStats &IndicatorContext::require_class(std::size_t record_index) const {
    if (class_of_[record_index] < 0)
        throw NoClassError("record " + filtered_.records()[record_index].record_id + " has no classification");
    return classes_[static_cast<std::size_t>(class_of_[record_index])];
}

void IndicatorContext::require_members(const AggregateUnit &unit) const {
    for (const auto &member : unit.member_record_ids)
        if (!filtered_.record_index(member))
            throw LookupError("unit " + unit.unit_id + " references unknown record " + member);
}

std::uint64_t IndicatorContext::libcitations(std::string_view record_id) const {
    return counts_[require_record(record_id)];
}

std::uint64_t IndicatorContext::libcitations(const WorkCluster &cluster) const {
    std::set<std::size_t> holders;
    for (const auto &member : cluster.member_record_ids)
        for (const auto library : filtered_.holders_of(require_record(member)))
            holders.insert(library);
    return holders.size();
}

std::uint64_t IndicatorContext::catalog_inclusions(const AggregateUnit &unit) const {
    std::uint64_t total = 0;
    for (const auto &member : unit.member_record_ids)
        total += counts_[require_record(member)];
    return total;
}

double IndicatorContext::cir(const AggregateUnit &unit) const {
    if (unit.member_record_ids.empty())
        throw UndefinedRateError("unit " + unit.unit_id + " has no titles");
    return static_cast<double>(catalog_inclusions(unit)) / static_cast<double>(unit.member_record_ids.size());
}

double IndicatorContext::rcir(const AggregateUnit &unit, const AggregateUnit &benchmark) const {
    const double benchmark_rate = cir(benchmark);
    if (benchmark_rate <= 0.0)
        throw UndefinedRateError("benchmark " + benchmark.unit_id + " has a zero inclusion rate");
    return cir(unit) / benchmark_rate;
}

double IndicatorContext::diffusion_rate(const AggregateUnit &unit) const {
    if (unit.member_record_ids.empty())
        throw UndefinedRateError("unit " + unit.unit_id + " has no titles");
    if (filtered_.libraries().empty())
        throw UndefinedRateError("no libraries in the analysed population");
    const double possible = static_cast<double>(unit.member_record_ids.size()) * static_cast<double>(filtered_.libraries().size());
    return static_cast<double>(catalog_inclusions(unit)) / possible;
}

double IndicatorContext::cnls(std::string_view record_id) const {
    const auto index = require_record(record_id);
    const auto &stats = require_class(index);
    if (stats.sum == 0)
        throw UndefinedRateError("class " + stats.code + " has zero mean libcitations");
    // count / (sum / size), arranged to keep integers exact as long as possible
    return static_cast<double>(counts_[index]) * static_cast<double>(stats.size) / static_cast<double>(stats.sum);
}

ClassRank IndicatorContext::rank_in_class(std::string_view record_id) const {
    const auto index = require_record(record_id);
    const auto &stats = require_class(index);
    const auto above = std::lower_bound(stats.descending.begin(), stats.descending.end(), counts_[index], std::greater<>());
    return {static_cast<std::size_t>(above - stats.descending.begin()) + 1, stats.size};
}

const std::vector<WorkCluster> &IndicatorContext::clusters() const {
    std::call_once(lazy_->clusters_once, [this] {
        lazy_->clusters = cluster_works(filtered_);
        lazy_->cluster_of_record.assign(filtered_.records().size(), 0);
        for (std::size_t c = 0; c < lazy_->clusters.size(); ++c)
            for (const auto &member : lazy_->clusters[c].member_record_ids)
                lazy_->cluster_of_record[*filtered_.record_index(member)] = c;
    });
    return lazy_->clusters;
}

AuthorProfile IndicatorContext::author_profile(std::string_view heading) const {
    std::call_once(lazy_->authors_once, [this] {
        const auto records = filtered_.records();
        for (std::size_t i = 0; i < records.size(); ++i)
            for (const auto &contributor : records[i].contributors) {
                const auto normalized = normalize_heading(contributor.name);
                if (normalized.empty())
                    continue;
                auto &entry = lazy_->authors.try_emplace(normalized, contributor.name, std::vector<std::size_t>{}).first->second;
                if (entry.second.empty() || entry.second.back() != i)
                    entry.second.push_back(i);
            }
    });
    const auto match = lazy_->authors.find(normalize_heading(heading));
    if (match == lazy_->authors.end())
        throw NotFoundError("no records with contributor " + std::string(heading));

    const auto &work_clusters = clusters();
    std::set<std::size_t> cluster_ids;
    for (const auto record : match->second.second)
        cluster_ids.insert(lazy_->cluster_of_record[record]);
    AuthorProfile profile{match->second.first, cluster_ids.size(), match->second.second.size(), 0};
    for (const auto cluster : cluster_ids)
        profile.library_holdings += libcitations(work_clusters[cluster]);
    return profile;
}

std::vector<AuthorProfile> IndicatorContext::author_ranking() const {
    std::set<std::string> headings;
    for (const auto &record : filtered_.records())
        for (const auto &contributor : record.contributors)
            if (!normalize_heading(contributor.name).empty())
                headings.insert(normalize_heading(contributor.name));
    std::vector<AuthorProfile> profiles;
    profiles.reserve(headings.size());
    for (const auto &heading : headings)
        profiles.push_back(author_profile(heading));
    std::sort(profiles.begin(), profiles.end(), [](const AuthorProfile &a, const AuthorProfile &b) {
        if (a.library_holdings != b.library_holdings)
            return a.library_holdings > b.library_holdings;
        return a.heading < b.heading;
    });
    return profiles;
}

BookIndicators IndicatorContext::book_indicators(std::size_t record_index) const {
    const auto &record = filtered_.records()[record_index];
    BookIndicators book{record.record_id, counts_.at(record_index), std::nullopt, std::nullopt};
    if (class_of_[record_index] >= 0) {
        book.rank_in_class = rank_in_class(record.record_id);
        if (classes_[static_cast<std::size_t>(class_of_[record_index])].sum > 0)
            book.cnls = cnls(record.record_id);
    }
    return book;
}

IndicatorReport IndicatorContext::report(const AggregateUnit &unit, const AggregateUnit *benchmark) const {
    require_members(unit);
    IndicatorReport report;
    report.unit_id = unit.unit_id;
    report.label = unit.label;
    report.n_titles = unit.member_record_ids.size();
    report.ci = catalog_inclusions(unit);
    report.cir = cir(unit);
    if (benchmark != nullptr) {
        require_members(*benchmark);
        report.rcir = rcir(unit, *benchmark);
    }
    if (!filtered_.libraries().empty())
        report.dr = diffusion_rate(unit);
    for (const auto &member : unit.member_record_ids)
        report.per_book.push_back(book_indicators(require_record(member)));
    return report;
}

std::uint64_t libcitations(std::string_view record_id, const CatalogSnapshot &snapshot, const LibraryFilter &filter) {
    return IndicatorContext(snapshot, filter).libcitations(record_id);
}

std::uint64_t libcitations(const WorkCluster &cluster, const CatalogSnapshot &snapshot, const LibraryFilter &filter) {
    return IndicatorContext(snapshot, filter).libcitations(cluster);
}

std::uint64_t catalog_inclusions(const AggregateUnit &unit, const CatalogSnapshot &snapshot, const LibraryFilter &filter) {
    return IndicatorContext(snapshot, filter).catalog_inclusions(unit);
}

double cir(const AggregateUnit &unit, const CatalogSnapshot &snapshot, const LibraryFilter &filter) {
    return IndicatorContext(snapshot, filter).cir(unit);
}

double rcir(const AggregateUnit &unit, const AggregateUnit &benchmark, const CatalogSnapshot &snapshot,
            const LibraryFilter &filter) {
    return IndicatorContext(snapshot, filter).rcir(unit, benchmark);
}

double diffusion_rate(const AggregateUnit &unit, const CatalogSnapshot &snapshot, const LibraryFilter &filter) {
    return IndicatorContext(snapshot, filter).diffusion_rate(unit);
}

double cnls(std::string_view record_id, const CatalogSnapshot &snapshot, const LibraryFilter &filter) {
    return IndicatorContext(snapshot, filter).cnls(record_id);
}

ClassRank rank_in_class(std::string_view record_id, const CatalogSnapshot &snapshot, const LibraryFilter &filter) {
    return IndicatorContext(snapshot, filter).rank_in_class(record_id);
}

AuthorProfile author_profile(std::string_view heading, const CatalogSnapshot &snapshot, const LibraryFilter &filter) {
    return IndicatorContext(snapshot, filter).author_profile(heading);
}

AggregateUnit whole_database_unit(const CatalogSnapshot &snapshot) {
    AggregateUnit unit{"all", "All records", {}};
    for (const auto &record : snapshot.records())
        unit.member_record_ids.insert(record.record_id);
    return unit;
}

std::string CompositionReport::share(const CompositionRow &row, CompositionColumn column) const {
    if (column_totals[column] == 0)
        return {};
    return format_percent(row.counts[column], column_totals[column]);
}

CompositionReport composition_report(const CatalogSnapshot &snapshot) {
    std::map<std::string, CompositionRow> by_country;
    CompositionReport report;
    for (const auto &library : snapshot.libraries()) {
        auto &row = by_country[library.country];
        row.country = library.country;
        const auto column = library.kind == LibraryKind::academic         ? kAcademic
                            : library.kind == LibraryKind::public_library ? kPublic
                                                                          : kOther;
        ++row.counts[column];
        ++row.counts[kTotal];
        ++report.column_totals[column];
        ++report.column_totals[kTotal];
    }
    for (auto &[country, row] : by_country)
        report.rows.push_back(std::move(row));
    std::stable_sort(report.rows.begin(), report.rows.end(), [](const CompositionRow &a, const CompositionRow &b) {
        return a.counts[kTotal] > b.counts[kTotal];
    });
    return report;
}

std::string CoverageRow::percentage() const { return format_percent(nonzero, total); }

std::vector<CoverageRow> coverage_report(const CatalogSnapshot &snapshot, std::span<const NamedMetric> metrics) {
    const auto records = snapshot.records();
    if (records.empty())
        throw UndefinedRateError("coverage of an empty record set");
    std::vector<CoverageRow> rows;
    for (const auto &metric : metrics) {
        CoverageRow row{metric.name, 0, records.size()};
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto value = metric.extract(records[i], i);
            if (value && *value > 0.0)
                ++row.nonzero;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

NamedMetric libcitations_metric(const IndicatorContext &context) {
    return {"libcitations", [&context](const BookRecord &record, std::size_t) -> std::optional<double> {
                return static_cast<double>(context.libcitations(record.record_id));
            }};
}

NamedMetric citations_metric() {
    return {"citations", [](const BookRecord &record, std::size_t) -> std::optional<double> {
                if (!record.citations)
                    return std::nullopt;
                return static_cast<double>(*record.citations);
            }};
}

} // namespace lca
