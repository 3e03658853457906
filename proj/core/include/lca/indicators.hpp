/** \file  indicators.hpp
 *  \brief Holdings-based indicators (libcitations, CI, CIR, RCIR, DR, CNLS, rank in class), author
 *         profiles, and the library-composition and coverage reports.
 *
 *  Every indicator is a function of a snapshot and a LibraryFilter. IndicatorContext applies the
 *  filter once and caches per-record counts; the free functions build a context per call.
 */
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lca/identifiers.hpp"
#include "lca/model.hpp"

namespace lca {

struct ClassRank {
    std::size_t rank = 0;
    std::size_t class_size = 0;
    bool operator==(const ClassRank &) const = default;
};

struct BookIndicators {
    std::string record_id;
    std::uint64_t libcitations = 0;
    std::optional<double> cnls;
    std::optional<ClassRank> rank_in_class;
};

struct IndicatorReport {
    std::string unit_id;
    std::string label;
    std::size_t n_titles = 0;
    std::uint64_t ci = 0;
    double cir = 0.0;
    std::optional<double> rcir;
    /// Absent when the filtered population has no libraries.
    std::optional<double> dr;
    std::vector<BookIndicators> per_book;
};

struct AuthorProfile {
    std::string heading;
    std::size_t works = 0;
    std::size_t publications = 0;
    std::uint64_t library_holdings = 0;
};

class IndicatorContext {
public:
    explicit IndicatorContext(const CatalogSnapshot &snapshot, const LibraryFilter &filter = {});
    ~IndicatorContext();
    IndicatorContext(IndicatorContext &&) noexcept;
    IndicatorContext &operator=(IndicatorContext &&) noexcept;

    /// The filtered snapshot every indicator is computed on.
    const CatalogSnapshot &snapshot() const noexcept { return filtered_; }

    /// Distinct libraries holding the record. Throws LookupError for unknown ids.
    std::uint64_t libcitations(std::string_view record_id) const;
    /// Distinct libraries holding any member edition.
    std::uint64_t libcitations(const WorkCluster &cluster) const;
    std::uint64_t libcitations_at(std::size_t record_index) const { return counts_.at(record_index); }

    std::uint64_t catalog_inclusions(const AggregateUnit &unit) const;
    /// CI per distinct title. Throws UndefinedRateError for an empty unit.
    double cir(const AggregateUnit &unit) const;
    /// CIR(unit) / CIR(benchmark). Throws UndefinedRateError when the benchmark CIR is 0.
    double rcir(const AggregateUnit &unit, const AggregateUnit &benchmark) const;
    /// CI / (titles x libraries). Throws UndefinedRateError with no titles or no libraries.
    double diffusion_rate(const AggregateUnit &unit) const;

    /// Libcitations over the mean libcitations of the record's class (the record included).
    /// Throws NoClassError or UndefinedRateError.
    double cnls(std::string_view record_id) const;
    /// Competition rank by descending libcitations among same-class records.
    ClassRank rank_in_class(std::string_view record_id) const;

    /// Throws NotFoundError when no contributor heading matches.
    AuthorProfile author_profile(std::string_view heading) const;
    /// One profile per distinct normalized contributor heading, by descending holdings then heading.
    std::vector<AuthorProfile> author_ranking() const;

    BookIndicators book_indicators(std::size_t record_index) const;
    IndicatorReport report(const AggregateUnit &unit, const AggregateUnit *benchmark = nullptr) const;

    const std::vector<WorkCluster> &clusters() const;

private:
    struct ClassStats;
    struct Lazy;
    std::size_t require_record(std::string_view record_id) const;
    const ClassStats &require_class(std::size_t record_index) const;
    void require_members(const AggregateUnit &unit) const;

    CatalogSnapshot filtered_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::ptrdiff_t> class_of_; // -1 when unclassified
    std::vector<ClassStats> classes_;
    std::unique_ptr<Lazy> lazy_;
};

std::uint64_t libcitations(std::string_view record_id, const CatalogSnapshot &snapshot, const LibraryFilter &filter = {});
std::uint64_t libcitations(const WorkCluster &cluster, const CatalogSnapshot &snapshot, const LibraryFilter &filter = {});
std::uint64_t catalog_inclusions(const AggregateUnit &unit, const CatalogSnapshot &snapshot, const LibraryFilter &filter = {});
double cir(const AggregateUnit &unit, const CatalogSnapshot &snapshot, const LibraryFilter &filter = {});
double rcir(const AggregateUnit &unit, const AggregateUnit &benchmark, const CatalogSnapshot &snapshot,
            const LibraryFilter &filter = {});
double diffusion_rate(const AggregateUnit &unit, const CatalogSnapshot &snapshot, const LibraryFilter &filter = {});
double cnls(std::string_view record_id, const CatalogSnapshot &snapshot, const LibraryFilter &filter = {});
ClassRank rank_in_class(std::string_view record_id, const CatalogSnapshot &snapshot, const LibraryFilter &filter = {});
AuthorProfile author_profile(std::string_view heading, const CatalogSnapshot &snapshot, const LibraryFilter &filter = {});

/// Unit containing every record of the snapshot.
AggregateUnit whole_database_unit(const CatalogSnapshot &snapshot);

enum CompositionColumn : std::size_t { kAcademic = 0, kPublic = 1, kOther = 2, kTotal = 3 };

struct CompositionRow {
    std::string country;
    std::array<std::uint64_t, 4> counts{};
};

/// Libraries per country and kind. Shares are count / column total over all countries.
struct CompositionReport {
    std::vector<CompositionRow> rows; // by descending total, then country
    std::array<std::uint64_t, 4> column_totals{};

    /// Percentage rendered with two decimals, rounded half-up; "" when the column is empty.
    std::string share(const CompositionRow &row, CompositionColumn column) const;
};

CompositionReport composition_report(const CatalogSnapshot &snapshot);

struct NamedMetric {
    std::string name;
    std::function<std::optional<double>(const BookRecord &record, std::size_t record_index)> extract;
};

struct CoverageRow {
    std::string metric;
    std::uint64_t nonzero = 0;
    std::uint64_t total = 0;
    /// Two decimals, rounded half-up.
    std::string percentage() const;
};

/// Share of records whose metric value is defined and > 0. Throws UndefinedRateError without records.
std::vector<CoverageRow> coverage_report(const CatalogSnapshot &snapshot, std::span<const NamedMetric> metrics);

/// Libcitations bound to `context`; the context must outlive the metric.
NamedMetric libcitations_metric(const IndicatorContext &context);
NamedMetric citations_metric();

} // namespace lca
