/** \file  fixtures.hpp
 *  \brief Generated datasets: the published author and title figures, the case-study scale, library
 *         composition and coverage tables, and random snapshots for property tests.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lca/model.hpp"

namespace lca::test {

BookRecord make_record(std::string id, std::string title, std::string author = {}, std::string lc_class = {});
LibraryOrg make_library(std::string id, std::string country = "US", LibraryKind kind = LibraryKind::academic,
                        std::set<std::string> memberships = {});
std::string library_id(std::size_t index);

/// Splits `total` into `parts` near-equal non-negative integers, larger ones first.
std::vector<std::uint64_t> split_evenly(std::uint64_t total, std::size_t parts);

struct WorkSpec {
    std::string title;
    std::uint64_t libcitations = 0;
    std::size_t editions = 1;
    Role role = Role::author;
};

struct AuthorSpec {
    std::string heading;
    std::vector<WorkSpec> works;
};

/// Every edition carries its own ISBN and OCLC number and spells the work title slightly
/// differently (trailing period, capitals); editions alternate print and ebook. The editions of a
/// work hold overlapping runs of libraries whose union has exactly `libcitations` members.
CatalogSnapshot author_fixture(const std::vector<AuthorSpec> &authors, std::size_t library_pool);

struct AuthorRow {
    std::string heading;
    std::size_t works;
    std::size_t publications;
    std::uint64_t holdings;
};

/// The 22 informetrics researchers with works, publications and library holdings as published.
const std::vector<AuthorRow> &informetrics_author_rows();
CatalogSnapshot informetrics_authors_fixture();

struct TitleRow {
    std::string title;
    std::uint64_t libraries;
};

/// Moed's three titles with their published library counts.
const std::vector<TitleRow> &moed_titles();
/// One author, 45 works in 165 editions, 2385 distinct (work, library) inclusions; the three
/// titles above keep their published counts.
CatalogSnapshot moed_fixture();
inline constexpr const char *kMoedHeading = "Moed, H. F.";

/// `titles` records over `libraries` libraries with `inclusions` holdings in total.
CatalogSnapshot diffusion_fixture(std::size_t titles, std::uint64_t inclusions, std::size_t libraries);

/// 5804 academic libraries of which 2505 in the US, plus public and other libraries.
CatalogSnapshot composition_fixture();

/// 10 000 records, 9781 of them held by at least one library.
CatalogSnapshot coverage_fixture();

/// Class c is "K<c>"; its i-th record "k<c>-b<i>" is held by the first counts[c][i] libraries.
CatalogSnapshot classes_fixture(const std::vector<std::vector<std::uint64_t>> &classes);
std::string class_member_id(std::size_t class_index, std::size_t member);

struct RandomSnapshotOptions {
    std::size_t max_records = 50;
    std::size_t max_libraries = 12;
    /// Give every record a distinct OCLC number and ISBN so lookups never collide.
    bool unique_identifiers = false;
    /// Probability that a record carries an LC class.
    double classified = 0.8;
};

CatalogSnapshot random_snapshot(std::mt19937_64 &rng, const RandomSnapshotOptions &options = {});

} // namespace lca::test
