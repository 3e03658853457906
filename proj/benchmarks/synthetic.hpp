/** \file  synthetic.hpp
 *  \brief Deterministic catalogs for the benchmarks.
 */
#pragma once

#include <random>
#include <string>
#include <vector>

#include "lca/model.hpp"

namespace lca::bench {

/// `titles` records spread over 20 classes and 200 authors, each held by a random subset of
/// `libraries` libraries.
inline CatalogSnapshot synthetic_catalog(std::size_t titles, std::size_t libraries, unsigned seed = 7) {
    std::mt19937_64 rng(seed);
    std::vector<BookRecord> records;
    std::vector<LibraryOrg> orgs;
    std::vector<Holding> holdings;
    for (std::size_t l = 0; l < libraries; ++l) {
        LibraryOrg org;
        org.library_id = "lib" + std::to_string(l);
        org.country = l % 3 == 0 ? "US" : "GB";
        org.kind = l % 5 == 0 ? LibraryKind::public_library : LibraryKind::academic;
        orgs.push_back(std::move(org));
    }
    std::uniform_int_distribution<std::size_t> held(0, libraries);
    for (std::size_t t = 0; t < titles; ++t) {
        BookRecord record;
        record.record_id = "r" + std::to_string(t);
        record.title = "Title " + std::to_string(t % (titles / 2 + 1));
        record.contributors.push_back({"Author " + std::to_string(t % 200), Role::author});
        record.lc_class = ClassCode("Z" + std::to_string(t % 20));
        const auto count = held(rng);
        for (std::size_t l = 0; l < count; ++l)
            holdings.push_back({record.record_id, orgs[(t + l) % libraries].library_id, Channel::unspecified});
        records.push_back(std::move(record));
    }
    return build_snapshot(std::move(records), std::move(orgs), std::move(holdings));
}

} // namespace lca::bench
