#include "fixtures.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>

#include "lca/identifiers.hpp"
#include "oracles.hpp"

namespace lca::test {

BookRecord make_record(std::string id, std::string title, std::string author, std::string lc_class) {
    BookRecord record;
    record.record_id = std::move(id);
    record.title = std::move(title);
    if (!author.empty())
        record.contributors.push_back({std::move(author), Role::author});
    if (!lc_class.empty())
        record.lc_class = ClassCode(lc_class);
    return record;
}

LibraryOrg make_library(std::string id, std::string country, LibraryKind kind, std::set<std::string> memberships) {
    LibraryOrg library;
    library.name = "Library " + id;
    library.library_id = std::move(id);
    library.country = std::move(country);
    library.kind = kind;
    library.memberships = std::move(memberships);
    return library;
}

std::string library_id(std::size_t index) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "lib%06zu", index);
    return buffer;
}

std::vector<std::uint64_t> split_evenly(std::uint64_t total, std::size_t parts) {
    std::vector<std::uint64_t> shares(parts, parts ? total / parts : 0);
    for (std::size_t i = 0; parts && i < total % parts; ++i)
        ++shares[i];
    return shares;
}

namespace {

constexpr std::array kCountries{"US", "GB", "ES", "DE", "NL", "CA"};
constexpr std::array kLanguages{"eng", "spa", "dut", "ger", "fre"};

std::string upper(std::string text) {
    for (auto &ch : text)
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return text;
}

std::string spelling(const std::string &title, std::size_t edition) {
    switch (edition % 3) {
    case 1: return title + ".";
    case 2: return upper(title);
    default: return title;
    }
}

} // unnamed namespace

CatalogSnapshot author_fixture(const std::vector<AuthorSpec> &authors, std::size_t library_pool) {
    std::vector<LibraryOrg> libraries;
    for (std::size_t i = 0; i < library_pool; ++i)
        libraries.push_back(make_library(library_id(i), kCountries[i % kCountries.size()],
                                         i % 5 == 4 ? LibraryKind::public_library : LibraryKind::academic));

    std::vector<BookRecord> records;
    std::vector<Holding> holdings;
    std::uint64_t serial = 1;
    std::size_t cursor = 0;
    for (std::size_t a = 0; a < authors.size(); ++a) {
        const auto &author = authors[a];
        for (std::size_t w = 0; w < author.works.size(); ++w) {
            const auto &work = author.works[w];
            const auto span = static_cast<std::size_t>(work.libcitations);
            const auto offset = span >= library_pool ? 0 : cursor % (library_pool - span + 1);
            cursor += 37;
            for (std::size_t k = 0; k < work.editions; ++k) {
                char id[48];
                std::snprintf(id, sizeof id, "a%02zu-w%03zu-e%02zu", a, w, k);
                BookRecord record;
                record.record_id = id;
                record.oclc = OclcNumber(serial);
                record.isbns.push_back(normalize_isbn(isbn13_from_serial(serial)));
                ++serial;
                record.title = spelling(work.title, k);
                record.contributors.push_back({author.heading, work.role});
                record.year = 1980 + static_cast<int>((w + k) % 40);
                record.language = kLanguages[k % kLanguages.size()];
                record.lc_class = ClassCode(w % 2 ? "001.42" : "PN171.F56");
                record.format = k % 2 ? Format::ebook : Format::print;
                records.push_back(std::move(record));

                const auto begin = k * span / work.editions;
                const auto end = std::min(span, (k + 1) * span / work.editions + 1);
                for (auto i = begin; i < end; ++i)
                    holdings.push_back({id, library_id(offset + i), Channel::unspecified});
            }
        }
    }
    return build_snapshot(std::move(records), std::move(libraries), std::move(holdings));
}

const std::vector<AuthorRow> &informetrics_author_rows() {
    static const std::vector<AuthorRow> rows{
        {"Cronin, Blaise", 144, 582, 6749},
        {"Chen, Chaomei", 42, 243, 5867},
        {"Egghe, L. (Leo)", 57, 186, 3718},
        {"Garfield, Eugene", 150, 447, 3386},
        {"Moed, H. F.", 45, 165, 2385},
        {"Sugimoto, Cassidy R.", 10, 85, 2270},
        {"Braun, Tibor", 156, 389, 2268},
        {"Wolfram, Dietmar", 15, 49, 1769},
        {"Debackere, Koenraad", 105, 175, 1628},
        {"Ingwersen, Peter", 33, 142, 1608},
        {"Rousseau, R.", 25, 121, 1385},
        {"Rowlands, Ian", 22, 92, 1298},
        {"Leydesdorff, L. A.", 64, 189, 1230},
        {"Thelwall, Mike", 46, 113, 1132},
        {"Glänzel, Wolfgang", 53, 114, 1115},
        {"De Bellis, Nicola", 7, 25, 762},
        {"Narin, Francis", 45, 96, 426},
        {"Raan, A. F. J. van", 32, 68, 406},
        {"Schubert, András", 21, 62, 394},
        {"Persson, Olle", 121, 174, 257},
        {"Bornmann, Lutz", 14, 28, 215},
        {"Nederhof, A. J.", 38, 59, 199},
    };
    return rows;
}

CatalogSnapshot informetrics_authors_fixture() {
    constexpr std::array roles{Role::author, Role::editor, Role::creator, Role::other};
    std::vector<AuthorSpec> authors;
    for (const auto &row : informetrics_author_rows()) {
        AuthorSpec author{row.heading, {}};
        const auto editions = split_evenly(row.publications, row.works);
        const auto holdings = split_evenly(row.holdings, row.works);
        const auto surname = row.heading.substr(0, row.heading.find(','));
        for (std::size_t w = 0; w < row.works; ++w)
            author.works.push_back({surname + " monograph " + std::to_string(w + 1), holdings[w],
                                    static_cast<std::size_t>(editions[w]), roles[w % roles.size()]});
        authors.push_back(std::move(author));
    }
    return author_fixture(authors, 1500);
}

const std::vector<TitleRow> &moed_titles() {
    static const std::vector<TitleRow> rows{
        {"Citation analysis in research evaluation", 1010},
        {"Handbook of quantitative science and technology research: the use of publication and patent statistics "
         "in studies of S & T systems",
         832},
        {"Applied evaluative informetric", 298},
    };
    return rows;
}

CatalogSnapshot moed_fixture() {
    constexpr std::size_t kWorks = 45, kPublications = 165;
    constexpr std::uint64_t kHoldings = 2385;
    constexpr std::array roles{Role::author, Role::editor, Role::other, Role::creator};

    std::uint64_t named = 0;
    for (const auto &title : moed_titles())
        named += title.libraries;
    const auto rest = split_evenly(kHoldings - named, kWorks - moed_titles().size());
    const auto editions = split_evenly(kPublications, kWorks);

    AuthorSpec author{kMoedHeading, {}};
    for (std::size_t w = 0; w < kWorks; ++w) {
        WorkSpec work;
        if (w < moed_titles().size()) {
            work.title = moed_titles()[w].title;
            work.libcitations = moed_titles()[w].libraries;
        } else {
            work.title = "Informetrics paper collection " + std::to_string(w);
            work.libcitations = rest[w - moed_titles().size()];
        }
        work.editions = static_cast<std::size_t>(editions[w]);
        work.role = w == 1 ? Role::editor : roles[w % roles.size()];
        author.works.push_back(std::move(work));
    }
    return author_fixture({author}, 1100);
}

CatalogSnapshot diffusion_fixture(std::size_t titles, std::uint64_t inclusions, std::size_t libraries) {
    std::vector<LibraryOrg> orgs;
    for (std::size_t i = 0; i < libraries; ++i)
        orgs.push_back(make_library(library_id(i), kCountries[i % kCountries.size()]));
    std::vector<std::string> library_ids;
    for (const auto &org : orgs)
        library_ids.push_back(org.library_id);

    const auto counts = split_evenly(inclusions, titles);
    std::vector<BookRecord> records;
    records.reserve(titles);
    std::vector<Holding> holdings;
    holdings.reserve(inclusions);
    for (std::size_t t = 0; t < titles; ++t) {
        char id[32];
        std::snprintf(id, sizeof id, "t%07zu", t);
        records.push_back(make_record(id, std::string("Title ") + id, "Author " + std::to_string(t % 977)));
        for (std::uint64_t k = 0; k < counts[t]; ++k)
            holdings.push_back({id, library_ids[(t * 7 + k) % libraries], Channel::unspecified});
    }
    return build_snapshot(std::move(records), std::move(orgs), std::move(holdings));
}

CatalogSnapshot composition_fixture() {
    const std::vector<std::pair<std::string, std::size_t>> academic{
        {"US", 2505}, {"GB", 800}, {"DE", 700}, {"CA", 600}, {"FR", 500}, {"AU", 699}};
    const std::vector<std::pair<std::string, std::size_t>> public_libraries{{"US", 120}, {"GB", 45}, {"NL", 35}};
    std::vector<LibraryOrg> libraries;
    std::size_t next = 0;
    for (const auto &[country, count] : academic)
        for (std::size_t i = 0; i < count; ++i)
            libraries.push_back(make_library(library_id(next++), country, LibraryKind::academic));
    for (const auto &[country, count] : public_libraries)
        for (std::size_t i = 0; i < count; ++i)
            libraries.push_back(make_library(library_id(next++), country, LibraryKind::public_library));
    for (std::size_t i = 0; i < 17; ++i)
        libraries.push_back(make_library(library_id(next++), "US", LibraryKind::other));
    return build_snapshot({make_record("r1", "Placeholder title", "Someone")}, std::move(libraries), {});
}

CatalogSnapshot coverage_fixture() {
    constexpr std::size_t kRecords = 10'000, kHeld = 9'781, kLibraries = 25;
    std::vector<LibraryOrg> libraries;
    for (std::size_t i = 0; i < kLibraries; ++i)
        libraries.push_back(make_library(library_id(i), kCountries[i % kCountries.size()]));
    std::vector<BookRecord> records;
    std::vector<Holding> holdings;
    for (std::size_t r = 0; r < kRecords; ++r) {
        char id[32];
        std::snprintf(id, sizeof id, "b%05zu", r);
        auto record = make_record(id, std::string("Book ") + id, "Writer " + std::to_string(r % 311), r % 2 ? "QA76" : "Z669");
        if (r % 3 == 0)
            record.citations = r % 7;
        records.push_back(std::move(record));
        if (r < kHeld)
            for (std::size_t k = 0; k <= r % 4; ++k)
                holdings.push_back({id, library_id((r + k * 5) % kLibraries), Channel::unspecified});
    }
    return build_snapshot(std::move(records), std::move(libraries), std::move(holdings));
}

std::string class_member_id(std::size_t class_index, std::size_t member) {
    return "k" + std::to_string(class_index) + "-b" + std::to_string(member);
}

CatalogSnapshot classes_fixture(const std::vector<std::vector<std::uint64_t>> &classes) {
    std::uint64_t width = 0;
    for (const auto &counts : classes)
        for (const auto count : counts)
            width = std::max(width, count);
    std::vector<LibraryOrg> libraries;
    std::vector<std::string> ids;
    for (std::uint64_t i = 0; i < width; ++i) {
        libraries.push_back(make_library(library_id(i)));
        ids.push_back(libraries.back().library_id);
    }
    std::vector<BookRecord> records;
    std::vector<Holding> holdings;
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (std::size_t i = 0; i < classes[c].size(); ++i) {
            const auto id = class_member_id(c, i);
            records.push_back(make_record(id, "Book " + id, "Author", "K" + std::to_string(c)));
            for (std::uint64_t k = 0; k < classes[c][i]; ++k)
                holdings.push_back({id, ids[k]});
        }
    return build_snapshot(std::move(records), std::move(libraries), std::move(holdings));
}

CatalogSnapshot random_snapshot(std::mt19937_64 &rng, const RandomSnapshotOptions &options) {
    static constexpr std::array titles{"Mapping scientific frontiers", "Power laws", "Citation analysis",
                                       "Altmetrics", "Bibliometrics and citation analysis", "Informetrics"};
    static constexpr std::array authors{"Chen, Chaomei", "Egghe, Leo", "Moed, Henk", "Holmberg, Kim", "De Bellis, Nicola"};
    static constexpr std::array classes{"Z669.8", "Q180.55", "PN171.F56", "001.42"};
    static constexpr std::array channels{Channel::librarian_order, Channel::approval_plan, Channel::pda,
                                         Channel::donation, Channel::package, Channel::unspecified};

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    const auto n_libraries = 1 + pick(options.max_libraries);
    std::vector<LibraryOrg> libraries;
    for (std::size_t i = 0; i < n_libraries; ++i) {
        std::set<std::string> memberships;
        if (unit(rng) < 0.4)
            memberships.insert("ARL");
        if (unit(rng) < 0.2)
            memberships.insert("RLUK");
        libraries.push_back(make_library(library_id(i), kCountries[pick(3)],
                                         static_cast<LibraryKind>(pick(3)), memberships));
    }

    const auto n_records = 1 + pick(options.max_records);
    std::vector<BookRecord> records;
    std::vector<Holding> holdings;
    std::set<std::uint64_t> used_serials;
    for (std::size_t r = 0; r < n_records; ++r) {
        BookRecord record;
        record.record_id = "r" + std::to_string(r);
        if (options.unique_identifiers) {
            record.oclc = OclcNumber(1000 + r);
            record.isbns.push_back(normalize_isbn(isbn13_from_serial(5000 + r)));
            record.title = std::string(titles[pick(titles.size())]) + " " + std::to_string(r);
        } else {
            if (unit(rng) < 0.5)
                record.oclc = OclcNumber(1 + pick(3 * n_records));
            if (unit(rng) < 0.6)
                record.isbns.push_back(normalize_isbn(isbn13_from_serial(1 + pick(3 * n_records))));
            record.title = titles[pick(titles.size())];
        }
        record.contributors.push_back({authors[pick(authors.size())], Role::author});
        if (unit(rng) < options.classified)
            record.lc_class = ClassCode(classes[pick(classes.size())]);
        record.format = static_cast<Format>(pick(3));
        if (unit(rng) < 0.7)
            record.citations = pick(50);
        for (const auto &library : libraries)
            if (unit(rng) < 0.4)
                holdings.push_back({record.record_id, library.library_id, channels[pick(channels.size())]});
        records.push_back(std::move(record));
    }
    return build_snapshot(std::move(records), std::move(libraries), std::move(holdings));
}

} // namespace lca::test
