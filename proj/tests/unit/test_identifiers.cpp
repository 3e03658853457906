#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "lca/errors.hpp"
#include "lca/identifiers.hpp"
#include "oracles.hpp"

using namespace lca;
using namespace lca::test;

TEST_CASE("hyphenated ISBN-13 keeps its digits") {
    const auto isbn = normalize_isbn("978-0-306-40615-7");
    CHECK(isbn.digits() == "9780306406157");
    CHECK(isbn.original_form() == "978-0-306-40615-7");
}

TEST_CASE("ISBN-10 converts to a 978 form with a fresh check digit") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 500; ++i) {
        const auto isbn10 = random_isbn10(rng);
        const auto isbn = normalize_isbn(isbn10);
        const auto body = "978" + isbn10.substr(0, 9);
        CHECK(isbn.digits() == body + oracle_isbn13_check(body));
        CHECK(oracle_isbn13_valid(isbn.digits()));
    }
    CHECK(normalize_isbn("0-8044-2957-x").digits() == "9780804429573");
}

TEST_CASE("malformed ISBNs raise format or checksum errors") {
    CHECK_THROWS_AS(normalize_isbn("978030640615"), IsbnFormatError);
    CHECK_THROWS_AS(normalize_isbn(""), IsbnFormatError);
    CHECK_THROWS_AS(normalize_isbn("97803064061X7"), IsbnFormatError);
    CHECK_THROWS_AS(normalize_isbn("X306406152"), IsbnFormatError);
    CHECK_THROWS_AS(normalize_isbn("9780306406158"), IsbnChecksumError);
    CHECK_THROWS_AS(normalize_isbn("0306406153"), IsbnChecksumError);
    CHECK_FALSE(try_normalize_isbn("not an isbn"));
}

TEST_CASE("check digit helpers match the oracle") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> digit(0, 9);
    for (int i = 0; i < 1000; ++i) {
        std::string twelve;
        for (int k = 0; k < 12; ++k)
            twelve.push_back(static_cast<char>('0' + digit(rng)));
        CHECK(isbn13_check_digit(twelve) == oracle_isbn13_check(twelve));
        CHECK(isbn10_check_digit(twelve.substr(0, 9)) == oracle_isbn10_check(twelve.substr(0, 9)));
    }
}

TEST_CASE("ISBN-10 round-trips and every wrong check digit is rejected") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const auto isbn10 = random_isbn10(rng);
        const auto isbn = normalize_isbn(isbn10);
        CHECK(isbn13_to_isbn10(isbn) == isbn10);
        CHECK(normalize_isbn(isbn.digits()) == normalize_isbn(isbn.digits()));
        CHECK(normalize_isbn(isbn.digits()).digits() == isbn.digits());
        for (const char wrong : std::string("0123456789X")) {
            if (wrong == isbn10.back())
                continue;
            CHECK_THROWS_AS(normalize_isbn(isbn10.substr(0, 9) + wrong), IsbnChecksumError);
        }
    }
}

TEST_CASE("979 ISBNs have no 10-digit form") {
    const std::string body = "979103456789";
    CHECK_THROWS_AS(isbn13_to_isbn10(normalize_isbn(body + oracle_isbn13_check(body))), NotConvertibleError);
}

TEST_CASE("heading normalization folds case, diacritics, punctuation and spacing") {
    CHECK(normalize_heading("Citation Analysis in Research Evaluation") ==
          normalize_heading("citation analysis in research evaluation."));
    CHECK(normalize_heading("  Glänzel,   Wolfgang ") == "glanzel wolfgang");
    CHECK(normalize_heading("Schubert, András") == "schubert andras");
    CHECK(normalize_heading("ＦＵＬＬ width") == "full width");
    CHECK(normalize_heading("...") == "");
}

TEST_CASE("work keys") {
    const auto a = make_record("a", "Citation Analysis in Research Evaluation", "Moed, H. F.");
    const auto b = make_record("b", "citation analysis in research evaluation.", "MOED, H. F");
    const auto c = make_record("c", "Citation analysis in research evaluation", "Garfield, Eugene");
    CHECK(work_key(a) == work_key(b));
    CHECK(work_key(a) != work_key(c));

    auto print = a, ebook = a;
    print.format = Format::print;
    print.year = 2005;
    ebook.format = Format::ebook;
    ebook.year = 2006;
    CHECK(work_key(print) == work_key(ebook));

    CHECK_THROWS_AS(work_key(make_record("d", " ?! ", "X")), KeyError);
}

TEST_CASE("primary contributor prefers authors, then creators") {
    auto record = make_record("r", "T");
    CHECK(primary_contributor(record).empty());
    record.contributors = {{"Ed", Role::editor}, {"Cre", Role::creator}};
    CHECK(primary_contributor(record) == "Cre");
    record.contributors.push_back({"Auth", Role::author});
    CHECK(primary_contributor(record) == "Auth");
    record.contributors = {{"Other", Role::other}};
    CHECK(primary_contributor(record) == "Other");
}

TEST_CASE("clustering examples") {
    SUBCASE("disjoint evidence gives singletons") {
        const auto snapshot = build_snapshot({make_record("a", "One", "X"), make_record("b", "Two", "X")}, {}, {});
        CHECK(cluster_works(snapshot).size() == 2);
    }
    SUBCASE("shared ISBN then equal key chains transitively") {
        auto a = make_record("a", "First title", "X");
        auto b = make_record("b", "Second title", "Y");
        auto c = make_record("c", "second title!", "Y");
        a.isbns = {normalize_isbn("0306406152")};
        b.isbns = {normalize_isbn("978-0-306-40615-7")};
        const auto clusters = cluster_works(build_snapshot({c, b, a}, {}, {}));
        REQUIRE(clusters.size() == 1);
        CHECK(clusters[0].cluster_id == "a");
        CHECK(clusters[0].member_record_ids == std::set<std::string>{"a", "b", "c"});
    }
    SUBCASE("shared OCLC number links different titles") {
        auto a = make_record("a", "English title", "X");
        auto b = make_record("b", "Titulo espanol", "X");
        a.oclc = b.oclc = OclcNumber(42);
        CHECK(cluster_works(build_snapshot({a, b}, {}, {})).size() == 1);
    }
}

TEST_CASE("Moed fixture collapses 165 editions into 45 works") {
    const auto snapshot = moed_fixture();
    CHECK(snapshot.records().size() == 165);
    CHECK(cluster_works(snapshot).size() == 45);
}

TEST_CASE("property: clusters equal BFS components and ignore input order") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 150; ++trial) {
        const auto snapshot = random_snapshot(rng, {.max_records = 50, .max_libraries = 3});
        const auto clusters = cluster_works(snapshot);

        std::set<std::set<std::string>> partition;
        std::size_t members = 0;
        for (const auto &cluster : clusters) {
            partition.insert(cluster.member_record_ids);
            members += cluster.member_record_ids.size();
            CHECK(cluster.cluster_id == *cluster.member_record_ids.begin());
        }
        CHECK(members == snapshot.records().size());
        CHECK(partition == oracle_clusters(snapshot));
        CHECK(std::is_sorted(clusters.begin(), clusters.end(),
                             [](const WorkCluster &a, const WorkCluster &b) { return a.cluster_id < b.cluster_id; }));

        std::vector<BookRecord> shuffled(snapshot.records().begin(), snapshot.records().end());
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto reordered = cluster_works(build_snapshot(shuffled, {}, {}));
        REQUIRE(reordered.size() == clusters.size());
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            CHECK(reordered[i].cluster_id == clusters[i].cluster_id);
            CHECK(reordered[i].member_record_ids == clusters[i].member_record_ids);
        }
    }
}
