#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "fixtures.hpp"
#include "lca/catalog_client.hpp"
#include "lca/identifiers.hpp"
#include "lca/ingest.hpp"
#include "lca/rounding.hpp"
#include "oracles.hpp"

using namespace lca;
using namespace lca::test;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome lca_run(std::vector<std::string> args) {
    args.insert(args.begin(), "lca");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class Workspace {
public:
    Workspace() : root_(fs::temp_directory_path() / ("lca_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++))) {
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    ~Workspace() { fs::remove_all(root_); }
    std::string path(const std::string &name) const { return (root_ / name).string(); }
    std::string write(const std::string &name, const std::string &contents) const {
        std::ofstream(path(name), std::ios::binary) << contents;
        return path(name);
    }
    std::string dataset(const CatalogSnapshot &snapshot) const {
        save_dataset(snapshot, path("data.jsonl"));
        return path("data.jsonl");
    }

private:
    static inline int counter_ = 0;
    fs::path root_;
};

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> result;
    std::istringstream stream(text);
    for (std::string line; std::getline(stream, line);) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        result.push_back(line);
    }
    return result;
}

const std::string kDublinCore = R"(<collection xmlns:dc="http://purl.org/dc/elements/1.1/">
  <record><dc:title>Power laws in the information production process</dc:title><dc:creator>Egghe, Leo</dc:creator></record>
  <record><dc:title>Citation analysis in research evaluation</dc:title><dc:creator>Moed, H. F.</dc:creator></record>
  <record><dc:title>Mapping scientific frontiers</dc:title><dc:creator>Chen, Chaomei</dc:creator></record>
</collection>)";

} // unnamed namespace

TEST_CASE("filter grammar") {
    const auto filter = cli::parse_filter_spec("country=US,GB;kind=academic;member=ARL;exclude-channel=donation");
    CHECK(filter.countries == std::set<std::string>{"GB", "US"});
    CHECK(filter.kinds == std::set<LibraryKind>{LibraryKind::academic});
    CHECK(filter.required_memberships == std::set<std::string>{"ARL"});
    CHECK(filter.excluded_channels == std::set<Channel>{Channel::donation});
    CHECK(cli::parse_filter_spec("").is_unrestricted());
    CHECK(cli::parse_filter_spec(" kind = public ; ").kinds == std::set<LibraryKind>{LibraryKind::public_library});
    CHECK_THROWS_AS(cli::parse_filter_spec("colour=red"), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_filter_spec("kind=museum"), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_filter_spec("country"), cli::UsageError);
}

TEST_CASE("ingest") {
    Workspace ws;
    const auto dataset = ws.path("data.jsonl");
    SUBCASE("three Dublin Core records") {
        const auto result = lca_run({"--dataset", dataset, "ingest", "--input", ws.write("in.xml", kDublinCore), "--format", "dublincore"});
        CHECK(result.code == 0);
        CHECK(result.out == "accepted=3 rejected=0\n");
        CHECK(load_dataset(dataset).records().size() == 3);
        lca_run({"--dataset", dataset, "ingest", "--input", ws.path("in.xml"), "--format", "dublincore"});
        CHECK(load_dataset(dataset).records().size() == 3);
    }
    SUBCASE("titleless records only") {
        const auto input = ws.write("in.xml", R"(<c xmlns:dc="http://purl.org/dc/elements/1.1/"><r><dc:creator>X</dc:creator></r></c>)");
        const auto result = lca_run({"--dataset", dataset, "ingest", "--input", input, "--format", "dublincore"});
        CHECK(result.code == 2);
        CHECK(result.out == "accepted=0 rejected=1\n");
        CHECK_FALSE(fs::exists(dataset));
    }
    SUBCASE("usage and input errors") {
        CHECK(lca_run({"--dataset", dataset, "ingest", "--input", ws.write("in.xml", kDublinCore), "--format", "bibtex"}).code == 64);
        CHECK(lca_run({"--dataset", dataset, "ingest", "--input", ws.path("missing.xml"), "--format", "marcxml"}).code == 1);
        CHECK(lca_run({"--dataset", dataset, "ingest", "--input", ws.write("bad.xml", "<a><b></a>"), "--format", "marcxml"}).code == 1);
        CHECK(lca_run({"ingest", "--input", ws.path("in.xml"), "--format", "dublincore"}).code == 64);
        CHECK(lca_run({}).code == 64);
        CHECK(lca_run({"frobnicate"}).code == 64);
    }
    SUBCASE("MARC-XML and JSON lines") {
        const auto marc = ws.write("m.xml", R"(<collection xmlns="http://www.loc.gov/MARC21/slim"><record>
            <datafield tag="035"><subfield code="a">(OCoLC)777</subfield></datafield>
            <datafield tag="245"><subfield code="a">Bibliometrics and citation analysis</subfield></datafield></record></collection>)");
        CHECK(lca_run({"--dataset", dataset, "ingest", "--input", marc, "--format", "marcxml"}).code == 0);
        CHECK(load_dataset(dataset).find_record("ocn777") != nullptr);

        std::ostringstream extra;
        write_dataset(build_snapshot({make_record("x1", "Extra")}, {make_library("L1")}, {{"x1", "L1"}}), extra);
        const auto result = lca_run({"--dataset", dataset, "ingest", "--input", ws.write("x.jsonl", extra.str()), "--format", "jsonl"});
        CHECK(result.code == 0);
        const auto merged = load_dataset(dataset);
        CHECK(merged.records().size() == 2);
        CHECK(merged.holdings().size() == 1);
    }
}

TEST_CASE("fetch") {
    Workspace ws;
    std::vector<BookRecord> records;
    for (std::uint64_t i = 1; i <= 5; ++i) {
        auto record = make_record("r" + std::to_string(i), "Title " + std::to_string(i), "Author");
        record.isbns.push_back(normalize_isbn(isbn13_from_serial(i)));
        records.push_back(record);
    }
    std::vector<LibraryOrg> libraries{make_library("A", "US", LibraryKind::academic, {"ARL"}), make_library("B", "GB"),
                                      make_library("C", "ES")};
    const auto served = build_snapshot(records, libraries, {{"r1", "A"}, {"r1", "B"}, {"r1", "C"}, {"r2", "A"}, {"r3", "B"}});
    FixtureServer server(served);
    const auto dataset = ws.dataset(build_snapshot(records, {}, {}));
    const auto quota_file = ws.path("quota.json");

    SUBCASE("one ISBN with three holders") {
        const auto result = lca_run({"--dataset", dataset, "fetch", "--isbn", isbn13_from_serial(1), "--base-url",
                                     server.base_url(), "--quota-state", quota_file});
        CHECK(result.code == 0);
        CHECK(result.out.starts_with("1 fetched, 3 holdings, 3 libraries; quota 1/50000 used on "));
        const auto after = load_dataset(dataset);
        CHECK(after.holdings().size() == 3);
        CHECK(after.libraries().size() == 3);
        CHECK(after.find_library("A")->memberships == std::set<std::string>{"ARL"});
    }
    SUBCASE("quota of two over five records") {
        const auto result = lca_run({"--dataset", dataset, "fetch", "--all", "--base-url", server.base_url(), "--quota", "2"});
        CHECK(result.code == 3);
        CHECK(result.out.starts_with("2 fetched"));
        CHECK(server.request_count() == 2);
        CHECK(load_dataset(dataset).holdings().size() == 4);
    }
    SUBCASE("a selector matching nothing") {
        const auto result = lca_run({"--dataset", dataset, "fetch", "--oclc", "424242", "--base-url", server.base_url()});
        CHECK(result.code == 0);
        CHECK(result.out == "0 fetched\n");
        CHECK(server.request_count() == 0);
    }
    SUBCASE("environment supplies the client settings") {
        ::setenv("LCA_BASE_URL", server.base_url().c_str(), 1);
        ::setenv("LCA_QUOTA_STATE", quota_file.c_str(), 1);
        const auto first = lca_run({"--dataset", dataset, "fetch", "--all"});
        CHECK(first.code == 0);
        CHECK(first.out.find("quota 5/50000") != std::string::npos);
        ::setenv("LCA_QUOTA", "6", 1);
        const auto second = lca_run({"--dataset", dataset, "fetch", "--all"});
        CHECK(second.code == 3);
        CHECK(lca_run({"--dataset", dataset, "fetch", "--all", "--quota", "100"}).code == 0);
        ::unsetenv("LCA_BASE_URL");
        ::unsetenv("LCA_QUOTA_STATE");
        ::unsetenv("LCA_QUOTA");
    }
    SUBCASE("the filter applies to harvested libraries") {
        const auto result = lca_run({"--dataset", dataset, "--filter", "member=ARL", "fetch", "--all", "--base-url", server.base_url()});
        CHECK(result.code == 0);
        const auto after = load_dataset(dataset);
        CHECK(after.libraries().size() == 1);
        CHECK(after.holdings().size() == 2);
    }
    SUBCASE("usage errors") {
        CHECK(lca_run({"--dataset", dataset, "fetch", "--base-url", server.base_url()}).code == 64);
        CHECK(lca_run({"--dataset", dataset, "fetch", "--all"}).code == 64);
        CHECK(lca_run({"--dataset", dataset, "fetch", "--isbn", "123", "--base-url", server.base_url()}).code == 64);
    }
    SUBCASE("transport failure") {
        server.inject_failures(100, 503);
        const auto result = lca_run({"--dataset", dataset, "fetch", "--isbn", isbn13_from_serial(1), "--base-url",
                                     server.base_url(), "--retries", "2", "--backoff-ms", "1"});
        CHECK(result.code == 1);
    }
}

TEST_CASE("indicators") {
    Workspace ws;
    SUBCASE("author ranking, deterministic") {
        const auto dataset = ws.dataset(informetrics_authors_fixture());
        const auto first = lca_run({"--dataset", dataset, "indicators", "--authors"});
        CHECK(first.code == 0);
        const auto rows = lines(first.out);
        REQUIRE(rows.size() == 23);
        CHECK(rows[0] == "author,works,publications,library_holdings");
        CHECK(rows[1] == R"x("Cronin, Blaise",144,582,6749)x");
        CHECK(rows[2] == R"x("Chen, Chaomei",42,243,5867)x");
        CHECK(rows[3] == R"x("Egghe, L. (Leo)",57,186,3718)x");
        CHECK(rows[4] == R"x("Garfield, Eugene",150,447,3386)x");
        CHECK(rows[5] == R"x("Moed, H. F.",45,165,2385)x");
        CHECK(lca_run({"--dataset", dataset, "indicators", "--authors"}).out == first.out);

        const auto one = lca_run({"--dataset", dataset, "--output", "jsonl", "indicators", "--author", "Moed, H. F."});
        CHECK(one.out == R"({"table":"authors","author":"Moed, H. F.","works":45,"publications":165,"library_holdings":2385})" "\n");
        CHECK(lca_run({"--dataset", dataset, "indicators", "--author", "Nobody"}).code == 4);
    }
    SUBCASE("units") {
        const auto dataset = ws.dataset(diffusion_fixture(121, 417, 42));
        const auto units = ws.write("units.jsonl", R"({"id":"first","label":"First two","members":["t0000000","t0000001"]}
{"id":"none","label":"Empty","members":[]}
{"id":"ghost","label":"Ghost","members":["nope"]}
)");
        const auto result = lca_run({"--dataset", dataset, "indicators", "--unit", "all", "--unit", "first", "--units", units,
                                     "--benchmark", "self"});
        CHECK(result.code == 0);
        const auto rows = lines(result.out);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0] == "unit_id,label,titles,ci,cir,rcir,dr");
        CHECK(rows[1] == "all,All records,121,417,3.4463,1.0000,0.0821");
        CHECK(rows[2].starts_with("first,First two,2,8,4.0000,1.0000,"));

        const auto bench = lca_run({"--dataset", dataset, "indicators", "--unit", "first", "--units", units, "--benchmark", "all"});
        CHECK(lines(bench.out)[1] == "first,First two,2,8,4.0000,1.1607,0.0952");

        CHECK(lca_run({"--dataset", dataset, "indicators", "--unit", "none", "--units", units}).code == 4);
        CHECK(lca_run({"--dataset", dataset, "indicators", "--unit", "ghost", "--units", units}).code == 4);
        CHECK(lca_run({"--dataset", dataset, "indicators", "--unit", "missing"}).code == 4);
        CHECK(lca_run({"--dataset", dataset, "indicators", "--unit", "class:NOPE"}).code == 4);
        CHECK(lca_run({"--dataset", dataset, "indicators"}).code == 64);
        CHECK(lca_run({"--dataset", ws.path("absent.jsonl"), "indicators", "--authors"}).code == 1);
    }
    SUBCASE("books") {
        const auto dataset = ws.dataset(build_snapshot(
            {make_record("a", "Alpha", "X", "QA"), make_record("b", "Beta", "X", "QA"), make_record("c", "Gamma", "X")},
            {make_library("L1"), make_library("L2", "GB")}, {{"a", "L1"}, {"b", "L1"}, {"b", "L2"}}));
        const auto result = lca_run({"--dataset", dataset, "--output", "md", "indicators", "--all-books"});
        CHECK(result.code == 0);
        CHECK(result.out == "| record_id | title | libcitations | cnls | lc_class | rank | class_size |\n"
                            "| --- | --- | ---: | ---: | --- | ---: | ---: |\n"
                            "| b | Beta | 2 | 1.3333 | QA | 1 | 2 |\n"
                            "| a | Alpha | 1 | 0.6667 | QA | 2 | 2 |\n"
                            "| c | Gamma | 0 |  |  |  |  |\n");
        const auto filtered = lca_run({"--dataset", dataset, "--filter", "country=GB", "indicators", "--all-books"});
        CHECK(lines(filtered.out)[1] == "b,Beta,1,2.0000,QA,1,2");
    }
}

TEST_CASE("correlate") {
    Workspace ws;
    std::vector<BookRecord> records;
    std::vector<LibraryOrg> libraries;
    std::vector<Holding> holdings;
    for (int i = 0; i < 6; ++i)
        libraries.push_back(make_library("L" + std::to_string(i)));
    for (int r = 0; r < 6; ++r) {
        auto record = make_record("r" + std::to_string(r), "T" + std::to_string(r));
        record.citations = 100 - r;
        records.push_back(record);
        for (int i = 0; i <= r; ++i)
            holdings.push_back({record.record_id, "L" + std::to_string(i)});
    }
    const auto dataset = ws.dataset(build_snapshot(records, libraries, holdings));
    const auto metrics = ws.write("m.csv", "record_id,altmetric,flat\nr0,3,1\nr1,1,1\nr2,4,1\nr3,1,1\nr4,5,1\nr5,9,1\n");

    CHECK(lines(lca_run({"--dataset", dataset, "correlate", "--x", "libcitations", "--y", "libcitations"}).out)[1] ==
          "libcitations,libcitations,6,1.0000");
    CHECK(lines(lca_run({"--dataset", dataset, "correlate", "--x", "libcitations", "--y", "citations"}).out)[1] ==
          "libcitations,citations,6,-1.0000");
    const auto external = lca_run({"--dataset", dataset, "correlate", "--x", "libcitations", "--y", "altmetric", "--metrics", metrics});
    const double expected = oracle_spearman({1, 2, 3, 4, 5, 6}, {3, 1, 4, 1, 5, 9});
    CHECK(lines(external.out)[1] == "libcitations,altmetric,6," + format_fixed(expected, 4));

    const auto flat = lca_run({"--dataset", dataset, "correlate", "--x", "libcitations", "--y", "flat", "--metrics", metrics});
    CHECK(flat.code == 5);
    CHECK_FALSE(flat.err.empty());
    CHECK(lca_run({"--dataset", dataset, "correlate", "--x", "libcitations", "--y", "shoe_size"}).code == 64);
    CHECK(lca_run({"--dataset", dataset, "correlate", "--x", "libcitations"}).code == 64);

    const auto matrix = lca_run({"--dataset", dataset, "correlate", "--matrix", "--metrics", metrics, "--metric", "libcitations",
                                 "--metric", "citations", "--metric", "flat"});
    CHECK(matrix.code == 5);
    const auto rows = lines(matrix.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "metric,libcitations,citations,flat");
    CHECK(rows[1] == "libcitations,1.0000,-1.0000,NA");
    CHECK(rows[3] == "flat,NA,NA,NA");
    CHECK(lca_run({"--dataset", dataset, "correlate", "--matrix", "--metric", "libcitations", "--metric", "citations"}).code == 0);
}

TEST_CASE("report") {
    Workspace ws;
    SUBCASE("library composition") {
        const auto result = lca_run({"--dataset", ws.dataset(composition_fixture()), "report"});
        CHECK(result.code == 0);
        const auto rows = lines(result.out);
        CHECK(rows[0] == "country,academic,academic_share,public,public_share,other,other_share,total,total_share");
        CHECK(rows[1].starts_with("US,2505,43.16,120,60.00,17,100.00,2642,"));
    }
    SUBCASE("metric coverage") {
        const auto result = lca_run({"--dataset", ws.dataset(coverage_fixture()), "--output", "md", "report"});
        CHECK(result.code == 0);
        CHECK(result.out.find("## coverage") != std::string::npos);
        CHECK(result.out.find("| libcitations | 10000 | 9781 | 97.81 |") != std::string::npos);
    }
    SUBCASE("empty dataset") {
        CHECK(lca_run({"--dataset", ws.dataset(CatalogSnapshot()), "report"}).code == 2);
    }
}
