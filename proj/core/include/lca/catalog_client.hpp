/** \file  catalog_client.hpp
 *  \brief HTTP client for a union-catalog library-locations API, with a persisted daily quota.
 *
 *  The four lookups map onto these paths, relative to the configured base URL:
 *
 *      /content/libraries/{OCLC_Number}
 *      /content/libraries/isbn/{ISBN}
 *      /content/libraries/issn/{ISSN}
 *      /content/libraries/sn/{Standard_Number}
 *
 *  Responses are read as JSON or XML according to the server's content type.
 */
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lca/model.hpp"

namespace lca {

struct Location {
    std::string name;
    std::string country;
    std::string institution_id;
    /// Optional extensions; servers that omit them yield LibraryKind::other and no memberships.
    std::optional<LibraryKind> kind;
    std::set<std::string> memberships;

    bool operator==(const Location &) const = default;
};

struct LocationResponse {
    std::optional<BookRecord> matched_record;
    std::vector<Location> locations; // institution ids unique
};

/// Decoders for the two response encodings. Throw ParseError on malformed bodies.
LocationResponse parse_location_json(std::string_view body);
LocationResponse parse_location_xml(std::string_view body);
std::string encode_location_json(const LocationResponse &response);
std::string encode_location_xml(const LocationResponse &response);

using Clock = std::function<Timestamp()>;

struct QuotaState {
    std::chrono::sys_days day;
    std::uint64_t used = 0;
    std::uint64_t limit = 0;
};

std::string format_day(std::chrono::sys_days day);

/// Daily request budget keyed by UTC calendar day. With a state file, every charge is an exclusive
/// read-modify-write of that file so concurrent processes share one budget.
class QuotaGuard {
public:
    explicit QuotaGuard(std::uint64_t limit, std::optional<std::filesystem::path> state_file = std::nullopt,
                        Clock clock = std::chrono::system_clock::now);

    /// Consumes one unit or throws QuotaError, leaving the state unchanged.
    void charge();
    QuotaState state() const;

private:
    std::chrono::sys_days today() const;

    std::uint64_t limit_;
    std::optional<std::filesystem::path> state_file_;
    Clock clock_;
    mutable std::mutex mutex_;
    QuotaState memory_state_;
};

struct ClientConfig {
    std::string base_url;
    std::string api_key_header = "wskey";
    std::string api_key;
    std::uint64_t quota_limit = 50'000;
    std::optional<std::filesystem::path> quota_state_file;
    unsigned parallelism = 1;
    /// Total attempts per lookup, including the first.
    unsigned max_attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::milliseconds timeout{10'000};
    /// Passed through verbatim as query parameters (e.g. geographic hints).
    std::map<std::string, std::string> extra_query;
    bool prefer_xml = false;
};

class CatalogClient {
public:
    explicit CatalogClient(ClientConfig config, Clock clock = std::chrono::system_clock::now);
    ~CatalogClient();
    CatalogClient(const CatalogClient &) = delete;
    CatalogClient &operator=(const CatalogClient &) = delete;

    /// HTTP 404 yields an empty response. Throws QuotaError before issuing a request once the
    /// budget is spent, and TransportError after exhausting retries on network errors or 5xx.
    LocationResponse get_by_oclc_number(OclcNumber number);
    LocationResponse get_by_isbn(const Isbn &isbn);
    LocationResponse get_by_issn(std::string_view issn);
    LocationResponse get_by_standard_number(std::string_view standard_number);

    QuotaState quota() const { return quota_.state(); }
    const ClientConfig &config() const { return config_; }

private:
    struct Connection;
    LocationResponse fetch(const std::string &path);
    std::unique_ptr<Connection> acquire();
    void release(std::unique_ptr<Connection> connection);

    ClientConfig config_;
    QuotaGuard quota_;
    std::mutex pool_mutex_;
    std::vector<std::unique_ptr<Connection>> pool_;
};

struct HarvestIssue {
    std::string record_id;
    std::string reason;
};

struct HarvestResult {
    /// Harvested records plus the libraries and holdings reported for them.
    SnapshotDelta delta;
    std::vector<std::string> harvested_record_ids;
    std::vector<HarvestIssue> issues;
    bool quota_exhausted = false;
    bool transport_failed = false;
};

/// Looks each record up by OCLC number when present, else by its first ISBN, and converts the
/// locations into libraries (deduplicated by institution id) and holdings. Records without either
/// identifier are skipped and noted. Errors stop nothing but the affected record, except quota
/// exhaustion, which ends the run; partial results are always returned.
HarvestResult harvest(CatalogClient &client, std::span<const BookRecord> records);

/// Replays a snapshot over the four location paths as JSON (XML when the request's Accept header
/// mentions xml). Unknown paths yield 404, malformed identifiers 400.
class FixtureServer {
public:
    /// Binds immediately; port 0 picks a free port. Throws StartupError on bind failure.
    FixtureServer(CatalogSnapshot dataset, const std::string &host = "127.0.0.1", int port = 0);
    ~FixtureServer();
    FixtureServer(const FixtureServer &) = delete;
    FixtureServer &operator=(const FixtureServer &) = delete;

    int port() const;
    std::string base_url() const;
    std::uint64_t request_count() const;
    /// Answers the next `count` requests with `status` instead of serving them.
    void inject_failures(unsigned count, int status = 503);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::unique_ptr<FixtureServer> serve_fixture(CatalogSnapshot dataset, const std::string &host = "127.0.0.1",
                                             int port = 0);

} // namespace lca
