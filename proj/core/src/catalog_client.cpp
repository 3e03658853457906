/** \file  catalog_client.cpp
 *  \brief Location lookups, quota accounting and harvesting.
 */
#include "lca/catalog_client.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <map>
#include <thread>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <httplib.h>

#include "json_codec.hpp"
#include "lca/errors.hpp"
#include "lca/identifiers.hpp"
#include "xml.hpp"

namespace lca {

namespace {

std::string xml_escape(std::string_view text) {
    std::string escaped;
    escaped.reserve(text.size());
    for (const char ch : text) {
        switch (ch) {
        case '<': escaped += "&lt;"; break;
        case '>': escaped += "&gt;"; break;
        case '&': escaped += "&amp;"; break;
        case '"': escaped += "&quot;"; break;
        case '\'': escaped += "&apos;"; break;
        default: escaped.push_back(ch);
        }
    }
    return escaped;
}

void append_element(std::string &out, std::string_view name, std::string_view text) {
    out += '<';
    out += name;
    out += '>';
    out += xml_escape(text);
    out += "</";
    out += name;
    out += '>';
}

std::string percent_encode(std::string_view text) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string encoded;
    for (const char ch : text) {
        const auto byte = static_cast<unsigned char>(ch);
        if (std::isalnum(byte) || ch == '-' || ch == '_' || ch == '.' || ch == '~') {
            encoded.push_back(ch);
        } else {
            encoded.push_back('%');
            encoded.push_back(kHex[byte >> 4]);
            encoded.push_back(kHex[byte & 0x0F]);
        }
    }
    return encoded;
}

std::vector<Location> unique_by_institution(std::vector<Location> locations) {
    std::set<std::string> seen;
    std::vector<Location> unique;
    for (auto &location : locations)
        if (seen.insert(location.institution_id).second)
            unique.push_back(std::move(location));
    return unique;
}

std::optional<std::chrono::sys_days> parse_day(std::string_view text) {
    int year = 0;
    unsigned month = 0, day = 0;
    if (std::sscanf(std::string(text).c_str(), "%d-%u-%u", &year, &month, &day) != 3)
        return std::nullopt;
    const std::chrono::year_month_day date{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!date.ok())
        return std::nullopt;
    return std::chrono::sys_days{date};
}

class FileLock {
public:
    explicit FileLock(const std::filesystem::path &path) : fd_(::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644)) {
        if (fd_ < 0)
            throw Error("cannot open quota state file " + path.string());
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw Error("cannot lock quota state file " + path.string());
        }
    }
    ~FileLock() { ::close(fd_); }
    FileLock(const FileLock &) = delete;
    FileLock &operator=(const FileLock &) = delete;

    std::string read_all() const {
        std::string contents;
        char buffer[4096];
        ::lseek(fd_, 0, SEEK_SET);
        for (;;) {
            const auto count = ::read(fd_, buffer, sizeof buffer);
            if (count <= 0)
                break;
            contents.append(buffer, static_cast<std::size_t>(count));
        }
        return contents;
    }

    void replace(const std::string &contents) const {
        if (::ftruncate(fd_, 0) != 0 || ::pwrite(fd_, contents.data(), contents.size(), 0) != static_cast<ssize_t>(contents.size()))
            throw Error("cannot write quota state file");
    }

private:
    int fd_;
};

struct StoredQuota {
    std::chrono::sys_days day;
    std::uint64_t used = 0;
};

/// Malformed or missing state is treated as an unused budget for `today`.
StoredQuota decode_quota(const std::string &contents, std::chrono::sys_days today) {
    StoredQuota stored{today, 0};
    const auto object = nlohmann::json::parse(contents, nullptr, false);
    if (object.is_discarded() || !object.is_object())
        return stored;
    const auto day = object.find("day");
    const auto used = object.find("used");
    if (day == object.end() || !day->is_string() || used == object.end() || !used->is_number_unsigned())
        return stored;
    const auto parsed = parse_day(day->get<std::string>());
    if (!parsed || *parsed != today)
        return stored;
    stored.used = used->get<std::uint64_t>();
    return stored;
}

std::string encode_quota(const StoredQuota &quota) {
    nlohmann::ordered_json object;
    object["day"] = format_day(quota.day);
    object["used"] = quota.used;
    return object.dump() + "\n";
}

BookRecord decode_record_fragment(const nlohmann::json &object) {
    if (!object.is_object())
        throw ParseError("record must be an object");
    auto completed = object;
    if (!completed.contains("id"))
        completed["id"] = "";
    if (!completed.contains("title"))
        completed["title"] = "";
    try {
        return codec::decode_record(completed);
    } catch (const Error &error) {
        throw ParseError(std::string("bad record in response: ") + error.what());
    }
}

} // unnamed namespace

std::string format_day(std::chrono::sys_days day) {
    const std::chrono::year_month_day date{day};
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buffer;
}

LocationResponse parse_location_json(std::string_view body) {
    const auto object = nlohmann::json::parse(body, nullptr, false);
    if (object.is_discarded() || !object.is_object())
        throw ParseError("location response is not a JSON object");
    LocationResponse response;
    if (const auto record = object.find("record"); record != object.end() && !record->is_null())
        response.matched_record = decode_record_fragment(*record);
    const auto locations = object.find("locations");
    if (locations == object.end())
        return response;
    if (!locations->is_array())
        throw ParseError("\"locations\" must be an array");
    std::vector<Location> parsed;
    for (const auto &entry : *locations) {
        if (!entry.is_object())
            throw ParseError("location entries must be objects");
        const auto text = [&entry](const char *field) -> std::string {
            const auto value = entry.find(field);
            if (value == entry.end() || !value->is_string())
                throw ParseError(std::string("location field \"") + field + "\" must be a string");
            return value->get<std::string>();
        };
        Location location{text("name"), text("country"), text("institution_id"), std::nullopt, {}};
        if (const auto kind = entry.find("kind"); kind != entry.end() && kind->is_string())
            location.kind = parse_library_kind(kind->get<std::string>());
        if (const auto memberships = entry.find("memberships"); memberships != entry.end() && memberships->is_array())
            for (const auto &tag : *memberships)
                if (tag.is_string())
                    location.memberships.insert(tag.get<std::string>());
        parsed.push_back(std::move(location));
    }
    response.locations = unique_by_institution(std::move(parsed));
    return response;
}

LocationResponse parse_location_xml(std::string_view body) {
    const auto document = xml::Document::parse(body);
    LocationResponse response;
    std::vector<Location> parsed;
    for (const auto child : document.root().children) {
        const auto &element = document.at(child);
        if (element.local_name() == "record") {
            nlohmann::json record = nlohmann::json::object();
            for (const auto field_index : element.children) {
                const auto &field = document.at(field_index);
                const std::string name(field.local_name());
                if (name == "isbn") {
                    record["isbns"].push_back(field.text);
                } else if (name == "contributor") {
                    const auto *role = field.attribute("role");
                    record["contributors"].push_back({field.text, role != nullptr ? *role : "other"});
                } else if (name == "oclc" || name == "year" || name == "citations") {
                    try {
                        record[name] = std::stoull(field.text);
                    } catch (const std::exception &) {
                        throw ParseError("<" + name + "> must be a number");
                    }
                } else {
                    record[name] = field.text;
                }
            }
            response.matched_record = decode_record_fragment(record);
        } else if (element.local_name() == "location") {
            Location location;
            for (const auto field_index : element.children) {
                const auto &field = document.at(field_index);
                const auto name = field.local_name();
                if (name == "name")
                    location.name = field.text;
                else if (name == "country")
                    location.country = field.text;
                else if (name == "institution_id")
                    location.institution_id = field.text;
                else if (name == "kind")
                    location.kind = parse_library_kind(field.text);
                else if (name == "membership")
                    location.memberships.insert(field.text);
            }
            if (location.institution_id.empty())
                throw ParseError("<location> without <institution_id>");
            parsed.push_back(std::move(location));
        }
    }
    response.locations = unique_by_institution(std::move(parsed));
    return response;
}

std::string encode_location_json(const LocationResponse &response) {
    codec::OrderedJson object;
    if (response.matched_record)
        object["record"] = codec::encode_record(*response.matched_record);
    object["locations"] = codec::OrderedJson::array();
    for (const auto &location : response.locations) {
        codec::OrderedJson entry;
        entry["name"] = location.name;
        entry["country"] = location.country;
        entry["institution_id"] = location.institution_id;
        if (location.kind)
            entry["kind"] = std::string(to_string(*location.kind));
        if (!location.memberships.empty())
            entry["memberships"] = location.memberships;
        object["locations"].push_back(std::move(entry));
    }
    return object.dump();
}

std::string encode_location_xml(const LocationResponse &response) {
    std::string out = R"(<?xml version="1.0" encoding="UTF-8"?>)";
    out += "<libraryLocations>";
    if (response.matched_record) {
        const auto &record = *response.matched_record;
        out += "<record>";
        append_element(out, "id", record.record_id);
        if (record.oclc)
            append_element(out, "oclc", std::to_string(record.oclc->value()));
        for (const auto &isbn : record.isbns)
            append_element(out, "isbn", isbn.original_form());
        append_element(out, "title", record.title);
        for (const auto &contributor : record.contributors) {
            out += "<contributor role=\"";
            out += to_string(contributor.role);
            out += "\">";
            out += xml_escape(contributor.name);
            out += "</contributor>";
        }
        if (record.year)
            append_element(out, "year", std::to_string(*record.year));
        if (record.language)
            append_element(out, "lang", *record.language);
        if (record.lc_class)
            append_element(out, "lc", record.lc_class->value());
        append_element(out, "format", to_string(record.format));
        if (record.citations)
            append_element(out, "citations", std::to_string(*record.citations));
        out += "</record>";
    }
    for (const auto &location : response.locations) {
        out += "<location>";
        append_element(out, "name", location.name);
        append_element(out, "country", location.country);
        append_element(out, "institution_id", location.institution_id);
        if (location.kind)
            append_element(out, "kind", to_string(*location.kind));
        for (const auto &tag : location.memberships)
            append_element(out, "membership", tag);
        out += "</location>";
    }
    out += "</libraryLocations>";
    return out;
}

QuotaGuard::QuotaGuard(std::uint64_t limit, std::optional<std::filesystem::path> state_file, Clock clock)
    : limit_(limit), state_file_(std::move(state_file)), clock_(std::move(clock)) {
    memory_state_ = {today(), 0, limit_};
}

std::chrono::sys_days QuotaGuard::today() const { return std::chrono::floor<std::chrono::days>(clock_()); }

void QuotaGuard::charge() {
    std::lock_guard lock(mutex_);
    const auto day = today();
    if (!state_file_) {
        if (memory_state_.day != day)
            memory_state_ = {day, 0, limit_};
        if (memory_state_.used >= limit_)
            throw QuotaError("daily quota of " + std::to_string(limit_) + " requests exhausted for " + format_day(day));
        ++memory_state_.used;
        return;
    }
    const FileLock file(*state_file_);
    auto stored = decode_quota(file.read_all(), day);
    if (stored.used >= limit_)
        throw QuotaError("daily quota of " + std::to_string(limit_) + " requests exhausted for " + format_day(day));
    ++stored.used;
    file.replace(encode_quota(stored));
}

QuotaState QuotaGuard::state() const {
    std::lock_guard lock(mutex_);
    const auto day = today();
    if (!state_file_) {
        if (memory_state_.day != day)
            return {day, 0, limit_};
        return memory_state_;
    }
    const FileLock file(*state_file_);
    const auto stored = decode_quota(file.read_all(), day);
    return {stored.day, std::min(stored.used, limit_), limit_};
}

struct CatalogClient::Connection {
    explicit Connection(const std::string &origin) : client(origin) {}
    httplib::Client client;
};

CatalogClient::CatalogClient(ClientConfig config, Clock clock)
    : config_(std::move(config)), quota_(config_.quota_limit, config_.quota_state_file, std::move(clock)) {
    if (config_.base_url.empty())
        throw Error("catalog client needs a base URL");
    if (config_.max_attempts == 0)
        config_.max_attempts = 1;
    if (config_.parallelism == 0)
        config_.parallelism = 1;
}

CatalogClient::~CatalogClient() = default;

std::unique_ptr<CatalogClient::Connection> CatalogClient::acquire() {
    {
        std::lock_guard lock(pool_mutex_);
        if (!pool_.empty()) {
            auto connection = std::move(pool_.back());
            pool_.pop_back();
            return connection;
        }
    }
    const auto scheme = config_.base_url.find("://");
    const auto path_start = config_.base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    auto connection = std::make_unique<Connection>(config_.base_url.substr(0, path_start));
    if (!connection->client.is_valid())
        throw TransportError("unsupported base URL " + config_.base_url);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
    connection->client.set_connection_timeout(seconds.count(), micros.count());
    connection->client.set_read_timeout(seconds.count(), micros.count());
    connection->client.set_keep_alive(true);
    connection->client.set_tcp_nodelay(true);
    return connection;
}

void CatalogClient::release(std::unique_ptr<Connection> connection) {
    std::lock_guard lock(pool_mutex_);
    pool_.push_back(std::move(connection));
}

LocationResponse CatalogClient::fetch(const std::string &path) {
    const auto scheme = config_.base_url.find("://");
    const auto path_start = config_.base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    std::string target = path_start == std::string::npos ? std::string() : config_.base_url.substr(path_start);
    while (!target.empty() && target.back() == '/')
        target.pop_back();
    target += path;
    char separator = '?';
    for (const auto &[key, value] : config_.extra_query) {
        target += separator + percent_encode(key) + "=" + percent_encode(value);
        separator = '&';
    }

    httplib::Headers headers{{"Accept", config_.prefer_xml ? "application/xml" : "application/json"}};
    if (!config_.api_key.empty())
        headers.emplace(config_.api_key_header, config_.api_key);

    std::string last_error;
    int last_status = 0;
    for (unsigned attempt = 0; attempt < config_.max_attempts; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(config_.initial_backoff * (1u << std::min(attempt - 1, 16u)));
        quota_.charge();
        auto connection = acquire();
        const auto result = connection->client.Get(target, headers);
        if (!result) {
            last_error = "request to " + target + " failed: " + httplib::to_string(result.error());
            last_status = 0;
            continue; // drop the connection
        }
        release(std::move(connection));
        const int status = result->status;
        if (status == 404)
            return {};
        if (status >= 500) {
            last_error = "server answered " + std::to_string(status) + " for " + target;
            last_status = status;
            continue;
        }
        if (status != 200)
            throw TransportError("server answered " + std::to_string(status) + " for " + target, status);
        const auto content_type = result->get_header_value("Content-Type");
        try {
            if (content_type.find("xml") != std::string::npos)
                return parse_location_xml(result->body);
            return parse_location_json(result->body);
        } catch (const ParseError &error) {
            throw TransportError("malformed response for " + target + ": " + error.what(), status);
        }
    }
    throw TransportError(last_error, last_status);
}

LocationResponse CatalogClient::get_by_oclc_number(OclcNumber number) {
    return fetch("/content/libraries/" + std::to_string(number.value()));
}

LocationResponse CatalogClient::get_by_isbn(const Isbn &isbn) {
    return fetch("/content/libraries/isbn/" + isbn.digits());
}

LocationResponse CatalogClient::get_by_issn(std::string_view issn) {
    return fetch("/content/libraries/issn/" + percent_encode(issn));
}

LocationResponse CatalogClient::get_by_standard_number(std::string_view standard_number) {
    return fetch("/content/libraries/sn/" + percent_encode(standard_number));
}

HarvestResult harvest(CatalogClient &client, std::span<const BookRecord> records) {
    enum class Outcome { pending, skipped, fetched, quota, transport };
    struct Slot {
        Outcome outcome = Outcome::pending;
        LocationResponse response;
        std::string reason;
    };
    std::vector<Slot> slots(records.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    const auto work = [&] {
        for (;;) {
            if (stop.load())
                return;
            const auto index = next.fetch_add(1);
            if (index >= records.size())
                return;
            const auto &record = records[index];
            auto &slot = slots[index];
            if (!record.oclc && record.isbns.empty()) {
                slot.outcome = Outcome::skipped;
                slot.reason = "no OCLC number or ISBN";
                continue;
            }
            try {
                slot.response = record.oclc ? client.get_by_oclc_number(*record.oclc)
                                            : client.get_by_isbn(record.isbns.front());
                slot.outcome = Outcome::fetched;
            } catch (const QuotaError &error) {
                slot.outcome = Outcome::quota;
                slot.reason = error.what();
                stop.store(true);
            } catch (const Error &error) {
                slot.outcome = Outcome::transport;
                slot.reason = error.what();
            }
        }
    };

    const unsigned workers = std::min<std::size_t>(client.config().parallelism, std::max<std::size_t>(records.size(), 1));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> threads;
        for (unsigned i = 0; i < workers; ++i)
            threads.emplace_back(work);
    }

    HarvestResult result;
    std::set<std::string> known_libraries;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &record = records[i];
        auto &slot = slots[i];
        switch (slot.outcome) {
        case Outcome::pending:
            result.issues.push_back({record.record_id, "not attempted: quota exhausted"});
            break;
        case Outcome::skipped:
            result.issues.push_back({record.record_id, slot.reason});
            break;
        case Outcome::quota:
            result.quota_exhausted = true;
            result.issues.push_back({record.record_id, slot.reason});
            break;
        case Outcome::transport:
            result.transport_failed = true;
            result.issues.push_back({record.record_id, slot.reason});
            break;
        case Outcome::fetched:
            result.harvested_record_ids.push_back(record.record_id);
            result.delta.records.push_back(record);
            for (const auto &location : slot.response.locations) {
                if (known_libraries.insert(location.institution_id).second)
                    result.delta.libraries.push_back({location.institution_id, location.name, location.country,
                                                      location.kind.value_or(LibraryKind::other), location.memberships});
                result.delta.holdings.push_back({record.record_id, location.institution_id, Channel::unspecified});
            }
            break;
        }
    }
    return result;
}

} // namespace lca
