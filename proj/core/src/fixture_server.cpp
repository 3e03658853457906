/** \file  fixture_server.cpp
 *  \brief In-process HTTP server replaying a snapshot over the library-locations paths.
 */
#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include <httplib.h>

#include "lca/catalog_client.hpp"
#include "lca/errors.hpp"
#include "lca/identifiers.hpp"

namespace lca {

namespace {

bool all_digits(std::string_view text) {
    return !text.empty() && std::all_of(text.begin(), text.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

std::optional<std::uint64_t> parse_positive(std::string_view text) {
    if (!all_digits(text) || text.size() > 18)
        return std::nullopt;
    std::uint64_t value = 0;
    for (const char ch : text)
        value = value * 10 + static_cast<std::uint64_t>(ch - '0');
    if (value == 0)
        return std::nullopt;
    return value;
}

bool valid_issn(std::string_view raw) {
    std::string compact;
    for (const char ch : raw)
        if (ch != '-')
            compact.push_back(ch);
    if (compact.size() != 8 || !all_digits(std::string_view(compact).substr(0, 7)))
        return false;
    int sum = 0;
    for (int i = 0; i < 7; ++i)
        sum += (8 - i) * (compact[static_cast<std::size_t>(i)] - '0');
    const int check = (11 - sum % 11) % 11;
    const char expected = check == 10 ? 'X' : static_cast<char>('0' + check);
    return std::toupper(static_cast<unsigned char>(compact[7])) == expected;
}

} // unnamed namespace

struct FixtureServer::Impl {
    CatalogSnapshot dataset;
    std::map<std::uint64_t, std::vector<std::size_t>> by_oclc;
    std::map<std::string, std::vector<std::size_t>> by_isbn;
    httplib::Server server;
    std::thread listener;
    int port = 0;
    std::string host;
    std::atomic<std::uint64_t> requests{0};
    std::atomic<unsigned> pending_failures{0};
    std::atomic<int> failure_status{503};

    LocationResponse lookup(const std::vector<std::size_t> &record_indices) const {
        LocationResponse response;
        if (record_indices.empty())
            return response;
        response.matched_record = dataset.records()[record_indices.front()];
        std::set<std::size_t> holders;
        for (const auto index : record_indices)
            for (const auto library : dataset.holders_of(index))
                holders.insert(library);
        std::vector<const LibraryOrg *> libraries;
        for (const auto library : holders)
            libraries.push_back(&dataset.libraries()[library]);
        std::sort(libraries.begin(), libraries.end(),
                  [](const LibraryOrg *a, const LibraryOrg *b) { return a->library_id < b->library_id; });
        for (const auto *library : libraries)
            response.locations.push_back({library->name, library->country, library->library_id, library->kind,
                                          library->memberships});
        return response;
    }

    void respond(const httplib::Request &request, httplib::Response &reply, const std::vector<std::size_t> *matches) const {
        if (matches == nullptr || matches->empty()) {
            reply.status = 404;
            reply.set_content(R"({"locations":[]})", "application/json");
            return;
        }
        const auto response = lookup(*matches);
        if (request.get_header_value("Accept").find("xml") != std::string::npos)
            reply.set_content(encode_location_xml(response), "application/xml");
        else
            reply.set_content(encode_location_json(response), "application/json");
    }

    const std::vector<std::size_t> *find_oclc(std::uint64_t number) const {
        const auto match = by_oclc.find(number);
        return match == by_oclc.end() ? nullptr : &match->second;
    }

    const std::vector<std::size_t> *find_isbn(const std::string &digits) const {
        const auto match = by_isbn.find(digits);
        return match == by_isbn.end() ? nullptr : &match->second;
    }

    static void bad_request(httplib::Response &reply, const std::string &what) {
        reply.status = 400;
        reply.set_content(what, "text/plain");
    }
};

FixtureServer::FixtureServer(CatalogSnapshot dataset, const std::string &host, int port) : impl_(std::make_unique<Impl>()) {
    auto &impl = *impl_;
    impl.dataset = std::move(dataset);
    impl.host = host;
    const auto records = impl.dataset.records();
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].oclc)
            impl.by_oclc[records[i].oclc->value()].push_back(i);
        for (const auto &isbn : records[i].isbns)
            impl.by_isbn[isbn.digits()].push_back(i);
    }

    impl.server.set_keep_alive_max_count(1u << 20);
    impl.server.set_pre_routing_handler([&impl](const httplib::Request &, httplib::Response &reply) {
        impl.requests.fetch_add(1);
        unsigned remaining = impl.pending_failures.load();
        while (remaining > 0 && !impl.pending_failures.compare_exchange_weak(remaining, remaining - 1)) {
        }
        if (remaining > 0) {
            reply.status = impl.failure_status.load();
            reply.set_content("injected failure", "text/plain");
            return httplib::Server::HandlerResponse::Handled;
        }
        return httplib::Server::HandlerResponse::Unhandled;
    });

    impl.server.Get(R"(/content/libraries/isbn/([^/]+))", [&impl](const httplib::Request &request, httplib::Response &reply) {
        const auto isbn = try_normalize_isbn(request.matches[1].str());
        if (!isbn)
            return Impl::bad_request(reply, "malformed ISBN");
        impl.respond(request, reply, impl.find_isbn(isbn->digits()));
    });
    impl.server.Get(R"(/content/libraries/issn/([^/]+))", [&impl](const httplib::Request &request, httplib::Response &reply) {
        if (!valid_issn(request.matches[1].str()))
            return Impl::bad_request(reply, "malformed ISSN");
        impl.respond(request, reply, nullptr); // serials are not modelled
    });
    impl.server.Get(R"(/content/libraries/sn/([^/]+))", [&impl](const httplib::Request &request, httplib::Response &reply) {
        const auto number = request.matches[1].str();
        if (const auto isbn = try_normalize_isbn(number))
            return impl.respond(request, reply, impl.find_isbn(isbn->digits()));
        if (const auto oclc = parse_positive(number))
            return impl.respond(request, reply, impl.find_oclc(*oclc));
        impl.respond(request, reply, nullptr);
    });
    impl.server.Get(R"(/content/libraries/([^/]+))", [&impl](const httplib::Request &request, httplib::Response &reply) {
        const auto oclc = parse_positive(request.matches[1].str());
        if (!oclc)
            return Impl::bad_request(reply, "malformed OCLC number");
        impl.respond(request, reply, impl.find_oclc(*oclc));
    });

    // SO_REUSEPORT would let a second server share a port that is already listening
    impl.server.set_tcp_nodelay(true);
    impl.server.set_keep_alive_max_count(1000);
    impl.server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char *>(&yes), sizeof yes);
    });
    if (port == 0) {
        impl.port = impl.server.bind_to_any_port(host);
        if (impl.port <= 0)
            throw StartupError("cannot bind fixture server on " + host);
    } else {
        if (!impl.server.bind_to_port(host, port))
            throw StartupError("cannot bind fixture server on " + host + ":" + std::to_string(port));
        impl.port = port;
    }
    impl.listener = std::thread([&impl] { impl.server.listen_after_bind(); });
    impl.server.wait_until_ready();
}

FixtureServer::~FixtureServer() { stop(); }

int FixtureServer::port() const { return impl_->port; }

std::string FixtureServer::base_url() const { return "http://" + impl_->host + ":" + std::to_string(impl_->port); }

std::uint64_t FixtureServer::request_count() const { return impl_->requests.load(); }

void FixtureServer::inject_failures(unsigned count, int status) {
    impl_->failure_status.store(status);
    impl_->pending_failures.store(count);
}

void FixtureServer::stop() {
    impl_->server.stop();
    if (impl_->listener.joinable())
        impl_->listener.join();
}

std::unique_ptr<FixtureServer> serve_fixture(CatalogSnapshot dataset, const std::string &host, int port) {
    return std::make_unique<FixtureServer>(std::move(dataset), host, port);
}

} // namespace lca
