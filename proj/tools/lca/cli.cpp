/** \file  cli.cpp
 *  \brief Command implementations for the `lca` tool.
 */
#include "cli.hpp"

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <pthread.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "lca/catalog_client.hpp"
#include "lca/errors.hpp"
#include "lca/identifiers.hpp"
#include "lca/indicators.hpp"
#include "lca/ingest.hpp"
#include "lca/rounding.hpp"
#include "lca/stats.hpp"
#include "table.hpp"

namespace lca::cli {

namespace {

/// Carries an exit code out of a command.
class Failure : public std::runtime_error {
public:
    Failure(int code, const std::string &what) : std::runtime_error(what), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

std::vector<std::string> split(std::string_view text, char separator) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto end = text.find(separator, start);
        parts.emplace_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos)
            return parts;
        start = end + 1;
    }
}

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string_view::npos)
        return {};
    const auto last = text.find_last_not_of(" \t");
    return std::string(text.substr(first, last - first + 1));
}

std::string read_file(const std::string &path) {
    std::ifstream input(path, std::ios::binary);
    if (!input)
        throw Failure(kInputError, "cannot read " + path);
    std::ostringstream contents;
    contents << input.rdbuf();
    if (input.bad())
        throw Failure(kInputError, "cannot read " + path);
    return contents.str();
}

struct GlobalOptions {
    std::string dataset;
    std::string filter;
    std::string output = "csv";
};

OutputFormat output_format(const std::string &name) {
    if (name == "md")
        return OutputFormat::md;
    if (name == "jsonl")
        return OutputFormat::jsonl;
    return OutputFormat::csv;
}

const std::string &require_dataset_path(const GlobalOptions &global) {
    if (global.dataset.empty())
        throw UsageError("--dataset is required");
    return global.dataset;
}

CatalogSnapshot load_existing(const std::string &path) {
    try {
        return load_dataset(path);
    } catch (const Error &error) {
        throw Failure(kInputError, error.what());
    }
}

CatalogSnapshot load_or_empty(const std::string &path) {
    if (!std::filesystem::exists(path))
        return CatalogSnapshot();
    return load_existing(path);
}

void save(const CatalogSnapshot &snapshot, const std::string &path) {
    try {
        save_dataset(snapshot, path);
    } catch (const std::exception &error) {
        throw Failure(kInputError, error.what());
    }
}

/// Per-record values for the metrics a command can use.
struct MetricColumns {
    std::vector<std::string> names;
    std::map<std::string, std::vector<std::optional<double>>> values;
};

MetricColumns collect_metrics(const IndicatorContext &context, const std::string &metrics_file) {
    const auto records = context.snapshot().records();
    MetricColumns columns;
    columns.names = {"libcitations", "citations"};
    auto &holdings = columns.values["libcitations"];
    auto &citations = columns.values["citations"];
    for (std::size_t i = 0; i < records.size(); ++i) {
        holdings.push_back(static_cast<double>(context.libcitations_at(i)));
        citations.push_back(records[i].citations ? std::optional<double>(static_cast<double>(*records[i].citations))
                                                 : std::nullopt);
    }
    if (metrics_file.empty())
        return columns;

    std::vector<std::vector<std::string>> rows;
    try {
        rows = read_csv(read_file(metrics_file));
    } catch (const ParseError &error) {
        throw Failure(kInputError, metrics_file + ": " + error.what());
    }
    if (rows.empty() || rows.front().empty() || trim(rows.front().front()) != "record_id")
        throw Failure(kInputError, metrics_file + ": first column must be record_id");
    const auto header = rows.front();
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto name = trim(header[c]);
        if (name.empty() || columns.values.contains(name))
            throw Failure(kInputError, metrics_file + ": bad or duplicate metric column \"" + name + "\"");
        columns.names.push_back(name);
        columns.values[name].assign(records.size(), std::nullopt);
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto &row = rows[r];
        if (row.size() == 1 && trim(row.front()).empty())
            continue;
        const auto index = context.snapshot().record_index(trim(row.front()));
        if (!index)
            continue;
        for (std::size_t c = 1; c < header.size() && c < row.size(); ++c) {
            const auto cell = trim(row[c]);
            if (cell.empty())
                continue;
            try {
                std::size_t used = 0;
                const double value = std::stod(cell, &used);
                if (used != cell.size())
                    throw std::invalid_argument(cell);
                columns.values[trim(header[c])][*index] = value;
            } catch (const std::exception &) {
                throw Failure(kInputError, metrics_file + ": non-numeric value \"" + cell + "\" on line " + std::to_string(r + 1));
            }
        }
    }
    return columns;
}

std::map<std::string, AggregateUnit> load_units(const std::string &path) {
    std::map<std::string, AggregateUnit> units;
    if (path.empty())
        return units;
    std::istringstream lines(read_file(path));
    std::string line;
    std::size_t number = 0;
    while (std::getline(lines, line)) {
        ++number;
        if (trim(line).empty())
            continue;
        const auto object = nlohmann::json::parse(line, nullptr, false);
        if (object.is_discarded() || !object.is_object() || !object.contains("id") || !object["id"].is_string())
            throw Failure(kInputError, path + ": line " + std::to_string(number) + ": expected {\"id\":…,\"label\":…,\"members\":[…]}");
        AggregateUnit unit;
        unit.unit_id = object["id"].get<std::string>();
        unit.label = object.value("label", unit.unit_id);
        if (const auto members = object.find("members"); members != object.end() && members->is_array())
            for (const auto &member : *members)
                if (member.is_string())
                    unit.member_record_ids.insert(member.get<std::string>());
        units[unit.unit_id] = std::move(unit);
    }
    return units;
}

AggregateUnit resolve_unit(const std::string &id, const std::map<std::string, AggregateUnit> &units,
                           const CatalogSnapshot &snapshot) {
    AggregateUnit unit;
    if (id == "all") {
        unit = whole_database_unit(snapshot);
    } else if (id.starts_with("class:")) {
        const auto code = trim(std::string_view(id).substr(6));
        unit = {id, code, {}};
        for (const auto &record : snapshot.records())
            if (record.lc_class && record.lc_class->value() == code)
                unit.member_record_ids.insert(record.record_id);
    } else if (const auto match = units.find(id); match != units.end()) {
        unit = match->second;
    } else {
        throw Failure(kUnresolvedUnit, "unknown unit \"" + id + "\"");
    }
    if (unit.member_record_ids.empty())
        throw Failure(kUnresolvedUnit, "unit \"" + id + "\" has no member titles");
    for (const auto &member : unit.member_record_ids)
        if (!snapshot.record_index(member))
            throw Failure(kUnresolvedUnit, "unit \"" + id + "\" references unknown record " + member);
    return unit;
}

std::string rate(std::optional<double> value) { return value ? format_fixed(*value, 4) : std::string(); }

// --- commands ---------------------------------------------------------------------------------

struct IngestOptions {
    std::string input;
    std::string format;
};

int cmd_ingest(const GlobalOptions &global, const IngestOptions &options, std::ostream &out, std::ostream &err) {
    const auto &dataset_path = require_dataset_path(global);
    const auto text = read_file(options.input);

    SnapshotDelta delta;
    ParseReport report;
    try {
        if (options.format == "jsonl") {
            std::istringstream stream(text);
            const auto incoming = read_dataset(stream);
            delta.records.assign(incoming.records().begin(), incoming.records().end());
            delta.libraries.assign(incoming.libraries().begin(), incoming.libraries().end());
            delta.holdings.assign(incoming.holdings().begin(), incoming.holdings().end());
            report.accepted = delta.records.size() + delta.libraries.size() + delta.holdings.size();
        } else {
            auto parsed = options.format == "dublincore" ? parse_dublin_core(text) : parse_marc_xml(text);
            delta.records = std::move(parsed.records);
            report = std::move(parsed.report);
        }
    } catch (const Error &error) {
        throw Failure(kInputError, options.input + ": " + error.what());
    }

    out << "accepted=" << report.accepted << " rejected=" << report.rejected << '\n';
    for (const auto &rejection : report.rejections)
        err << rejection.locator << ": " << rejection.reason << '\n';
    if (report.accepted == 0)
        return kNothingToDo;

    try {
        save(merge_snapshot(load_or_empty(dataset_path), delta), dataset_path);
    } catch (const IntegrityError &error) {
        throw Failure(kInputError, error.what());
    }
    return kOk;
}

struct FetchOptions {
    std::vector<std::string> isbns;
    std::vector<std::uint64_t> oclcs;
    bool all = false;
    std::string base_url;
    std::string api_key;
    std::string api_key_header = "wskey";
    std::uint64_t quota = 50'000;
    std::string quota_state;
    unsigned parallelism = 1;
    unsigned retries = 3;
    unsigned backoff_ms = 500;
    bool xml = false;
    std::vector<std::string> query;
};

int cmd_fetch(const GlobalOptions &global, const FetchOptions &options, std::ostream &out, std::ostream &err) {
    const auto &dataset_path = require_dataset_path(global);
    if (!options.all && options.isbns.empty() && options.oclcs.empty())
        throw UsageError("fetch needs --isbn, --oclc or --all");
    if (options.base_url.empty())
        throw UsageError("fetch needs --base-url or LCA_BASE_URL");
    const auto filter = parse_filter_spec(global.filter);

    std::set<std::string> wanted_isbns;
    for (const auto &raw : options.isbns) {
        const auto isbn = try_normalize_isbn(raw);
        if (!isbn)
            throw UsageError("invalid ISBN " + raw);
        wanted_isbns.insert(isbn->digits());
    }
    const std::set<std::uint64_t> wanted_oclcs(options.oclcs.begin(), options.oclcs.end());

    const auto snapshot = load_or_empty(dataset_path);
    std::vector<BookRecord> selected;
    for (const auto &record : snapshot.records()) {
        bool match = options.all || (record.oclc && wanted_oclcs.contains(record.oclc->value()));
        for (const auto &isbn : record.isbns)
            match = match || wanted_isbns.contains(isbn.digits());
        if (match)
            selected.push_back(record);
    }
    if (selected.empty()) {
        out << "0 fetched\n";
        return kOk;
    }

    ClientConfig config;
    config.base_url = options.base_url;
    config.api_key = options.api_key;
    config.api_key_header = options.api_key_header;
    config.quota_limit = options.quota;
    if (!options.quota_state.empty())
        config.quota_state_file = options.quota_state;
    config.parallelism = std::max(options.parallelism, 1u);
    config.max_attempts = std::max(options.retries, 1u);
    config.initial_backoff = std::chrono::milliseconds(options.backoff_ms);
    config.prefer_xml = options.xml;
    for (const auto &pair : options.query) {
        const auto equals = pair.find('=');
        if (equals == std::string::npos)
            throw UsageError("--query expects key=value, got " + pair);
        config.extra_query[pair.substr(0, equals)] = pair.substr(equals + 1);
    }

    std::unique_ptr<CatalogClient> client;
    try {
        client = std::make_unique<CatalogClient>(config);
    } catch (const Error &error) {
        throw Failure(kInputError, error.what());
    }
    auto result = harvest(*client, selected);

    SnapshotDelta delta;
    delta.records = std::move(result.delta.records);
    std::set<std::string> admitted;
    for (auto &library : result.delta.libraries)
        if (filter.admits(library)) {
            admitted.insert(library.library_id);
            delta.libraries.push_back(std::move(library));
        }
    for (auto &holding : result.delta.holdings)
        if (admitted.contains(holding.library_id) && filter.admits(holding.channel))
            delta.holdings.push_back(std::move(holding));

    const auto merged = merge_snapshot(snapshot, delta);
    save(merged, dataset_path);

    const auto quota = client->quota();
    out << result.harvested_record_ids.size() << " fetched, " << delta.holdings.size() << " holdings, "
        << delta.libraries.size() << " libraries; quota " << quota.used << "/" << quota.limit << " used on "
        << format_day(quota.day) << '\n';
    for (const auto &issue : result.issues)
        err << issue.record_id << ": " << issue.reason << '\n';
    if (result.quota_exhausted)
        return kQuotaExhausted;
    if (result.transport_failed)
        return kInputError;
    return kOk;
}

struct IndicatorOptions {
    std::vector<std::string> units;
    std::string units_file;
    std::string benchmark;
    bool all_books = false;
    bool authors = false;
    std::vector<std::string> author_headings;
};

int cmd_indicators(const GlobalOptions &global, const IndicatorOptions &options, std::ostream &out, std::ostream &) {
    const int modes = static_cast<int>(!options.units.empty()) + static_cast<int>(options.all_books)
                      + static_cast<int>(options.authors || !options.author_headings.empty());
    if (modes != 1)
        throw UsageError("choose exactly one of --unit, --all-books, --authors/--author");
    const auto filter = parse_filter_spec(global.filter);
    const auto snapshot = load_existing(require_dataset_path(global));
    const IndicatorContext context(snapshot, filter);

    Table table;
    if (!options.units.empty()) {
        const auto defined = load_units(options.units_file);
        std::optional<AggregateUnit> benchmark;
        const bool self_benchmark = options.benchmark == "self";
        if (!options.benchmark.empty() && !self_benchmark)
            benchmark = resolve_unit(options.benchmark, defined, snapshot);

        std::vector<IndicatorReport> reports;
        for (const auto &id : options.units) {
            const auto unit = resolve_unit(id, defined, snapshot);
            auto report = context.report(unit);
            try {
                if (self_benchmark)
                    report.rcir = context.rcir(unit, unit);
                else if (benchmark)
                    report.rcir = context.rcir(unit, *benchmark);
            } catch (const UndefinedRateError &) {
                report.rcir.reset();
            }
            reports.push_back(std::move(report));
        }
        std::stable_sort(reports.begin(), reports.end(), [](const IndicatorReport &a, const IndicatorReport &b) {
            if (a.ci != b.ci)
                return a.ci > b.ci;
            return a.label < b.label;
        });
        table.title = "units";
        table.columns = {{"unit_id"}, {"label"}, {"titles", true}, {"ci", true}, {"cir", true}, {"rcir", true}, {"dr", true}};
        for (const auto &report : reports)
            table.rows.push_back({report.unit_id, report.label, std::to_string(report.n_titles), std::to_string(report.ci),
                                  format_fixed(report.cir, 4), rate(report.rcir), rate(report.dr)});
    } else if (options.all_books) {
        const auto records = context.snapshot().records();
        std::vector<std::size_t> order(records.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (context.libcitations_at(a) != context.libcitations_at(b))
                return context.libcitations_at(a) > context.libcitations_at(b);
            if (records[a].title != records[b].title)
                return records[a].title < records[b].title;
            return records[a].record_id < records[b].record_id;
        });
        table.title = "books";
        table.columns = {{"record_id"}, {"title"},         {"libcitations", true}, {"cnls", true},
                         {"lc_class"},  {"rank", true},    {"class_size", true}};
        for (const auto index : order) {
            const auto book = context.book_indicators(index);
            const auto &record = records[index];
            table.rows.push_back({book.record_id, record.title, std::to_string(book.libcitations), rate(book.cnls),
                                  record.lc_class ? record.lc_class->value() : std::string(),
                                  book.rank_in_class ? std::to_string(book.rank_in_class->rank) : std::string(),
                                  book.rank_in_class ? std::to_string(book.rank_in_class->class_size) : std::string()});
        }
    } else {
        std::vector<AuthorProfile> profiles;
        if (options.authors) {
            profiles = context.author_ranking();
        } else {
            for (const auto &heading : options.author_headings) {
                try {
                    profiles.push_back(context.author_profile(heading));
                } catch (const NotFoundError &error) {
                    throw Failure(kUnresolvedUnit, error.what());
                }
            }
            std::stable_sort(profiles.begin(), profiles.end(), [](const AuthorProfile &a, const AuthorProfile &b) {
                if (a.library_holdings != b.library_holdings)
                    return a.library_holdings > b.library_holdings;
                return a.heading < b.heading;
            });
        }
        table.title = "authors";
        table.columns = {{"author"}, {"works", true}, {"publications", true}, {"library_holdings", true}};
        for (const auto &profile : profiles)
            table.rows.push_back({profile.heading, std::to_string(profile.works), std::to_string(profile.publications),
                                  std::to_string(profile.library_holdings)});
    }
    render(table, output_format(global.output), out);
    return kOk;
}

struct CorrelateOptions {
    std::string x;
    std::string y;
    bool matrix = false;
    std::vector<std::string> metrics;
    std::string metrics_file;
};

int cmd_correlate(const GlobalOptions &global, const CorrelateOptions &options, std::ostream &out, std::ostream &err) {
    if (!options.matrix && (options.x.empty() || options.y.empty()))
        throw UsageError("correlate needs --x and --y, or --matrix");
    const auto filter = parse_filter_spec(global.filter);
    const auto snapshot = load_existing(require_dataset_path(global));
    const IndicatorContext context(snapshot, filter);
    const auto columns = collect_metrics(context, options.metrics_file);
    const auto column = [&columns](const std::string &name) -> const std::vector<std::optional<double>> & {
        const auto match = columns.values.find(name);
        if (match == columns.values.end())
            throw UsageError("unknown metric \"" + name + "\"");
        return match->second;
    };

    Table table;
    if (!options.matrix) {
        const auto &xs = column(options.x);
        const auto &ys = column(options.y);
        std::vector<double> x, y;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (xs[i] && ys[i]) {
                x.push_back(*xs[i]);
                y.push_back(*ys[i]);
            }
        const auto n = x.size();
        double rho = 0.0;
        try {
            rho = spearman(PairedSample(std::move(x), std::move(y)));
        } catch (const Error &error) {
            throw Failure(kUndefinedCorrelation, options.x + " vs " + options.y + ": " + error.what());
        }
        table.title = "spearman";
        table.columns = {{"x"}, {"y"}, {"n", true}, {"spearman", true}};
        table.rows.push_back({options.x, options.y, std::to_string(n), format_fixed(rho, 4)});
        render(table, output_format(global.output), out);
        return kOk;
    }

    const auto names = options.metrics.empty() ? columns.names : options.metrics;
    std::vector<NamedColumn> selected;
    for (const auto &name : names)
        selected.push_back({name, column(name)});
    CorrelationMatrix matrix;
    try {
        matrix = correlation_matrix(selected);
    } catch (const Error &error) {
        throw Failure(kUndefinedCorrelation, error.what());
    }
    table.title = "spearman_matrix";
    table.columns.push_back({"metric"});
    for (const auto &label : matrix.labels)
        table.columns.push_back({label, true});
    for (std::size_t a = 0; a < matrix.labels.size(); ++a) {
        std::vector<std::string> row{matrix.labels[a]};
        for (std::size_t b = 0; b < matrix.labels.size(); ++b)
            row.push_back(matrix.values[a][b] ? format_fixed(*matrix.values[a][b], 4) : "NA");
        table.rows.push_back(std::move(row));
    }
    render(table, output_format(global.output), out);
    if (matrix.complete())
        return kOk;
    for (std::size_t a = 0; a < matrix.labels.size(); ++a)
        for (std::size_t b = a; b < matrix.labels.size(); ++b)
            if (!matrix.values[a][b])
                err << matrix.labels[a] << " vs " << matrix.labels[b] << ": " << matrix.reasons[a][b] << '\n';
    return kUndefinedCorrelation;
}

struct ReportOptions {
    std::string metrics_file;
};

int cmd_report(const GlobalOptions &global, const ReportOptions &options, std::ostream &out, std::ostream &) {
    const auto filter = parse_filter_spec(global.filter);
    const auto snapshot = load_existing(require_dataset_path(global));
    if (snapshot.records().empty() && snapshot.libraries().empty())
        throw Failure(kNothingToDo, "dataset is empty");
    const IndicatorContext context(snapshot, filter);

    std::vector<Table> tables;
    const auto composition = composition_report(context.snapshot());
    Table libraries{"composition",
                    {{"country"}, {"academic", true}, {"academic_share", true}, {"public", true}, {"public_share", true},
                     {"other", true}, {"other_share", true}, {"total", true}, {"total_share", true}},
                    {}};
    for (const auto &row : composition.rows) {
        std::vector<std::string> cells{row.country};
        for (const auto column : {kAcademic, kPublic, kOther, kTotal}) {
            cells.push_back(std::to_string(row.counts[column]));
            cells.push_back(composition.share(row, column));
        }
        libraries.rows.push_back(std::move(cells));
    }
    tables.push_back(std::move(libraries));

    if (!context.snapshot().records().empty()) {
        const auto columns = collect_metrics(context, options.metrics_file);
        std::vector<NamedMetric> metrics;
        for (const auto &name : columns.names) {
            const auto *values = &columns.values.at(name);
            metrics.push_back({name, [values](const BookRecord &, std::size_t index) { return (*values)[index]; }});
        }
        Table coverage{"coverage", {{"metric"}, {"records", true}, {"nonzero", true}, {"coverage", true}}, {}};
        for (const auto &row : coverage_report(context.snapshot(), metrics))
            coverage.rows.push_back({row.metric, std::to_string(row.total), std::to_string(row.nonzero), row.percentage()});
        tables.push_back(std::move(coverage));
    }
    render(tables, output_format(global.output), out);
    return kOk;
}

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
};

int cmd_serve_fixture(const GlobalOptions &global, const ServeOptions &options, std::ostream &out, std::ostream &) {
    const auto snapshot = load_existing(require_dataset_path(global));
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::unique_ptr<FixtureServer> server;
    try {
        server = serve_fixture(snapshot, options.host, options.port);
    } catch (const StartupError &error) {
        throw Failure(kInputError, error.what());
    }
    out << "serving " << snapshot.records().size() << " records at " << server->base_url() << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    server->stop();
    out << "stopped after " << server->request_count() << " requests\n";
    return kOk;
}

} // unnamed namespace

LibraryFilter parse_filter_spec(std::string_view spec) {
    LibraryFilter filter;
    for (const auto &clause : split(spec, ';')) {
        if (trim(clause).empty())
            continue;
        const auto equals = clause.find('=');
        if (equals == std::string::npos)
            throw UsageError("filter clause \"" + clause + "\" lacks '='");
        const auto key = trim(std::string_view(clause).substr(0, equals));
        std::set<std::string> values;
        for (const auto &value : split(std::string_view(clause).substr(equals + 1), ','))
            if (!trim(value).empty())
                values.insert(trim(value));
        if (key == "country") {
            filter.countries = values;
        } else if (key == "member") {
            filter.required_memberships = values;
        } else if (key == "kind") {
            std::set<LibraryKind> kinds;
            for (const auto &value : values) {
                const auto kind = parse_library_kind(value);
                if (!kind)
                    throw UsageError("unknown library kind \"" + value + "\"");
                kinds.insert(*kind);
            }
            filter.kinds = kinds;
        } else if (key == "exclude-channel") {
            std::set<Channel> channels;
            for (const auto &value : values) {
                const auto channel = parse_channel(value);
                if (!channel)
                    throw UsageError("unknown acquisition channel \"" + value + "\"");
                channels.insert(*channel);
            }
            filter.excluded_channels = channels;
        } else {
            throw UsageError("unknown filter key \"" + key + "\"");
        }
    }
    return filter;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Library catalog analysis: holdings-based indicators for books", "lca"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--dataset", global.dataset, "Canonical dataset file (JSON lines)");
    app.add_option("--filter", global.filter, "Library filter, e.g. \"country=US,GB;kind=academic;member=ARL\"");
    app.add_option("--output", global.output, "Output format")->check(CLI::IsMember({"csv", "md", "jsonl"}));

    IngestOptions ingest;
    auto *ingest_command = app.add_subcommand("ingest", "Parse records and merge them into the dataset");
    ingest_command->add_option("--input", ingest.input, "File to ingest")->required();
    ingest_command->add_option("--format", ingest.format, "Input format")
        ->required()
        ->check(CLI::IsMember({"dublincore", "marcxml", "jsonl"}));

    FetchOptions fetch;
    auto *fetch_command = app.add_subcommand("fetch", "Harvest holdings from a library-locations API");
    fetch_command->add_option("--isbn", fetch.isbns, "Select records by ISBN");
    fetch_command->add_option("--oclc", fetch.oclcs, "Select records by OCLC number");
    fetch_command->add_flag("--all", fetch.all, "Select every record");
    fetch_command->add_option("--base-url", fetch.base_url, "API base URL")->envname("LCA_BASE_URL");
    fetch_command->add_option("--api-key", fetch.api_key, "API key")->envname("LCA_API_KEY");
    fetch_command->add_option("--api-key-header", fetch.api_key_header, "Header carrying the API key")
        ->envname("LCA_API_KEY_HEADER")
        ->capture_default_str();
    fetch_command->add_option("--quota", fetch.quota, "Requests allowed per UTC day")->envname("LCA_QUOTA")->capture_default_str();
    fetch_command->add_option("--quota-state", fetch.quota_state, "File sharing the daily budget across runs")
        ->envname("LCA_QUOTA_STATE");
    fetch_command->add_option("--parallelism", fetch.parallelism, "Concurrent lookups")
        ->envname("LCA_PARALLELISM")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fetch_command->add_option("--retries", fetch.retries, "Attempts per lookup on transport errors")
        ->envname("LCA_RETRIES")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fetch_command->add_option("--backoff-ms", fetch.backoff_ms, "Initial retry backoff")->capture_default_str();
    fetch_command->add_flag("--xml", fetch.xml, "Request XML responses");
    fetch_command->add_option("--query", fetch.query, "Extra query parameter key=value (repeatable)");

    IndicatorOptions indicators;
    auto *indicators_command = app.add_subcommand("indicators", "Compute CI, CIR, RCIR, DR, CNLS, rank in class, author profiles");
    indicators_command->add_option("--unit", indicators.units, "Unit id: all, class:<code>, or an id from --units");
    indicators_command->add_option("--units", indicators.units_file, "Unit definitions (JSON lines)");
    indicators_command->add_option("--benchmark", indicators.benchmark, "Benchmark unit for RCIR, or 'self'");
    indicators_command->add_flag("--all-books", indicators.all_books, "Per-book libcitations, CNLS and rank in class");
    indicators_command->add_flag("--authors", indicators.authors, "Rank every contributor heading by library holdings");
    indicators_command->add_option("--author", indicators.author_headings, "Profile for one heading (repeatable)");

    CorrelateOptions correlate;
    auto *correlate_command = app.add_subcommand("correlate", "Spearman correlation between per-book metrics");
    correlate_command->add_option("--x", correlate.x, "First metric");
    correlate_command->add_option("--y", correlate.y, "Second metric");
    correlate_command->add_flag("--matrix", correlate.matrix, "Full correlation matrix");
    correlate_command->add_option("--metric", correlate.metrics, "Metric to include in --matrix (repeatable)");
    correlate_command->add_option("--metrics", correlate.metrics_file, "CSV of external metrics keyed by record_id");

    ReportOptions report;
    auto *report_command = app.add_subcommand("report", "Library composition and metric coverage tables");
    report_command->add_option("--metrics", report.metrics_file, "CSV of external metrics keyed by record_id");

    ServeOptions serve;
    auto *serve_command = app.add_subcommand("serve-fixture", "Serve the dataset over the library-locations paths");
    serve_command->add_option("--host", serve.host)->capture_default_str();
    serve_command->add_option("--port", serve.port)->capture_default_str();

    std::vector<const char *> argv;
    for (const auto &arg : args)
        argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &error) {
        const int code = app.exit(error, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*ingest_command)
            return cmd_ingest(global, ingest, out, err);
        if (*fetch_command)
            return cmd_fetch(global, fetch, out, err);
        if (*indicators_command)
            return cmd_indicators(global, indicators, out, err);
        if (*correlate_command)
            return cmd_correlate(global, correlate, out, err);
        if (*report_command)
            return cmd_report(global, report, out, err);
        if (*serve_command)
            return cmd_serve_fixture(global, serve, out, err);
    } catch (const UsageError &error) {
        err << "usage error: " << error.what() << '\n';
        return kUsage;
    } catch (const Failure &error) {
        err << "error: " << error.what() << '\n';
        return error.code();
    } catch (const std::exception &error) {
        err << "error: " << error.what() << '\n';
        return kInputError;
    }
    return kUsage;
}

} // namespace lca::cli
