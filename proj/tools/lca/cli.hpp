/** \file  cli.hpp
 *  \brief The `lca` command-line surface: ingest, fetch, indicators, correlate, report.
 *
 *  Exit codes are stable:
 *    0   success
 *    1   unreadable input, malformed dataset or transport failure
 *    2   nothing accepted on ingest, or an empty dataset for report
 *    3   quota exhausted during fetch (partial results are merged)
 *    4   unresolved aggregate unit
 *    5   undefined correlation
 *    64  usage error
 */
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lca/model.hpp"

namespace lca::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kNothingToDo = 2,
    kQuotaExhausted = 3,
    kUnresolvedUnit = 4,
    kUndefinedCorrelation = 5,
    kUsage = 64,
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grammar: clauses separated by ';', each `key=v1,v2,...` with keys country, kind, member and
/// exclude-channel. Example: "country=US,GB;kind=academic;member=ARL;exclude-channel=donation".
LibraryFilter parse_filter_spec(std::string_view spec);

/// Runs one command line (args[0] is the program name). Environment variables LCA_BASE_URL,
/// LCA_API_KEY, LCA_QUOTA and LCA_QUOTA_STATE supply client defaults; flags override them.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace lca::cli
