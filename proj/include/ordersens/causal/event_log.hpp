#ifndef ORDERSENS_CAUSAL_EVENT_LOG_HPP
#define ORDERSENS_CAUSAL_EVENT_LOG_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ordersens::causal {

struct Event {
    std::string activity;
    /// Seconds since 1970-01-01T00:00:00Z.
    double timestamp = 0.0;
};

struct Case {
    std::string id;
    std::vector<Event> events;  ///< sorted by timestamp, ties in file order
    double outcome = 0.0;       ///< 1 accepted, 0 otherwise
};

struct EventLog {
    std::vector<Case> cases;  ///< in order of first appearance
    /// Set when some case had no outcome value and no accept activity was configured.
    bool outcome_missing = false;
    std::vector<std::string> warnings;
};

struct IngestOptions {
    /// When a case has no outcome value, its presence marks acceptance.
    std::optional<std::string> accept_activity;
};

/// Reads `case_id,activity,timestamp[,outcome]` CSV (header required,
/// columns located by name, extra columns ignored).
EventLog ingest_log(std::string_view text, const IngestOptions& options = {});

/// Writes the canonical four-column CSV.
std::string write_log(const EventLog& log);

/// ISO-8601 date or date-time (`T` or space separator, optional fraction,
/// optional `Z` / `±hh:mm` offset; no offset means UTC).
double parse_iso8601(std::string_view text);
/// UTC rendering with millisecond precision, e.g. 2020-01-01T00:00:00.000Z.
std::string format_iso8601(double seconds);

inline constexpr double kSecondsPerDay = 86400.0;

}  // namespace ordersens::causal

#endif
