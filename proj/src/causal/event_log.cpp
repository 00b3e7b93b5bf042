#include "ordersens/causal/event_log.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "ordersens/csv.hpp"
#include "ordersens/error.hpp"

namespace ordersens::causal {

namespace {

int digits(std::string_view s, std::size_t pos, std::size_t n, std::string_view whole) {
    if (pos + n > s.size()) throw InputError("malformed timestamp '" + std::string(whole) + "'");
    int v = 0;
    for (std::size_t k = pos; k < pos + n; ++k) {
        if (s[k] < '0' || s[k] > '9')
            throw InputError("malformed timestamp '" + std::string(whole) + "'");
        v = v * 10 + (s[k] - '0');
    }
    return v;
}

}  // namespace

double parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    const std::string_view whole = text;
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    auto bad = [&] { return InputError("malformed timestamp '" + std::string(whole) + "'"); };

    if (text.size() < 10 || text[4] != '-' || text[7] != '-') throw bad();
    const int y = digits(text, 0, 4, whole);
    const int mo = digits(text, 5, 2, whole);
    const int d = digits(text, 8, 2, whole);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw bad();
    double seconds = static_cast<double>(sys_days{ymd}.time_since_epoch().count()) * 86400.0;

    std::size_t pos = 10;
    if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
        ++pos;
        const int hh = digits(text, pos, 2, whole);
        if (pos + 2 >= text.size() || text[pos + 2] != ':') throw bad();
        const int mm = digits(text, pos + 3, 2, whole);
        pos += 5;
        double ss = 0.0;
        if (pos < text.size() && text[pos] == ':') {
            ss = digits(text, pos + 1, 2, whole);
            pos += 3;
            if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
                ++pos;
                double scale = 0.1;
                const std::size_t start = pos;
                while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                    ss += (text[pos] - '0') * scale;
                    scale /= 10.0;
                    ++pos;
                }
                if (pos == start) throw bad();
            }
        }
        if (hh > 23 || mm > 59 || ss >= 61.0) throw bad();
        seconds += hh * 3600.0 + mm * 60.0 + ss;
    }
    if (pos < text.size()) {
        if (text[pos] == 'Z' && pos + 1 == text.size()) {
            ++pos;
        } else if (text[pos] == '+' || text[pos] == '-') {
            const int sign = text[pos] == '+' ? 1 : -1;
            const int oh = digits(text, pos + 1, 2, whole);
            pos += 3;
            int om = 0;
            if (pos < text.size()) {
                if (text[pos] == ':') ++pos;
                om = digits(text, pos, 2, whole);
                pos += 2;
            }
            seconds -= sign * (oh * 3600.0 + om * 60.0);
        }
    }
    if (pos != text.size()) throw bad();
    return seconds;
}

std::string format_iso8601(double seconds) {
    using namespace std::chrono;
    const auto total_ms = static_cast<long long>(std::llround(seconds * 1000.0));
    const sys_time<milliseconds> tp{milliseconds{total_ms}};
    const auto dp = floor<days>(tp);
    const year_month_day ymd{dp};
    const hh_mm_ss hms{tp - dp};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(hms.hours().count()),
                  static_cast<long long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()),
                  static_cast<long long>(hms.subseconds().count()));
    return buf;
}

EventLog ingest_log(std::string_view text, const IngestOptions& options) {
    auto rows = csv::parse(text);
    if (rows.empty()) throw InputError("event log: header row required");
    const auto& header = rows.front();
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < header.size(); ++k)
            if (header[k] == name) return k;
        return std::nullopt;
    };
    const auto c_case = column("case_id");
    const auto c_act = column("activity");
    const auto c_time = column("timestamp");
    const auto c_out = column("outcome");
    if (!c_case || !c_act || !c_time)
        throw InputError("event log: header must contain case_id, activity and timestamp");

    EventLog log;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::optional<double>> outcome;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < header.size())
            throw InputError("event log row " + std::to_string(r + 1) + ": expected " +
                             std::to_string(header.size()) + " fields");
        const std::string& id = row[*c_case];
        auto [it, inserted] = index.emplace(id, log.cases.size());
        if (inserted) {
            log.cases.push_back(Case{id, {}, 0.0});
            outcome.emplace_back();
        }
        double t = 0.0;
        try {
            t = parse_iso8601(row[*c_time]);
        } catch (const InputError& e) {
            throw InputError("event log row " + std::to_string(r + 1) + ": " + e.what());
        }
        log.cases[it->second].events.push_back(Event{row[*c_act], t});
        if (c_out) {
            const std::string& o = row[*c_out];
            if (o == "1") outcome[it->second] = 1.0;
            else if (o == "0") outcome[it->second] = 0.0;
            else if (!o.empty())
                throw InputError("event log row " + std::to_string(r + 1) +
                                 ": outcome must be 0, 1 or empty");
        }
    }

    for (std::size_t k = 0; k < log.cases.size(); ++k) {
        auto& c = log.cases[k];
        std::stable_sort(c.events.begin(), c.events.end(),
                         [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
        if (outcome[k]) {
            c.outcome = *outcome[k];
        } else if (options.accept_activity) {
            c.outcome = std::any_of(c.events.begin(), c.events.end(), [&](const Event& e) {
                            return e.activity == *options.accept_activity;
                        })
                            ? 1.0
                            : 0.0;
        } else {
            c.outcome = 0.0;
            log.outcome_missing = true;
        }
    }
    if (log.outcome_missing)
        log.warnings.push_back(c_out ? "some cases have no outcome value; treated as 0"
                                     : "no outcome column; all outcomes treated as 0");
    return log;
}

std::string write_log(const EventLog& log) {
    std::string out = "case_id,activity,timestamp,outcome\n";
    for (const auto& c : log.cases) {
        const std::string o = c.outcome != 0.0 ? "1" : "0";
        for (const auto& e : c.events)
            out += csv::join({c.id, e.activity, format_iso8601(e.timestamp), o}) + "\n";
    }
    return out;
}

}  // namespace ordersens::causal
