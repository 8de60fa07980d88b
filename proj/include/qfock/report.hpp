#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qfock {

/// How `measured` is compared against `bound`.
enum class Relation { le, ge, eq, gt, info };

inline const char* relation_symbol(Relation r) {
    switch (r) {
    case Relation::le: return "<=";
    case Relation::ge: return ">=";
    case Relation::eq: return "==";
    case Relation::gt: return ">";
    case Relation::info: return "";
    }
    return "";
}

struct CheckRecord {
    std::string name;
    double measured = 0.0;
    Relation relation = Relation::info;
    std::optional<double> bound;
    std::optional<double> tolerance;
    bool pass = true;
    std::string note;
};

/// le: measured <= bound + tol; ge: measured >= bound - tol;
/// eq: |measured - bound| <= tol; gt: measured > bound.
inline CheckRecord check(std::string name, double measured, Relation rel, double bound, double tol = 0.0) {
    CheckRecord r{std::move(name), measured, rel, bound, tol, false, {}};
    switch (rel) {
    case Relation::le: r.pass = measured <= bound + tol; break;
    case Relation::ge: r.pass = measured >= bound - tol; break;
    case Relation::eq: r.pass = std::abs(measured - bound) <= tol; break;
    case Relation::gt:
        r.pass = measured > bound;
        r.tolerance.reset();
        break;
    case Relation::info: r.pass = true; break;
    }
    if (!std::isfinite(measured)) r.pass = false;
    return r;
}

inline CheckRecord info(std::string name, double measured, std::string note = {}) {
    CheckRecord r;
    r.name = std::move(name);
    r.measured = measured;
    r.note = std::move(note);
    return r;
}

struct SuiteResult {
    std::string suite;
    std::vector<std::pair<std::string, nlohmann::ordered_json>> meta;
    std::vector<CheckRecord> records;
    std::vector<std::string> notes;
    double elapsed_seconds = 0.0; ///< wall clock; kept out of the report bytes

    bool pass() const {
        for (const auto& r : records)
            if (!r.pass) return false;
        return true;
    }
    void add(CheckRecord r) { records.push_back(std::move(r)); }
};

inline nlohmann::ordered_json to_json(const SuiteResult& s) {
    nlohmann::ordered_json j;
    j["suite"] = s.suite;
    j["pass"] = s.pass();
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.meta) meta[k] = v;
    j["config"] = meta;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& r : s.records) {
        nlohmann::ordered_json c;
        c["name"] = r.name;
        c["measured"] = r.measured;
        c["relation"] = relation_symbol(r.relation);
        c["bound"] = r.bound ? nlohmann::ordered_json(*r.bound) : nlohmann::ordered_json();
        c["tolerance"] = r.tolerance ? nlohmann::ordered_json(*r.tolerance) : nlohmann::ordered_json();
        c["pass"] = r.pass;
        c["note"] = r.note;
        checks.push_back(std::move(c));
    }
    j["checks"] = checks;
    j["notes"] = s.notes;
    return j;
}

inline std::string format_json(const SuiteResult& s) { return to_json(s).dump(2) + "\n"; }

namespace detail {

inline std::string g17(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace detail

/// One row per check; notes are emitted as rows named "#note".
inline std::string format_csv(const SuiteResult& s) {
    std::string out = "suite,name,measured,relation,bound,tolerance,pass,note\n";
    for (const auto& r : s.records) {
        out += detail::csv_field(s.suite) + "," + detail::csv_field(r.name) + "," + detail::g17(r.measured) + "," +
               relation_symbol(r.relation) + "," + (r.bound ? detail::g17(*r.bound) : "") + "," +
               (r.tolerance ? detail::g17(*r.tolerance) : "") + "," + (r.pass ? "true" : "false") + "," +
               detail::csv_field(r.note) + "\n";
    }
    for (const auto& n : s.notes) out += detail::csv_field(s.suite) + ",#note,,,,,," + detail::csv_field(n) + "\n";
    return out;
}

} // namespace qfock
