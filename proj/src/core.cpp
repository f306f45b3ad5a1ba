#include "linelist/core.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "linelist/csv.hpp"

namespace linelist {

namespace {

constexpr std::pair<Role, const char*> kRoleNames[] = {
    {Role::TestDate, "TestDate"},       {Role::ReportDate, "ReportDate"},
    {Role::OpdDate, "OpdDate"},         {Role::AdmissionDate, "AdmissionDate"},
    {Role::DischargeDate, "DischargeDate"}, {Role::Age, "Age"},
    {Role::Sex, "Sex"},                 {Role::Address, "Address"},
    {Role::Name, "Name"},               {Role::Contact, "Contact"},
    {Role::Other, "Other"},
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

const char* role_name(Role r) {
    for (const auto& [role, name] : kRoleNames)
        if (role == r) return name;
    return "Other";
}

std::optional<Role> role_from_name(const std::string& name) {
    for (const auto& [role, rn] : kRoleNames)
        if (name == rn) return role;
    return std::nullopt;
}

bool is_date_role(Role r) {
    switch (r) {
        case Role::TestDate:
        case Role::ReportDate:
        case Role::OpdDate:
        case Role::AdmissionDate:
        case Role::DischargeDate:
            return true;
        default:
            return false;
    }
}

bool ColumnMapping::has_role(Role r) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const ColumnRole& e) { return e.role == r; });
}

std::optional<std::string> ColumnMapping::header_for(Role r) const {
    for (const auto& e : entries)
        if (e.role == r) return e.source_header;
    return std::nullopt;
}

bool ColumnMapping::imputation_possible() const {
    return has_role(Role::TestDate) || has_role(Role::OpdDate) ||
           has_role(Role::AdmissionDate) || has_role(Role::DischargeDate);
}

const std::string* RawRecord::cell(const ColumnMapping& mapping, Role r) const {
    for (std::size_t i = 0; i < mapping.entries.size() && i < cells.size(); ++i)
        if (mapping.entries[i].role == r) return &cells[i];
    return nullptr;
}

std::string* RawRecord::cell(const ColumnMapping& mapping, Role r) {
    return const_cast<std::string*>(
        static_cast<const RawRecord*>(this)->cell(mapping, r));
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

bool is_valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12 || d.day < 1) return false;
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int len = lengths[d.month - 1];
    bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
    if (d.month == 2 && leap) len = 29;
    return d.day <= len;
}

std::optional<Date> date_from_iso(const std::string& iso) {
    int y, m, d;
    char tail;
    if (std::sscanf(iso.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3)
        return std::nullopt;
    Date date{y, m, d};
    if (!is_valid_date(date)) return std::nullopt;
    return date;
}

namespace {

long days_from_epoch(const Date& d) {
    using namespace std::chrono;
    const sys_days epoch{year{1899} / 12 / 30};
    const sys_days day{year{d.year} / d.month / d.day};
    return (day - epoch).count();
}

}  // namespace

long YearContext::serial_min() const { return days_from_epoch({year, 1, 1}); }
long YearContext::serial_max() const { return days_from_epoch({year, 12, 31}); }

YearContext make_year_context(int year, int plausibility_window_days) {
    if (year < 1990 || year > 2100)
        throw ConfigError("surveillance year out of range [1990, 2100]: " +
                          std::to_string(year));
    return YearContext{year, plausibility_window_days};
}

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Screened: return "Screened";
        case Phase::Diagnosed: return "Diagnosed";
        case Phase::Edited: return "Edited";
    }
    return "Screened";
}

const char* action_name(Action a) {
    switch (a) {
        case Action::AutoCorrected: return "AutoCorrected";
        case Action::ReviewQueued: return "ReviewQueued";
        case Action::ManuallyCorrected: return "ManuallyCorrected";
        case Action::Deleted: return "Deleted";
        case Action::Unchanged: return "Unchanged";
        case Action::Missing: return "Missing";
    }
    return "Unchanged";
}

const char* provenance_name(DateProvenance p) {
    switch (p) {
        case DateProvenance::Parsed: return "parsed";
        case DateProvenance::Imputed: return "imputed";
        case DateProvenance::Missing: return "missing";
    }
    return "missing";
}

const char* sex_name(Sex s) {
    switch (s) {
        case Sex::Male: return "Male";
        case Sex::Female: return "Female";
        case Sex::Transgender: return "Transgender";
    }
    return "Male";
}

std::optional<Sex> sex_from_name(const std::string& name) {
    if (name == "Male") return Sex::Male;
    if (name == "Female") return Sex::Female;
    if (name == "Transgender") return Sex::Transgender;
    return std::nullopt;
}

ColumnMapping load_column_mapping(const std::string& config_text) {
    ColumnMapping mapping;
    std::istringstream in(config_text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("mapping line " + std::to_string(line_no) +
                              ": expected `role = header`");
        std::string role_text = trim(line.substr(0, eq));
        std::string header = trim(line.substr(eq + 1));
        auto role = role_from_name(role_text);
        if (!role)
            throw ConfigError("mapping line " + std::to_string(line_no) +
                              ": unknown role `" + role_text + "`");
        if (header.empty())
            throw ConfigError("mapping line " + std::to_string(line_no) +
                              ": empty header for role " + role_text);
        if (*role != Role::Other) {
            if (auto existing = mapping.header_for(*role))
                throw ConfigError("role " + role_text + " mapped twice: `" +
                                  *existing + "` and `" + header + "`");
        }
        mapping.entries.push_back({*role, header});
    }
    for (Role required : {Role::Age, Role::Sex, Role::Address}) {
        if (!mapping.has_role(required))
            throw ConfigError(std::string("mapping must assign the ") +
                              role_name(required) + " role");
    }
    return mapping;
}

IngestResult ingest_csv_text(const std::string& text, const ColumnMapping& mapping,
                             const std::string& source_name) {
    auto parsed = csv::parse(text);
    if (parsed.rows.empty())
        throw ConfigError("input has no header row: " + source_name);

    IngestResult result;
    result.header = parsed.rows.front();

    // Build the effective per-column mapping; every configured header must
    // exist in the file.
    for (const auto& h : result.header) {
        Role role = Role::Other;
        for (const auto& e : mapping.entries) {
            if (e.source_header == h) {
                role = e.role;
                break;
            }
        }
        result.effective_mapping.entries.push_back({role, h});
    }
    for (const auto& e : mapping.entries) {
        if (e.role == Role::Other) continue;
        if (std::find(result.header.begin(), result.header.end(), e.source_header) ==
            result.header.end())
            throw ConfigError("mapped header `" + e.source_header +
                              "` not present in " + source_name);
    }

    for (std::size_t r = 1; r < parsed.rows.size(); ++r) {
        const auto& row = parsed.rows[r];
        std::size_t idx = r - 1;
        if (row.size() != result.header.size()) {
            CellVerdict v;
            v.row_index = idx;
            v.role = Role::Other;
            v.phase = Phase::Screened;
            v.rule_id = "malformed-row";
            v.action = Action::ReviewQueued;
            v.before = csv::write_row(row);
            if (!v.before.empty() && v.before.back() == '\n') v.before.pop_back();
            result.quarantined.push_back(std::move(v));
            continue;
        }
        RawRecord rec;
        rec.row_index = idx;
        rec.cells = row;
        rec.source_file = source_name;
        result.records.push_back(std::move(rec));
    }

    for (std::size_t r : parsed.replaced_rows)
        if (r >= 1) result.encoding_flagged.push_back(r - 1);
    return result;
}

IngestResult ingest_csv(const std::string& path, const ColumnMapping& mapping) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ingest_csv_text(ss.str(), mapping, path);
}

}  // namespace linelist
