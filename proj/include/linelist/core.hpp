#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace linelist {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Role {
    TestDate,
    ReportDate,
    OpdDate,
    AdmissionDate,
    DischargeDate,
    Age,
    Sex,
    Address,
    Name,
    Contact,
    Other,
};

const char* role_name(Role r);
std::optional<Role> role_from_name(const std::string& name);
bool is_date_role(Role r);

struct ColumnRole {
    Role role = Role::Other;
    std::string source_header;
};

// Validated header-to-role mapping for one input file.
struct ColumnMapping {
    std::vector<ColumnRole> entries;

    bool has_role(Role r) const;
    std::optional<std::string> header_for(Role r) const;
    // True when at least one of TestDate/OpdDate/AdmissionDate/DischargeDate
    // is mapped; imputation requires a donor date column.
    bool imputation_possible() const;
};

// One ingested line-list row. Cell bytes are kept exactly as read;
// standardization happens downstream.
struct RawRecord {
    std::size_t row_index = 0;
    // One cell per header column, aligned with the effective mapping.
    std::vector<std::string> cells;
    std::string source_file;

    // First cell carrying the given role, or nullptr when not mapped.
    const std::string* cell(const ColumnMapping& mapping, Role r) const;
    std::string* cell(const ColumnMapping& mapping, Role r);
};

// Proleptic Gregorian calendar date.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;
    std::string iso() const;  // yyyy-mm-dd
};

bool is_valid_date(const Date& d);
std::optional<Date> date_from_iso(const std::string& iso);

// The surveillance year that drives year-sensitive rules.
struct YearContext {
    int year;
    int plausibility_window_days = 31;

    // Serial bounds are computed from the year, never stored.
    long serial_min() const;  // days from 1899-12-30 to 01 Jan
    long serial_max() const;  // days from 1899-12-30 to 31 Dec
};

YearContext make_year_context(int year, int plausibility_window_days = 31);

enum class Phase { Screened, Diagnosed, Edited };

enum class Action {
    AutoCorrected,
    ReviewQueued,
    ManuallyCorrected,
    Deleted,
    Unchanged,
    Missing,
};

const char* phase_name(Phase p);
const char* action_name(Action a);

struct CellVerdict {
    std::size_t row_index = 0;
    Role role = Role::Other;
    Phase phase = Phase::Screened;
    std::string rule_id;  // "D08>D17" style chains for cascaded rules
    Action action = Action::Unchanged;
    std::string before;
    std::string after;
    // Ranked candidate values for review-queued cells.
    std::vector<std::string> candidates;
    // Set when a value was recovered from another column.
    std::string source_column;
    // Free-form diagnostic, e.g. retry metadata for geocode failures.
    std::string note;
};

enum class DateProvenance { Parsed, Imputed, Missing };

const char* provenance_name(DateProvenance p);

enum class Sex { Male, Female, Transgender };

const char* sex_name(Sex s);
std::optional<Sex> sex_from_name(const std::string& name);

struct LocationDetail {
    std::optional<std::string> district;
    std::optional<std::string> block;
    std::optional<std::string> settlement;
    std::optional<std::string> matched_gazetteer_id;
    std::optional<double> latitude;
    std::optional<double> longitude;

    bool empty() const {
        return !district && !block && !settlement;
    }
};

struct CleanRecord {
    std::size_t row_index = 0;
    std::optional<Date> test_date;
    DateProvenance test_date_provenance = DateProvenance::Missing;
    // Donor dates kept for offset computation.
    std::optional<Date> admission_date;
    std::optional<Date> opd_date;
    std::optional<Date> discharge_date;
    std::optional<Date> report_date;
    std::optional<double> age_years;
    std::optional<Sex> sex;
    std::optional<LocationDetail> location;
    std::string anon_id;
};

// --- column mapping / ingest ---------------------------------------------

// Parses the `role = header` mapping file format. `#` starts a comment.
ColumnMapping load_column_mapping(const std::string& config_text);

struct IngestResult {
    std::vector<RawRecord> records;
    // Rows whose field count did not match the header; kept, not dropped.
    std::vector<CellVerdict> quarantined;
    std::vector<std::string> header;
    // One entry per header column, in header order; headers absent from the
    // configured mapping carry Role::Other. Record cells align with this.
    ColumnMapping effective_mapping;
    // Rows that needed UTF-8 replacement during decode.
    std::vector<std::size_t> encoding_flagged;
};

IngestResult ingest_csv(const std::string& path, const ColumnMapping& mapping);
IngestResult ingest_csv_text(const std::string& text, const ColumnMapping& mapping,
                             const std::string& source_name);

}  // namespace linelist
