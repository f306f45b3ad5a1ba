#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linelist/core.hpp"

namespace linelist::dates {

// A raw date cell reduced to its digit skeleton.
struct DateToken {
    std::string digits;
    std::string original;
    bool month_name_substituted = false;
};

enum class RuleAction { Transform, ExcelSerial, Delete, Review, Accept };

struct RuleOutcome {
    std::string rule_id;
    RuleAction action;
    std::optional<DateToken> transformed;
    std::optional<Date> resolved;
    // Ranked candidate dates for Review outcomes (may be empty when the
    // suggested resolution is deletion).
    std::vector<Date> candidates;
};

// Month names (full and three-letter prefixes) become two-digit month
// numbers, then every remaining non-digit character is dropped.
DateToken standardize(const std::string& raw);

// Days since the spreadsheet epoch 1899-12-30. Serials below 61 fall inside
// the 1900 leap-artifact zone and are rejected.
Date excel_serial_to_date(long serial);
long date_to_excel_serial(const Date& d);

std::pair<long, long> serial_range(const YearContext& ctx);

// Two-digit prefixes of the serials valid for the context year.
std::vector<std::string> serial_prefixes(const YearContext& ctx);

// Applies the first matching rule of the D01..D22 cascade. The token must be
// standardized (digits only); Transform outcomes are meant to re-enter.
RuleOutcome classify_and_apply(const DateToken& token, const YearContext& ctx);

// Strict ddmmyyyy parse with real month lengths and leap years.
std::optional<Date> parse_ddmmyyyy(const std::string& digits);

// Full cell treatment: standardize, iterate the cascade (at most
// kMaxTransforms transforms), parse, plausibility-check. All failure modes
// are verdicts, never exceptions.
inline constexpr int kMaxTransforms = 4;

struct DateCellResult {
    CellVerdict verdict;
    std::optional<Date> resolved;
    // Parsed review candidates, ranked.
    std::vector<Date> candidates;
};

DateCellResult clean_date_cell(const std::string& raw, const YearContext& ctx);

bool within_plausibility_window(const Date& d, const YearContext& ctx);

// Machine-readable catalog of the cascade, for documentation tooling.
std::string rule_catalog_json();

}  // namespace linelist::dates
