#pragma once

#include <map>
#include <string>
#include <vector>

#include "linelist/core.hpp"

namespace linelist::audit {

// Table-shaped per-rule counters.
struct RuleCounters {
    std::size_t screened = 0;
    std::size_t auto_corrected = 0;
    std::size_t manual = 0;
    std::size_t deleted = 0;
    std::size_t unchanged_after_review = 0;
};

struct VariableSummary {
    std::size_t total = 0;
    std::size_t extracted = 0;
    std::size_t imputed = 0;
    std::size_t missing = 0;
    // (extracted [+ imputed for dates]) / total, one decimal.
    double percent_extracted = 0.0;
    double percent_extracted_parsed_only = 0.0;
};

struct AuditLog {
    std::vector<CellVerdict> verdicts;
    std::map<std::string, RuleCounters> rule_counters;
    std::map<Role, VariableSummary> per_variable;

    void append(const CellVerdict& v);
    void finalize_summaries(std::size_t record_count);
};

enum class ResolutionType { Pending, Accepted, ManualValue, Deleted };

struct ReviewItem {
    CellVerdict verdict;
    std::vector<std::string> candidates;
    ResolutionType resolution = ResolutionType::Pending;
    // Candidate index for Accepted; typed value for ManualValue.
    std::size_t accepted_index = 0;
    std::string manual_value;
    std::string note;

    bool pending() const { return resolution == ResolutionType::Pending; }
};

// --- serialization ---------------------------------------------------------

std::string verdict_to_json_line(const CellVerdict& v);
CellVerdict verdict_from_json_line(const std::string& line);

std::string review_item_to_json_line(const ReviewItem& item);
ReviewItem review_item_from_json_line(const std::string& line);

std::string audit_to_jsonl(const AuditLog& log);
std::vector<ReviewItem> review_items_from_jsonl(const std::string& text);
std::string review_items_to_jsonl(const std::vector<ReviewItem>& items);

}  // namespace linelist::audit
