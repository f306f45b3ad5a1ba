#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linelist/core.hpp"

namespace linelist::demo {

enum class AgeUnit { Years, Months, Days, Unstated };

struct AgeValue {
    double years = 0.0;
    AgeUnit unit_seen = AgeUnit::Unstated;
};

struct SexValue {
    Sex category = Sex::Male;
    std::string matched_keyword;
};

// Keyword table for sex extraction; overridable so local spellings can be
// added without code changes.
struct SexKeywords {
    std::vector<std::string> female = {"female", "f"};
    std::vector<std::string> male = {"male", "m"};
    std::vector<std::string> transgender = {"transgender", "tg"};
    // Keywords that are recognized but have no target category.
    std::vector<std::string> review = {"child"};
};

struct AgeResult {
    std::optional<AgeValue> value;
    Action action = Action::Missing;  // AutoCorrected / ReviewQueued / Missing
    std::string rule_id;
};

struct SexResult {
    std::optional<SexValue> value;
    Action action = Action::Missing;
    std::string rule_id;
};

AgeResult extract_age(const std::string& raw);
SexResult extract_sex(const std::string& raw, const SexKeywords& keywords = {});

// Recovery of a missing demographic value from other columns on the same
// row: first the paired demographic column, then Other columns.
struct RecoveryResult {
    CellVerdict verdict;
    std::optional<AgeValue> age;
    std::optional<SexValue> sex;
};

std::optional<RecoveryResult> recover_misplaced(const RawRecord& record,
                                                const ColumnMapping& mapping,
                                                Role missing_role,
                                                const SexKeywords& keywords = {});

}  // namespace linelist::demo
