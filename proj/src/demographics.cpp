#include "linelist/demographics.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace linelist::demo {

namespace {

std::string lower(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

// Letters only, lowercased; digits, punctuation, and whitespace dropped.
std::string sex_standardize(const std::string& s) {
    std::string out;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalpha(u)) out += static_cast<char>(std::tolower(u));
    }
    return out;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

struct NumberScan {
    double value = 0.0;
    std::size_t end = 0;  // index just past the number
    bool found = false;
};

NumberScan first_number(const std::string& s) {
    NumberScan scan;
    std::size_t i = 0;
    while (i < s.size() && !std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == s.size()) return scan;
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i < s.size() && s[i] == '.' && i + 1 < s.size() &&
        std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    }
    scan.value = std::stod(s.substr(start, i - start));
    scan.end = i;
    scan.found = true;
    return scan;
}

}  // namespace

AgeResult extract_age(const std::string& raw) {
    AgeResult result;
    if (is_blank(raw)) {
        result.action = Action::Missing;
        return result;
    }
    std::string text = lower(raw);
    NumberScan scan = first_number(text);
    if (!scan.found) {
        result.action = Action::ReviewQueued;
        result.rule_id = "age-no-digits";
        return result;
    }

    // Unit keyword handling. Word units may be space-separated; the bare
    // single letters m/d/y count only when directly attached to the digits,
    // so "34/M" stays a sex marker, not 34 months.
    AgeUnit unit = AgeUnit::Unstated;
    std::string rest = text.substr(scan.end);
    std::size_t ws = 0;
    while (ws < rest.size() && rest[ws] == ' ') ++ws;
    std::string word = rest.substr(ws);
    const auto starts = [&](const char* w) { return word.rfind(w, 0) == 0; };
    if (starts("months") || starts("month") || starts("mont") || starts("mon") ||
        starts("mos") || starts("mth"))
        unit = AgeUnit::Months;
    else if (starts("days") || starts("day"))
        unit = AgeUnit::Days;
    else if (starts("years") || starts("year") || starts("yrs") || starts("yr"))
        unit = AgeUnit::Years;
    else if (!rest.empty() && (rest[0] == 'm'))
        unit = AgeUnit::Months;
    else if (!rest.empty() && (rest[0] == 'd'))
        unit = AgeUnit::Days;
    else if (!rest.empty() && (rest[0] == 'y'))
        unit = AgeUnit::Years;

    double years = scan.value;
    if (unit == AgeUnit::Months) years = scan.value / 12.0;
    else if (unit == AgeUnit::Days) years = scan.value / 365.25;

    if (years < 0.0 || years > 120.0) {
        result.action = Action::ReviewQueued;
        result.rule_id = "age-out-of-range";
        return result;
    }
    result.value = AgeValue{years, unit};
    result.action = Action::AutoCorrected;
    result.rule_id = unit == AgeUnit::Unstated ? "age-numeric" : "age-unit-scaled";
    return result;
}

SexResult extract_sex(const std::string& raw, const SexKeywords& keywords) {
    SexResult result;
    if (is_blank(raw)) {
        result.action = Action::Missing;
        return result;
    }
    std::string token = sex_standardize(raw);
    if (token.empty()) {
        result.action = Action::ReviewQueued;
        result.rule_id = "sex-no-letters";
        return result;
    }

    const auto match_list = [&](const std::vector<std::string>& list,
                                bool whole_word_short) -> std::optional<std::string> {
        for (const auto& kw : list) {
            if (kw.size() == 1 || (whole_word_short && kw.size() <= 2)) {
                if (token == kw) return kw;
            } else if (contains(token, kw)) {
                return kw;
            }
        }
        return std::nullopt;
    };

    // Review-only keywords first: "child" names a person, not a sex.
    if (auto kw = match_list(keywords.review, false)) {
        result.action = Action::ReviewQueued;
        result.rule_id = "sex-keyword-" + *kw;
        return result;
    }
    if (auto kw = match_list(keywords.transgender, true)) {
        result.value = SexValue{Sex::Transgender, *kw};
        result.action = Action::AutoCorrected;
        result.rule_id = "sex-keyword";
        return result;
    }
    if (auto kw = match_list(keywords.female, false)) {
        result.value = SexValue{Sex::Female, *kw};
        result.action = Action::AutoCorrected;
        result.rule_id = "sex-keyword";
        return result;
    }
    // "f" anywhere wins over "m": "female" contains both.
    if (contains(token, "f")) {
        result.value = SexValue{Sex::Female, "f"};
        result.action = Action::AutoCorrected;
        result.rule_id = "sex-letter";
        return result;
    }
    if (auto kw = match_list(keywords.male, false)) {
        result.value = SexValue{Sex::Male, *kw};
        result.action = Action::AutoCorrected;
        result.rule_id = "sex-keyword";
        return result;
    }
    if (contains(token, "m")) {
        result.value = SexValue{Sex::Male, "m"};
        result.action = Action::AutoCorrected;
        result.rule_id = "sex-letter";
        return result;
    }
    result.action = Action::ReviewQueued;
    result.rule_id = "sex-unrecognized";
    return result;
}

std::optional<RecoveryResult> recover_misplaced(const RawRecord& record,
                                                const ColumnMapping& mapping,
                                                Role missing_role,
                                                const SexKeywords& keywords) {
    if (missing_role != Role::Age && missing_role != Role::Sex) return std::nullopt;
    const Role paired = missing_role == Role::Age ? Role::Sex : Role::Age;

    // Phase 1: the paired demographic column; phase 2: Other columns.
    std::vector<std::size_t> scan_order;
    for (std::size_t i = 0; i < mapping.entries.size() && i < record.cells.size(); ++i)
        if (mapping.entries[i].role == paired) scan_order.push_back(i);
    for (std::size_t i = 0; i < mapping.entries.size() && i < record.cells.size(); ++i)
        if (mapping.entries[i].role == Role::Other) scan_order.push_back(i);

    for (std::size_t col : scan_order) {
        const std::string& cell = record.cells[col];
        if (cell.empty()) continue;
        RecoveryResult rec;
        rec.verdict.row_index = record.row_index;
        rec.verdict.role = missing_role;
        rec.verdict.phase = Phase::Edited;
        rec.verdict.before = "";
        rec.verdict.source_column = mapping.entries[col].source_header;
        if (missing_role == Role::Age) {
            AgeResult age = extract_age(cell);
            if (age.action == Action::AutoCorrected) {
                rec.age = age.value;
                rec.verdict.action = Action::AutoCorrected;
                rec.verdict.rule_id = "recovered-" + age.rule_id;
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%g", age.value->years);
                rec.verdict.after = buf;
                return rec;
            }
        } else {
            SexResult sex = extract_sex(cell, keywords);
            if (sex.action == Action::AutoCorrected) {
                rec.sex = sex.value;
                rec.verdict.action = Action::AutoCorrected;
                rec.verdict.rule_id = "recovered-" + sex.rule_id;
                rec.verdict.after = sex_name(sex.value->category);
                return rec;
            }
        }
    }
    return std::nullopt;
}

}  // namespace linelist::demo
