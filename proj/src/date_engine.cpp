#include "linelist/date_engine.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>

#include "json.hpp"

namespace linelist::dates {

namespace {

struct MonthName {
    const char* name;
    int month;
};

// Full names first so "march" does not leave a stray "ch" token boundary
// decision to the caller; three-letter prefixes cover the rest.
constexpr MonthName kFullNames[] = {
    {"january", 1},  {"february", 2}, {"march", 3},    {"april", 4},
    {"june", 6},     {"july", 7},     {"august", 8},   {"september", 9},
    {"october", 10}, {"november", 11}, {"december", 12}, {"may", 5},
};
constexpr MonthName kShortNames[] = {
    {"jan", 1}, {"feb", 2}, {"mar", 3}, {"apr", 4},  {"may", 5},  {"jun", 6},
    {"jul", 7}, {"aug", 8}, {"sep", 9}, {"oct", 10}, {"nov", 11}, {"dec", 12},
};

bool match_at(const std::string& lower, std::size_t pos, const char* word) {
    std::size_t n = std::char_traits<char>::length(word);
    return lower.compare(pos, n, word) == 0;
}

long to_long(const std::string& digits) {
    long v = 0;
    std::from_chars(digits.data(), digits.data() + digits.size(), v);
    return v;
}

int two_digits(const std::string& s, std::size_t pos) {
    return (s[pos] - '0') * 10 + (s[pos + 1] - '0');
}

std::string year_str(const YearContext& ctx) { return std::to_string(ctx.year); }
std::string yy_str(const YearContext& ctx) {
    return year_str(ctx).substr(2, 2);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

DateToken derived_token(const DateToken& from, std::string digits) {
    return DateToken{std::move(digits), from.original, from.month_name_substituted};
}

// Count of positions where the dropped year suffix agrees with the context
// year; drives the D06 confidence split.
int shared_positional_digits(const std::string& a, const std::string& b) {
    int shared = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (a[i] == b[i]) ++shared;
    return shared;
}

void push_if_valid(std::vector<Date>& out, const Date& d) {
    if (is_valid_date(d) && std::find(out.begin(), out.end(), d) == out.end())
        out.push_back(d);
}

// Runs the cascade to a date, refusing Review/Delete branches. Used to
// materialize the suggested candidate of low-confidence transforms.
std::optional<Date> resolve_silently(DateToken token, const YearContext& ctx) {
    for (int step = 0; step <= kMaxTransforms; ++step) {
        RuleOutcome out = classify_and_apply(token, ctx);
        switch (out.action) {
            case RuleAction::Transform:
                if (!out.transformed || out.transformed->digits == token.digits)
                    return std::nullopt;
                token = *out.transformed;
                break;
            case RuleAction::ExcelSerial:
            case RuleAction::Accept:
                return out.resolved;
            case RuleAction::Delete:
            case RuleAction::Review:
                return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

DateToken standardize(const std::string& raw) {
    std::string lower;
    lower.reserve(raw.size());
    for (char c : raw) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    std::string with_months;
    bool substituted = false;
    std::size_t i = 0;
    while (i < lower.size()) {
        int month = 0;
        std::size_t consumed = 0;
        for (const auto& m : kFullNames) {
            if (match_at(lower, i, m.name)) {
                month = m.month;
                consumed = std::char_traits<char>::length(m.name);
                break;
            }
        }
        if (!month) {
            for (const auto& m : kShortNames) {
                if (match_at(lower, i, m.name)) {
                    month = m.month;
                    consumed = 3;
                    break;
                }
            }
        }
        if (month) {
            with_months += month < 10 ? "0" : "1";
            with_months += static_cast<char>('0' + month % 10);
            substituted = true;
            i += consumed;
        } else {
            with_months += lower[i];
            ++i;
        }
    }

    DateToken token;
    token.original = raw;
    token.month_name_substituted = substituted;
    for (char c : with_months)
        if (c >= '0' && c <= '9') token.digits += c;
    return token;
}

Date excel_serial_to_date(long serial) {
    if (serial < 61)
        throw std::out_of_range(
            "excel serial below supported floor (61): " + std::to_string(serial));
    using namespace std::chrono;
    const sys_days epoch{year{1899} / 12 / 30};
    year_month_day ymd{epoch + days{serial}};
    return Date{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

long date_to_excel_serial(const Date& d) {
    using namespace std::chrono;
    const sys_days epoch{year{1899} / 12 / 30};
    return (sys_days{year{d.year} / d.month / d.day} - epoch).count();
}

std::pair<long, long> serial_range(const YearContext& ctx) {
    return {ctx.serial_min(), ctx.serial_max()};
}

std::vector<std::string> serial_prefixes(const YearContext& ctx) {
    std::vector<std::string> prefixes;
    for (long s = ctx.serial_min(); s <= ctx.serial_max(); ++s) {
        std::string p = std::to_string(s).substr(0, 2);
        if (std::find(prefixes.begin(), prefixes.end(), p) == prefixes.end())
            prefixes.push_back(p);
    }
    return prefixes;
}

RuleOutcome classify_and_apply(const DateToken& token, const YearContext& ctx) {
    const std::string& t = token.digits;
    if (t.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("classify_and_apply requires a standardized token");

    const std::size_t len = t.size();
    const std::string yyyy = year_str(ctx);
    const std::string yy = yy_str(ctx);
    const auto [smin, smax] = serial_range(ctx);

    // D01: nothing longer than ddmmyyyy can be a date.
    if (len > 8) return {"D01", RuleAction::Delete, {}, {}, {}};

    if (len == 5) {
        const long value = to_long(t);
        const bool in_range = value >= smin && value <= smax;
        const bool ends_yy = ends_with(t, yy);
        const auto prefixes = serial_prefixes(ctx);
        const bool serial_prefix =
            std::find(prefixes.begin(), prefixes.end(), t.substr(0, 2)) != prefixes.end();
        if (!serial_prefix && ends_yy)
            return {"D02", RuleAction::Transform,
                    derived_token(token, t.substr(0, 3) + yyyy), {}, {}};
        if (!in_range && ends_yy)
            return {"D03", RuleAction::Transform,
                    derived_token(token, t.substr(0, 3) + yyyy), {}, {}};
        if (!in_range)
            return {"D04", RuleAction::Delete, {}, {}, {}};
        return {"D05", RuleAction::ExcelSerial, {}, excel_serial_to_date(value), {}};
    }

    if (len == 8) {
        if (!ends_with(t, yyyy)) {
            std::string replaced = t.substr(0, 4) + yyyy;
            DateToken next = derived_token(token, replaced);
            if (shared_positional_digits(t.substr(4), yyyy) < 2) {
                RuleOutcome out{"D06", RuleAction::Review, next, {}, {}};
                if (auto d = resolve_silently(next, ctx)) push_if_valid(out.candidates, *d);
                return out;
            }
            return {"D06", RuleAction::Transform, next, {}, {}};
        }
        if (two_digits(t, 2) > 12)
            return {"D07", RuleAction::Transform,
                    derived_token(token, t.substr(2, 2) + t.substr(0, 2) + t.substr(4)),
                    {}, {}};
        // D22: canonical ddmmyyyy for the context year.
        return {"D22", RuleAction::Accept, {}, parse_ddmmyyyy(t), {}};
    }

    if (len == 7) {
        if (t.back() == '1') {
            // Trailing "NS1" test mention: dropping the 1 must leave a
            // recognizable six-digit value.
            std::string dropped = t.substr(0, 6);
            bool six_matches = dropped.substr(0, 4) == yyyy || !ends_with(dropped, yy) ||
                               (two_digits(dropped, 2) <= 12 && two_digits(dropped, 0) <= 31);
            if (six_matches)
                return {"D08", RuleAction::Transform, derived_token(token, dropped), {}, {}};
        }
        if (!ends_with(t, yyyy)) {
            DateToken next = derived_token(token, t.substr(0, 3) + yyyy);
            RuleOutcome out{"D09", RuleAction::Review, next, {}, {}};
            if (auto d = resolve_silently(next, ctx)) push_if_valid(out.candidates, *d);
            return out;
        }
        const std::string head3 = t.substr(0, 3);
        if (head3 == "311" || head3 == "211" || head3 == "111") {
            // d-mm-yyyy (early November) vs dd-m-yyyy (late January).
            RuleOutcome out{"D10", RuleAction::Review, {}, {}, {}};
            push_if_valid(out.candidates, Date{ctx.year, two_digits(t, 1), t[0] - '0'});
            push_if_valid(out.candidates, Date{ctx.year, t[2] - '0', two_digits(t, 0)});
            return out;
        }
        const int head2 = two_digits(t, 0);
        if (head2 == 10 || head2 == 20 || head2 == 30) {
            // dd-m-yyyy (10th/20th/30th) vs d-mm-yyyy (1st/2nd/3rd).
            RuleOutcome out{"D11", RuleAction::Review, {}, {}, {}};
            push_if_valid(out.candidates, Date{ctx.year, t[2] - '0', head2});
            push_if_valid(out.candidates, Date{ctx.year, two_digits(t, 1), t[0] - '0'});
            return out;
        }
        if (t[0] == '0')
            return {"D12", RuleAction::Transform,
                    derived_token(token, t.substr(0, 2) + "0" + t.substr(2)), {}, {}};
        if (two_digits(t, 1) <= 12)
            return {"D13", RuleAction::Transform, derived_token(token, "0" + t), {}, {}};
        return {"D14", RuleAction::Transform,
                derived_token(token, t.substr(0, 2) + "0" + t.substr(2)), {}, {}};
    }

    if (len == 6) {
        if (t.substr(0, 4) == yyyy) {
            // yyyydm vs yyyymd cannot be told apart; queue both readings.
            RuleOutcome out{"D15", RuleAction::Review, {}, {}, {}};
            push_if_valid(out.candidates, Date{ctx.year, t[5] - '0', t[4] - '0'});
            push_if_valid(out.candidates, Date{ctx.year, t[4] - '0', t[5] - '0'});
            return out;
        }
        if (!ends_with(t, yy))
            return {"D16", RuleAction::Transform,
                    derived_token(token, t.substr(0, 4) + yy), {}, {}};
        if (two_digits(t, 2) <= 12 && two_digits(t, 0) <= 31)
            return {"D17", RuleAction::Transform,
                    derived_token(token, t.substr(0, 4) + yyyy), {}, {}};
        return {"unclassified", RuleAction::Review, {}, {}, {}};
    }

    if (len == 4) {
        if (t == yyyy) return {"D18", RuleAction::Review, {}, {}, {}};
        if (!ends_with(t, yy))
            return {"D19", RuleAction::Transform, derived_token(token, t + yyyy), {}, {}};
        return {"D20", RuleAction::Transform,
                derived_token(token,
                              std::string("0") + t[0] + "0" + t[1] + yyyy.substr(0, 2) +
                                  t.substr(2)),
                {}, {}};
    }

    // len <= 3: too short to carry a date.
    return {"D21", RuleAction::Delete, {}, {}, {}};
}

std::optional<Date> parse_ddmmyyyy(const std::string& digits) {
    if (digits.size() != 8 ||
        digits.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
    Date d{std::stoi(digits.substr(4, 4)), two_digits(digits, 2), two_digits(digits, 0)};
    if (!is_valid_date(d)) return std::nullopt;
    return d;
}

bool within_plausibility_window(const Date& d, const YearContext& ctx) {
    long serial = date_to_excel_serial(d);
    return serial >= ctx.serial_min() - ctx.plausibility_window_days &&
           serial <= ctx.serial_max() + ctx.plausibility_window_days;
}

DateCellResult clean_date_cell(const std::string& raw, const YearContext& ctx) {
    DateCellResult result;
    CellVerdict& v = result.verdict;
    v.before = raw;

    DateToken token = standardize(raw);
    if (token.digits.empty()) {
        v.phase = Phase::Screened;
        v.action = Action::Missing;
        return result;
    }

    std::vector<std::string> chain;
    const auto chain_id = [&chain] {
        std::string id;
        for (std::size_t i = 0; i < chain.size(); ++i) {
            if (i) id += '>';
            id += chain[i];
        }
        return id;
    };

    std::optional<Date> resolved;
    for (int step = 0;; ++step) {
        if (step > kMaxTransforms) {
            chain.push_back("transform-cap");
            v.rule_id = chain_id();
            v.phase = Phase::Diagnosed;
            v.action = Action::ReviewQueued;
            return result;
        }
        RuleOutcome out = classify_and_apply(token, ctx);
        chain.push_back(out.rule_id);
        if (out.action == RuleAction::Transform) {
            if (!out.transformed || out.transformed->digits == token.digits) {
                chain.push_back("transform-noop");
                v.rule_id = chain_id();
                v.phase = Phase::Diagnosed;
                v.action = Action::ReviewQueued;
                return result;
            }
            token = *out.transformed;
            continue;
        }
        if (out.action == RuleAction::Delete) {
            v.rule_id = chain_id();
            v.phase = Phase::Edited;
            v.action = Action::Deleted;
            return result;
        }
        if (out.action == RuleAction::Review) {
            v.rule_id = chain_id();
            v.phase = Phase::Diagnosed;
            v.action = Action::ReviewQueued;
            result.candidates = out.candidates;
            for (const auto& c : out.candidates) v.candidates.push_back(c.iso());
            return result;
        }
        if (out.action == RuleAction::Accept) {
            auto parsed = parse_ddmmyyyy(token.digits);
            if (!parsed) {
                chain.push_back("calendar-invalid");
                v.rule_id = chain_id();
                v.phase = Phase::Diagnosed;
                v.action = Action::ReviewQueued;
                return result;
            }
            resolved = parsed;
        } else {  // ExcelSerial
            resolved = out.resolved;
        }
        break;
    }

    if (!within_plausibility_window(*resolved, ctx)) {
        chain.push_back("plausibility");
        v.rule_id = chain_id();
        v.phase = Phase::Diagnosed;
        v.action = Action::ReviewQueued;
        v.candidates.push_back(resolved->iso());
        result.candidates.push_back(*resolved);
        return result;
    }

    v.rule_id = chain_id();
    v.phase = Phase::Edited;
    v.action = Action::AutoCorrected;
    v.after = resolved->iso();
    result.resolved = resolved;
    return result;
}

std::string rule_catalog_json() {
    using nlohmann::json;
    const auto rule = [](const char* id, const char* condition, const char* action,
                         const char* rationale) {
        return json{{"rule_id", id},
                    {"condition", condition},
                    {"action", action},
                    {"rationale", rationale}};
    };
    json catalog = json::array({
        rule("D01", "length > 8", "delete",
             "ddmmyyyy is at most eight digits; longer values are not dates"),
        rule("D02", "length 5, leading pair is not a serial prefix, ends in yy",
             "replace trailing yy with yyyy",
             "as-typed ddmyy/dmmyy values end in the two-digit year"),
        rule("D03", "length 5, outside the year's serial range, ends in yy",
             "replace trailing yy with yyyy",
             "serial-prefixed values outside the range are as-typed, not serials"),
        rule("D04", "length 5, outside the year's serial range, not ending yy",
             "delete", "no as-typed or serial reading fits"),
        rule("D05", "length 5, within the year's serial range",
             "convert as spreadsheet serial",
             "five-digit in-range values are serial dates"),
        rule("D06", "length 8, not ending in the context yyyy",
             "replace trailing four digits with yyyy; review when the dropped "
             "suffix shares fewer than 2 digits with yyyy",
             "eight-digit dates must end with the batch year"),
        rule("D07", "length 8, month positions read above 12",
             "swap to ddmmyyyy from mmddyyyy", "month-first entry habit"),
        rule("D08", "length 7, trailing 1, remainder matches a six-digit rule",
             "drop the trailing digit",
             "NS1 test mentions contaminate the digit string"),
        rule("D09", "length 7, not ending in yyyy",
             "review; suggested fix replaces the last four digits with yyyy",
             "lossy repair, operator confirms"),
        rule("D10", "length 7, starts 311/211/111, ends yyyy",
             "review with d-mm-yyyy and dd-m-yyyy candidates",
             "early-November and late-January collide in this shape"),
        rule("D11", "length 7, leading pair 10/20/30, ends yyyy",
             "review with dd-m-yyyy and d-mm-yyyy candidates",
             "1st-3rd and 10th/20th/30th collide in this shape"),
        rule("D12", "length 7, starts with 0", "insert 0 at the third position",
             "zero-padded day with single-digit month"),
        rule("D13", "length 7, ends yyyy, positions 2-3 at most 12",
             "prepend 0", "single-digit day with two-digit month"),
        rule("D14", "length 7, remaining", "insert 0 at the third position",
             "two-digit day with single-digit month"),
        rule("D15", "length 6, leading four digits equal yyyy",
             "review with yyyydm and yyyymd candidates",
             "year-first six-digit values cannot be read unambiguously"),
        rule("D16", "length 6, not ending yy",
             "replace trailing two digits with yy", "year typo in ddmmyy"),
        rule("D17", "length 6, ends yy, month at most 12, day at most 31",
             "replace trailing yy with yyyy", "plain ddmmyy value"),
        rule("D18", "length 4, equals yyyy", "review",
             "a bare year carries no day or month"),
        rule("D19", "length 4, not ending yy", "append yyyy, read as ddmm",
             "day-month without a year"),
        rule("D20", "length 4, remaining", "pad day and month, expand yy",
             "dmyy shorthand"),
        rule("D21", "length 3 or less", "delete", "too short to carry a date"),
        rule("D22", "length 8, ends with yyyy, month at most 12",
             "accept as ddmmyyyy", "canonical form, terminal rule"),
    });
    return catalog.dump(2);
}

}  // namespace linelist::dates
