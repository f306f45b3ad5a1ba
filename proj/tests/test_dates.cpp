#include "doctest.h"

#include <random>
#include <set>

#include "linelist/date_engine.hpp"
#include "linelist/synth.hpp"

using namespace linelist;
using namespace linelist::dates;

namespace {

// Independent serial oracle: walk forward one day at a time from the epoch.
// Deliberately shares no code with the chrono-based implementation.
struct OracleDate {
    int y, m, d;
};

bool oracle_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int oracle_month_len(int y, int m) {
    static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && oracle_leap(y)) return 29;
    return len[m - 1];
}

OracleDate oracle_from_serial(long serial) {
    OracleDate cur{1899, 12, 30};
    for (long i = 0; i < serial; ++i) {
        if (++cur.d > oracle_month_len(cur.y, cur.m)) {
            cur.d = 1;
            if (++cur.m > 12) {
                cur.m = 1;
                ++cur.y;
            }
        }
    }
    return cur;
}

}  // namespace

TEST_CASE("excel serial conversion matches the day-walk oracle") {
    // Spot serials across the supported band plus the full first study year.
    for (long serial : {61L, 100L, 1000L, 36526L, 42005L, 42369L, 43830L, 50000L}) {
        auto o = oracle_from_serial(serial);
        auto d = excel_serial_to_date(serial);
        CHECK(d == Date{o.y, o.m, o.d});
        CHECK(date_to_excel_serial(d) == serial);
    }
    OracleDate cur = oracle_from_serial(42004);
    for (long serial = 42005; serial <= 42369; ++serial) {
        if (++cur.d > oracle_month_len(cur.y, cur.m)) {
            cur.d = 1;
            if (++cur.m > 12) { cur.m = 1; ++cur.y; }
        }
        auto d = excel_serial_to_date(serial);
        REQUIRE(d == Date{cur.y, cur.m, cur.d});
    }
    CHECK_THROWS_AS(excel_serial_to_date(60), std::out_of_range);
}

TEST_CASE("standardize substitutes month names then strips") {
    auto t = standardize("04 Jan 2017");
    CHECK(t.digits == "04012017");
    CHECK(t.month_name_substituted);
    CHECK(standardize("4-March-17").digits == "40317");
    CHECK(standardize("12/Sep/2018").digits == "12092018");
    CHECK(standardize("n/a").digits == "");
    CHECK_FALSE(standardize("01-02-2017").month_name_substituted);
}

TEST_CASE("cascade pins: auto-resolved shapes") {
    auto ctx = make_year_context(2017);
    struct Pin {
        const char* raw;
        const char* iso;
        const char* rule;
    };
    const Pin pins[] = {
        {"01-02-2017", "2017-02-01", "D22"},
        {"04 Jan 2017", "2017-01-04", "D22"},
        {"42736", "2017-01-01", "D05"},
        {"43100", "2017-12-31", "D05"},
        {"040117", "2017-01-04", "D17>D22"},
        {"4/1/17", "2017-01-04", "D20>D22"},
        {"0412", "2017-12-04", "D19>D22"},          // ddmm, year appended
        {"04012016", "2017-01-04", "D06>D22"},      // wrong year replaced
        {"05232017", "2017-05-23", "D07>D22"},      // month-first swap
        {"01/02/17 NS1", "2017-02-01", "D08>D17>D22"},
        {"0452017", "2017-05-04", "D12>D22"},       // 0-led seven digits
        {"4052017", "2017-05-04", "D13>D22"},       // d mm yyyy
        {"2352017", "2017-05-23", "D14>D22"},       // dd m yyyy
        {"040194", "2017-01-04", "D16>D17>D22"},    // yy typo
        {"04117", "2017-01-04", "D02>D12>D22"},     // ddmyy, not a serial prefix
    };
    for (const auto& p : pins) {
        auto r = clean_date_cell(p.raw, ctx);
        CAPTURE(p.raw);
        CHECK(r.verdict.action == Action::AutoCorrected);
        REQUIRE(r.resolved.has_value());
        CHECK(r.resolved->iso() == p.iso);
        CHECK(r.verdict.rule_id == p.rule);
        CHECK(r.verdict.after == p.iso);
    }
}

TEST_CASE("cascade pins: deletions") {
    auto ctx = make_year_context(2017);
    for (const char* raw : {"9", "31", "999", "1234567899", "43900"}) {
        auto r = clean_date_cell(raw, ctx);
        CAPTURE(raw);
        CHECK(r.verdict.action == Action::Deleted);
        CHECK_FALSE(r.resolved.has_value());
    }
    CHECK(clean_date_cell("9", ctx).verdict.rule_id == "D21");
    CHECK(clean_date_cell("1234567899", ctx).verdict.rule_id == "D01");
    CHECK(clean_date_cell("43900", ctx).verdict.rule_id == "D04");
}

TEST_CASE("cascade pins: ambiguous shapes review with both readings") {
    auto ctx = make_year_context(2017);

    auto r10 = clean_date_cell("2112017", ctx);
    CHECK(r10.verdict.action == Action::ReviewQueued);
    CHECK(r10.verdict.rule_id == "D10");
    std::set<std::string> c10(r10.verdict.candidates.begin(), r10.verdict.candidates.end());
    CHECK(c10 == std::set<std::string>{"2017-11-02", "2017-01-21"});

    auto r11 = clean_date_cell("3052017", ctx);
    CHECK(r11.verdict.rule_id == "D11");
    std::set<std::string> c11(r11.verdict.candidates.begin(), r11.verdict.candidates.end());
    CHECK(c11 == std::set<std::string>{"2017-05-30", "2017-05-03"});

    auto r15 = clean_date_cell("201745", ctx);
    CHECK(r15.verdict.rule_id == "D15");
    std::set<std::string> c15(r15.verdict.candidates.begin(), r15.verdict.candidates.end());
    CHECK(c15 == std::set<std::string>{"2017-05-04", "2017-04-05"});

    auto r18 = clean_date_cell("2017", ctx);
    CHECK(r18.verdict.rule_id == "D18");
    CHECK(r18.verdict.action == Action::ReviewQueued);
    CHECK(r18.verdict.candidates.empty());
}

TEST_CASE("lossy seven-digit repair reviews with its suggestion") {
    auto ctx = make_year_context(2017);
    auto r = clean_date_cell("0412022", ctx);  // last four are not 2017
    CHECK(r.verdict.action == Action::ReviewQueued);
    CHECK(r.verdict.rule_id == "D09");
    REQUIRE(r.verdict.candidates.size() == 1);
    CHECK(r.verdict.candidates[0] == "2017-01-04");
}

TEST_CASE("empty and non-digit cells are missing, not errors") {
    auto ctx = make_year_context(2017);
    for (const char* raw : {"", "   ", "n/a", "--"}) {
        auto r = clean_date_cell(raw, ctx);
        CAPTURE(raw);
        CHECK(r.verdict.action == Action::Missing);
    }
}

TEST_CASE("calendar-invalid and unclassified values go to review") {
    auto ctx = make_year_context(2017);
    auto invalid = clean_date_cell("31-02-2017", ctx);  // Feb 31
    CHECK(invalid.verdict.action == Action::ReviewQueued);
    CHECK(invalid.verdict.rule_id == "D22>calendar-invalid");

    auto unclass = clean_date_cell("999917", ctx);
    CHECK(unclass.verdict.action == Action::ReviewQueued);
    CHECK(unclass.verdict.rule_id == "unclassified");
}

TEST_CASE("plausibility window flags off-year accepted dates") {
    auto ctx = make_year_context(2017, 31);
    CHECK(within_plausibility_window(Date{2016, 12, 15}, ctx));
    CHECK_FALSE(within_plausibility_window(Date{2016, 10, 1}, ctx));
    // A serial just outside the year resolves but lands in review; serials
    // for neighbor years fail the range rules first, so exercise via a
    // ddmmyyyy belonging to another year after D07's swap keeps the year.
    auto r = clean_date_cell("15052014", ctx);
    // wrong year -> D06 transform to 2017, lands in-window; use an in-form
    // eight-digit cell with the context year but far date instead: that IS
    // in the year, so the window never fires for it. The window guards
    // imputation and manual entries; check the predicate directly above.
    CHECK(r.verdict.action == Action::AutoCorrected);
}

TEST_CASE("transform cap terminates pathological chains") {
    auto ctx = make_year_context(2017);
    // No fixed input should hit the cap with the shipped cascade; assert the
    // invariant over a random sweep instead: every outcome is terminal.
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5000; ++i) {
        int len = std::uniform_int_distribution<int>(1, 10)(rng);
        std::string s;
        for (int j = 0; j < len; ++j)
            s += char('0' + std::uniform_int_distribution<int>(0, 9)(rng));
        auto r = clean_date_cell(s, ctx);
        CAPTURE(s);
        CHECK(r.verdict.rule_id.find("transform-cap") == std::string::npos);
        CHECK(r.verdict.rule_id.find("transform-noop") == std::string::npos);
        if (r.resolved) {
            CHECK(is_valid_date(*r.resolved));
            CHECK(within_plausibility_window(*r.resolved, ctx));
        }
    }
}

TEST_CASE("round trip property: unambiguous renderers recover the truth") {
    std::mt19937_64 rng(23);
    for (int year = 2015; year <= 2019; ++year) {
        auto ctx = make_year_context(year);
        const auto [smin, smax] = serial_range(ctx);
        for (const auto& spec : synth::default_renderer_specs()) {
            if (spec.outcome != synth::ExpectedOutcome::Resolve) continue;
            int tried = 0;
            for (int i = 0; i < 400 && tried < 120; ++i) {
                long serial = std::uniform_int_distribution<long>(smin, smax)(rng);
                Date truth = excel_serial_to_date(serial);
                auto cell = synth::render_messy_date(truth, spec, ctx, i * 977 + year);
                if (!cell) continue;
                ++tried;
                auto r = clean_date_cell(*cell, ctx);
                CAPTURE(spec.rule_id);
                CAPTURE(*cell);
                REQUIRE(r.verdict.action == Action::AutoCorrected);
                REQUIRE(r.resolved.has_value());
                CHECK(*r.resolved == truth);
            }
            CHECK(tried > 0);
        }
    }
}

TEST_CASE("round trip property: ambiguous renderers review and keep truth") {
    std::mt19937_64 rng(29);
    auto ctx = make_year_context(2018);
    const auto [smin, smax] = serial_range(ctx);
    for (const auto& spec : synth::default_renderer_specs()) {
        if (spec.outcome != synth::ExpectedOutcome::ReviewContainsTruth) continue;
        int tried = 0;
        for (int i = 0; i < 2000 && tried < 60; ++i) {
            long serial = std::uniform_int_distribution<long>(smin, smax)(rng);
            Date truth = excel_serial_to_date(serial);
            auto cell = synth::render_messy_date(truth, spec, ctx, i);
            if (!cell) continue;
            ++tried;
            auto r = clean_date_cell(*cell, ctx);
            CAPTURE(spec.rule_id);
            CAPTURE(*cell);
            CHECK(r.verdict.action == Action::ReviewQueued);
            bool has_truth = false;
            for (const auto& c : r.candidates) has_truth |= (c == truth);
            CHECK(has_truth);
        }
        CHECK(tried > 0);
    }
}

TEST_CASE("rule catalog is valid json covering every rule") {
    auto text = rule_catalog_json();
    for (const char* id : {"D01", "D05", "D10", "D15", "D22"})
        CHECK(text.find(id) != std::string::npos);
    CHECK(text.find("rationale") != std::string::npos);
}
