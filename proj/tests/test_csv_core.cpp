#include "doctest.h"

#include "linelist/core.hpp"
#include "linelist/csv.hpp"

using namespace linelist;

TEST_CASE("csv round trip with quoting") {
    csv::Row row{"plain", "has,comma", "has \"quote\"", "multi\nline", ""};
    auto text = csv::write_row(row);
    auto parsed = csv::parse(text);
    REQUIRE(parsed.rows.size() == 1);
    CHECK(parsed.rows[0] == row);
}

TEST_CASE("csv crlf and trailing newline handling") {
    auto r = csv::parse("a,b\r\nc,d\r\n");
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0] == csv::Row{"a", "b"});
    CHECK(r.rows[1] == csv::Row{"c", "d"});

    auto no_trailer = csv::parse("a,b\nc,d");
    CHECK(no_trailer.rows.size() == 2);
}

TEST_CASE("csv invalid utf-8 is replaced, row flagged") {
    std::string text = "name\n\xFFgarbled\n";
    auto r = csv::parse(text);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[1][0].find("\xEF\xBF\xBD") == 0);  // U+FFFD
    REQUIRE(r.replaced_rows.size() == 1);
    CHECK(r.replaced_rows[0] == 1);
}

TEST_CASE("csv quoted field with doubled quotes") {
    auto r = csv::parse("\"a\"\"b\",c\n");
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0][0] == "a\"b");
}

TEST_CASE("column mapping parse, comments, validation") {
    std::string cfg =
        "# roles\n"
        "TestDate = Date of Testing\n"
        "Age = Age\n"
        "Sex = Sex\n"
        "Address = Address\n";
    auto m = load_column_mapping(cfg);
    CHECK(m.has_role(Role::TestDate));
    CHECK(*m.header_for(Role::Age) == "Age");
    CHECK(m.imputation_possible());

    CHECK_THROWS_AS(load_column_mapping("Age = A\nAge = B\nSex = S\nAddress = X\n"),
                    ConfigError);
    // Age/Sex/Address are mandatory.
    CHECK_THROWS_AS(load_column_mapping("Age = A\nSex = S\n"), ConfigError);
}

TEST_CASE("ingest aligns cells to header and quarantines bad rows") {
    auto mapping = load_column_mapping(
        "TestDate = Date\nAge = Age\nSex = Sex\nAddress = Address\n");
    std::string text =
        "Date,Age,Sex,Address,Remarks\n"
        "01-02-2017,30,M,khanna,ok\n"
        "shortrow,only\n"
        "02-02-2017,40,F,kotla,\n";
    auto r = ingest_csv_text(text, mapping, "mem");
    REQUIRE(r.header.size() == 5);
    CHECK(r.effective_mapping.entries.size() == 5);
    CHECK(r.effective_mapping.entries[4].role == Role::Other);
    REQUIRE(r.records.size() == 2);
    CHECK(*r.records[0].cell(r.effective_mapping, Role::Age) == "30");
    REQUIRE(r.quarantined.size() == 1);
    CHECK(r.quarantined[0].rule_id == "malformed-row");
    CHECK(r.quarantined[0].action == Action::ReviewQueued);
}

TEST_CASE("date validity and iso") {
    CHECK(is_valid_date({2016, 2, 29}));
    CHECK_FALSE(is_valid_date({2017, 2, 29}));
    CHECK_FALSE(is_valid_date({2017, 13, 1}));
    CHECK_FALSE(is_valid_date({2017, 4, 31}));
    CHECK(Date{2017, 1, 4}.iso() == "2017-01-04");
    CHECK(*date_from_iso("2017-01-04") == Date{2017, 1, 4});
    CHECK_FALSE(date_from_iso("2017-02-30"));
    CHECK_FALSE(date_from_iso("not-a-date"));
}

TEST_CASE("year context serial bounds per study year") {
    struct Row { int year; long lo, hi; };
    // Bounds verified against an independent day count from 1899-12-30.
    const Row rows[] = {
        {2015, 42005, 42369}, {2016, 42370, 42735}, {2017, 42736, 43100},
        {2018, 43101, 43465}, {2019, 43466, 43830},
    };
    for (const auto& r : rows) {
        auto ctx = make_year_context(r.year);
        CHECK(ctx.serial_min() == r.lo);
        CHECK(ctx.serial_max() == r.hi);
    }
}

TEST_CASE("role names round trip") {
    for (Role r : {Role::TestDate, Role::ReportDate, Role::OpdDate,
                   Role::AdmissionDate, Role::DischargeDate, Role::Age, Role::Sex,
                   Role::Address, Role::Name, Role::Contact, Role::Other}) {
        CHECK(role_from_name(role_name(r)) == r);
    }
    CHECK_FALSE(role_from_name("Bogus"));
}
