#include "doctest.h"

#include <set>

#include "linelist/pipeline.hpp"
#include "linelist/synth.hpp"

using namespace linelist;
using namespace linelist::pipe;

namespace {

PipelineConfig test_config() {
    PipelineConfig cfg;
    cfg.anon.secret_key = "unit-test-key-0123456789";
    cfg.anon.work_factor = 64;
    cfg.anon.batch_salt = "t";
    cfg.gazetteer = addr::Gazetteer::from_csv(synth::toy_gazetteer_csv());
    return cfg;
}

const char* kCsv =
    "Patient Name,Contact Number,Date of Testing,Date of Admission,Age,Sex,Address,Remarks\n"
    "Asha Verma,9812345678,040517,02-05-2017,34,F,vill Khanna distt Ludhiana,\n"
    "Ram Singh,9811111111,2112017,30-04-2017,40,M,Bhakna,\n"          // ambiguous date
    "Leela Devi,9822222222,,03-06-2017,,,machhiwara,45/F\n"           // missing date+demo
    "Mohan Lal,9833333333,9,01-07-2017,28,M,S/O Prem Lal,\n";         // deleted date

IngestResult ingest() {
    auto mapping = load_column_mapping(
        "Name = Patient Name\nContact = Contact Number\n"
        "TestDate = Date of Testing\nAdmissionDate = Date of Admission\n"
        "Age = Age\nSex = Sex\nAddress = Address\n");
    return ingest_csv_text(kCsv, mapping, "mem");
}

}  // namespace

TEST_CASE("pipeline end to end over a hand-built batch") {
    auto in = ingest();
    REQUIRE(in.records.size() == 4);
    auto ctx = make_year_context(2017);
    auto cfg = test_config();
    auto result = run_pipeline(in.records, in.effective_mapping, ctx, cfg);
    REQUIRE(result.records.size() == 4);

    // Row 0: everything parses.
    const auto& r0 = result.records[0];
    CHECK(r0.test_date == Date{2017, 5, 4});
    CHECK(r0.test_date_provenance == DateProvenance::Parsed);
    CHECK(*r0.age_years == doctest::Approx(34));
    CHECK(r0.sex == Sex::Female);
    REQUIRE(r0.location);
    CHECK(*r0.location->settlement == "Khanna");
    CHECK_FALSE(r0.anon_id.empty());

    // Row 1: ambiguous date is reviewed, not resolved — and not imputed
    // over while the review is pending.
    CHECK_FALSE(result.records[1].test_date);
    CHECK(result.records[1].test_date_provenance == DateProvenance::Missing);

    // Row 2: age recovered from Remarks, sex from the same combined cell;
    // missing test date imputed from admission.
    const auto& r2 = result.records[2];
    CHECK(*r2.age_years == doctest::Approx(45));
    CHECK(r2.sex == Sex::Female);
    CHECK(r2.test_date_provenance == DateProvenance::Imputed);
    REQUIRE(r2.test_date);
    // Offsets come from rows 0 (2 days); row 1's test date is unresolved.
    CHECK(*r2.test_date == Date{2017, 6, 5});

    // Row 3: short digit string deleted; the deleted date counts as missing
    // and is imputed from the admission donor. Guardian-only address reviews.
    CHECK(result.records[3].test_date == Date{2017, 7, 3});
    CHECK(result.records[3].test_date_provenance == DateProvenance::Imputed);

    // Anonymization: identifiers never reach verdicts' after fields or records.
    std::set<std::string> ids;
    for (const auto& rec : result.records) ids.insert(rec.anon_id);
    CHECK(ids.size() == 4);

    // Review queue mirrors the review verdicts.
    std::size_t review_verdicts = 0;
    for (const auto& v : result.log.verdicts)
        if (v.action == Action::ReviewQueued) ++review_verdicts;
    CHECK(result.review_items.size() == review_verdicts);
    bool guardian_item = false;
    for (const auto& item : result.review_items)
        guardian_item |= item.verdict.rule_id == "guardian-only-address";
    CHECK(guardian_item);
}

TEST_CASE("worker count does not change any output byte") {
    auto in = ingest();
    auto ctx = make_year_context(2017);
    auto cfg = test_config();
    auto one = run_pipeline(in.records, in.effective_mapping, ctx, cfg);
    cfg.workers = 4;
    auto four = run_pipeline(in.records, in.effective_mapping, ctx, cfg);

    CHECK(clean_records_csv(one.records) == clean_records_csv(four.records));
    CHECK(audit::audit_to_jsonl(one.log) == audit::audit_to_jsonl(four.log));
    CHECK(summary_json(one, ctx) == summary_json(four, ctx));

    cfg.workers = 0;
    CHECK_THROWS_AS(run_pipeline(in.records, in.effective_mapping, ctx, cfg),
                    ConfigError);
    cfg.workers = 1;
    cfg.anon.secret_key = "short";
    CHECK_THROWS_AS(run_pipeline(in.records, in.effective_mapping, ctx, cfg),
                    ConfigError);
}

TEST_CASE("review resolutions: accept, manual, delete, re-validation") {
    auto in = ingest();
    auto ctx = make_year_context(2017);
    auto cfg = test_config();
    auto result = run_pipeline(in.records, in.effective_mapping, ctx, cfg);

    audit::ReviewItem* date_item = nullptr;
    for (auto& item : result.review_items)
        if (item.verdict.role == Role::TestDate && !item.candidates.empty())
            date_item = &item;
    REQUIRE(date_item);
    CHECK(date_item->verdict.row_index == 1);

    date_item->resolution = audit::ResolutionType::Accepted;
    date_item->accepted_index = 1;  // 2017-01-21 reading
    auto outcome = apply_resolutions(result.review_items, result.records, ctx, cfg);
    CHECK(outcome.applied == 1);
    CHECK(result.records[1].test_date == Date{2017, 1, 21});
    REQUIRE(outcome.verdicts.size() == 1);
    CHECK(outcome.verdicts[0].action == Action::ManuallyCorrected);

    // Manual value runs back through the cleaners; junk reopens the item.
    date_item->resolution = audit::ResolutionType::ManualValue;
    date_item->manual_value = "not a date";
    auto bad = apply_resolutions(result.review_items, result.records, ctx, cfg);
    CHECK(bad.reopened == 1);
    CHECK(date_item->pending());
    CHECK_FALSE(date_item->note.empty());

    date_item->resolution = audit::ResolutionType::ManualValue;
    date_item->manual_value = "2017-11-02";
    auto good = apply_resolutions(result.review_items, result.records, ctx, cfg);
    CHECK(good.applied == 1);
    CHECK(result.records[1].test_date == Date{2017, 11, 2});

    date_item->resolution = audit::ResolutionType::Deleted;
    auto del = apply_resolutions(result.review_items, result.records, ctx, cfg);
    CHECK(del.applied == 1);
    CHECK_FALSE(result.records[1].test_date);
}

TEST_CASE("geocoding fills coordinates through the offline stub") {
    auto in = ingest();
    auto ctx = make_year_context(2017);
    auto cfg = test_config();
    auto stub = geo::StubGeocodeClient::from_json(synth::toy_geocode_stub_json());
    geo::GeocodeCache cache;
    cfg.geocode_client = &stub;
    cfg.geocode_cache = &cache;

    auto result = run_pipeline(in.records, in.effective_mapping, ctx, cfg);
    REQUIRE(result.records[0].location);
    REQUIRE(result.records[0].location->latitude);
    CHECK(*result.records[0].location->latitude == doctest::Approx(30.700));
    CHECK(cache.size() >= 1);

    auto csv_text = clean_records_csv(result.records);
    CHECK(csv_text.find("30.700000") != std::string::npos);
}

TEST_CASE("summaries carry variable percentages and rule counters") {
    auto in = ingest();
    auto ctx = make_year_context(2017);
    auto result = run_pipeline(in.records, in.effective_mapping, ctx, test_config());

    auto j = summary_json(result, ctx);
    CHECK(j.find("\"year\": 2017") != std::string::npos);
    CHECK(j.find("percent_extracted") != std::string::npos);
    CHECK(j.find("review_pending") != std::string::npos);

    auto t = summary_text(result, ctx);
    CHECK(t.find("Cleaning summary, year 2017") != std::string::npos);
    CHECK(t.find("pending review items") != std::string::npos);

    auto csv_text = clean_records_csv(result.records);
    CHECK(csv_text.rfind("anon_id,test_date,date_provenance,age_years,sex,"
                         "district,block,settlement,lat,lon\n", 0) == 0);
}
