#include "doctest.h"

#include <map>

#include "linelist/address.hpp"
#include "linelist/csv.hpp"
#include "linelist/date_engine.hpp"
#include "linelist/synth.hpp"

using namespace linelist;
using namespace linelist::synth;

TEST_CASE("renderer table covers the cascade and flags the ambiguous rules") {
    auto specs = default_renderer_specs();
    std::map<std::string, const RendererSpec*> by_id;
    for (const auto& s : specs) by_id[s.rule_id] = &s;
    CHECK(by_id.size() == 23);  // C00 plus D01..D22
    for (const char* id : {"D10", "D11", "D15"}) CHECK(by_id.at(id)->ambiguous);
    CHECK_FALSE(by_id.at("D17")->ambiguous);
    CHECK(by_id.at("D05")->weight > by_id.at("D12")->weight);
    CHECK(by_id.at("D01")->outcome == ExpectedOutcome::Deleted);
    CHECK(by_id.at("D03")->outcome == ExpectedOutcome::ReviewAny);
}

TEST_CASE("rendering is deterministic in date, spec, and seed") {
    auto ctx = make_year_context(2018);
    auto specs = default_renderer_specs();
    Date d{2018, 5, 23};
    for (const auto& spec : specs) {
        auto a = render_messy_date(d, spec, ctx, 99);
        auto b = render_messy_date(d, spec, ctx, 99);
        CHECK(a == b);
    }
}

TEST_CASE("incompatible shapes refuse to render") {
    auto ctx = make_year_context(2017);
    auto specs = default_renderer_specs();
    const auto spec_of = [&](const char* id) -> const RendererSpec& {
        for (const auto& s : specs)
            if (s.rule_id == id) return s;
        throw std::logic_error(id);
    };
    // dd-m shapes collide with the d-mm reading for these days.
    CHECK_FALSE(render_messy_date({2017, 1, 11}, spec_of("D14"), ctx, 1));
    CHECK_FALSE(render_messy_date({2017, 5, 10}, spec_of("D14"), ctx, 1));
    CHECK(render_messy_date({2017, 5, 23}, spec_of("D14"), ctx, 1));
    // Month-first swap needs an unambiguous day.
    CHECK_FALSE(render_messy_date({2017, 5, 7}, spec_of("D07"), ctx, 1));
    CHECK(render_messy_date({2017, 5, 13}, spec_of("D07"), ctx, 1));
    // Ambiguous renderers only accept dates matching their collision shape.
    CHECK(render_messy_date({2017, 11, 2}, spec_of("D10"), ctx, 1));
    CHECK_FALSE(render_messy_date({2017, 6, 2}, spec_of("D10"), ctx, 1));
}

TEST_CASE("corpus generation is deterministic and well-formed") {
    CorpusOptions opt;
    opt.n = 300;
    opt.seed = 123;
    auto ctx = make_year_context(2017);
    auto a = generate_corpus(opt, ctx);
    auto b = generate_corpus(opt, ctx);
    CHECK(a.csv_text == b.csv_text);
    CHECK(a.truth_csv == b.truth_csv);
    REQUIRE(a.truth.size() == 300);

    auto parsed = csv::parse(a.csv_text);
    REQUIRE(parsed.rows.size() == 301);  // header + rows
    const auto& header = parsed.rows[0];
    CHECK(header[0] == "Patient Name");
    for (const auto& row : parsed.rows) CHECK(row.size() == header.size());

    opt.seed = 124;
    auto c = generate_corpus(opt, ctx);
    CHECK(c.csv_text != a.csv_text);

    CHECK_THROWS_AS(generate_corpus(CorpusOptions{.n = 0}, ctx), ConfigError);
}

TEST_CASE("corpus truth matches what the date engine does with each cell") {
    CorpusOptions opt;
    opt.n = 500;
    opt.seed = 5;
    auto ctx = make_year_context(2019);
    auto corpus = generate_corpus(opt, ctx);
    auto parsed = csv::parse(corpus.csv_text);

    std::size_t date_col = 2;
    REQUIRE(parsed.rows[0][date_col] == "Date of Testing");

    for (std::size_t i = 0; i < corpus.truth.size(); ++i) {
        const auto& truth = corpus.truth[i];
        const std::string& cell = parsed.rows[i + 1][date_col];
        auto res = dates::clean_date_cell(cell, ctx);
        CAPTURE(cell);
        CAPTURE(truth.date_rule);
        switch (truth.date_outcome) {
            case ExpectedOutcome::Resolve:
                if (truth.test_date) {
                    REQUIRE(res.resolved.has_value());
                    CHECK(*res.resolved == *truth.test_date);
                } else {
                    CHECK(res.verdict.action == Action::Missing);
                }
                break;
            case ExpectedOutcome::ReviewContainsTruth: {
                CHECK(res.verdict.action == Action::ReviewQueued);
                bool found = false;
                for (const auto& c : res.candidates) found |= (c == *truth.test_date);
                CHECK(found);
                break;
            }
            case ExpectedOutcome::ReviewAny:
                CHECK(res.verdict.action == Action::ReviewQueued);
                break;
            case ExpectedOutcome::Deleted:
                CHECK(res.verdict.action == Action::Deleted);
                break;
        }
    }
}

TEST_CASE("corpus review share stays under the automation target") {
    CorpusOptions opt;
    opt.n = 4000;
    opt.missing_test_frac = 0.0;
    auto ctx = make_year_context(2018);
    auto corpus = generate_corpus(opt, ctx);
    std::size_t review = 0;
    for (const auto& t : corpus.truth)
        if (t.date_outcome == ExpectedOutcome::ReviewContainsTruth ||
            t.date_outcome == ExpectedOutcome::ReviewAny)
            ++review;
    CHECK(double(review) / corpus.truth.size() <= 0.01);
}

TEST_CASE("bundled fixtures parse") {
    CHECK_NOTHROW(load_column_mapping(mapping_config()));
    auto g = addr::Gazetteer::from_csv(toy_gazetteer_csv());
    CHECK(g.entries().size() == 16);
}
