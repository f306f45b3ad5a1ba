#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linelist/core.hpp"

namespace linelist::synth {

// What the cleaner is expected to do with a rendered cell.
enum class ExpectedOutcome {
    Resolve,              // auto-resolves to the exact ground-truth date
    ReviewContainsTruth,  // review queue, truth among the candidates
    ReviewAny,            // review queue, truth not recoverable
    Deleted,              // auto-deleted
};

const char* outcome_name(ExpectedOutcome o);

struct RendererSpec {
    std::string rule_id;  // targeted cascade rule; "C00" is the
                          // separator/month-name anomaly class
    bool ambiguous = false;
    double weight = 0.0;
    ExpectedOutcome outcome = ExpectedOutcome::Resolve;
};

// Anomaly-class frequencies shaped like a real surveillance batch.
std::vector<RendererSpec> default_renderer_specs();

// Not every date can be rendered through every rule shape.
bool renderer_compatible(const RendererSpec& spec, const Date& d);

// Deterministic in (d, spec, seed); nullopt when incompatible.
std::optional<std::string> render_messy_date(const Date& d, const RendererSpec& spec,
                                             const YearContext& ctx,
                                             std::uint64_t seed);

struct GroundTruth {
    std::size_t row = 0;
    std::string date_rule;
    ExpectedOutcome date_outcome = ExpectedOutcome::Resolve;
    std::optional<Date> test_date;  // absent when the cell was left empty
    std::optional<double> age_years;
    bool age_extractable = false;  // directly or via recovery
    std::string sex;               // "" when absent
    bool sex_extractable = false;
    std::string district;
    std::string settlement;
};

struct CorpusOptions {
    std::size_t n = 1000;
    std::uint64_t seed = 7;
    // Fraction of rows with an empty test-date cell (imputation donors are
    // still present on those rows).
    double missing_test_frac = 0.02;
    // Fraction of rows whose age or sex value sits in another column.
    double misplaced_demo_frac = 0.05;
    // Fraction of cells that are unextractable (empty or review-only).
    double missing_age_frac = 0.005;
    double missing_sex_frac = 0.005;
    std::vector<RendererSpec> specs = default_renderer_specs();
};

struct Corpus {
    std::string csv_text;
    std::string truth_csv;
    std::vector<GroundTruth> truth;
};

Corpus generate_corpus(const CorpusOptions& options, const YearContext& ctx);

// Column-role mapping matching the generated header.
std::string mapping_config();

// Small Punjab-like gazetteer fixture used by the generator and tests.
std::string toy_gazetteer_csv();

// Offline geocoder table covering the toy gazetteer.
std::string toy_geocode_stub_json();

}  // namespace linelist::synth
