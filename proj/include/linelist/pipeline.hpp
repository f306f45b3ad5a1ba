#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linelist/address.hpp"
#include "linelist/anonymizer.hpp"
#include "linelist/audit.hpp"
#include "linelist/core.hpp"
#include "linelist/demographics.hpp"
#include "linelist/geocode.hpp"
#include "linelist/imputer.hpp"

namespace linelist::pipe {

struct PipelineConfig {
    demo::SexKeywords sex_keywords;
    addr::AbbrevTable abbreviations = addr::default_abbreviations();
    std::optional<addr::Gazetteer> gazetteer;
    anon::AnonConfig anon;
    bool impute = true;
    int workers = 1;
    // Geocoding runs only when a client or warm cache is attached.
    geo::GeocodeClient* geocode_client = nullptr;
    geo::GeocodeCache* geocode_cache = nullptr;
};

struct PipelineResult {
    std::vector<CleanRecord> records;
    audit::AuditLog log;
    std::vector<audit::ReviewItem> review_items;
    impute::OffsetStats offsets;
};

// Screen -> diagnose -> edit across every mapped cell, then batch-level
// offset computation and imputation. Identifiers are stripped before any
// other stage so no downstream verdict can carry a name.
PipelineResult run_pipeline(const std::vector<RawRecord>& records,
                            const ColumnMapping& effective_mapping,
                            const YearContext& ctx, const PipelineConfig& config);

struct ResolutionOutcome {
    std::vector<CellVerdict> verdicts;
    std::size_t applied = 0;
    std::size_t reopened = 0;
};

// Applies terminal review resolutions; every accepted or typed value is
// re-validated through the same extractors that queued it. Invalid manual
// values reopen the item as Pending with a note.
ResolutionOutcome apply_resolutions(std::vector<audit::ReviewItem>& items,
                                    std::vector<CleanRecord>& records,
                                    const YearContext& ctx,
                                    const PipelineConfig& config);

// --- reports and file outputs ---------------------------------------------

std::string summary_json(const PipelineResult& result, const YearContext& ctx);
std::string summary_text(const PipelineResult& result, const YearContext& ctx);

std::string clean_records_csv(const std::vector<CleanRecord>& records);

}  // namespace linelist::pipe
