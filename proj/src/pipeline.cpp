#include "linelist/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include "json.hpp"

#include "linelist/csv.hpp"
#include "linelist/date_engine.hpp"

namespace linelist::pipe {

namespace {

std::string format_age(double years) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", years);
    return buf;
}

std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct RecordWork {
    CleanRecord clean;
    std::vector<CellVerdict> verdicts;
};

void set_date_field(CleanRecord& rec, Role role, const std::optional<Date>& d) {
    switch (role) {
        case Role::TestDate:
            rec.test_date = d;
            rec.test_date_provenance = d ? DateProvenance::Parsed : DateProvenance::Missing;
            break;
        case Role::AdmissionDate: rec.admission_date = d; break;
        case Role::OpdDate: rec.opd_date = d; break;
        case Role::DischargeDate: rec.discharge_date = d; break;
        case Role::ReportDate: rec.report_date = d; break;
        default: break;
    }
}

RecordWork process_record(const RawRecord& original, const ColumnMapping& mapping,
                          const YearContext& ctx, const PipelineConfig& config) {
    RecordWork work;
    work.clean.row_index = original.row_index;

    // Pseudonym first (it needs the original identifier bytes), then strip
    // so nothing after this line sees a name or contact.
    work.clean.anon_id = anon::pseudonymize(original, mapping, config.anon);
    anon::StripResult stripped = anon::strip_identifiers(original, mapping);
    for (auto& v : stripped.verdicts) work.verdicts.push_back(std::move(v));
    const RawRecord& record = stripped.record;

    for (std::size_t col = 0; col < mapping.entries.size() && col < record.cells.size();
         ++col) {
        const Role role = mapping.entries[col].role;
        const std::string& cell = record.cells[col];

        if (is_date_role(role)) {
            dates::DateCellResult res = dates::clean_date_cell(cell, ctx);
            res.verdict.row_index = record.row_index;
            res.verdict.role = role;
            set_date_field(work.clean, role, res.resolved);
            work.verdicts.push_back(std::move(res.verdict));
            continue;
        }

        if (role == Role::Age) {
            demo::AgeResult res = demo::extract_age(cell);
            CellVerdict v;
            v.row_index = record.row_index;
            v.role = role;
            v.before = cell;
            v.rule_id = res.rule_id;
            v.action = res.action;
            if (res.action == Action::AutoCorrected) {
                work.clean.age_years = res.value->years;
                v.phase = Phase::Edited;
                v.after = format_age(res.value->years);
            } else if (res.action == Action::Missing) {
                v.phase = Phase::Screened;
                if (auto rec = demo::recover_misplaced(record, mapping, Role::Age,
                                                       config.sex_keywords)) {
                    work.clean.age_years = rec->age->years;
                    v = rec->verdict;
                }
            } else {
                v.phase = Phase::Diagnosed;
            }
            work.verdicts.push_back(std::move(v));
            continue;
        }

        if (role == Role::Sex) {
            demo::SexResult res = demo::extract_sex(cell, config.sex_keywords);
            CellVerdict v;
            v.row_index = record.row_index;
            v.role = role;
            v.before = cell;
            v.rule_id = res.rule_id;
            v.action = res.action;
            if (res.action == Action::AutoCorrected) {
                work.clean.sex = res.value->category;
                v.phase = Phase::Edited;
                v.after = sex_name(res.value->category);
            } else if (res.action == Action::Missing) {
                v.phase = Phase::Screened;
                if (auto rec = demo::recover_misplaced(record, mapping, Role::Sex,
                                                      config.sex_keywords)) {
                    work.clean.sex = rec->sex->category;
                    v = rec->verdict;
                }
            } else {
                v.phase = Phase::Diagnosed;
            }
            work.verdicts.push_back(std::move(v));
            continue;
        }

        if (role == Role::Address) {
            CellVerdict v;
            v.row_index = record.row_index;
            v.role = role;
            v.before = cell;
            if (cell.find_first_not_of(" \t\r\n") == std::string::npos) {
                v.phase = Phase::Screened;
                v.action = Action::Missing;
            } else if (!config.gazetteer) {
                v.phase = Phase::Screened;
                v.action = Action::Unchanged;
            } else {
                std::string standardized =
                    addr::standardize_address(cell, config.abbreviations);
                addr::GuardianStripResult strip =
                    addr::strip_guardian_text(standardized, *config.gazetteer);
                if (strip.fully_consumed) {
                    v.phase = Phase::Diagnosed;
                    v.action = Action::ReviewQueued;
                    v.rule_id = "guardian-only-address";
                } else {
                    addr::MatchResult match =
                        addr::gazetteer_match(strip.text, *config.gazetteer);
                    v.rule_id = strip.stripped ? "guardian-stripped>" + match.rule_id
                                               : match.rule_id;
                    v.action = match.action;
                    if (match.location) {
                        v.phase = Phase::Edited;
                        work.clean.location = match.location;
                        std::string after;
                        if (match.location->settlement) after += *match.location->settlement;
                        if (match.location->district) {
                            if (!after.empty()) after += ", ";
                            after += *match.location->district;
                        }
                        v.after = after;
                    } else {
                        v.phase = Phase::Diagnosed;
                    }
                }
            }
            work.verdicts.push_back(std::move(v));
            continue;
        }
    }

    if (work.clean.location && (config.geocode_client || config.geocode_cache)) {
        static geo::GeocodeCache null_cache;
        geo::GeocodeCache& cache =
            config.geocode_cache ? *config.geocode_cache : null_cache;
        geo::GeocodeOutcome out =
            geo::geocode(*work.clean.location, config.geocode_client, cache);
        if (out.error && (out.error->kind == geo::GeocodeError::Kind::Timeout ||
                          out.error->kind == geo::GeocodeError::Kind::Quota)) {
            CellVerdict v;
            v.row_index = record.row_index;
            v.role = Role::Address;
            v.phase = Phase::Diagnosed;
            v.rule_id = "geocode-retry";
            v.action = Action::ReviewQueued;
            v.before = geo::geocode_query(*work.clean.location);
            v.note = out.error->detail;
            work.verdicts.push_back(std::move(v));
        } else if (!out.error) {
            work.clean.location = out.location;
        }
    }

    return work;
}

}  // namespace

PipelineResult run_pipeline(const std::vector<RawRecord>& records,
                            const ColumnMapping& effective_mapping,
                            const YearContext& ctx, const PipelineConfig& config) {
    anon::validate(config.anon);
    if (config.workers < 1)
        throw ConfigError("worker count must be at least 1");

    PipelineResult result;
    std::vector<RecordWork> work(records.size());

    const auto run_chunk = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            work[i] = process_record(records[i], effective_mapping, ctx, config);
    };

    const std::size_t n = records.size();
    const std::size_t workers = std::min<std::size_t>(std::max(config.workers, 1), n ? n : 1);
    if (workers <= 1 || n < 2) {
        run_chunk(0, n);
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t begin = w * chunk;
            std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(run_chunk, begin, end);
        }
        for (auto& t : threads) t.join();
    }

    // Deterministic collection in row order regardless of parallelism.
    for (auto& w : work) {
        result.records.push_back(std::move(w.clean));
        for (auto& v : w.verdicts) result.log.append(v);
    }

    // Batch-level imputation after all dates are cleaned.
    result.offsets = impute::compute_offsets(result.records, ctx.year);
    if (config.impute) {
        // Rows whose test date awaits review are not missing; imputing them
        // would race the reviewer's decision.
        std::set<std::size_t> under_review;
        for (const auto& v : result.log.verdicts)
            if (v.role == Role::TestDate && v.action == Action::ReviewQueued)
                under_review.insert(v.row_index);
        for (auto& rec : result.records) {
            if (rec.test_date || under_review.count(rec.row_index)) continue;
            impute::ImputeResult imp = impute::impute_test_date(rec, result.offsets, ctx);
            if (!imp.verdict) continue;
            if (imp.date) {
                rec.test_date = imp.date;
                rec.test_date_provenance = DateProvenance::Imputed;
            }
            result.log.append(*imp.verdict);
        }
    }

    for (const auto& v : result.log.verdicts) {
        if (v.action != Action::ReviewQueued) continue;
        audit::ReviewItem item;
        item.verdict = v;
        item.candidates = v.candidates;
        result.review_items.push_back(std::move(item));
    }
    return result;
}

ResolutionOutcome apply_resolutions(std::vector<audit::ReviewItem>& items,
                                    std::vector<CleanRecord>& records,
                                    const YearContext& ctx,
                                    const PipelineConfig& config) {
    ResolutionOutcome outcome;

    const auto record_of = [&](std::size_t row) -> CleanRecord* {
        for (auto& r : records)
            if (r.row_index == row) return &r;
        return nullptr;
    };

    for (auto& item : items) {
        if (item.pending()) continue;
        CleanRecord* rec = record_of(item.verdict.row_index);
        if (!rec) {
            item.resolution = audit::ResolutionType::Pending;
            item.note = "no record with row index " +
                        std::to_string(item.verdict.row_index);
            ++outcome.reopened;
            continue;
        }

        CellVerdict v;
        v.row_index = item.verdict.row_index;
        v.role = item.verdict.role;
        v.phase = Phase::Edited;
        v.rule_id = item.verdict.rule_id;
        v.before = item.verdict.before;

        if (item.resolution == audit::ResolutionType::Deleted) {
            v.action = Action::Deleted;
            if (is_date_role(v.role)) set_date_field(*rec, v.role, std::nullopt);
            else if (v.role == Role::Age) rec->age_years.reset();
            else if (v.role == Role::Sex) rec->sex.reset();
            else if (v.role == Role::Address) rec->location.reset();
            outcome.verdicts.push_back(v);
            ++outcome.applied;
            continue;
        }

        std::string value;
        if (item.resolution == audit::ResolutionType::Accepted) {
            if (item.accepted_index >= item.candidates.size()) {
                item.resolution = audit::ResolutionType::Pending;
                item.note = "accepted candidate index out of range";
                ++outcome.reopened;
                continue;
            }
            value = item.candidates[item.accepted_index];
        } else {
            value = item.manual_value;
        }

        // Re-validation through the same parsers that queued the item.
        bool ok = false;
        if (is_date_role(v.role)) {
            std::optional<Date> d = date_from_iso(value);
            if (!d) {
                dates::DateCellResult res = dates::clean_date_cell(value, ctx);
                d = res.resolved;
            }
            if (d) {
                set_date_field(*rec, v.role, d);
                v.after = d->iso();
                ok = true;
            }
        } else if (v.role == Role::Age) {
            demo::AgeResult res = demo::extract_age(value);
            if (res.action == Action::AutoCorrected) {
                rec->age_years = res.value->years;
                v.after = format_age(res.value->years);
                ok = true;
            }
        } else if (v.role == Role::Sex) {
            demo::SexResult res = demo::extract_sex(value, config.sex_keywords);
            if (res.action == Action::AutoCorrected) {
                rec->sex = res.value->category;
                v.after = sex_name(res.value->category);
                ok = true;
            }
        } else if (v.role == Role::Address) {
            if (config.gazetteer) {
                std::string standardized =
                    addr::standardize_address(value, config.abbreviations);
                addr::MatchResult match =
                    addr::gazetteer_match(standardized, *config.gazetteer);
                if (match.location) {
                    rec->location = match.location;
                    v.after = standardized;
                    ok = true;
                }
            }
        }

        if (!ok) {
            item.resolution = audit::ResolutionType::Pending;
            item.note = "value failed re-validation: " + value;
            ++outcome.reopened;
            continue;
        }
        v.action = Action::ManuallyCorrected;
        outcome.verdicts.push_back(v);
        ++outcome.applied;
    }
    return outcome;
}

namespace {

struct Summaries {
    std::map<Role, audit::VariableSummary> per_variable;
    std::size_t auto_resolved = 0;
    std::size_t review_routed = 0;
    std::size_t deleted = 0;
};

double one_decimal(double v) { return std::round(v * 10.0) / 10.0; }

Summaries compute_summaries(const PipelineResult& result) {
    Summaries s;
    const std::size_t total = result.records.size();
    for (Role role : {Role::TestDate, Role::Age, Role::Sex, Role::Address}) {
        audit::VariableSummary vs;
        vs.total = total;
        for (const auto& rec : result.records) {
            switch (role) {
                case Role::TestDate:
                    if (rec.test_date_provenance == DateProvenance::Parsed) ++vs.extracted;
                    else if (rec.test_date_provenance == DateProvenance::Imputed) ++vs.imputed;
                    else ++vs.missing;
                    break;
                case Role::Age:
                    rec.age_years ? ++vs.extracted : ++vs.missing;
                    break;
                case Role::Sex:
                    rec.sex ? ++vs.extracted : ++vs.missing;
                    break;
                case Role::Address:
                    rec.location ? ++vs.extracted : ++vs.missing;
                    break;
                default: break;
            }
        }
        if (total > 0) {
            vs.percent_extracted =
                one_decimal(100.0 * (vs.extracted + vs.imputed) / total);
            vs.percent_extracted_parsed_only =
                one_decimal(100.0 * vs.extracted / total);
        }
        s.per_variable[role] = vs;
    }
    for (const auto& [rule, c] : result.log.rule_counters) {
        s.auto_resolved += c.auto_corrected + c.deleted;
        s.review_routed += c.unchanged_after_review;
        s.deleted += c.deleted;
        (void)rule;
    }
    return s;
}

}  // namespace

std::string summary_json(const PipelineResult& result, const YearContext& ctx) {
    using nlohmann::json;
    Summaries s = compute_summaries(result);

    json rules = json::object();
    for (const auto& [rule, c] : result.log.rule_counters) {
        rules[rule] = {{"screened", c.screened},
                       {"auto", c.auto_corrected},
                       {"manual", c.manual},
                       {"deleted", c.deleted},
                       {"review_pending", c.unchanged_after_review}};
    }
    json variables = json::object();
    for (const auto& [role, vs] : s.per_variable) {
        variables[role_name(role)] = {
            {"total", vs.total},
            {"extracted", vs.extracted},
            {"imputed", vs.imputed},
            {"missing", vs.missing},
            {"percent_extracted", vs.percent_extracted},
            {"percent_extracted_parsed_only", vs.percent_extracted_parsed_only}};
    }
    json offsets{{"year", result.offsets.year},
                 {"n_admission_pairs", result.offsets.n_admission_pairs},
                 {"n_discharge_pairs", result.offsets.n_discharge_pairs},
                 {"n_anomalous_pairs", result.offsets.n_anomalous_pairs}};
    if (result.offsets.mean_admission_to_test)
        offsets["mean_admission_to_test"] = *result.offsets.mean_admission_to_test;
    if (result.offsets.mean_test_to_discharge)
        offsets["mean_test_to_discharge"] = *result.offsets.mean_test_to_discharge;

    json doc{{"year", ctx.year},
             {"records", result.records.size()},
             {"rule_counters", rules},
             {"variables", variables},
             {"offsets", offsets},
             {"review_pending", result.review_items.size()}};
    return doc.dump(2);
}

std::string summary_text(const PipelineResult& result, const YearContext& ctx) {
    Summaries s = compute_summaries(result);
    std::string out;
    char line[160];

    std::snprintf(line, sizeof(line), "Cleaning summary, year %d (%zu records)\n\n",
                  ctx.year, result.records.size());
    out += line;

    out += "  variable    total  extracted  imputed  missing  percent\n";
    for (const auto& [role, vs] : s.per_variable) {
        std::snprintf(line, sizeof(line), "  %-10s %6zu %10zu %8zu %8zu %7.1f\n",
                      role_name(role), vs.total, vs.extracted, vs.imputed, vs.missing,
                      vs.percent_extracted);
        out += line;
    }
    out += "\n  rule      screened     auto   manual  deleted  pending\n";
    for (const auto& [rule, c] : result.log.rule_counters) {
        std::snprintf(line, sizeof(line), "  %-10s %7zu %8zu %8zu %8zu %8zu\n",
                      rule.c_str(), c.screened, c.auto_corrected, c.manual, c.deleted,
                      c.unchanged_after_review);
        out += line;
    }
    std::snprintf(line, sizeof(line), "\n  pending review items: %zu\n",
                  result.review_items.size());
    out += line;
    return out;
}

std::string clean_records_csv(const std::vector<CleanRecord>& records) {
    std::vector<csv::Row> rows;
    rows.push_back({"anon_id", "test_date", "date_provenance", "age_years", "sex",
                    "district", "block", "settlement", "lat", "lon"});
    for (const auto& rec : records) {
        csv::Row row;
        row.push_back(rec.anon_id);
        row.push_back(rec.test_date ? rec.test_date->iso() : "");
        row.push_back(provenance_name(rec.test_date_provenance));
        row.push_back(rec.age_years ? format_age(*rec.age_years) : "");
        row.push_back(rec.sex ? sex_name(*rec.sex) : "");
        const LocationDetail* loc = rec.location ? &*rec.location : nullptr;
        row.push_back(loc && loc->district ? *loc->district : "");
        row.push_back(loc && loc->block ? *loc->block : "");
        row.push_back(loc && loc->settlement ? *loc->settlement : "");
        row.push_back(loc && loc->latitude ? format_coord(*loc->latitude) : "");
        row.push_back(loc && loc->longitude ? format_coord(*loc->longitude) : "");
        rows.push_back(std::move(row));
    }
    return csv::write(rows);
}

}  // namespace linelist::pipe
