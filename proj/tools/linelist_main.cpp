// line-list cleaning CLI: clean / review / report / synth / geocode-cache

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "CLI11.hpp"

#include "linelist/csv.hpp"
#include "linelist/date_engine.hpp"
#include "linelist/pipeline.hpp"
#include "linelist/synth.hpp"

using namespace linelist;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPendingReview = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write: " + path);
    out << text;
}

struct CleanArgs {
    std::string input;
    std::string config;
    std::string output_dir = ".";
    int year = 0;
    int workers = 1;
    std::string gazetteer_file;
    std::string offline_geocoder;  // stub table json; empty = no geocoding
    std::string geocode_cache_file;
    std::string resolutions_file;
    std::string batch_salt;
    unsigned long scrypt_n = 16384;
    bool no_impute = false;
};

int cmd_clean(const CleanArgs& args) {
    auto mapping = load_column_mapping(slurp(args.config));
    auto in = ingest_csv_text(slurp(args.input), mapping, args.input);
    auto ctx = make_year_context(args.year);

    pipe::PipelineConfig cfg;
    cfg.anon = anon::config_from_environment();
    cfg.anon.work_factor = args.scrypt_n;
    cfg.anon.batch_salt = args.batch_salt.empty() ? args.input : args.batch_salt;
    anon::validate(cfg.anon);
    cfg.workers = args.workers;
    cfg.impute = !args.no_impute;
    if (!args.gazetteer_file.empty())
        cfg.gazetteer = addr::Gazetteer::from_csv_file(args.gazetteer_file);

    geo::GeocodeCache cache;
    std::unique_ptr<geo::GeocodeClient> client;
    if (!args.geocode_cache_file.empty())
        cache = geo::GeocodeCache::load(args.geocode_cache_file);
    if (!args.offline_geocoder.empty()) {
        client = std::make_unique<geo::StubGeocodeClient>(
            geo::StubGeocodeClient::from_json(slurp(args.offline_geocoder)));
    } else if (auto http = geo::HttpGeocodeClient::from_environment()) {
        client = std::move(http);
    }
    if (client || !args.geocode_cache_file.empty()) {
        cfg.geocode_client = client.get();
        cfg.geocode_cache = &cache;
    }

    auto result = pipe::run_pipeline(in.records, in.effective_mapping, ctx, cfg);
    for (const auto& q : in.quarantined) {
        result.log.append(q);
        audit::ReviewItem item;
        item.verdict = q;
        result.review_items.push_back(std::move(item));
    }

    if (!args.resolutions_file.empty()) {
        auto resolved = audit::review_items_from_jsonl(slurp(args.resolutions_file));
        auto outcome = pipe::apply_resolutions(resolved, result.records, ctx, cfg);
        for (const auto& v : outcome.verdicts) result.log.append(v);
        result.review_items = std::move(resolved);
    }

    const std::string dir = args.output_dir;
    spill(dir + "/cleaned.csv", pipe::clean_records_csv(result.records));
    spill(dir + "/audit.jsonl", audit::audit_to_jsonl(result.log));
    spill(dir + "/summary.json", pipe::summary_json(result, ctx) + "\n");
    spill(dir + "/summary.txt", pipe::summary_text(result, ctx));

    std::size_t pending = 0;
    for (const auto& item : result.review_items)
        if (item.pending()) ++pending;
    spill(dir + "/review.jsonl", audit::review_items_to_jsonl(result.review_items));

    if (!args.geocode_cache_file.empty()) cache.save(args.geocode_cache_file);

    std::fprintf(stderr, "cleaned %zu records; %zu review item(s) pending\n",
                 result.records.size(), pending);
    return pending ? kExitPendingReview : kExitOk;
}

int cmd_review(const std::string& review_file, const std::string& resolutions_file,
               int year) {
    auto items = audit::review_items_from_jsonl(slurp(review_file));
    auto ctx = make_year_context(year);

    if (!resolutions_file.empty()) {
        // Batch mode: merge terminal resolutions into the sidecar by row/role.
        auto resolved = audit::review_items_from_jsonl(slurp(resolutions_file));
        for (auto& item : items) {
            for (const auto& r : resolved) {
                if (r.pending()) continue;
                if (r.verdict.row_index == item.verdict.row_index &&
                    r.verdict.role == item.verdict.role) {
                    item.resolution = r.resolution;
                    item.accepted_index = r.accepted_index;
                    item.manual_value = r.manual_value;
                }
            }
        }
    } else {
        if (!isatty(fileno(stdin))) {
            std::fprintf(stderr,
                         "review is interactive; no terminal detected. "
                         "Use --resolutions-file for batch resolution.\n");
            return kExitError;
        }
        for (auto& item : items) {
            if (!item.pending()) continue;
            std::printf("\nrow %zu  %s  [%s]\n", item.verdict.row_index,
                        role_name(item.verdict.role), item.verdict.rule_id.c_str());
            std::printf("  value: %s\n", item.verdict.before.c_str());
            for (std::size_t i = 0; i < item.candidates.size(); ++i)
                std::printf("  [%zu] %s\n", i + 1, item.candidates[i].c_str());
            std::printf("  choose candidate number, type a value, (d)elete, or "
                        "(s)kip: ");
            std::string line;
            if (!std::getline(std::cin, line)) break;
            if (line.empty() || line == "s") continue;
            if (line == "d") {
                item.resolution = audit::ResolutionType::Deleted;
                continue;
            }
            char* end = nullptr;
            unsigned long pick = std::strtoul(line.c_str(), &end, 10);
            if (end && *end == '\0' && pick >= 1 && pick <= item.candidates.size()) {
                item.resolution = audit::ResolutionType::Accepted;
                item.accepted_index = pick - 1;
                continue;
            }
            // Typed value; validate the common case inline so typos bounce
            // immediately rather than at replay time.
            if (is_date_role(item.verdict.role)) {
                if (!date_from_iso(line) &&
                    !dates::clean_date_cell(line, ctx).resolved) {
                    std::printf("  not a recognizable date; item stays pending\n");
                    continue;
                }
            }
            item.resolution = audit::ResolutionType::ManualValue;
            item.manual_value = line;
        }
    }

    spill(review_file, audit::review_items_to_jsonl(items));
    std::size_t pending = 0;
    for (const auto& item : items)
        if (item.pending()) ++pending;
    std::fprintf(stderr, "%zu item(s) still pending\n", pending);
    return pending ? kExitPendingReview : kExitOk;
}

int cmd_report(const std::string& audit_file, bool rules) {
    if (rules) {
        std::printf("%s\n", dates::rule_catalog_json().c_str());
        return kExitOk;
    }
    audit::AuditLog log;
    std::istringstream in(slurp(audit_file));
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        log.append(audit::verdict_from_json_line(line));
    }
    std::printf("  rule                     screened     auto   manual  deleted  pending\n");
    for (const auto& [rule, c] : log.rule_counters)
        std::printf("  %-24s %8zu %8zu %8zu %8zu %8zu\n", rule.c_str(), c.screened,
                    c.auto_corrected, c.manual, c.deleted, c.unchanged_after_review);
    std::size_t review = 0;
    for (const auto& v : log.verdicts)
        if (v.action == Action::ReviewQueued) ++review;
    std::printf("\n  verdicts: %zu, review-queued: %zu\n", log.verdicts.size(), review);
    return kExitOk;
}

int cmd_synth(std::size_t n, std::uint64_t seed, int year,
              const std::string& output_dir) {
    synth::CorpusOptions opt;
    opt.n = n;
    opt.seed = seed;
    auto ctx = make_year_context(year);
    auto corpus = synth::generate_corpus(opt, ctx);
    spill(output_dir + "/synthetic.csv", corpus.csv_text);
    spill(output_dir + "/truth.csv", corpus.truth_csv);
    spill(output_dir + "/mapping.conf", synth::mapping_config());
    spill(output_dir + "/gazetteer.csv", synth::toy_gazetteer_csv());
    spill(output_dir + "/geocoder_stub.json", synth::toy_geocode_stub_json());
    std::fprintf(stderr, "wrote %zu synthetic records to %s\n", n, output_dir.c_str());
    return kExitOk;
}

int cmd_geocode_cache(const std::string& cache_file, bool list, bool clear,
                      const std::string& warm_names,
                      const std::string& offline_geocoder) {
    auto cache = geo::GeocodeCache::load(cache_file);
    if (clear) {
        cache.clear();
        cache.save(cache_file);
        std::fprintf(stderr, "cache cleared\n");
        return kExitOk;
    }
    if (!warm_names.empty()) {
        if (offline_geocoder.empty())
            throw ConfigError("--warm requires --offline-geocoder");
        auto stub = geo::StubGeocodeClient::from_json(slurp(offline_geocoder));
        auto parsed = csv::parse(slurp(warm_names));
        std::size_t hits = 0;
        for (const auto& row : parsed.rows) {
            if (row.empty() || row[0].empty() || row[0] == "query") continue;
            geo::GeocodeError err;
            if (auto coords = stub.lookup(row[0], err)) {
                cache.put(row[0], *coords);
                ++hits;
            }
        }
        cache.save(cache_file);
        std::fprintf(stderr, "warmed %zu cache entr%s\n", hits, hits == 1 ? "y" : "ies");
        return kExitOk;
    }
    if (list) {
        for (const auto& [query, coords] : cache.snapshot())
            std::printf("%s\t%.6f\t%.6f\n", query.c_str(), coords.lat, coords.lon);
    }
    std::fprintf(stderr, "%zu cached entr%s\n", cache.size(),
                 cache.size() == 1 ? "y" : "ies");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rule-based line-list cleaning"};
    app.require_subcommand(1);

    CleanArgs clean_args;
    auto* clean = app.add_subcommand("clean", "clean a raw line-list CSV");
    clean->add_option("--input", clean_args.input, "raw CSV file")->required();
    clean->add_option("--config", clean_args.config, "column mapping file")->required();
    clean->add_option("--year", clean_args.year, "surveillance year")->required();
    clean->add_option("--output-dir", clean_args.output_dir, "output directory");
    clean->add_option("--workers", clean_args.workers, "parallel workers");
    clean->add_option("--gazetteer", clean_args.gazetteer_file, "gazetteer CSV");
    clean->add_option("--offline-geocoder", clean_args.offline_geocoder,
                      "offline geocoder table (JSON)");
    clean->add_option("--geocode-cache", clean_args.geocode_cache_file,
                      "persistent geocode cache file");
    clean->add_option("--resolutions-file", clean_args.resolutions_file,
                      "replay review resolutions (JSONL)");
    clean->add_option("--batch-salt", clean_args.batch_salt,
                      "pseudonym salt scope (default: input path)");
    clean->add_option("--scrypt-n", clean_args.scrypt_n, "scrypt work factor");
    clean->add_flag("--no-impute", clean_args.no_impute, "skip date imputation");

    std::string review_file, resolutions_file;
    int review_year = 0;
    auto* review = app.add_subcommand("review", "resolve pending review items");
    review->add_option("--review-file", review_file, "review sidecar (JSONL)")
        ->required();
    review->add_option("--year", review_year, "surveillance year")->required();
    review->add_option("--resolutions-file", resolutions_file,
                       "batch resolutions to merge (JSONL)");

    std::string audit_file;
    bool rules = false;
    auto* report = app.add_subcommand("report", "render audit reports");
    report->add_option("--audit", audit_file, "audit JSONL file");
    report->add_flag("--rules", rules, "print the date rule catalog");

    std::size_t synth_n = 1000;
    std::uint64_t synth_seed = 7;
    int synth_year = 2017;
    std::string synth_dir = ".";
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic messy corpus");
    synth_cmd->add_option("--n", synth_n, "record count");
    synth_cmd->add_option("--seed", synth_seed, "random seed");
    synth_cmd->add_option("--year", synth_year, "surveillance year");
    synth_cmd->add_option("--output-dir", synth_dir, "output directory");

    std::string cache_file, warm_names, cache_stub;
    bool cache_list = false, cache_clear = false;
    auto* gc = app.add_subcommand("geocode-cache", "inspect or manage the cache");
    gc->add_option("--cache", cache_file, "cache file")->required();
    gc->add_flag("--list", cache_list, "print cached entries");
    gc->add_flag("--clear", cache_clear, "drop all entries");
    gc->add_option("--warm", warm_names, "CSV of queries to pre-resolve");
    gc->add_option("--offline-geocoder", cache_stub, "stub table for warming");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*clean) return cmd_clean(clean_args);
        if (*review) return cmd_review(review_file, resolutions_file, review_year);
        if (*report) {
            if (!rules && audit_file.empty())
                throw ConfigError("report needs --audit or --rules");
            return cmd_report(audit_file, rules);
        }
        if (*synth_cmd) return cmd_synth(synth_n, synth_seed, synth_year, synth_dir);
        if (*gc)
            return cmd_geocode_cache(cache_file, cache_list, cache_clear, warm_names,
                                     cache_stub);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
