// Python bindings for the main cleaning operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linelist/date_engine.hpp"
#include "linelist/demographics.hpp"
#include "linelist/pipeline.hpp"
#include "linelist/synth.hpp"

namespace py = pybind11;
using namespace linelist;

namespace {

py::dict verdict_dict(const CellVerdict& v) {
    py::dict d;
    d["row"] = v.row_index;
    d["role"] = role_name(v.role);
    d["phase"] = phase_name(v.phase);
    d["rule"] = v.rule_id;
    d["action"] = action_name(v.action);
    d["before"] = v.before;
    d["after"] = v.after;
    d["candidates"] = v.candidates;
    return d;
}

}  // namespace

PYBIND11_MODULE(_linelist, m) {
    m.doc() = "rule-based line-list cleaning";

    m.def("clean_date", [](const std::string& raw, int year) {
        auto ctx = make_year_context(year);
        auto res = dates::clean_date_cell(raw, ctx);
        py::dict d = verdict_dict(res.verdict);
        d["resolved"] = res.resolved ? py::object(py::str(res.resolved->iso()))
                                     : py::object(py::none());
        return d;
    }, py::arg("raw"), py::arg("year"),
       "Run one date cell through the rule cascade.");

    m.def("excel_serial_to_iso", [](long serial) {
        return dates::excel_serial_to_date(serial).iso();
    }, py::arg("serial"));

    m.def("extract_age", [](const std::string& raw) -> py::object {
        auto res = demo::extract_age(raw);
        if (!res.value) return py::none();
        return py::float_(res.value->years);
    }, py::arg("raw"));

    m.def("extract_sex", [](const std::string& raw) -> py::object {
        auto res = demo::extract_sex(raw);
        if (!res.value) return py::none();
        return py::str(sex_name(res.value->category));
    }, py::arg("raw"));

    m.def("pseudonymize", [](const std::vector<std::string>& fields,
                             const std::string& key, const std::string& batch_salt,
                             unsigned long work_factor) {
        anon::AnonConfig cfg;
        cfg.secret_key = key;
        cfg.batch_salt = batch_salt;
        cfg.work_factor = work_factor;
        return anon::pseudonymize_fields(fields, cfg);
    }, py::arg("fields"), py::arg("key"), py::arg("batch_salt") = "",
       py::arg("work_factor") = 16384UL);

    m.def("clean_csv", [](const std::string& csv_text, const std::string& mapping_text,
                          int year, const std::string& key, int workers,
                          unsigned long work_factor) {
        auto mapping = load_column_mapping(mapping_text);
        auto in = ingest_csv_text(csv_text, mapping, "<python>");
        auto ctx = make_year_context(year);
        pipe::PipelineConfig cfg;
        cfg.anon.secret_key = key;
        cfg.anon.work_factor = work_factor;
        cfg.workers = workers;
        auto result = pipe::run_pipeline(in.records, in.effective_mapping, ctx, cfg);
        py::dict out;
        out["cleaned_csv"] = pipe::clean_records_csv(result.records);
        out["audit_jsonl"] = audit::audit_to_jsonl(result.log);
        out["summary_json"] = pipe::summary_json(result, ctx);
        py::list reviews;
        for (const auto& item : result.review_items)
            reviews.append(verdict_dict(item.verdict));
        out["review_items"] = reviews;
        return out;
    }, py::arg("csv_text"), py::arg("mapping_text"), py::arg("year"), py::arg("key"),
       py::arg("workers") = 1, py::arg("work_factor") = 16384UL);

    m.def("generate_corpus", [](std::size_t n, std::uint64_t seed, int year) {
        synth::CorpusOptions opt;
        opt.n = n;
        opt.seed = seed;
        auto corpus = synth::generate_corpus(opt, make_year_context(year));
        py::dict out;
        out["csv_text"] = corpus.csv_text;
        out["truth_csv"] = corpus.truth_csv;
        out["mapping"] = synth::mapping_config();
        return out;
    }, py::arg("n"), py::arg("seed") = 7, py::arg("year") = 2017);

    m.def("rule_catalog", [] { return dates::rule_catalog_json(); });
}
