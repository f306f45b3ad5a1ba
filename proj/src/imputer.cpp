#include "linelist/imputer.hpp"

#include <cmath>

#include "linelist/date_engine.hpp"

namespace linelist::impute {

Date add_days(const Date& d, long days) {
    return dates::excel_serial_to_date(dates::date_to_excel_serial(d) + days);
}

long round_half_up(double days) {
    return static_cast<long>(std::floor(days + 0.5));
}

OffsetStats compute_offsets(const std::vector<CleanRecord>& records, int year) {
    OffsetStats stats;
    stats.year = year;
    double admission_sum = 0.0;
    double discharge_sum = 0.0;

    for (const auto& rec : records) {
        if (rec.test_date_provenance != DateProvenance::Parsed || !rec.test_date)
            continue;
        const long test = dates::date_to_excel_serial(*rec.test_date);
        const std::optional<Date>& donor =
            rec.admission_date ? rec.admission_date : rec.opd_date;
        if (donor) {
            const long diff = test - dates::date_to_excel_serial(*donor);
            if (diff < -1) {
                ++stats.n_anomalous_pairs;
            } else {
                admission_sum += diff;
                ++stats.n_admission_pairs;
            }
        }
        if (rec.discharge_date) {
            const long diff = dates::date_to_excel_serial(*rec.discharge_date) - test;
            if (diff < -1) {
                ++stats.n_anomalous_pairs;
            } else {
                discharge_sum += diff;
                ++stats.n_discharge_pairs;
            }
        }
    }
    if (stats.n_admission_pairs > 0)
        stats.mean_admission_to_test = admission_sum / stats.n_admission_pairs;
    if (stats.n_discharge_pairs > 0)
        stats.mean_test_to_discharge = discharge_sum / stats.n_discharge_pairs;
    return stats;
}

ImputeResult impute_test_date(const CleanRecord& record, const OffsetStats& stats,
                              const YearContext& ctx) {
    ImputeResult result;
    if (record.test_date) return result;  // parsed dates are never overwritten

    std::optional<Date> imputed;
    std::string rule;
    const std::optional<Date>& admission_donor =
        record.admission_date ? record.admission_date : record.opd_date;
    if (admission_donor && stats.mean_admission_to_test) {
        imputed = add_days(*admission_donor,
                           round_half_up(*stats.mean_admission_to_test));
        rule = "impute-from-admission";
    } else if (record.discharge_date && stats.mean_test_to_discharge) {
        imputed = add_days(*record.discharge_date,
                           -round_half_up(*stats.mean_test_to_discharge));
        rule = "impute-from-discharge";
    }
    if (!imputed) return result;  // no donor: stays missing

    CellVerdict v;
    v.row_index = record.row_index;
    v.role = Role::TestDate;
    v.phase = Phase::Edited;
    v.rule_id = rule;
    v.before = "";
    if (!dates::within_plausibility_window(*imputed, ctx)) {
        v.action = Action::ReviewQueued;
        v.candidates.push_back(imputed->iso());
        result.verdict = v;
        return result;
    }
    v.action = Action::AutoCorrected;
    v.after = imputed->iso();
    result.date = imputed;
    result.verdict = v;
    return result;
}

}  // namespace linelist::impute
