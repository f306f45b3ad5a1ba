#pragma once

#include <optional>
#include <vector>

#include "linelist/core.hpp"

namespace linelist::impute {

// Batch mean day offsets between the test date and its donor dates.
struct OffsetStats {
    std::optional<double> mean_admission_to_test;
    std::optional<double> mean_test_to_discharge;
    std::size_t n_admission_pairs = 0;
    std::size_t n_discharge_pairs = 0;
    std::size_t n_anomalous_pairs = 0;
    int year = 0;
};

// Means over rows where both dates parsed; pairs more negative than -1 day
// are excluded and counted as anomalies.
OffsetStats compute_offsets(const std::vector<CleanRecord>& records, int year);

struct ImputeResult {
    std::optional<Date> date;
    std::optional<CellVerdict> verdict;
};

// Fills a missing test date: admission/OPD donor plus the rounded mean,
// else discharge donor minus the rounded mean. Never overwrites a parsed
// date. Results outside the plausibility window go to review instead.
ImputeResult impute_test_date(const CleanRecord& record, const OffsetStats& stats,
                              const YearContext& ctx);

Date add_days(const Date& d, long days);
long round_half_up(double days);

}  // namespace linelist::impute
