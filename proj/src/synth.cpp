#include "linelist/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "linelist/csv.hpp"
#include "linelist/date_engine.hpp"

namespace linelist::synth {

namespace {

const char* kMonthShort[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                             "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

std::string pad2(int v) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d", v);
    return buf;
}

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(seed * 0x9E3779B97F4A7C15ULL + stream * 0xBF58476D1CE4E5B9ULL + 1);
}

// ddmyyyy-shaped tokens whose second and third digits read as a month get
// silently re-read as dmmyyyy by the cascade; avoid the colliding days.
bool safe_two_digit_day_one_digit_month(int day, int month) {
    if (day <= 9) return true;           // zero-padded day enters the 0-prefix rule
    if (day % 10 >= 2) return true;      // positions 2-3 read above 12
    if (day % 10 == 1 && month >= 3) return true;
    return false;                        // 10/20/30 and x1 with Jan/Feb collide
}

long wrong_year(int year) {
    // A year that is not the context year and whose digit string does not
    // end in 1 (that would look like an NS1 contamination).
    int y = year + 5;
    if (y % 10 == 1) ++y;
    return y;
}

}  // namespace

const char* outcome_name(ExpectedOutcome o) {
    switch (o) {
        case ExpectedOutcome::Resolve: return "resolve";
        case ExpectedOutcome::ReviewContainsTruth: return "review-contains-truth";
        case ExpectedOutcome::ReviewAny: return "review";
        case ExpectedOutcome::Deleted: return "deleted";
    }
    return "resolve";
}

std::vector<RendererSpec> default_renderer_specs() {
    using EO = ExpectedOutcome;
    return {
        {"C00", false, 41747, EO::Resolve},
        {"D01", false, 565, EO::Deleted},
        {"D02", false, 5627, EO::Resolve},
        {"D03", false, 202, EO::ReviewAny},
        {"D04", false, 257, EO::Deleted},
        {"D05", false, 42902, EO::Resolve},
        {"D06", false, 168, EO::Resolve},
        {"D07", false, 81, EO::Resolve},
        {"D08", false, 443, EO::Resolve},
        {"D09", false, 157, EO::ReviewContainsTruth},
        {"D10", true, 931, EO::ReviewContainsTruth},
        {"D11", true, 1181, EO::ReviewContainsTruth},
        {"D12", false, 38, EO::Resolve},
        {"D13", false, 5447, EO::Resolve},
        {"D14", false, 6900, EO::Resolve},
        {"D15", true, 395, EO::ReviewContainsTruth},
        {"D16", false, 617, EO::Resolve},
        {"D17", false, 23313, EO::Resolve},
        {"D18", false, 0, EO::ReviewAny},
        {"D19", false, 28, EO::Resolve},
        {"D20", false, 307, EO::Resolve},
        {"D21", false, 625, EO::Deleted},
        {"D22", false, 0, EO::Resolve},
    };
}

bool renderer_compatible(const RendererSpec& spec, const Date& d) {
    const int day = d.day;
    const int m = d.month;
    const std::string& id = spec.rule_id;

    if (id == "C00" || id == "D01" || id == "D04" || id == "D05" || id == "D06" ||
        id == "D16" || id == "D17" || id == "D18" || id == "D21" || id == "D22" ||
        id == "D03")
        return true;
    if (id == "D02" || id == "D09")
        return m <= 9 && safe_two_digit_day_one_digit_month(day, m);
    if (id == "D07") return day >= 13;
    if (id == "D08") return true;
    if (id == "D10") return (day <= 3 && m == 11) || (m == 1 && day % 10 == 1 && day >= 11);
    if (id == "D11") return m <= 9 && (day == 10 || day == 20 || day == 30 || day <= 3);
    if (id == "D12") return day <= 9 && m <= 9;
    if (id == "D13") {
        if (day > 9) return false;
        if (m == 10 || m == 12) return true;
        return day >= 4;  // low days collide with the 10/20/30 and x11 shapes
    }
    if (id == "D14")
        return m <= 9 && day >= 11 && safe_two_digit_day_one_digit_month(day, m);
    if (id == "D15") return day <= 9 && m <= 9;
    if (id == "D19") return true;
    if (id == "D20") return day <= 9 && m <= 9;
    return false;
}

std::optional<std::string> render_messy_date(const Date& d, const RendererSpec& spec,
                                             const YearContext& ctx,
                                             std::uint64_t seed) {
    if (!renderer_compatible(spec, d)) return std::nullopt;
    auto rng = rng_for(seed, 0xDA7E);
    const std::string& id = spec.rule_id;
    const std::string yyyy = std::to_string(d.year);
    const std::string yy = yyyy.substr(2);
    const std::string D2 = pad2(d.day), M2 = pad2(d.month);
    const std::string ds = std::to_string(d.day), ms = std::to_string(d.month);

    if (id == "C00") {
        switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
            case 0: return D2 + "-" + M2 + "-" + yyyy;
            case 1: return D2 + "/" + M2 + "/" + yyyy;
            case 2: return D2 + " " + kMonthShort[d.month - 1] + " " + yyyy;
            case 3: return D2 + "." + M2 + "." + yyyy;
            default: return D2 + "-" + kMonthShort[d.month - 1] + "-" + yyyy;
        }
    }
    if (id == "D01") return D2 + M2 + yyyy + "99";
    if (id == "D02") return D2 + "/" + ms + "/" + yy;
    if (id == "D03") {
        // Serial-prefixed five-digit value outside the year's range that
        // still ends in yy; unrecoverable by construction.
        const auto [smin, smax] = dates::serial_range(ctx);
        for (long v = smax + 1; v < 100000; ++v) {
            std::string s = std::to_string(v);
            if (s.size() == 5 && s.substr(3) == yy) return s;
        }
        return std::nullopt;
    }
    if (id == "D04") {
        const auto [smin, smax] = dates::serial_range(ctx);
        long v = smax + 150;
        if (std::to_string(v).substr(3) == yy) ++v;
        return std::to_string(v);
    }
    if (id == "D05") return std::to_string(dates::date_to_excel_serial(d));
    if (id == "D06") {
        int other = std::uniform_int_distribution<int>(0, 1)(rng) ? d.year - 1
                                                                  : d.year + 1;
        return D2 + M2 + std::to_string(other);
    }
    if (id == "D07") return M2 + D2 + yyyy;
    if (id == "D08") return D2 + "/" + M2 + "/" + yy + " NS1";
    if (id == "D09") return D2 + ms + std::to_string(wrong_year(d.year));
    if (id == "D10") {
        if (d.month == 11) return ds + "11" + yyyy;
        return std::to_string(d.day) + "1" + yyyy;  // 11/21/31 January
    }
    if (id == "D11") {
        if (d.day >= 10) return std::to_string(d.day) + ms + yyyy;  // dd m yyyy
        return ds + M2 + yyyy;                                      // d mm yyyy
    }
    if (id == "D12") return D2 + ms + yyyy;
    if (id == "D13") return ds + M2 + yyyy;
    if (id == "D14") return std::to_string(d.day) + ms + yyyy;
    if (id == "D15") return yyyy + ds + ms;
    if (id == "D16") {
        int wy = (d.year % 100 + 77) % 100;
        if (wy == d.year % 100) ++wy;
        return D2 + M2 + pad2(wy);
    }
    if (id == "D17") return D2 + M2 + yy;
    if (id == "D18") return yyyy;
    if (id == "D19") return D2 + M2;
    if (id == "D20") return ds + ms + yy;
    if (id == "D21") return std::to_string(std::uniform_int_distribution<int>(1, 99)(rng));
    if (id == "D22") return D2 + M2 + yyyy;
    return std::nullopt;
}

namespace {

const char* kFirstNames[] = {"arjun", "meena", "rahul",  "priya",
                             "vikram", "anita", "suresh", "kavita"};
const char* kLastNames[] = {"kumar", "devi", "singh", "sharma", "verma"};

struct GazPick {
    std::string village;
    std::string district;
};

}  // namespace

std::string toy_gazetteer_csv() {
    return
        "id,name,aliases,level,parent_id\n"
        "d01,Ludhiana,,District,\n"
        "d02,Amritsar,,District,\n"
        "d03,Patiala,,District,\n"
        "b01,Khanna Block,,Block,d01\n"
        "b02,Samrala,,Block,d01\n"
        "b03,Ajnala,,Block,d02\n"
        "b04,Rajpura,,Block,d03\n"
        "c01,Ludhiana City,ludhiana town,City,d01\n"
        "c02,Amritsar City,,City,d02\n"
        "v01,Khanna,,Town,b01\n"
        "v02,Machhiwara,,Village,b02\n"
        "v03,Kotla,,Village,b02\n"
        "v04,Bhakna,,Village,b03\n"
        "v05,Chamkaur,,Village,b03\n"
        "v06,Ghanaur,,Village,b04\n"
        "v07,Kotla,,Village,b04\n";
}

std::string toy_geocode_stub_json() {
    return R"({
  "khanna khanna block ludhiana": {"lat": 30.700, "lon": 76.220},
  "machhiwara samrala ludhiana": {"lat": 30.916, "lon": 76.200},
  "kotla samrala ludhiana": {"lat": 30.840, "lon": 76.100},
  "bhakna ajnala amritsar": {"lat": 31.560, "lon": 74.700},
  "chamkaur ajnala amritsar": {"lat": 31.600, "lon": 74.750},
  "ghanaur rajpura patiala": {"lat": 30.330, "lon": 76.610},
  "kotla rajpura patiala": {"lat": 30.400, "lon": 76.500},
  "ludhiana city ludhiana": {"lat": 30.901, "lon": 75.857},
  "amritsar city amritsar": {"lat": 31.634, "lon": 74.872}
})";
}

std::string mapping_config() {
    return
        "# generated line-list column roles\n"
        "Name = Patient Name\n"
        "Contact = Contact Number\n"
        "TestDate = Date of Testing\n"
        "AdmissionDate = Date of Admission\n"
        "DischargeDate = Date of Discharge\n"
        "Age = Age\n"
        "Sex = Sex\n"
        "Address = Address\n";
}

Corpus generate_corpus(const CorpusOptions& options, const YearContext& ctx) {
    if (options.n < 1) throw ConfigError("corpus size must be at least 1");

    // Compatible-date rejection sampling below redraws the renderer, not
    // the date, so date marginals stay uniform over the year.
    std::vector<double> weights;
    for (const auto& s : options.specs) weights.push_back(s.weight);

    const long smin = ctx.serial_min();
    const long smax = ctx.serial_max();

    struct GazVillage {
        const char* village;
        const char* district;
    };
    static const GazVillage kVillages[] = {
        {"Khanna", "Ludhiana"},     {"Machhiwara", "Ludhiana"},
        {"Bhakna", "Amritsar"},     {"Chamkaur", "Amritsar"},
        {"Ghanaur", "Patiala"},
    };

    std::vector<csv::Row> rows;
    rows.push_back({"Patient Name", "Contact Number", "Date of Testing",
                    "Date of Admission", "Date of Discharge", "Age", "Sex",
                    "Address", "Remarks"});

    std::vector<csv::Row> truth_rows;
    truth_rows.push_back({"row", "date_rule", "date_outcome", "test_date",
                          "age_years", "age_extractable", "sex", "sex_extractable",
                          "district", "settlement"});

    Corpus corpus;
    for (std::size_t i = 0; i < options.n; ++i) {
        auto rng = rng_for(options.seed, i);
        GroundTruth truth;
        truth.row = i;

        // --- true test date, uniform over the year -----------------------
        // Kept a week clear of the year edges so the admission/discharge
        // donors below never cross into the neighboring year.
        long serial = std::uniform_int_distribution<long>(smin + 3, smax - 6)(rng);
        Date test_date = dates::excel_serial_to_date(serial);

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const bool date_missing = unit(rng) < options.missing_test_frac;

        std::string date_cell;
        if (date_missing) {
            truth.date_rule = "missing";
            truth.date_outcome = ExpectedOutcome::Resolve;
            truth.test_date = std::nullopt;
        } else {
            std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
            const RendererSpec* spec = nullptr;
            std::optional<std::string> rendered;
            for (int attempt = 0; attempt < 100 && !rendered; ++attempt) {
                const RendererSpec& candidate = options.specs[pick(rng)];
                rendered = render_messy_date(test_date, candidate, ctx,
                                             options.seed ^ (i * 131 + attempt));
                if (rendered) spec = &candidate;
            }
            if (!rendered) {  // every draw incompatible; use the plain form
                static const RendererSpec fallback{"D17", false, 0,
                                                   ExpectedOutcome::Resolve};
                rendered = render_messy_date(test_date, fallback, ctx, options.seed);
                spec = &fallback;
            }
            date_cell = *rendered;
            truth.date_rule = spec->rule_id;
            truth.date_outcome = spec->outcome;
            if (spec->outcome == ExpectedOutcome::Resolve ||
                spec->outcome == ExpectedOutcome::ReviewContainsTruth)
                truth.test_date = test_date;
        }

        // Donor dates: admission 1-3 days before the test, discharge 2-6
        // days after; rendered in an unambiguous separator format.
        int adm_gap = std::uniform_int_distribution<int>(1, 3)(rng);
        int dis_gap = std::uniform_int_distribution<int>(2, 6)(rng);
        Date admission = dates::excel_serial_to_date(serial - adm_gap);
        Date discharge = dates::excel_serial_to_date(serial + dis_gap);
        std::string admission_cell =
            pad2(admission.day) + "-" + pad2(admission.month) + "-" +
            std::to_string(admission.year);
        std::string discharge_cell =
            pad2(discharge.day) + "-" + pad2(discharge.month) + "-" +
            std::to_string(discharge.year);

        // --- age ---------------------------------------------------------
        std::string age_cell, remarks;
        double roll_age = unit(rng);
        bool age_misplaced = false;
        if (roll_age < options.missing_age_frac) {
            truth.age_extractable = false;
        } else {
            int age = std::uniform_int_distribution<int>(1, 90)(rng);
            truth.age_years = age;
            truth.age_extractable = true;
            if (roll_age < options.missing_age_frac + options.misplaced_demo_frac) {
                age_misplaced = true;  // appears in the sex column below
            } else {
                switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
                    case 0: age_cell = std::to_string(age); break;
                    case 1: age_cell = std::to_string(age) + " yrs"; break;
                    case 2: age_cell = std::to_string(age) + " years"; break;
                    default: age_cell = std::to_string(age) + "Y"; break;
                }
            }
        }

        // --- sex ---------------------------------------------------------
        std::string sex_cell;
        double roll_sex = unit(rng);
        if (roll_sex < options.missing_sex_frac) {
            truth.sex_extractable = false;
        } else {
            bool male = unit(rng) < 0.55;
            truth.sex = male ? "Male" : "Female";
            truth.sex_extractable = true;
            bool sex_misplaced =
                roll_sex < options.missing_sex_frac + options.misplaced_demo_frac;
            const char* word = male ? "Male" : "Female";
            const char* letter = male ? "M" : "F";
            std::string value;
            switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
                case 0: value = word; break;
                case 1: value = letter; break;
                case 2: {
                    std::string lower = word;
                    for (auto& c : lower) c = char(std::tolower(c));
                    value = lower;
                    break;
                }
                default: value = letter; break;
            }
            if (sex_misplaced) {
                remarks = value;  // recovery finds it in the Other column
            } else {
                sex_cell = value;
            }
        }
        if (age_misplaced && truth.age_years) {
            // The classic combined cell: sex column holds "34/M".
            std::string combined = std::to_string(int(*truth.age_years));
            if (!sex_cell.empty()) {
                combined += "/" + sex_cell;
                sex_cell = combined;
            } else if (!remarks.empty()) {
                remarks = combined + "/" + remarks;
            } else {
                remarks = combined + " yrs";
            }
        }

        // --- address -----------------------------------------------------
        const auto& village =
            kVillages[std::uniform_int_distribution<std::size_t>(
                0, std::size(kVillages) - 1)(rng)];
        truth.district = village.district;
        truth.settlement = village.village;
        std::string guardian =
            std::string(kFirstNames[std::uniform_int_distribution<std::size_t>(
                0, std::size(kFirstNames) - 1)(rng)]) +
            " " + kLastNames[std::uniform_int_distribution<std::size_t>(
                      0, std::size(kLastNames) - 1)(rng)];
        std::string address;
        switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
            case 0:
                address = std::string("VPO ") + village.village + ", Distt. " +
                          village.district;
                break;
            case 1:
                address = std::string("vill ") + village.village + " distt " +
                          village.district;
                break;
            case 2:
                address = village.village;
                break;
            case 3:
                address = std::string("S/O ") + guardian + ", village " +
                          village.village + ", " + village.district;
                break;
            default:
                address = std::string(village.village) + " (" + village.district + ")";
                break;
        }

        // --- identifiers -------------------------------------------------
        std::string name =
            std::string(kFirstNames[std::uniform_int_distribution<std::size_t>(
                0, std::size(kFirstNames) - 1)(rng)]) +
            " " + kLastNames[std::uniform_int_distribution<std::size_t>(
                      0, std::size(kLastNames) - 1)(rng)];
        char contact[16];
        std::snprintf(contact, sizeof(contact), "98%08llu",
                      static_cast<unsigned long long>(
                          std::uniform_int_distribution<long>(0, 99999999)(rng)));

        rows.push_back({name, contact, date_cell, admission_cell, discharge_cell,
                        age_cell, sex_cell, address, remarks});

        csv::Row truth_row{
            std::to_string(i),
            truth.date_rule,
            outcome_name(truth.date_outcome),
            truth.test_date ? truth.test_date->iso() : "",
            truth.age_years ? std::to_string(int(*truth.age_years)) : "",
            truth.age_extractable ? "1" : "0",
            truth.sex,
            truth.sex_extractable ? "1" : "0",
            truth.district,
            truth.settlement,
        };
        truth_rows.push_back(std::move(truth_row));
        corpus.truth.push_back(std::move(truth));
    }

    corpus.csv_text = csv::write(rows);
    corpus.truth_csv = csv::write(truth_rows);
    return corpus;
}

}  // namespace linelist::synth
