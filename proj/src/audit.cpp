#include "linelist/audit.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace linelist::audit {

using nlohmann::json;

void AuditLog::append(const CellVerdict& v) {
    verdicts.push_back(v);
    if (!v.rule_id.empty()) {
        auto& c = rule_counters[v.rule_id];
        ++c.screened;
        switch (v.action) {
            case Action::AutoCorrected: ++c.auto_corrected; break;
            case Action::ManuallyCorrected: ++c.manual; break;
            case Action::Deleted: ++c.deleted; break;
            case Action::ReviewQueued:
            case Action::Unchanged:
            case Action::Missing:
                ++c.unchanged_after_review;
                break;
        }
    }
}

void AuditLog::finalize_summaries(std::size_t record_count) {
    per_variable.clear();
    for (Role r : {Role::TestDate, Role::Age, Role::Sex, Role::Address}) {
        VariableSummary s;
        s.total = record_count;
        per_variable[r] = s;
    }
}

namespace {

json verdict_to_json(const CellVerdict& v) {
    json j{{"row", v.row_index},
           {"role", role_name(v.role)},
           {"phase", phase_name(v.phase)},
           {"rule", v.rule_id},
           {"action", action_name(v.action)},
           {"before", v.before},
           {"after", v.after}};
    if (!v.candidates.empty()) j["candidates"] = v.candidates;
    if (!v.source_column.empty()) j["source_column"] = v.source_column;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

CellVerdict verdict_from_json(const json& j) {
    CellVerdict v;
    v.row_index = j.at("row").get<std::size_t>();
    v.role = role_from_name(j.at("role").get<std::string>()).value_or(Role::Other);
    std::string phase = j.at("phase").get<std::string>();
    v.phase = phase == "Diagnosed"  ? Phase::Diagnosed
              : phase == "Edited"   ? Phase::Edited
                                    : Phase::Screened;
    v.rule_id = j.at("rule").get<std::string>();
    std::string action = j.at("action").get<std::string>();
    for (Action a : {Action::AutoCorrected, Action::ReviewQueued,
                     Action::ManuallyCorrected, Action::Deleted, Action::Unchanged,
                     Action::Missing})
        if (action == action_name(a)) v.action = a;
    v.before = j.at("before").get<std::string>();
    v.after = j.at("after").get<std::string>();
    if (j.contains("candidates"))
        v.candidates = j["candidates"].get<std::vector<std::string>>();
    if (j.contains("source_column"))
        v.source_column = j["source_column"].get<std::string>();
    if (j.contains("note")) v.note = j["note"].get<std::string>();
    return v;
}

const char* resolution_name(ResolutionType t) {
    switch (t) {
        case ResolutionType::Pending: return "pending";
        case ResolutionType::Accepted: return "accepted";
        case ResolutionType::ManualValue: return "manual";
        case ResolutionType::Deleted: return "deleted";
    }
    return "pending";
}

}  // namespace

std::string verdict_to_json_line(const CellVerdict& v) {
    return verdict_to_json(v).dump();
}

CellVerdict verdict_from_json_line(const std::string& line) {
    return verdict_from_json(json::parse(line));
}

std::string review_item_to_json_line(const ReviewItem& item) {
    json j{{"verdict", verdict_to_json(item.verdict)},
           {"candidates", item.candidates},
           {"resolution", resolution_name(item.resolution)}};
    if (item.resolution == ResolutionType::Accepted) j["accepted_index"] = item.accepted_index;
    if (item.resolution == ResolutionType::ManualValue) j["manual_value"] = item.manual_value;
    if (!item.note.empty()) j["note"] = item.note;
    return j.dump();
}

ReviewItem review_item_from_json_line(const std::string& line) {
    json j = json::parse(line);
    ReviewItem item;
    item.verdict = verdict_from_json(j.at("verdict"));
    item.candidates = j.at("candidates").get<std::vector<std::string>>();
    std::string res = j.at("resolution").get<std::string>();
    if (res == "accepted") item.resolution = ResolutionType::Accepted;
    else if (res == "manual") item.resolution = ResolutionType::ManualValue;
    else if (res == "deleted") item.resolution = ResolutionType::Deleted;
    else item.resolution = ResolutionType::Pending;
    if (j.contains("accepted_index"))
        item.accepted_index = j["accepted_index"].get<std::size_t>();
    if (j.contains("manual_value"))
        item.manual_value = j["manual_value"].get<std::string>();
    if (j.contains("note")) item.note = j["note"].get<std::string>();
    return item;
}

std::string audit_to_jsonl(const AuditLog& log) {
    std::string out;
    for (const auto& v : log.verdicts) {
        out += verdict_to_json_line(v);
        out += '\n';
    }
    return out;
}

std::vector<ReviewItem> review_items_from_jsonl(const std::string& text) {
    std::vector<ReviewItem> items;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        items.push_back(review_item_from_json_line(line));
    }
    return items;
}

std::string review_items_to_jsonl(const std::vector<ReviewItem>& items) {
    std::string out;
    for (const auto& item : items) {
        out += review_item_to_json_line(item);
        out += '\n';
    }
    return out;
}

}  // namespace linelist::audit
