#include "linelist/address.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "linelist/csv.hpp"

namespace linelist::addr {

namespace {

std::string lower(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> tokens;
    std::istringstream in(s);
    std::string t;
    while (in >> t) tokens.push_back(t);
    return tokens;
}

std::string join(const std::vector<std::string>& tokens, std::size_t start,
                 std::size_t len) {
    std::string out;
    for (std::size_t i = start; i < start + len && i < tokens.size(); ++i) {
        if (i > start) out += ' ';
        out += tokens[i];
    }
    return out;
}

std::string normalize_name(const std::string& s) {
    // Same treatment address text gets, minus abbreviation expansion.
    std::string out;
    bool space = false;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            if (space && !out.empty()) out += ' ';
            space = false;
            out += static_cast<char>(std::tolower(u));
        } else {
            space = true;
        }
    }
    return out;
}

// Tokens that structure an address rather than name a person.
const std::vector<std::string>& structural_keywords() {
    static const std::vector<std::string> kw = {
        "village", "district", "block",  "city", "town",  "post",
        "office",  "tehsil",   "street", "ward", "mohalla",
    };
    return kw;
}

const std::vector<std::string>& relation_phrases() {
    static const std::vector<std::string> phrases = {
        "son of", "daughter of", "wife of", "care of",
        "s o", "d o", "w o", "c o",
    };
    return phrases;
}

int specificity(GazLevel l) {
    switch (l) {
        case GazLevel::District: return 0;
        case GazLevel::Block: return 1;
        case GazLevel::City: return 2;
        case GazLevel::Town: return 2;
        case GazLevel::Village: return 2;
    }
    return 0;
}

}  // namespace

const char* level_name(GazLevel l) {
    switch (l) {
        case GazLevel::District: return "District";
        case GazLevel::Block: return "Block";
        case GazLevel::City: return "City";
        case GazLevel::Town: return "Town";
        case GazLevel::Village: return "Village";
    }
    return "Village";
}

std::optional<GazLevel> level_from_name(const std::string& name) {
    for (GazLevel l : {GazLevel::District, GazLevel::Block, GazLevel::City,
                       GazLevel::Town, GazLevel::Village})
        if (name == level_name(l)) return l;
    return std::nullopt;
}

Gazetteer Gazetteer::from_csv(const std::string& csv_text) {
    auto parsed = csv::parse(csv_text);
    std::vector<GazetteerEntry> entries;
    for (std::size_t r = 0; r < parsed.rows.size(); ++r) {
        const auto& row = parsed.rows[r];
        if (r == 0 && !row.empty() && row[0] == "id") continue;  // header
        if (row.size() < 5)
            throw ConfigError("gazetteer row " + std::to_string(r) +
                              ": expected id,name,aliases,level,parent_id");
        GazetteerEntry e;
        e.id = row[0];
        e.name = row[1];
        std::istringstream aliases(row[2]);
        std::string alias;
        while (std::getline(aliases, alias, ';'))
            if (!alias.empty()) e.aliases.push_back(alias);
        auto level = level_from_name(row[3]);
        if (!level)
            throw ConfigError("gazetteer row " + std::to_string(r) +
                              ": unknown level `" + row[3] + "`");
        e.level = *level;
        e.parent_id = row[4];
        if (e.name.empty())
            throw ConfigError("gazetteer row " + std::to_string(r) + ": empty name");
        entries.push_back(std::move(e));
    }
    return from_entries(std::move(entries));
}

Gazetteer Gazetteer::from_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open gazetteer file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_csv(ss.str());
}

Gazetteer Gazetteer::from_entries(std::vector<GazetteerEntry> entries) {
    Gazetteer g;
    g.entries_ = std::move(entries);
    g.index();
    return g;
}

void Gazetteer::index() {
    by_name_.clear();
    by_id_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (by_id_.count(e.id))
            throw ConfigError("duplicate gazetteer id: " + e.id);
        by_id_[e.id] = i;
        by_name_[normalize_name(e.name)].push_back(i);
        for (const auto& a : e.aliases) by_name_[normalize_name(a)].push_back(i);
    }
    // Parent chain must exist and be acyclic.
    for (const auto& e : entries_) {
        std::size_t hops = 0;
        const GazetteerEntry* cur = &e;
        while (!cur->parent_id.empty()) {
            auto it = by_id_.find(cur->parent_id);
            if (it == by_id_.end())
                throw ConfigError("gazetteer entry " + e.id +
                                  " has unknown parent " + cur->parent_id);
            cur = &entries_[it->second];
            if (++hops > entries_.size())
                throw ConfigError("gazetteer parent chain cycle at " + e.id);
        }
    }
}

const GazetteerEntry* Gazetteer::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &entries_[it->second];
}

bool Gazetteer::is_known_token_sequence(const std::vector<std::string>& tokens,
                                        std::size_t start, std::size_t len) const {
    return by_name_.count(join(tokens, start, len)) > 0;
}

bool Gazetteer::is_known_token(const std::string& token) const {
    // A token counts as known when any indexed name starts with it as its
    // first word; protects multi-word names from guardian stripping.
    for (const auto& [name, _] : by_name_) {
        if (name == token) return true;
        if (name.size() > token.size() && name.compare(0, token.size(), token) == 0 &&
            name[token.size()] == ' ')
            return true;
    }
    return false;
}

std::vector<Gazetteer::NameHit> Gazetteer::hits_at(
    const std::vector<std::string>& tokens, std::size_t start) const {
    constexpr std::size_t kMaxNameTokens = 4;
    for (std::size_t len = std::min(kMaxNameTokens, tokens.size() - start); len >= 1;
         --len) {
        auto it = by_name_.find(join(tokens, start, len));
        if (it != by_name_.end()) {
            std::vector<NameHit> hits;
            for (std::size_t idx : it->second) hits.push_back({&entries_[idx], len});
            return hits;
        }
    }
    return {};
}

AbbrevTable default_abbreviations() {
    return {
        {"vpo", "village post office"},
        {"vill", "village"},
        {"vlg", "village"},
        {"distt", "district"},
        {"dist", "district"},
        {"teh", "tehsil"},
        {"po", "post office"},
        {"blk", "block"},
    };
}

AbbrevTable load_abbreviations(const std::string& config_text) {
    AbbrevTable table;
    std::istringstream in(config_text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = normalize_name(line.substr(0, eq));
        std::string value = normalize_name(line.substr(eq + 1));
        if (!key.empty() && !value.empty()) table.push_back({key, value});
    }
    return table;
}

std::string standardize_address(const std::string& raw, const AbbrevTable& abbrevs) {
    std::string collapsed;
    bool space = false;
    for (char c : raw) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            if (space && !collapsed.empty()) collapsed += ' ';
            space = false;
            collapsed += static_cast<char>(std::tolower(u));
        } else {
            space = true;
        }
    }

    auto tokens = tokenize(collapsed);
    std::vector<std::string> out;
    for (const auto& tok : tokens) {
        bool expanded = false;
        for (const auto& [abbr, full] : abbrevs) {
            if (tok == abbr) {
                for (const auto& t : tokenize(full)) out.push_back(t);
                expanded = true;
                break;
            }
        }
        if (!expanded) out.push_back(tok);
    }
    return join(out, 0, out.size());
}

GuardianStripResult strip_guardian_text(const std::string& standardized,
                                        const Gazetteer& gazetteer) {
    GuardianStripResult result;
    auto tokens = tokenize(standardized);
    const bool had_tokens = !tokens.empty();

    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t phrase_len = 0;
        for (const auto& phrase : relation_phrases()) {
            auto pt = tokenize(phrase);
            if (i + pt.size() <= tokens.size() &&
                std::equal(pt.begin(), pt.end(), tokens.begin() + i)) {
                phrase_len = pt.size();
                break;
            }
        }
        if (phrase_len == 0) {
            out.push_back(tokens[i]);
            ++i;
            continue;
        }
        result.stripped = true;
        i += phrase_len;
        // Drop the following name tokens until something recognizable.
        while (i < tokens.size()) {
            const auto& tok = tokens[i];
            bool structural =
                std::find(structural_keywords().begin(), structural_keywords().end(),
                          tok) != structural_keywords().end();
            if (structural || gazetteer.is_known_token(tok)) break;
            ++i;
        }
    }

    result.text = join(out, 0, out.size());
    result.fully_consumed = had_tokens && out.empty();
    return result;
}

MatchResult gazetteer_match(const std::string& addr, const Gazetteer& gazetteer) {
    MatchResult result;
    auto tokens = tokenize(addr);

    std::vector<Gazetteer::NameHit> all_hits;
    std::size_t i = 0;
    while (i < tokens.size()) {
        auto hits = gazetteer.hits_at(tokens, i);
        if (hits.empty()) {
            ++i;
            continue;
        }
        std::size_t len = hits.front().token_len;
        for (auto& h : hits) all_hits.push_back(h);
        i += len;
    }

    if (all_hits.empty()) {
        result.action = Action::ReviewQueued;
        result.rule_id = "gazetteer-no-match";
        return result;
    }

    // Prefer the most specific entry whose parent chain is consistent with
    // the other names present in the address.
    const auto chain_of = [&](const GazetteerEntry* e) {
        std::vector<const GazetteerEntry*> chain;
        while (e) {
            chain.push_back(e);
            e = e->parent_id.empty() ? nullptr : gazetteer.find(e->parent_id);
        }
        return chain;
    };
    const auto consistency = [&](const GazetteerEntry* e) {
        auto chain = chain_of(e);
        int score = 0;
        for (const auto& h : all_hits) {
            if (h.entry == e) continue;
            for (const auto* link : chain)
                if (link == h.entry) ++score;
        }
        return score;
    };

    const GazetteerEntry* best = nullptr;
    int best_key = -1;
    for (const auto& h : all_hits) {
        int key = consistency(h.entry) * 16 + specificity(h.entry->level) * 2;
        if (key > best_key) {
            best_key = key;
            best = h.entry;
        }
    }

    LocationDetail loc;
    loc.matched_gazetteer_id = best->id;
    for (const auto* link : chain_of(best)) {
        switch (link->level) {
            case GazLevel::District:
                if (!loc.district) loc.district = link->name;
                break;
            case GazLevel::Block:
                if (!loc.block) loc.block = link->name;
                break;
            case GazLevel::City:
            case GazLevel::Town:
            case GazLevel::Village:
                if (!loc.settlement) loc.settlement = link->name;
                break;
        }
    }
    result.location = loc;
    result.action = Action::AutoCorrected;
    result.rule_id = "gazetteer-match";
    return result;
}

}  // namespace linelist::addr
