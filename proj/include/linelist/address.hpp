#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linelist/core.hpp"

namespace linelist::addr {

enum class GazLevel { District, Block, City, Town, Village };

const char* level_name(GazLevel l);
std::optional<GazLevel> level_from_name(const std::string& name);

struct GazetteerEntry {
    std::string id;
    std::string name;
    std::vector<std::string> aliases;
    GazLevel level = GazLevel::Village;
    std::string parent_id;  // empty at the top of the hierarchy
};

class Gazetteer {
  public:
    // CSV columns: id,name,aliases(;-separated),level,parent_id
    static Gazetteer from_csv(const std::string& csv_text);
    static Gazetteer from_csv_file(const std::string& path);
    static Gazetteer from_entries(std::vector<GazetteerEntry> entries);

    const GazetteerEntry* find(const std::string& id) const;
    const std::vector<GazetteerEntry>& entries() const { return entries_; }

    // All normalized name/alias token sequences, for matching and for
    // guardian-strip protection.
    bool is_known_token_sequence(const std::vector<std::string>& tokens,
                                 std::size_t start, std::size_t len) const;
    bool is_known_token(const std::string& token) const;

    struct NameHit {
        const GazetteerEntry* entry;
        std::size_t token_len;
    };
    // Longest match starting at `start`, all entries sharing that name.
    std::vector<NameHit> hits_at(const std::vector<std::string>& tokens,
                                 std::size_t start) const;

  private:
    void index();
    std::vector<GazetteerEntry> entries_;
    std::map<std::string, std::vector<std::size_t>> by_name_;  // normalized name -> indices
    std::map<std::string, std::size_t> by_id_;
};

// Abbreviation expansion table; key and value are already-lowercased token
// sequences ("vpo" -> "village post office").
using AbbrevTable = std::vector<std::pair<std::string, std::string>>;
AbbrevTable default_abbreviations();
AbbrevTable load_abbreviations(const std::string& config_text);

// Lowercase, collapse punctuation to spaces, squeeze whitespace, expand
// abbreviations. Idempotent.
std::string standardize_address(const std::string& raw,
                                const AbbrevTable& abbrevs = default_abbreviations());

struct GuardianStripResult {
    std::string text;
    bool stripped = false;
    // True when stripping consumed everything that was there.
    bool fully_consumed = false;
};

// Removes relation phrases (s/o, d/o, w/o, c/o, son of, ...) plus the name
// tokens that follow, stopping at a gazetteer hit or a structural keyword.
GuardianStripResult strip_guardian_text(const std::string& standardized,
                                        const Gazetteer& gazetteer);

struct MatchResult {
    std::optional<LocationDetail> location;
    Action action = Action::ReviewQueued;
    std::string rule_id;
};

// Longest-token-sequence exact matching; most specific level wins; the
// parent chain fills the coarser fields; same-named entries are
// disambiguated by a co-occurring parent.
MatchResult gazetteer_match(const std::string& addr, const Gazetteer& gazetteer);

}  // namespace linelist::addr
