#include "doctest.h"

#include <random>

#include "linelist/address.hpp"
#include "linelist/synth.hpp"

using namespace linelist;
using namespace linelist::addr;

namespace {
Gazetteer toy() { return Gazetteer::from_csv(synth::toy_gazetteer_csv()); }
}

TEST_CASE("standardize: case, punctuation, abbreviations, idempotence") {
    CHECK(standardize_address("VPO Khanna, Distt. Ludhiana") ==
          "village post office khanna district ludhiana");
    CHECK(standardize_address("vill   Kotla (Samrala)") == "village kotla samrala");
    CHECK(standardize_address("H.No 12, blk Ajnala") == "h no 12 block ajnala");
    auto once = standardize_address("Teh. Rajpura, P.O. Ghanaur");
    CHECK(standardize_address(once) == once);
}

TEST_CASE("gazetteer csv loading and validation") {
    auto g = toy();
    REQUIRE(g.find("v01"));
    CHECK(g.find("v01")->name == "Khanna");
    CHECK(g.find("v01")->parent_id == "b01");
    CHECK_FALSE(g.find("zz"));

    CHECK_THROWS_AS(Gazetteer::from_csv("id,name,aliases,level,parent_id\n"
                                        "x1,Foo,,Village,nope\n"),
                    ConfigError);
    CHECK_THROWS_AS(Gazetteer::from_csv("id,name,aliases,level,parent_id\n"
                                        "a,A,,Block,b\nb,B,,Block,a\n"),
                    ConfigError);
    CHECK_THROWS_AS(Gazetteer::from_csv("id,name,aliases,level,parent_id\n"
                                        "a,A,,Galaxy,\n"),
                    ConfigError);
    CHECK_THROWS_AS(Gazetteer::from_csv("id,name,aliases,level,parent_id\n"
                                        "a,A,,Village,\na,B,,Village,\n"),
                    ConfigError);
}

TEST_CASE("guardian stripping removes names, keeps places") {
    auto g = toy();
    auto r = strip_guardian_text("s o arjun kumar village khanna district ludhiana", g);
    CHECK(r.stripped);
    CHECK(r.text == "village khanna district ludhiana");

    // The name run ends at a gazetteer hit even without a keyword.
    auto r2 = strip_guardian_text("w o meena devi khanna", g);
    CHECK(r2.text == "khanna");

    auto r3 = strip_guardian_text("c o suresh verma", g);
    CHECK(r3.stripped);
    CHECK(r3.fully_consumed);
    CHECK(r3.text.empty());

    auto r4 = strip_guardian_text("village machhiwara district ludhiana", g);
    CHECK_FALSE(r4.stripped);
    CHECK(r4.text == "village machhiwara district ludhiana");
}

TEST_CASE("gazetteer match resolves hierarchy from the most specific hit") {
    auto g = toy();
    auto m = gazetteer_match("village khanna district ludhiana", g);
    REQUIRE(m.location);
    CHECK(m.action == Action::AutoCorrected);
    CHECK(*m.location->settlement == "Khanna");
    CHECK(*m.location->block == "Khanna Block");
    CHECK(*m.location->district == "Ludhiana");
    CHECK(*m.location->matched_gazetteer_id == "v01");

    auto bare = gazetteer_match("bhakna", g);
    REQUIRE(bare.location);
    CHECK(*bare.location->district == "Amritsar");

    auto alias = gazetteer_match("ludhiana town", g);
    REQUIRE(alias.location);
    CHECK(*alias.location->settlement == "Ludhiana City");

    auto none = gazetteer_match("somewhere unknown", g);
    CHECK_FALSE(none.location);
    CHECK(none.action == Action::ReviewQueued);
    CHECK(none.rule_id == "gazetteer-no-match");
}

TEST_CASE("duplicate settlement names disambiguate by co-occurring parent") {
    auto g = toy();
    // Kotla exists under Samrala (Ludhiana) and Rajpura (Patiala).
    auto lud = gazetteer_match("kotla samrala", g);
    REQUIRE(lud.location);
    CHECK(*lud.location->matched_gazetteer_id == "v03");
    CHECK(*lud.location->district == "Ludhiana");

    auto pat = gazetteer_match("village kotla tehsil rajpura patiala", g);
    REQUIRE(pat.location);
    CHECK(*pat.location->matched_gazetteer_id == "v07");
    CHECK(*pat.location->district == "Patiala");
}

TEST_CASE("property: guardian stripping never destroys gazetteer names") {
    auto g = toy();
    std::vector<std::string> places;
    for (const auto& e : g.entries()) {
        std::string norm;
        for (char c : e.name)
            norm += char(std::tolower(static_cast<unsigned char>(c)));
        places.push_back(norm);
    }
    const char* rels[] = {"s o", "d o", "w o", "c o", "son of", "wife of"};
    const char* names[] = {"arjun", "meena kumari", "rahul verma", "priya"};
    std::mt19937_64 rng(41);
    for (int i = 0; i < 1000; ++i) {
        const auto& place = places[rng() % places.size()];
        std::string addr = std::string(rels[rng() % 6]) + " " +
                           names[rng() % 4] + " " + place;
        auto r = strip_guardian_text(standardize_address(addr), g);
        CAPTURE(addr);
        CHECK(r.text.find(place) != std::string::npos);
        CHECK_FALSE(r.fully_consumed);
    }
}

TEST_CASE("abbreviation table loading") {
    auto t = load_abbreviations("vpo = village post office\n# x\nggn=gurgaon\n");
    REQUIRE(t.size() == 2);
    CHECK(t[1].first == "ggn");
    CHECK(t[1].second == "gurgaon");
}
