#include "doctest.h"

#include <cstdio>

#include "linelist/geocode.hpp"
#include "linelist/synth.hpp"

using namespace linelist;
using namespace linelist::geo;

TEST_CASE("stub client answers its table, errors otherwise") {
    auto stub = StubGeocodeClient::from_json(synth::toy_geocode_stub_json());
    GeocodeError err;
    auto hit = stub.lookup("khanna khanna block ludhiana", err);
    REQUIRE(hit);
    CHECK(hit->lat == doctest::Approx(30.700));

    auto miss = stub.lookup("nowhere", err);
    CHECK_FALSE(miss);
    CHECK(err.kind == GeocodeError::Kind::NotFound);
}

TEST_CASE("query key is settlement block district, lowercased") {
    LocationDetail loc;
    loc.settlement = "Khanna";
    loc.block = "Khanna Block";
    loc.district = "Ludhiana";
    CHECK(geocode_query(loc) == "khanna khanna block ludhiana");

    LocationDetail city;
    city.settlement = "Ludhiana City";
    city.district = "Ludhiana";
    CHECK(geocode_query(city) == "ludhiana city ludhiana");
}

TEST_CASE("cache-first lookup; client responses are cached") {
    auto stub = StubGeocodeClient::from_json(synth::toy_geocode_stub_json());
    GeocodeCache cache;
    LocationDetail loc;
    loc.settlement = "Bhakna";
    loc.block = "Ajnala";
    loc.district = "Amritsar";

    auto first = geocode(loc, &stub, cache);
    REQUIRE(first.location.latitude);
    CHECK_FALSE(first.from_cache);
    CHECK(cache.size() == 1);

    // Second call answers from the cache even with no client.
    auto second = geocode(loc, nullptr, cache);
    CHECK(second.from_cache);
    CHECK(*second.location.latitude == doctest::Approx(31.560));

    LocationDetail empty;
    CHECK_THROWS_AS(geocode(empty, &stub, cache), std::invalid_argument);

    LocationDetail unknown;
    unknown.settlement = "Atlantis";
    auto missed = geocode(unknown, nullptr, cache);
    REQUIRE(missed.error);
    CHECK(missed.error->kind == GeocodeError::Kind::NotFound);
}

TEST_CASE("cache save and load round trip") {
    const char* path = "geocode_cache_test.json";
    {
        GeocodeCache cache;
        cache.put("a b c", {1.25, 2.5});
        cache.put("d e", {-3.0, 4.0});
        cache.save(path);
    }
    auto loaded = GeocodeCache::load(path);
    CHECK(loaded.size() == 2);
    REQUIRE(loaded.get("a b c"));
    CHECK(loaded.get("a b c")->lon == doctest::Approx(2.5));
    std::remove(path);

    auto cold = GeocodeCache::load("does-not-exist.json");
    CHECK(cold.size() == 0);
}
