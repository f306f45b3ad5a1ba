#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "linelist/core.hpp"

namespace linelist::geo {

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

struct GeocodeError {
    enum class Kind { Timeout, Quota, Malformed, NotFound };
    Kind kind = Kind::NotFound;
    std::string detail;
};

// Pluggable client. Implementations: HTTP client (endpoint and key from
// environment) and a deterministic offline stub.
class GeocodeClient {
  public:
    virtual ~GeocodeClient() = default;
    virtual std::optional<LatLon> lookup(const std::string& query,
                                         GeocodeError& error) = 0;
    virtual const char* name() const = 0;
};

// Offline stub: fixed query -> coordinates table, loadable from JSON.
class StubGeocodeClient : public GeocodeClient {
  public:
    StubGeocodeClient() = default;
    explicit StubGeocodeClient(std::map<std::string, LatLon> table)
        : table_(std::move(table)) {}
    static StubGeocodeClient from_json(const std::string& json_text);

    void add(const std::string& query, LatLon coords) { table_[query] = coords; }
    std::optional<LatLon> lookup(const std::string& query, GeocodeError& error) override;
    const char* name() const override { return "stub"; }

  private:
    std::map<std::string, LatLon> table_;
};

// GET {endpoint}?q={query}&key={key}, expecting {"lat": .., "lon": ..}.
// Endpoint/key come from GEOCODER_ENDPOINT and GEOCODER_KEY.
class HttpGeocodeClient : public GeocodeClient {
  public:
    HttpGeocodeClient(std::string endpoint, std::string key);
    static std::unique_ptr<HttpGeocodeClient> from_environment();

    std::optional<LatLon> lookup(const std::string& query, GeocodeError& error) override;
    const char* name() const override { return "http"; }

  private:
    std::string endpoint_;
    std::string key_;
};

// Persistent response cache keyed by the standardized query string.
// Thread-safe; cache hits never reach the client.
class GeocodeCache {
  public:
    GeocodeCache() = default;
    explicit GeocodeCache(std::map<std::string, LatLon> entries)
        : entries_(std::move(entries)) {}

    static GeocodeCache load(const std::string& path);
    void save(const std::string& path) const;

    std::optional<LatLon> get(const std::string& query) const;
    void put(const std::string& query, LatLon coords);
    std::size_t size() const;
    void clear();
    std::map<std::string, LatLon> snapshot() const;

  private:
    mutable std::mutex mutex_;
    std::map<std::string, LatLon> entries_;
};

struct GeocodeOutcome {
    LocationDetail location;
    bool from_cache = false;
    std::optional<GeocodeError> error;
};

// Fills coordinates for a location with at least one name field. Cache is
// consulted first; client responses are cached. A null client with a cold
// cache yields a NotFound error.
GeocodeOutcome geocode(const LocationDetail& location, GeocodeClient* client,
                       GeocodeCache& cache);

// The cache/lookup key for a location.
std::string geocode_query(const LocationDetail& location);

}  // namespace linelist::geo
