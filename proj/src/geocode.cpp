#include "linelist/geocode.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

// Keep cpp-httplib lean; no TLS needed for the configurable endpoint.
#include "httplib.h"

namespace linelist::geo {

using nlohmann::json;

StubGeocodeClient StubGeocodeClient::from_json(const std::string& json_text) {
    std::map<std::string, LatLon> table;
    json doc = json::parse(json_text);
    for (auto& [query, coords] : doc.items())
        table[query] = LatLon{coords.at("lat").get<double>(),
                              coords.at("lon").get<double>()};
    return StubGeocodeClient(std::move(table));
}

std::optional<LatLon> StubGeocodeClient::lookup(const std::string& query,
                                               GeocodeError& error) {
    auto it = table_.find(query);
    if (it == table_.end()) {
        error = {GeocodeError::Kind::NotFound, "stub has no entry for: " + query};
        return std::nullopt;
    }
    return it->second;
}

HttpGeocodeClient::HttpGeocodeClient(std::string endpoint, std::string key)
    : endpoint_(std::move(endpoint)), key_(std::move(key)) {}

std::unique_ptr<HttpGeocodeClient> HttpGeocodeClient::from_environment() {
    const char* endpoint = std::getenv("GEOCODER_ENDPOINT");
    if (!endpoint || !*endpoint) return nullptr;
    const char* key = std::getenv("GEOCODER_KEY");
    return std::make_unique<HttpGeocodeClient>(endpoint, key ? key : "");
}

std::optional<LatLon> HttpGeocodeClient::lookup(const std::string& query,
                                               GeocodeError& error) {
    // Split endpoint into host part and path.
    std::string url = endpoint_;
    std::string scheme_host = url;
    std::string path = "/";
    auto scheme = url.find("://");
    auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
        scheme_host = url.substr(0, slash);
        path = url.substr(slash);
    }
    httplib::Client client(scheme_host);
    client.set_connection_timeout(5);
    client.set_read_timeout(10);

    httplib::Params params{{"q", query}};
    if (!key_.empty()) params.emplace("key", key_);
    auto res = client.Get(path, params, httplib::Headers{});
    if (!res) {
        error = {GeocodeError::Kind::Timeout, "no response from " + endpoint_};
        return std::nullopt;
    }
    if (res->status == 429) {
        error = {GeocodeError::Kind::Quota, "quota exceeded"};
        return std::nullopt;
    }
    if (res->status != 200) {
        error = {GeocodeError::Kind::Malformed,
                 "status " + std::to_string(res->status)};
        return std::nullopt;
    }
    try {
        json doc = json::parse(res->body);
        return LatLon{doc.at("lat").get<double>(), doc.at("lon").get<double>()};
    } catch (const json::exception& e) {
        error = {GeocodeError::Kind::Malformed, e.what()};
        return std::nullopt;
    }
}

GeocodeCache GeocodeCache::load(const std::string& path) {
    std::map<std::string, LatLon> entries;
    std::ifstream in(path);
    if (!in) return GeocodeCache{};  // cold cache
    std::ostringstream ss;
    ss << in.rdbuf();
    if (ss.str().empty()) return GeocodeCache{};
    json doc = json::parse(ss.str());
    for (auto& [query, coords] : doc.items())
        entries[query] =
            LatLon{coords.at("lat").get<double>(), coords.at("lon").get<double>()};
    return GeocodeCache{std::move(entries)};
}

void GeocodeCache::save(const std::string& path) const {
    json doc = json::object();
    {
        std::lock_guard lock(mutex_);
        for (const auto& [query, coords] : entries_)
            doc[query] = {{"lat", coords.lat}, {"lon", coords.lon}};
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write geocode cache: " + path);
    out << doc.dump(2) << '\n';
}

std::optional<LatLon> GeocodeCache::get(const std::string& query) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(query);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void GeocodeCache::put(const std::string& query, LatLon coords) {
    std::lock_guard lock(mutex_);
    entries_[query] = coords;
}

std::size_t GeocodeCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void GeocodeCache::clear() {
    std::lock_guard lock(mutex_);
    entries_.clear();
}

std::map<std::string, LatLon> GeocodeCache::snapshot() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

std::string geocode_query(const LocationDetail& location) {
    std::string query;
    const auto append = [&](const std::optional<std::string>& part) {
        if (!part || part->empty()) return;
        if (!query.empty()) query += ' ';
        for (char c : *part)
            query += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    };
    append(location.settlement);
    append(location.block);
    append(location.district);
    return query;
}

GeocodeOutcome geocode(const LocationDetail& location, GeocodeClient* client,
                       GeocodeCache& cache) {
    if (location.empty())
        throw std::invalid_argument("geocode requires at least one name field");

    GeocodeOutcome outcome;
    outcome.location = location;
    const std::string query = geocode_query(location);

    if (auto cached = cache.get(query)) {
        outcome.location.latitude = cached->lat;
        outcome.location.longitude = cached->lon;
        outcome.from_cache = true;
        return outcome;
    }
    if (!client) {
        outcome.error = {GeocodeError::Kind::NotFound, "no client configured"};
        return outcome;
    }
    GeocodeError error;
    if (auto coords = client->lookup(query, error)) {
        outcome.location.latitude = coords->lat;
        outcome.location.longitude = coords->lon;
        cache.put(query, *coords);
        return outcome;
    }
    outcome.error = error;
    return outcome;
}

}  // namespace linelist::geo
