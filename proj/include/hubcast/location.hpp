#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hubcast {

// One forecast jurisdiction (state, territory, ...), FIPS-style code.
struct Location {
    std::string code;
    std::string name;
    std::int64_t population = 0;
};

// Immutable set of locations with unique codes.
class LocationTable {
public:
    LocationTable() = default;

    explicit LocationTable(std::vector<Location> locations) : locations_(std::move(locations)) {
        for (std::size_t i = 0; i < locations_.size(); ++i) {
            const Location& loc = locations_[i];
            if (loc.population <= 0) {
                throw std::invalid_argument("location " + loc.code + " has non-positive population");
            }
            if (!index_.emplace(loc.code, i).second) {
                throw std::invalid_argument("duplicate location code " + loc.code);
            }
        }
    }

    const std::vector<Location>& all() const { return locations_; }
    std::size_t size() const { return locations_.size(); }
    bool contains(const std::string& code) const { return index_.count(code) > 0; }

    const Location& at(const std::string& code) const {
        auto it = index_.find(code);
        if (it == index_.end()) throw std::out_of_range("unknown location code " + code);
        return locations_[it->second];
    }

private:
    std::vector<Location> locations_;
    std::map<std::string, std::size_t> index_;
};

}  // namespace hubcast
