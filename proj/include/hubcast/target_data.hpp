#pragma once

#include <string>
#include <vector>

#include "hubcast/location.hpp"
#include "hubcast/series.hpp"

namespace hubcast {

// Location table CSV with columns location,location_name,population.
LocationTable load_locations(const std::string& bytes);

// Target-data CSV with columns date,location,value. Non-numeric values are
// treated as missing; interior gaps on the weekly grid are filled by linear
// interpolation (flagged), leading/trailing gaps are left absent. Unknown
// location codes are an error; declared locations with no data come back as
// empty series with a warning on stderr.
std::vector<ObservationSeries> load_target_series(const std::string& bytes,
                                                  const LocationTable& locations);

}  // namespace hubcast
