#pragma once

#include <span>

namespace sentinel {

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

inline constexpr double kEarthRadiusMiles = 3958.8;

/// Throws InvalidCoordinate outside lat [-90, 90] / lon [-180, 180].
void validate_coordinate(const GeoPoint& p);

/// Haversine great-circle distance.
double great_circle_miles(const GeoPoint& a, const GeoPoint& b);

/// Smallest great-circle distance between any estimated and any actual point.
double geo_error(std::span<const GeoPoint> estimated, std::span<const GeoPoint> actual);

}  // namespace sentinel
