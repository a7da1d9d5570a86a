#include "sentinel/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sentinel/error.hpp"

namespace sentinel {

void validate_coordinate(const GeoPoint& p) {
    if (!(p.lat >= -90.0 && p.lat <= 90.0) || !(p.lon >= -180.0 && p.lon <= 180.0))
        throw Error(ErrorCode::InvalidCoordinate, "(" + std::to_string(p.lat) + ", " + std::to_string(p.lon) + ")");
}

double great_circle_miles(const GeoPoint& a, const GeoPoint& b) {
    validate_coordinate(a);
    validate_coordinate(b);
    constexpr double rad = std::numbers::pi / 180.0;
    const double dlat = (b.lat - a.lat) * rad;
    const double dlon = (b.lon - a.lon) * rad;
    const double s = std::sin(dlat / 2.0);
    const double t = std::sin(dlon / 2.0);
    const double h = std::clamp(s * s + std::cos(a.lat * rad) * std::cos(b.lat * rad) * t * t, 0.0, 1.0);
    return 2.0 * kEarthRadiusMiles * std::asin(std::sqrt(h));
}

double geo_error(std::span<const GeoPoint> estimated, std::span<const GeoPoint> actual) {
    if (estimated.empty() || actual.empty()) throw Error(ErrorCode::InvalidCoordinate, "empty point set");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : estimated)
        for (const auto& a : actual) best = std::min(best, great_circle_miles(e, a));
    return best;
}

}  // namespace sentinel
