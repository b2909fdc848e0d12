#pragma once
/**
 * @file trace.hpp
 * @brief CSV export of simulation traces.
 */

#include "conic_defense/engine.hpp"
#include "conic_defense/io.hpp"

#include <sstream>
#include <string>

namespace conic_defense {

/// One row per trace record, 12 significant digits; the id is empty for decisions and waypoints.
inline std::string trace_csv(const SimResult& result) {
    std::ostringstream os;
    os << "time,event,intruder_id,vehicle_radius,vehicle_angle\n";
    for (const auto& rec : result.trace) {
        os << format_number(rec.time, 12) << ',' << to_string(rec.event) << ',';
        if (rec.intruder_id >= 0) os << rec.intruder_id;
        os << ',' << format_number(rec.vehicle.radius, 12) << ',' << format_number(rec.vehicle.angle, 12) << '\n';
    }
    return os.str();
}

}  // namespace conic_defense
