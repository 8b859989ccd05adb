// Bundled constellation presets.
#pragma once

#include "satdelay/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace satdelay::presets {

/// 6 planes x 11 satellites, 780 km, 86 degrees.
inline geometry::ConstellationConfig leo_6x11() { return {6, 11, 780.0, 86.0}; }

/// 12 planes x 24 satellites, 1400 km, 82 degrees.
inline geometry::ConstellationConfig leo_12x24() { return {12, 24, 1400.0, 82.0}; }

inline std::optional<geometry::ConstellationConfig> constellation_by_name(const std::string& name) {
    if (name == "6x11") {
        return leo_6x11();
    }
    if (name == "12x24") {
        return leo_12x24();
    }
    return std::nullopt;
}

inline std::vector<std::string> constellation_names() { return {"6x11", "12x24"}; }

}  // namespace satdelay::presets
