// Orthographic SVG rendering of a constellation, its crosslinks, ground
// terminals and an optional route.
#pragma once

#include "satdelay/geometry.hpp"
#include "satdelay/routing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace satdelay::render {

struct RenderView {
    double view_azimuth_deg = 0.0;
    double view_elevation_deg = 20.0;
    int image_width_px = 800;
    int image_height_px = 800;

    void validate() const;
};

/// Coordinates in the view frame: `right`/`up` span the image plane and
/// `depth` grows toward the viewer.
struct ViewPoint {
    double right_km = 0.0;
    double up_km = 0.0;
    double depth_km = 0.0;
};

ViewPoint to_view(const RenderView& view, const geometry::EciVector& p);

/// Behind the earth-disc plane and inside the disc outline.
bool occluded(const ViewPoint& p, double earth_radius_km);

struct Pixel {
    double x = 0.0;
    double y = 0.0;
};

/// Single global scale: the orbit radius spans 0.45 of the smaller image side.
Pixel to_image(const RenderView& view, const ViewPoint& p, double orbit_radius_km);

std::string render_orthographic(const geometry::Constellation& constellation,
                                const std::optional<routing::RoutePath>& route,
                                const RenderView& view,
                                const std::vector<geometry::GroundTerminal>& terminals = {});

}  // namespace satdelay::render
