#include "satdelay/render.hpp"

#include "satdelay/csv.hpp"
#include "satdelay/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace satdelay::render {

using geometry::EciVector;
using geometry::SatelliteId;

void RenderView::validate() const {
    if (image_width_px <= 0 || image_height_px <= 0) {
        throw InvalidArgument("image dimensions must be positive");
    }
    if (!std::isfinite(view_azimuth_deg) || !std::isfinite(view_elevation_deg)) {
        throw InvalidArgument("view angles must be finite");
    }
}

ViewPoint to_view(const RenderView& view, const EciVector& p) {
    constexpr double k = std::numbers::pi / 180.0;
    const double ca = std::cos(view.view_azimuth_deg * k);
    const double sa = std::sin(view.view_azimuth_deg * k);
    const double ce = std::cos(view.view_elevation_deg * k);
    const double se = std::sin(view.view_elevation_deg * k);
    const EciVector toward{ce * ca, ce * sa, se};
    const EciVector right{-sa, ca, 0.0};
    const EciVector up{-se * ca, -se * sa, ce};
    return {p.dot(right), p.dot(up), p.dot(toward)};
}

bool occluded(const ViewPoint& p, double earth_radius_km) {
    return p.depth_km < 0.0 &&
           p.right_km * p.right_km + p.up_km * p.up_km < earth_radius_km * earth_radius_km;
}

Pixel to_image(const RenderView& view, const ViewPoint& p, double orbit_radius_km) {
    const double scale =
        0.45 * std::min(view.image_width_px, view.image_height_px) / orbit_radius_km;
    return {view.image_width_px / 2.0 + p.right_km * scale,
            view.image_height_px / 2.0 - p.up_km * scale};
}

namespace {

std::string num(double v) { return csv::fixed(v, 2); }

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_orthographic(const geometry::Constellation& c,
                                const std::optional<routing::RoutePath>& route,
                                const RenderView& view,
                                const std::vector<geometry::GroundTerminal>& terminals) {
    view.validate();
    const double earth_r = c.earth().equatorial_radius_km;
    const double orbit_r = c.orbital_radius_km();
    auto pixel = [&](const EciVector& p) { return to_image(view, to_view(view, p), orbit_r); };
    auto visible = [&](const EciVector& p) { return !occluded(to_view(view, p), earth_r); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << view.image_width_px
        << "\" height=\"" << view.image_height_px << "\" viewBox=\"0 0 " << view.image_width_px << ' '
        << view.image_height_px << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"black\"/>\n";

    const Pixel centre = to_image(view, {}, orbit_r);
    const double earth_px = to_image(view, {earth_r, 0.0, 0.0}, orbit_r).x - centre.x;
    svg << "<circle id=\"earth\" cx=\"" << num(centre.x) << "\" cy=\"" << num(centre.y) << "\" r=\""
        << num(earth_px) << "\" fill=\"#1f4e79\" stroke=\"#9cc3e6\"/>\n";

    // Orbit paths; occluded stretches are skipped with a fresh move-to.
    constexpr int kOrbitSamples = 180;
    for (int p = 1; p <= c.planes(); ++p) {
        std::string d;
        bool pen_down = false;
        for (int k = 0; k <= kOrbitSamples; ++k) {
            const double anomaly = 360.0 * k / kOrbitSamples;
            const EciVector pt = geometry::orbit_point(orbit_r, anomaly, c.config().inclination_deg,
                                                       c.right_ascension_deg(p));
            if (!visible(pt)) {
                pen_down = false;
                continue;
            }
            const Pixel px = pixel(pt);
            d += (pen_down ? " L" : (d.empty() ? "M" : " M")) + num(px.x) + ' ' + num(px.y);
            pen_down = true;
        }
        svg << "<path class=\"orbit\" data-plane=\"" << p << "\" d=\"" << d
            << "\" fill=\"none\" stroke=\"#555555\"/>\n";
    }

    std::set<std::pair<SatelliteId, SatelliteId>> drawn;
    for (const SatelliteId id : c.ids()) {
        if (!visible(c.position(id))) {
            continue;
        }
        for (const SatelliteId n : geometry::crosslink_neighbors(c, id)) {
            const auto key = std::minmax(id, n);
            if (!visible(c.position(n)) || !drawn.insert(key).second) {
                continue;
            }
            const Pixel a = pixel(c.position(key.first));
            const Pixel b = pixel(c.position(key.second));
            svg << "<line class=\"crosslink\" data-from=\"" << key.first.plane_index << '.'
                << key.first.in_plane_index << "\" data-to=\"" << key.second.plane_index << '.'
                << key.second.in_plane_index << "\" x1=\"" << num(a.x) << "\" y1=\"" << num(a.y)
                << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(b.y) << "\" stroke=\"#3a7d44\"/>\n";
        }
    }

    for (const SatelliteId id : c.ids()) {
        if (!visible(c.position(id))) {
            continue;
        }
        const Pixel px = pixel(c.position(id));
        svg << "<circle class=\"sat\" data-plane=\"" << id.plane_index << "\" data-index=\""
            << id.in_plane_index << "\" cx=\"" << num(px.x) << "\" cy=\"" << num(px.y)
            << "\" r=\"3\" fill=\"white\"/>\n";
    }

    std::vector<geometry::GroundTerminal> all_terminals = terminals;
    if (route) {
        all_terminals.push_back(route->source);
        all_terminals.push_back(route->destination);
    }
    std::set<std::string> named;
    for (const auto& t : all_terminals) {
        if (!named.insert(t.name).second) {
            continue;
        }
        const EciVector g = geometry::ground_to_eci(t, c.earth());
        if (!visible(g)) {
            continue;
        }
        const Pixel px = pixel(g);
        svg << "<circle class=\"terminal\" data-name=\"" << escape(t.name) << "\" cx=\"" << num(px.x)
            << "\" cy=\"" << num(px.y) << "\" r=\"4\" fill=\"yellow\"/>\n";
    }

    if (route) {
        std::vector<EciVector> nodes;
        nodes.push_back(geometry::ground_to_eci(route->source, c.earth()));
        for (const SatelliteId id : route->hops) {
            nodes.push_back(c.position(id));
        }
        nodes.push_back(geometry::ground_to_eci(route->destination, c.earth()));
        for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
            const Pixel a = pixel(nodes[k]);
            const Pixel b = pixel(nodes[k + 1]);
            svg << "<line class=\"route-seg\" data-seg=\"" << (k + 1) << "\" x1=\"" << num(a.x)
                << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(b.y)
                << "\" stroke=\"red\" stroke-width=\"2\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace satdelay::render
