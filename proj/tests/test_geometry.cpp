#include "satdelay/error.hpp"
#include "satdelay/geometry.hpp"
#include "satdelay/presets.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace satdelay;
using namespace satdelay::geometry;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

SatelliteId brute_force_nearest(const Constellation& c, const EciVector& p) {
    SatelliteId best{};
    double best_d = 1e300;
    for (int plane = 1; plane <= c.planes(); ++plane) {
        for (int s = 1; s <= c.sats_per_plane(); ++s) {
            const EciVector& q = c.position({plane, s});
            const double dx = p.x_km - q.x_km, dy = p.y_km - q.y_km, dz = p.z_km - q.z_km;
            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (d < best_d) {
                best_d = d;
                best = {plane, s};
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("spacing for the 6x11 preset") {
    const Spacing s = compute_spacing(presets::leo_6x11());
    CHECK(s.delta_anomaly_deg == doctest::Approx(360.0 / 11.0));
    CHECK(s.ra_correction_deg == doctest::Approx(1.5 * 4.0 / 6.0));
    CHECK(s.delta_right_ascension_deg == doctest::Approx(30.0 + 1.0));
    CHECK(s.inter_plane_phasing_deg ==
          doctest::Approx(0.5 * 360.0 / 11.0 + 31.0 * std::sin(4.0 * kDeg)));
}

TEST_CASE("spacing for a polar constellation has no correction") {
    const Spacing s = compute_spacing({4, 10, 1000.0, 90.0});
    CHECK(s.ra_correction_deg == doctest::Approx(0.0));
    CHECK(s.delta_right_ascension_deg == doctest::Approx(45.0));
    CHECK(s.inter_plane_phasing_deg == doctest::Approx(18.0));
}

TEST_CASE("invalid configurations are rejected") {
    CHECK_THROWS_AS(build_constellation({0, 11, 780.0, 86.0}), InvalidConfig);
    CHECK_THROWS_AS(build_constellation({6, 0, 780.0, 86.0}), InvalidConfig);
    CHECK_THROWS_AS(build_constellation({6, 11, -10.0, 86.0}), InvalidConfig);
    CHECK_THROWS_AS(build_constellation({6, 11, 780.0, 91.0}), InvalidConfig);
    CHECK_THROWS_AS(build_constellation({6, 11, 780.0, 0.0}), InvalidConfig);
    EarthModel bad;
    bad.equatorial_radius_km = 0.0;
    CHECK_THROWS_AS(build_constellation(presets::leo_6x11(), bad), InvalidConfig);
}

TEST_CASE("ground terminal validation") {
    CHECK_THROWS_AS(ground_to_eci({"x", 91.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(ground_to_eci({"x", 0.0, 181.0}), InvalidArgument);
    CHECK_NOTHROW(ground_to_eci({"x", -90.0, 180.0}));
}

TEST_CASE("ground conversion lands on the sphere") {
    const EciVector p = ground_to_eci({"Null Island", 0.0, 0.0});
    CHECK(p.x_km == doctest::Approx(6378.0));
    CHECK(p.y_km == doctest::Approx(0.0).epsilon(1e-9));
    const EciVector n = ground_to_eci({"Pole", 90.0, 0.0});
    CHECK(n.z_km == doctest::Approx(6378.0));
}

TEST_CASE("orbital radius is conserved for random constellations") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> planes(1, 15), sats(1, 30);
    std::uniform_real_distribution<double> alt(200.0, 2000.0), inc(1.0, 90.0);
    for (int trial = 0; trial < 200; ++trial) {
        const ConstellationConfig cfg{planes(rng), sats(rng), alt(rng), inc(rng)};
        const Constellation c = build_constellation(cfg);
        REQUIRE(c.size() == static_cast<std::size_t>(cfg.number_of_orbit_planes * cfg.number_of_sats_per_plane));
        for (const auto id : c.ids()) {
            CHECK(c.position(id).norm() == doctest::Approx(6378.0 + cfg.altitude_km).epsilon(1e-9));
        }
    }
}

TEST_CASE("satellites lie in their plane") {
    const Constellation c = build_constellation(presets::leo_12x24());
    for (const auto id : c.ids()) {
        const EciVector n = c.plane_normal(id.plane_index);
        CHECK(n.norm() == doctest::Approx(1.0));
        CHECK(std::abs(n.dot(c.position(id))) < 1e-6);
    }
}

TEST_CASE("in-plane neighbours are equally spaced") {
    const Constellation c = build_constellation(presets::leo_6x11());
    const double r = c.orbital_radius_km();
    const double chord = 2.0 * r * std::sin(std::numbers::pi / 11.0);
    for (int p = 1; p <= 6; ++p) {
        for (int s = 1; s <= 11; ++s) {
            const int next = s % 11 + 1;
            CHECK(distance(c.position({p, s}), c.position({p, next})) == doctest::Approx(chord));
        }
    }
}

TEST_CASE("in-plane rotation by one slot permutes positions") {
    // Shifting every anomaly by one delta_anomaly maps the set of positions
    // of a plane onto itself.
    const Constellation c = build_constellation(presets::leo_6x11());
    const Spacing& sp = c.spacing();
    for (int p = 1; p <= c.planes(); ++p) {
        for (int s = 1; s <= c.sats_per_plane(); ++s) {
            const EciVector rotated = orbit_point(c.orbital_radius_km(),
                                                  c.anomaly_deg({p, s}) + sp.delta_anomaly_deg,
                                                  c.config().inclination_deg, c.right_ascension_deg(p));
            double best = 1e300;
            for (int t = 1; t <= c.sats_per_plane(); ++t) {
                best = std::min(best, distance(rotated, c.position({p, t})));
            }
            CHECK(best < 1e-6);
        }
    }
}

TEST_CASE("right ascension steps by delta_RA") {
    const Constellation c = build_constellation(presets::leo_6x11());
    for (int p = 2; p <= 6; ++p) {
        CHECK(c.right_ascension_deg(p) - c.right_ascension_deg(p - 1) ==
              doctest::Approx(c.spacing().delta_right_ascension_deg));
    }
}

TEST_CASE("nearest satellite agrees with brute force on random points") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
    for (const auto& cfg : {presets::leo_6x11(), presets::leo_12x24()}) {
        const Constellation c = build_constellation(cfg);
        for (int i = 0; i < 1000; ++i) {
            const EciVector p = ground_to_eci({"p", lat(rng), lon(rng)});
            CHECK(nearest_satellite(c, p) == brute_force_nearest(c, p));
        }
    }
}

TEST_CASE("nearest in plane stays in the plane") {
    const Constellation c = build_constellation(presets::leo_12x24());
    const EciVector p = ground_to_eci({"q", 40.0, -20.0});
    for (int plane = 1; plane <= 12; ++plane) {
        const SatelliteId id = nearest_in_plane(c, plane, p);
        CHECK(id.plane_index == plane);
        for (int s = 1; s <= 24; ++s) {
            CHECK(distance(c.position(id), p) <= distance(c.position({plane, s}), p));
        }
    }
    CHECK_THROWS_AS(nearest_in_plane(c, 13, p), InvalidArgument);
}

TEST_CASE("crosslink neighbours") {
    const Constellation c = build_constellation(presets::leo_6x11());

    SUBCASE("fore and aft wrap within the plane") {
        const auto n = crosslink_neighbors(c, {3, 11});
        REQUIRE(n.size() == 4);
        CHECK(n[0] == SatelliteId{3, 1});
        CHECK(n[1] == SatelliteId{3, 10});
        CHECK(n[2].plane_index == 4);
        CHECK(n[3].plane_index == 2);
    }
    SUBCASE("port and starboard wrap across the seam") {
        const auto first = crosslink_neighbors(c, {1, 5});
        CHECK(first[2].plane_index == 2);
        CHECK(first[3].plane_index == 6);
        const auto last = crosslink_neighbors(c, {6, 5});
        CHECK(last[2].plane_index == 1);
        CHECK(last[3].plane_index == 5);
    }
    SUBCASE("cross-plane neighbours are nearest in their plane") {
        auto brute = [&](int plane, const EciVector& p) {
            SatelliteId best{plane, 1};
            for (int s = 2; s <= c.sats_per_plane(); ++s) {
                if (distance(c.position({plane, s}), p) < distance(c.position(best), p)) {
                    best = {plane, s};
                }
            }
            return best;
        };
        for (const auto id : c.ids()) {
            const auto n = crosslink_neighbors(c, id);
            REQUIRE(n.size() == 4);
            const int port = id.plane_index % 6 + 1;
            const int starboard = (id.plane_index + 4) % 6 + 1;
            CHECK(n[2] == brute(port, c.position(id)));
            CHECK(n[3] == brute(starboard, c.position(id)));
        }
    }
    SUBCASE("unknown satellite") {
        CHECK_THROWS_AS(crosslink_neighbors(c, {7, 1}), InvalidArgument);
    }
}

TEST_CASE("tiny constellations report neighbours once") {
    const Constellation two = build_constellation({2, 2, 800.0, 80.0});
    const auto n = crosslink_neighbors(two, {1, 1});
    const std::set<SatelliteId> unique(n.begin(), n.end());
    CHECK(unique.size() == n.size());
    CHECK(!unique.contains(SatelliteId{1, 1}));

    const Constellation one = build_constellation({1, 1, 800.0, 80.0});
    CHECK(crosslink_neighbors(one, {1, 1}).empty());
}

TEST_CASE("construction is deterministic") {
    const Constellation a = build_constellation(presets::leo_12x24());
    const Constellation b = build_constellation(presets::leo_12x24());
    for (const auto id : a.ids()) {
        CHECK(a.position(id) == b.position(id));
    }
}

TEST_CASE("satellite id formatting") {
    CHECK(to_string(SatelliteId{3, 7}) == "(3,7)");
}
