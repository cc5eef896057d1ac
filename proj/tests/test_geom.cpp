#include "circumnav/geom.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace circumnav;

namespace {

std::mt19937_64 rng(12345);

UnitVec2 random_unit() {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    return UnitVec2::from_angle(angle(rng));
}

Vec2 random_point(double span = 10.0) {
    std::uniform_real_distribution<double> coord(-span, span);
    return {coord(rng), coord(rng)};
}

} // namespace

TEST_CASE("unit_bearing axis-aligned and 3-4-5 cases") {
    const UnitVec2 left = unit_bearing({1, 0}, {0, 0});
    CHECK(left.x() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(left.y() == doctest::Approx(0.0).epsilon(1e-15));

    const UnitVec2 diag = unit_bearing({0, 0}, {3, 4});
    CHECK(diag.x() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(diag.y() == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("unit_bearing refuses coincident and near-coincident points") {
    CHECK_THROWS_AS(unit_bearing({1, 1}, {1, 1}), DegenerateBearing);
    CHECK_THROWS_AS(unit_bearing({0, 0}, {5e-10, 0}), DegenerateBearing);
    CHECK_NOTHROW(unit_bearing({0, 0}, {5e-9, 0}));
    // configurable epsilon
    CHECK_THROWS_AS(unit_bearing({0, 0}, {0.4, 0}, 0.5), DegenerateBearing);
}

TEST_CASE("unit_bearing rejects non-finite input") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(unit_bearing({inf, 0}, {0, 0}), DegenerateBearing);
    CHECK_THROWS_AS(unit_bearing({0, 0}, {std::nan(""), 1}), DegenerateBearing);
}

TEST_CASE("rotate_cw_quarter known values") {
    const UnitVec2 a = rotate_cw_quarter(unit_bearing({1, 0}, {0, 0})); // (-1,0)
    CHECK(a.x() == doctest::Approx(0.0));
    CHECK(a.y() == doctest::Approx(1.0));

    const UnitVec2 b = rotate_cw_quarter(UnitVec2::from_angle(kPi / 2)); // (0,1)
    CHECK(b.x() == doctest::Approx(1.0));
    CHECK(b.y() == doctest::Approx(0.0).epsilon(1e-15));

    const UnitVec2 c = rotate_cw_quarter(unit_bearing({0, 0}, {3, 4})); // (0.6,0.8)
    CHECK(c.x() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(c.y() == doctest::Approx(-0.6).epsilon(1e-15));
}

TEST_CASE("rotate_cw_quarter four times is the identity and preserves orthogonality") {
    for (int trial = 0; trial < 200; ++trial) {
        const UnitVec2 v = random_unit();
        UnitVec2 r = v;
        for (int k = 0; k < 4; ++k) r = rotate_cw_quarter(r);
        CHECK(std::abs(r.x() - v.x()) <= 1e-12);
        CHECK(std::abs(r.y() - v.y()) <= 1e-12);
        CHECK(std::abs(dot(rotate_cw_quarter(v), v)) <= 1e-12);
    }
}

TEST_CASE("ccw_angle quarter turns and identity") {
    const UnitVec2 px = UnitVec2::from_angle(0.0);
    const UnitVec2 py = UnitVec2::from_angle(kPi / 2);
    CHECK(ccw_angle(px, py).radians() == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(ccw_angle(px, px).radians() == 0.0);
    const UnitVec2 ny = UnitVec2::from_angle(-kPi / 2);
    CHECK(ccw_angle(px, ny).radians() == doctest::Approx(3 * kPi / 2).epsilon(1e-15));
}

TEST_CASE("ccw_angle forward plus reverse is 0 or a full turn") {
    for (int trial = 0; trial < 500; ++trial) {
        const UnitVec2 a = random_unit();
        const UnitVec2 b = random_unit();
        const double fwd = ccw_angle(a, b).radians();
        const double rev = ccw_angle(b, a).radians();
        const double sum = fwd + rev;
        const bool near_zero = std::abs(sum) <= 1e-9;
        const bool full_turn = std::abs(sum - kTwoPi) <= 1e-9;
        CHECK((near_zero || full_turn));
        CHECK(fwd >= 0.0);
        CHECK(fwd < kTwoPi);
    }
}

TEST_CASE("unit_bearing is antisymmetric") {
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 p = random_point();
        const Vec2 q = random_point();
        if ((p - q).norm() <= kMinSeparation) continue;
        const UnitVec2 pq = unit_bearing(p, q);
        const UnitVec2 qp = unit_bearing(q, p);
        CHECK(std::abs(pq.x() + qp.x()) <= 1e-15);
        CHECK(std::abs(pq.y() + qp.y()) <= 1e-15);
    }
}

TEST_CASE("Angle::wrap canonical range") {
    CHECK(Angle::wrap(kTwoPi).radians() == 0.0);
    CHECK(Angle::wrap(-1e-20).radians() < kTwoPi); // seam folds back to zero
    CHECK(Angle::wrap(7.0).radians() == doctest::Approx(7.0 - kTwoPi));
    CHECK(Angle::wrap(-1.0).radians() == doctest::Approx(kTwoPi - 1.0));
    for (int k = -20; k <= 20; ++k) {
        const double r = Angle::wrap(0.37 * k).radians();
        CHECK(r >= 0.0);
        CHECK(r < kTwoPi);
    }
}

TEST_CASE("wrap_to_pi principal value") {
    CHECK(wrap_to_pi(kPi) == doctest::Approx(kPi));
    CHECK(wrap_to_pi(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_to_pi(kTwoPi - 0.1) == doctest::Approx(-0.1));
    CHECK(wrap_to_pi(0.3) == doctest::Approx(0.3));
}

TEST_CASE("UnitVec2 checked factory validates the invariant") {
    CHECK_NOTHROW(UnitVec2::checked(0.6, 0.8));
    CHECK_THROWS_AS(UnitVec2::checked(0.6, 0.81), ConfigError);
}
