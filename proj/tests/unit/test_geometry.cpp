#include <doctest.h>

#include <cmath>
#include <limits>

#include <thermo_billiards/errors.hpp>
#include <thermo_billiards/geometry.hpp>

#include "fixtures.hpp"

using namespace tb;
using tb::test::single_disk;

namespace {

constexpr double kTol = 1e-9;

// Distance from p to the nearest periodic image of c.
double torus_distance(Vec2 p, Vec2 c) {
  Vec2 d = p - c;
  d.x -= std::round(d.x);
  d.y -= std::round(d.y);
  return norm(d);
}

}  // namespace

TEST_CASE("wrap reduces into the unit square") {
  Vec2 a = wrap({1.25, -0.5});
  CHECK(a.x == doctest::Approx(0.25).epsilon(kTol));
  CHECK(a.y == doctest::Approx(0.5).epsilon(kTol));
  Vec2 b = wrap({0.3, 0.7});
  CHECK(b.x == 0.3);
  CHECK(b.y == 0.7);
  Vec2 c = wrap({2.0, 3.5});
  CHECK(c.x == 0.0);
  CHECK(c.y == 0.5);
  Vec2 d = wrap({-1e-18, 0.0});
  CHECK(d.x >= 0.0);
  CHECK(d.x < 1.0);
  CHECK_THROWS_AS(wrap({std::nan(""), 0.0}), InvalidState);
  CHECK_THROWS_AS(wrap({0.0, std::numeric_limits<double>::infinity()}), InvalidState);
}

TEST_CASE("validate_table reports constructed violations") {
  SUBCASE("overlap") {
    BilliardTable t;
    t.disks = {{{0.3, 0.5}, 0.1, 1.0}, {{0.49, 0.5}, 0.1, 1.0}};
    const ValidationReport r = validate_table(t);
    REQUIRE(r.contains(ViolationKind::Overlap));
    CHECK(r.violations.front().i == 0);
    CHECK(r.violations.front().j == 1);
  }
  SUBCASE("overlap through the periodic boundary") {
    BilliardTable t;
    t.disks = {{{0.05, 0.5}, 0.1, 1.0}, {{0.9, 0.5}, 0.1, 1.0}};
    CHECK(validate_table(t).contains(ViolationKind::Overlap));
  }
  SUBCASE("self overlap") {
    BilliardTable t;
    t.disks = {{{0.5, 0.5}, 0.6, 1.0}};
    CHECK(validate_table(t).contains(ViolationKind::SelfOverlap));
  }
  SUBCASE("other violations") {
    BilliardTable empty;
    CHECK(validate_table(empty).contains(ViolationKind::NoDisks));
    BilliardTable t = single_disk();
    t.disks[0].beta = 0.0;
    t.disks[0].radius = -1.0;
    const ValidationReport r = validate_table(t);
    CHECK(r.contains(ViolationKind::NonPositiveBeta));
    CHECK(r.contains(ViolationKind::NonPositiveRadius));
    t = single_disk();
    t.sigma_cap = 0.0;
    CHECK(validate_table(t).contains(ViolationKind::BadSigmaCap));
    t = single_disk();
    t.disks[0].center.x = std::nan("");
    CHECK(validate_table(t).contains(ViolationKind::NonFinite));
  }
  SUBCASE("reference table is valid") {
    const BilliardTable t = reference_table();
    CHECK(validate_table(t).ok());
    // Independent pairwise check on the torus.
    for (std::size_t i = 0; i < t.disks.size(); ++i)
      for (std::size_t j = i + 1; j < t.disks.size(); ++j)
        CHECK(torus_distance(t.disks[i].center, t.disks[j].center) > t.disks[i].radius + t.disks[j].radius);
  }
}

TEST_CASE("next_collision on a single disk") {
  const BilliardTable t = single_disk();

  const CollisionHit head_on = next_collision(t, {0.0, 0.5}, {1.0, 0.0});
  CHECK(head_on.point.disk_id == 0);
  CHECK(head_on.point.theta == doctest::Approx(kPi).epsilon(kTol));
  CHECK(head_on.flight_length == doctest::Approx(0.25).epsilon(kTol));
  CHECK(std::abs(head_on.incoming_angle) < kTol);

  const CollisionHit wrapped = next_collision(t, {0.0, 0.5}, {-1.0, 0.0});
  const double theta = wrapped.point.theta > kPi ? wrapped.point.theta - kTwoPi : wrapped.point.theta;
  CHECK(std::abs(theta) < kTol);
  CHECK(wrapped.flight_length == doctest::Approx(0.25).epsilon(kTol));
  CHECK(std::abs(wrapped.incoming_angle) < kTol);

  CHECK_THROWS_AS(next_collision(single_disk(3.0), {0.0, 0.0}, {1.0, 0.0}), NoCollisionWithinCap);
  CHECK_THROWS_AS(next_collision(t, {0.5, 0.5}, {1.0, 0.0}), InvalidState);
}

TEST_CASE("next_collision oblique hit matches the analytic ray-circle root") {
  const BilliardTable t = single_disk();
  const double b = 0.1;  // impact parameter
  const CollisionHit hit = next_collision(t, {0.0, 0.5 + b}, {1.0, 0.0});
  const double expected = 0.5 - std::sqrt(0.25 * 0.25 - b * b);
  CHECK(hit.flight_length == doctest::Approx(expected).epsilon(kTol));
  // Incoming angle magnitude asin(b/R).
  CHECK(std::abs(hit.incoming_angle) == doctest::Approx(std::asin(b / 0.25)).epsilon(kTol));
}

TEST_CASE("boundary frames at cardinal angles") {
  const BilliardTable t = single_disk();
  const BoundaryFrame w = boundary_point_frame(t, {0, kPi});
  CHECK(w.position.x == doctest::Approx(0.25).epsilon(kTol));
  CHECK(w.position.y == doctest::Approx(0.5).epsilon(kTol));
  CHECK(w.normal.x == doctest::Approx(-1.0).epsilon(kTol));
  CHECK(std::abs(w.normal.y) < kTol);
  CHECK(std::abs(w.tangent.x) < kTol);
  CHECK(w.tangent.y == doctest::Approx(-1.0).epsilon(kTol));

  const BoundaryFrame e = boundary_point_frame(t, {0, 0.0});
  CHECK(e.position.x == doctest::Approx(0.75).epsilon(kTol));
  CHECK(e.normal.x == doctest::Approx(1.0).epsilon(kTol));

  const BoundaryFrame n = boundary_point_frame(t, {0, kHalfPi});
  CHECK(n.position.y == doctest::Approx(0.75).epsilon(kTol));
  CHECK(n.normal.y == doctest::Approx(1.0).epsilon(kTol));

  CHECK_THROWS_AS(boundary_point_frame(t, {3, 0.0}), InvalidState);
}

TEST_CASE("arclength is a bijection onto the boundary") {
  const BilliardTable t = reference_table();
  RngStream rng(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const double r = rng.uniform() * t.boundary_length();
    const BoundaryPoint p = boundary_point_at(t, r);
    CHECK(arclength(t, p) == doctest::Approx(r).epsilon(1e-12));
  }
  CHECK(arclength(t, {1, 0.0}) == doctest::Approx(kTwoPi * 0.15));
}

TEST_CASE("ray invariants on random rays") {
  const BilliardTable t = reference_table();
  RngStream rng(11, 0);
  const int n = 10000;
  int reciprocity_failures = 0;
  int translation_failures = 0;
  int circle_failures = 0;
  for (int i = 0; i < n; ++i) {
    const BoundaryPoint src = sample_boundary_point(t, rng);
    const double phi = (rng.uniform() - 0.5) * kPi * 0.999;
    const BoundaryFrame f = boundary_point_frame(t, src);
    const Vec2 dir = outgoing_direction(f, phi);
    const CollisionHit hit = next_collision(t, f.position, dir, src);

    const BoundaryFrame g = boundary_point_frame(t, hit.point);
    if (std::abs(torus_distance(g.position, t.disks[hit.point.disk_id].center) -
                 t.disks[hit.point.disk_id].radius) > kTol)
      ++circle_failures;
    if (hit.flight_length > t.sigma_cap) ++circle_failures;

    const CollisionHit back = next_collision(t, g.position, -dir, hit.point);
    const double dtheta = std::remainder(back.point.theta - src.theta, kTwoPi);
    if (back.point.disk_id != src.disk_id || std::abs(dtheta) * t.disks[src.disk_id].radius > kTol ||
        std::abs(back.flight_length - hit.flight_length) > kTol)
      ++reciprocity_failures;

    // A free-space start point on the same ray, shifted by integer offsets.
    const Vec2 mid = wrap(f.position + (0.5 * hit.flight_length) * dir);
    const double base = next_collision(t, mid, dir).flight_length;
    const Vec2 shifted{mid.x + static_cast<double>(i % 7 - 3), mid.y - static_cast<double>(i % 5 - 2)};
    const double moved = next_collision(t, shifted, dir).flight_length;
    if (moved != next_collision(t, wrap(shifted), dir).flight_length || std::abs(moved - base) > kTol)
      ++translation_failures;
  }
  CHECK(circle_failures == 0);
  CHECK(reciprocity_failures == 0);
  CHECK(translation_failures == 0);
}

TEST_CASE("probe_horizon") {
  SUBCASE("reference table has no escaping rays") {
    RngStream rng(1, 0);
    const HorizonEstimate h = probe_horizon(reference_table(), 100000, rng);
    CHECK(h.violations == 0);
    CHECK(h.sigma_min_hat > 0.0);
    CHECK(h.sigma_min_hat <= h.sigma_max_hat);
    CHECK(h.sigma_max_hat <= reference_table().sigma_cap);
  }
  SUBCASE("single disk has an open corridor") {
    RngStream rng(1, 0);
    CHECK(probe_horizon(single_disk(10.0), 10000, rng).violations > 0);
  }
  SUBCASE("one ray") {
    RngStream rng(3, 0);
    const HorizonEstimate h = probe_horizon(reference_table(), 1, rng);
    CHECK(h.sigma_min_hat == h.sigma_max_hat);
  }
}
