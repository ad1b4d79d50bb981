#pragma once
/**
 * @file geometry.hpp
 * @brief Unit torus with circular scatterers: validation, ray tracing over
 *        periodic images, boundary parametrization and horizon probing.
 *
 * Coordinates live in [0,1)^2. A boundary point is (disk index, polar angle
 * theta measured at the disk center); its arclength coordinate is the sum of
 * the perimeters of the preceding disks plus radius * theta.
 *
 * Ray tracing returns the first intersection with any periodic image of any
 * disk within sigma_cap. Only entry roots are considered, and roots closer
 * than kDepartureEps are dropped so a ray leaving a disk never re-hits it.
 */

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thermo_billiards/rng.hpp"
#include "thermo_billiards/vec2.hpp"

namespace tb {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHalfPi = 0.5 * kPi;

namespace tolerance {
/// Discriminants in (-kDiscriminant, 0) are tangential misses.
inline constexpr double kDiscriminant = 1e-14;
/// Minimal flight length accepted for an intersection root.
inline constexpr double kDepartureEps = 1e-12;
/// Arrivals with |phi'| above pi/2 - kGrazing are flagged as grazing.
inline constexpr double kGrazing = 1e-7;
/// Positions closer than this to the inside of a disk are still valid.
inline constexpr double kInside = 1e-9;
}  // namespace tolerance

struct Disk {
  Vec2 center;
  double radius = 0.0;
  double beta = 1.0;  ///< inverse temperature of the thermostat
};

struct BilliardTable {
  std::vector<Disk> disks;
  double sigma_cap = 2.0;  ///< free-flight length cap for tracing and probing

  /// Total boundary length sum_i 2 pi R_i.
  double boundary_length() const;
  /// Area of the free region (valid tables only).
  double free_area() const;
  double beta_min() const;
  double beta_max() const;
  bool is_equilibrium() const;
};

struct BoundaryPoint {
  std::size_t disk_id = 0;
  double theta = 0.0;
  friend bool operator==(const BoundaryPoint &, const BoundaryPoint &) = default;
};

struct CollisionHit {
  BoundaryPoint point;
  double flight_length = 0.0;   ///< sigma
  double incoming_angle = 0.0;  ///< phi', signed, |phi'| < pi/2
  bool grazing = false;
};

struct BoundaryFrame {
  Vec2 position;
  Vec2 normal;   ///< outward unit normal (cos theta, sin theta)
  Vec2 tangent;  ///< (-sin theta, cos theta)
};

enum class ViolationKind {
  NoDisks,
  NonFinite,
  NonPositiveRadius,
  SelfOverlap,
  NonPositiveBeta,
  Overlap,
  BadSigmaCap,
};

const char *to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool contains(ViolationKind kind) const;
  std::string describe() const;
};

struct HorizonEstimate {
  double sigma_max_hat = 0.0;
  double sigma_min_hat = 0.0;
  std::size_t violations = 0;
  std::size_t n_rays = 0;
};

/// Reduce both coordinates modulo 1 into [0,1). Throws InvalidState on NaN/inf.
Vec2 wrap(Vec2 position);

ValidationReport validate_table(const BilliardTable &table);

/**
 * First collision along the ray position + t * direction, t in (0, sigma_cap].
 *
 * `direction` must have unit norm. `skip_source` marks the boundary point the
 * ray departs from; the source disk is then exempt from the inside check.
 * Throws NoCollisionWithinCap when no image is hit within sigma_cap and
 * InvalidState for positions inside a disk.
 */
CollisionHit next_collision(const BilliardTable &table, Vec2 position, Vec2 direction,
                            std::optional<BoundaryPoint> skip_source = std::nullopt);

BoundaryFrame boundary_point_frame(const BilliardTable &table, BoundaryPoint point);

/// Arclength coordinate r of a boundary point.
double arclength(const BilliardTable &table, BoundaryPoint point);
/// Inverse of arclength for r in [0, boundary_length).
BoundaryPoint boundary_point_at(const BilliardTable &table, double r);
/// Uniform boundary point with respect to arclength; consumes one draw.
BoundaryPoint sample_boundary_point(const BilliardTable &table, RngStream &rng);

/// Direction leaving `frame` at angle phi from the outward normal.
inline Vec2 outgoing_direction(const BoundaryFrame &frame, double phi) {
  return std::cos(phi) * frame.normal + std::sin(phi) * frame.tangent;
}

HorizonEstimate probe_horizon(const BilliardTable &table, std::size_t n_rays, RngStream &rng);

/// Finite-horizon fixture used by tests and as the CLI default.
BilliardTable reference_table();

}  // namespace tb
