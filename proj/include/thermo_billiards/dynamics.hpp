#pragma once
/**
 * @file dynamics.hpp
 * @brief Thermostat collision rule, the collision chain on (r, v_perp), the
 *        continuous-time flow and the suspension lift between them.
 *
 * Convention: a flow state sitting exactly on a collision carries the
 * post-collision (outgoing) velocity.
 */

#include <vector>

#include "thermo_billiards/geometry.hpp"
#include "thermo_billiards/rng.hpp"

namespace tb {

/// Floor applied to v_perp after a numerically tangential arrival.
inline constexpr double kVPerpFloor = 1e-300;

struct FlowState {
  Vec2 position;
  Vec2 velocity;
};

struct CollisionState {
  BoundaryPoint point;
  double v_perp = 1.0;
};

struct SuspensionState {
  CollisionState base;
  double phi = 0.0;      ///< outgoing angle from the outward normal
  double elapsed = 0.0;  ///< time since the collision
};

struct StepRecord {
  CollisionState from;
  double phi = 0.0;
  CollisionState to;
  double phi_incoming = 0.0;
  double flight_length = 0.0;
  double flight_time = 0.0;
  double speed = 0.0;
  bool grazing = false;
};

/// Inverse-CDF map from u in (0,1) to N(0, 1/(2 beta)).
double tangential_from_uniform(double beta, double u);
/// Exact Gaussian tangential velocity; consumes exactly one uniform draw.
double sample_tangential(double beta, RngStream &rng);

/// phi = atan(v_t / v_perp).
double outgoing_angle(double v_tangential, double v_perp);
double sample_outgoing_angle(double v_perp, double beta, RngStream &rng);

/// Collision rule with a prescribed outgoing tangential component.
Vec2 collide_with_tangential(const BoundaryFrame &frame, Vec2 incoming_velocity, double v_tangential);
/// Thermostat collision: flip the normal component, resample the tangential one.
Vec2 collide(const Disk &disk, const BoundaryFrame &frame, Vec2 incoming_velocity, RngStream &rng);

/// One chain step with a prescribed outgoing angle.
StepRecord chain_step_with_angle(const BilliardTable &table, const CollisionState &state, double phi);
StepRecord chain_step(const BilliardTable &table, const CollisionState &state, RngStream &rng);

/// Flight time sigma(r,phi) cos(phi) / v_perp of the segment leaving `s.base` at angle `s.phi`.
double flight_time(const BilliardTable &table, const CollisionState &base, double phi);

/// Flow state reached `s.elapsed` time units after leaving the base point.
FlowState lift_to_flow(const BilliardTable &table, const SuspensionState &s);
/// Same, with the segment's flight length already known (no tracing).
FlowState lift_to_flow(const BilliardTable &table, const SuspensionState &s, double flight_length);

/// Inverse of lift_to_flow: locate the collision the state departed from.
SuspensionState to_suspension(const BilliardTable &table, const FlowState &z);

struct FlowResult {
  FlowState state;
  std::vector<StepRecord> log;
};

/// Advance exactly `duration` time units, applying thermostat kicks at collisions.
FlowResult flow(const BilliardTable &table, const FlowState &z, double duration, RngStream &rng);

/// Time until the next collision; z is in B_tau iff the result exceeds tau.
double residual_flight_time(const BilliardTable &table, const FlowState &z);

}  // namespace tb
