#include "thermo_billiards/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <boost/math/special_functions/erf.hpp>

#include "thermo_billiards/errors.hpp"

namespace tb {

double tangential_from_uniform(double beta, double u) {
  if (!(beta > 0.0)) throw DomainError("tangential sampler requires beta > 0");
  if (!(u > 0.0 && u < 1.0)) throw DomainError("tangential sampler requires u in (0,1)");
  return -boost::math::erfc_inv(2.0 * u) / std::sqrt(beta);
}

double sample_tangential(double beta, RngStream &rng) {
  return tangential_from_uniform(beta, rng.uniform());
}

double outgoing_angle(double v_tangential, double v_perp) {
  if (!(v_perp > 0.0)) throw InvalidState("outgoing angle requires v_perp > 0");
  return std::atan2(v_tangential, v_perp);
}

double sample_outgoing_angle(double v_perp, double beta, RngStream &rng) {
  return outgoing_angle(sample_tangential(beta, rng), v_perp);
}

Vec2 collide_with_tangential(const BoundaryFrame &frame, Vec2 incoming_velocity, double v_tangential) {
  const double v_normal = dot(incoming_velocity, frame.normal);
  if (!(v_normal < 0.0)) throw InvalidState("collide: velocity is not incoming at the hit point");
  return (-v_normal) * frame.normal + v_tangential * frame.tangent;
}

Vec2 collide(const Disk &disk, const BoundaryFrame &frame, Vec2 incoming_velocity, RngStream &rng) {
  if (!(dot(incoming_velocity, frame.normal) < 0.0))
    throw InvalidState("collide: velocity is not incoming at the hit point");
  return collide_with_tangential(frame, incoming_velocity, sample_tangential(disk.beta, rng));
}

namespace {

void check_state(const BilliardTable &table, const CollisionState &state) {
  if (state.point.disk_id >= table.disks.size()) throw InvalidState("collision state: unknown disk");
  if (!(state.v_perp > 0.0) || !std::isfinite(state.v_perp))
    throw InvalidState("collision state: v_perp must be positive and finite");
}

StepRecord trace_step(const BilliardTable &table, const CollisionState &state, double phi, double speed,
                      Vec2 direction) {
  const BoundaryFrame frame = boundary_point_frame(table, state.point);
  const CollisionHit hit = next_collision(table, frame.position, direction, state.point);

  StepRecord rec;
  rec.from = state;
  rec.phi = phi;
  rec.phi_incoming = hit.incoming_angle;
  rec.flight_length = hit.flight_length;
  rec.speed = speed;
  rec.flight_time = hit.flight_length / speed;
  const double cos_in = std::cos(hit.incoming_angle);
  rec.grazing = hit.grazing || cos_in <= 1e-12;
  rec.to.point = hit.point;
  rec.to.v_perp = std::max(speed * cos_in, kVPerpFloor);
  return rec;
}

}  // namespace

StepRecord chain_step_with_angle(const BilliardTable &table, const CollisionState &state, double phi) {
  check_state(table, state);
  if (!(std::abs(phi) < kHalfPi)) throw InvalidState("chain step: |phi| must be < pi/2");
  const BoundaryFrame frame = boundary_point_frame(table, state.point);
  return trace_step(table, state, phi, state.v_perp / std::cos(phi), outgoing_direction(frame, phi));
}

StepRecord chain_step(const BilliardTable &table, const CollisionState &state, RngStream &rng) {
  check_state(table, state);
  const double beta = table.disks[state.point.disk_id].beta;
  const double v_t = sample_tangential(beta, rng);
  const double speed = std::hypot(state.v_perp, v_t);
  const BoundaryFrame frame = boundary_point_frame(table, state.point);
  Vec2 direction = (state.v_perp / speed) * frame.normal + (v_t / speed) * frame.tangent;
  direction = (1.0 / norm(direction)) * direction;
  return trace_step(table, state, outgoing_angle(v_t, state.v_perp), speed, direction);
}

double flight_time(const BilliardTable &table, const CollisionState &base, double phi) {
  check_state(table, base);
  const BoundaryFrame frame = boundary_point_frame(table, base.point);
  const CollisionHit hit = next_collision(table, frame.position, outgoing_direction(frame, phi), base.point);
  return hit.flight_length * std::cos(phi) / base.v_perp;
}

FlowState lift_to_flow(const BilliardTable &table, const SuspensionState &s, double flight_length) {
  check_state(table, s.base);
  if (!(std::abs(s.phi) < kHalfPi)) throw InvalidState("lift_to_flow: |phi| must be < pi/2");
  const double speed = s.base.v_perp / std::cos(s.phi);
  const double total = flight_length / speed;
  if (!(s.elapsed >= 0.0) || !(s.elapsed < total))
    throw InvalidState("lift_to_flow: elapsed time outside [0, flight time)");
  const BoundaryFrame frame = boundary_point_frame(table, s.base.point);
  const Vec2 direction = outgoing_direction(frame, s.phi);
  return {wrap(frame.position + (speed * s.elapsed) * direction), speed * direction};
}

FlowState lift_to_flow(const BilliardTable &table, const SuspensionState &s) {
  check_state(table, s.base);
  if (!(std::abs(s.phi) < kHalfPi)) throw InvalidState("lift_to_flow: |phi| must be < pi/2");
  const BoundaryFrame frame = boundary_point_frame(table, s.base.point);
  const CollisionHit hit =
      next_collision(table, frame.position, outgoing_direction(frame, s.phi), s.base.point);
  return lift_to_flow(table, s, hit.flight_length);
}

namespace {

void check_flow_state(const FlowState &z) {
  if (!is_finite(z.position) || !is_finite(z.velocity)) throw InvalidState("flow state must be finite");
  if (!(norm(z.velocity) > 0.0)) throw InvalidState("flow state velocity must be nonzero");
}

SuspensionState suspension_at(const BilliardTable &table, BoundaryPoint point, Vec2 direction, double speed,
                              double elapsed) {
  const BoundaryFrame frame = boundary_point_frame(table, point);
  const double phi = std::atan2(dot(direction, frame.tangent), dot(direction, frame.normal));
  if (!(std::abs(phi) < kHalfPi)) throw InvalidState("flow state does not leave the boundary outward");
  return {{point, std::max(speed * std::cos(phi), kVPerpFloor)}, phi, elapsed};
}

}  // namespace

SuspensionState to_suspension(const BilliardTable &table, const FlowState &z) {
  check_flow_state(z);
  const double speed = norm(z.velocity);
  const Vec2 d = (1.0 / speed) * z.velocity;
  const Vec2 p = wrap(z.position);

  // Already on a boundary and leaving it: the state is its own launch point.
  for (std::size_t j = 0; j < table.disks.size(); ++j) {
    const Disk &disk = table.disks[j];
    Vec2 rel = p - disk.center;
    rel.x -= std::round(rel.x);
    rel.y -= std::round(rel.y);
    const double dist = norm(rel);
    if (std::abs(dist - disk.radius) <= tolerance::kInside && dot(rel, d) > 0.0) {
      double theta = std::atan2(rel.y, rel.x);
      if (theta < 0.0) theta += kTwoPi;
      if (theta >= kTwoPi) theta = 0.0;
      return suspension_at(table, {j, theta}, d, speed, 0.0);
    }
  }

  const CollisionHit back = next_collision(table, p, -d);
  return suspension_at(table, back.point, d, speed, back.flight_length / speed);
}

FlowResult flow(const BilliardTable &table, const FlowState &z, double duration, RngStream &rng) {
  check_flow_state(z);
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw InvalidState("flow: duration must be >= 0");

  FlowResult result;
  SuspensionState launch = to_suspension(table, z);
  Vec2 position = wrap(z.position);
  Vec2 velocity = z.velocity;
  double speed = norm(velocity);
  std::optional<BoundaryPoint> source;
  if (launch.elapsed == 0.0) source = launch.base.point;
  CollisionHit hit = next_collision(table, position, (1.0 / speed) * velocity, source);
  double segment_length = hit.flight_length + speed * launch.elapsed;
  double remaining = duration;

  while (true) {
    const double to_hit = hit.flight_length / speed;
    if (remaining < to_hit) {
      position = wrap(position + remaining * velocity);
      break;
    }
    remaining -= to_hit;

    const Disk &disk = table.disks[hit.point.disk_id];
    const BoundaryFrame frame = boundary_point_frame(table, hit.point);
    const Vec2 out = collide(disk, frame, velocity, rng);

    StepRecord rec;
    rec.from = launch.base;
    rec.phi = launch.phi;
    rec.phi_incoming = hit.incoming_angle;
    rec.flight_length = segment_length;
    rec.speed = speed;
    rec.flight_time = segment_length / speed;
    rec.grazing = hit.grazing;
    rec.to = {hit.point, std::max(dot(out, frame.normal), kVPerpFloor)};
    result.log.push_back(rec);

    position = frame.position;
    velocity = out;
    speed = norm(out);
    launch = suspension_at(table, hit.point, (1.0 / speed) * out, speed, 0.0);
    hit = next_collision(table, position, (1.0 / speed) * out, hit.point);
    segment_length = hit.flight_length;
  }

  result.state = {position, velocity};
  return result;
}

double residual_flight_time(const BilliardTable &table, const FlowState &z) {
  check_flow_state(z);
  const double speed = norm(z.velocity);
  const CollisionHit hit = next_collision(table, z.position, (1.0 / speed) * z.velocity);
  return hit.flight_length / speed;
}

}  // namespace tb
