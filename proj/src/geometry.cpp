#include "thermo_billiards/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "thermo_billiards/errors.hpp"

namespace tb {

double BilliardTable::boundary_length() const {
  double total = 0.0;
  for (const Disk &d : disks) total += kTwoPi * d.radius;
  return total;
}

double BilliardTable::free_area() const {
  double area = 1.0;
  for (const Disk &d : disks) area -= kPi * d.radius * d.radius;
  return area;
}

double BilliardTable::beta_min() const {
  double b = std::numeric_limits<double>::infinity();
  for (const Disk &d : disks) b = std::min(b, d.beta);
  return b;
}

double BilliardTable::beta_max() const {
  double b = 0.0;
  for (const Disk &d : disks) b = std::max(b, d.beta);
  return b;
}

bool BilliardTable::is_equilibrium() const {
  return std::all_of(disks.begin(), disks.end(),
                     [&](const Disk &d) { return d.beta == disks.front().beta; });
}

const char *to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NoDisks: return "NoDisks";
    case ViolationKind::NonFinite: return "NonFinite";
    case ViolationKind::NonPositiveRadius: return "NonPositiveRadius";
    case ViolationKind::SelfOverlap: return "SelfOverlap";
    case ViolationKind::NonPositiveBeta: return "NonPositiveBeta";
    case ViolationKind::Overlap: return "Overlap";
    case ViolationKind::BadSigmaCap: return "BadSigmaCap";
  }
  return "Unknown";
}

bool ValidationReport::contains(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation &v) { return v.kind == kind; });
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  for (const Violation &v : violations) {
    os << to_string(v.kind) << '(' << v.i;
    if (v.kind == ViolationKind::Overlap) os << ',' << v.j;
    os << "): " << v.message << '\n';
  }
  return os.str();
}

Vec2 wrap(Vec2 position) {
  if (!is_finite(position)) throw InvalidState("wrap: non-finite position");
  auto reduce = [](double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
  };
  return {reduce(position.x), reduce(position.y)};
}

ValidationReport validate_table(const BilliardTable &table) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::size_t i, std::size_t j, std::string msg) {
    report.violations.push_back({kind, i, j, std::move(msg)});
  };

  if (table.disks.empty()) add(ViolationKind::NoDisks, 0, 0, "table has no disks");
  if (!(std::isfinite(table.sigma_cap) && table.sigma_cap > 0.0))
    add(ViolationKind::BadSigmaCap, 0, 0, "sigma_cap must be finite and positive");

  std::vector<bool> usable(table.disks.size(), true);
  for (std::size_t i = 0; i < table.disks.size(); ++i) {
    const Disk &d = table.disks[i];
    if (!is_finite(d.center) || !std::isfinite(d.radius) || !std::isfinite(d.beta) ||
        d.center.x < 0.0 || d.center.x >= 1.0 || d.center.y < 0.0 || d.center.y >= 1.0) {
      add(ViolationKind::NonFinite, i, i, "center must be finite and in [0,1)^2, radius and beta finite");
      usable[i] = false;
      continue;
    }
    if (d.radius <= 0.0) {
      add(ViolationKind::NonPositiveRadius, i, i, "radius must be positive");
      usable[i] = false;
    } else if (d.radius >= 0.5) {
      add(ViolationKind::SelfOverlap, i, i, "radius >= 0.5 overlaps its own periodic image");
    }
    if (d.beta <= 0.0) add(ViolationKind::NonPositiveBeta, i, i, "beta must be positive");
  }

  for (std::size_t i = 0; i < table.disks.size(); ++i) {
    for (std::size_t j = i + 1; j < table.disks.size(); ++j) {
      if (!usable[i] || !usable[j]) continue;
      const Disk &a = table.disks[i];
      const Disk &b = table.disks[j];
      double closest = std::numeric_limits<double>::infinity();
      for (int kx = -1; kx <= 1; ++kx)
        for (int ky = -1; ky <= 1; ++ky)
          closest = std::min(closest, norm(a.center - (b.center + Vec2{double(kx), double(ky)})));
      if (closest <= a.radius + b.radius) {
        std::ostringstream os;
        os << "center distance " << closest << " <= radius sum " << a.radius + b.radius;
        add(ViolationKind::Overlap, i, j, os.str());
      }
    }
  }
  return report;
}

namespace {

void check_disk_id(const BilliardTable &table, std::size_t id) {
  if (id >= table.disks.size()) throw InvalidState("boundary point refers to unknown disk");
}

/// Distance from p to the nearest periodic image of c (p, c in the unit cell).
double image_distance(Vec2 p, Vec2 c) {
  double dx = p.x - c.x;
  double dy = p.y - c.y;
  dx -= std::round(dx);
  dy -= std::round(dy);
  return std::hypot(dx, dy);
}

struct Candidate {
  double t = std::numeric_limits<double>::infinity();
  std::size_t disk = 0;
  Vec2 center;
};

void scan_images(const BilliardTable &table, Vec2 p, Vec2 d, double reach, Candidate &best) {
  const Vec2 end = p + reach * d;
  const double xlo = std::min(p.x, end.x), xhi = std::max(p.x, end.x);
  const double ylo = std::min(p.y, end.y), yhi = std::max(p.y, end.y);
  for (std::size_t j = 0; j < table.disks.size(); ++j) {
    const Disk &disk = table.disks[j];
    const double r = disk.radius;
    const int kx0 = static_cast<int>(std::ceil(xlo - r - disk.center.x));
    const int kx1 = static_cast<int>(std::floor(xhi + r - disk.center.x));
    const int ky0 = static_cast<int>(std::ceil(ylo - r - disk.center.y));
    const int ky1 = static_cast<int>(std::floor(yhi + r - disk.center.y));
    for (int kx = kx0; kx <= kx1; ++kx) {
      for (int ky = ky0; ky <= ky1; ++ky) {
        const Vec2 c = disk.center + Vec2{double(kx), double(ky)};
        const Vec2 oc = c - p;
        const double b = dot(oc, d);
        if (b <= 0.0) continue;  // center behind the ray origin
        const double cc = dot(oc, oc) - r * r;
        if (cc <= 0.0) continue;  // on or inside this circle: no entry ahead
        const double disc = b * b - cc;
        if (disc < 0.0) continue;
        const double t = cc / (b + std::sqrt(disc));
        if (t <= tolerance::kDepartureEps || t > reach) continue;
        if (t < best.t) best = {t, j, c};
      }
    }
  }
}

constexpr double kShortReach = 0.6;

}  // namespace

CollisionHit next_collision(const BilliardTable &table, Vec2 position, Vec2 direction,
                            std::optional<BoundaryPoint> skip_source) {
  const Vec2 p = wrap(position);
  if (!is_finite(direction) || std::abs(norm(direction) - 1.0) > 1e-9)
    throw InvalidState("next_collision: direction must be a unit vector");
  if (skip_source) check_disk_id(table, skip_source->disk_id);

  for (std::size_t j = 0; j < table.disks.size(); ++j) {
    const Disk &disk = table.disks[j];
    const double slack = (skip_source && skip_source->disk_id == j) ? 1e-6 : tolerance::kInside;
    if (image_distance(p, disk.center) < disk.radius - slack)
      throw InvalidState("next_collision: position lies inside a scatterer");
  }

  const double cap = table.sigma_cap;
  Candidate best;
  const double first_reach = std::min(cap, kShortReach);
  scan_images(table, p, direction, first_reach, best);
  if (!(best.t <= first_reach) && cap > first_reach) scan_images(table, p, direction, cap, best);
  if (!(best.t <= cap)) {
    std::ostringstream os;
    os << "no collision within sigma_cap=" << cap << " from (" << p.x << ',' << p.y << ") along ("
       << direction.x << ',' << direction.y << ')';
    throw NoCollisionWithinCap(os.str());
  }

  const Disk &disk = table.disks[best.disk];
  const Vec2 hit = p + best.t * direction;
  Vec2 n = (1.0 / disk.radius) * (hit - best.center);
  n = (1.0 / norm(n)) * n;
  double theta = std::atan2(n.y, n.x);
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta = 0.0;

  const Vec2 tangent{-n.y, n.x};
  const double cos_in = -dot(direction, n);
  const double sin_in = -dot(direction, tangent);
  double phi_in = std::atan2(sin_in, std::max(cos_in, 0.0));
  const double limit = std::nextafter(kHalfPi, 0.0);
  phi_in = std::clamp(phi_in, -limit, limit);

  CollisionHit out;
  out.point = {best.disk, theta};
  out.flight_length = best.t;
  out.incoming_angle = phi_in;
  out.grazing = std::abs(phi_in) > kHalfPi - tolerance::kGrazing;
  return out;
}

BoundaryFrame boundary_point_frame(const BilliardTable &table, BoundaryPoint point) {
  check_disk_id(table, point.disk_id);
  if (!std::isfinite(point.theta)) throw InvalidState("boundary point angle must be finite");
  const Disk &disk = table.disks[point.disk_id];
  const Vec2 n{std::cos(point.theta), std::sin(point.theta)};
  return {wrap(disk.center + disk.radius * n), n, Vec2{-n.y, n.x}};
}

double arclength(const BilliardTable &table, BoundaryPoint point) {
  check_disk_id(table, point.disk_id);
  double r = 0.0;
  for (std::size_t j = 0; j < point.disk_id; ++j) r += kTwoPi * table.disks[j].radius;
  return r + table.disks[point.disk_id].radius * point.theta;
}

BoundaryPoint boundary_point_at(const BilliardTable &table, double r) {
  if (table.disks.empty()) throw InvalidState("table has no disks");
  for (std::size_t j = 0; j < table.disks.size(); ++j) {
    const double perimeter = kTwoPi * table.disks[j].radius;
    if (r < perimeter || j + 1 == table.disks.size()) {
      double theta = r / table.disks[j].radius;
      if (theta >= kTwoPi || theta < 0.0) theta = std::clamp(theta, 0.0, std::nextafter(kTwoPi, 0.0));
      return {j, theta};
    }
    r -= perimeter;
  }
  return {0, 0.0};
}

BoundaryPoint sample_boundary_point(const BilliardTable &table, RngStream &rng) {
  return boundary_point_at(table, rng.uniform() * table.boundary_length());
}

HorizonEstimate probe_horizon(const BilliardTable &table, std::size_t n_rays, RngStream &rng) {
  HorizonEstimate est;
  est.n_rays = n_rays;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < n_rays; ++i) {
    const BoundaryPoint point = sample_boundary_point(table, rng);
    const double phi = (rng.uniform() - 0.5) * kPi;
    const BoundaryFrame frame = boundary_point_frame(table, point);
    try {
      const CollisionHit hit = next_collision(table, frame.position, outgoing_direction(frame, phi), point);
      lo = std::min(lo, hit.flight_length);
      hi = std::max(hi, hit.flight_length);
    } catch (const NoCollisionWithinCap &) {
      ++est.violations;
    }
  }
  if (hi > 0.0) {
    est.sigma_min_hat = lo;
    est.sigma_max_hat = hi;
  }
  return est;
}

BilliardTable reference_table() {
  BilliardTable table;
  table.disks = {
      Disk{{0.25, 0.25}, 0.15, 1.0},
      Disk{{0.75, 0.75}, 0.40, 1.0},
  };
  table.sigma_cap = 2.0;
  return table;
}

}  // namespace tb
