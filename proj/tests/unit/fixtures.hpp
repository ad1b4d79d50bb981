#pragma once

#include <thermo_billiards/geometry.hpp>

namespace tb::test {

inline BilliardTable single_disk(double sigma_cap = 2.0) {
  BilliardTable t;
  t.disks.push_back({{0.5, 0.5}, 0.25, 1.0});
  t.sigma_cap = sigma_cap;
  return t;
}

}  // namespace tb::test
