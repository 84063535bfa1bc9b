#pragma once

#include "rdwkit/kinematics.hpp"
#include "rdwkit/sweep.hpp"

#include <array>
#include <numbers>
#include <random>

namespace rdwkit::test {

inline constexpr std::array kWellConnected{ManipulatorType::B1, ManipulatorType::C,
                                           ManipulatorType::E, ManipulatorType::G,
                                           ManipulatorType::H};

inline JointConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  return {angle(rng), angle(rng), angle(rng)};
}

/// Random member of a family with both free lengths in [0.25, 4].
inline GeometryParams random_geometry(ManipulatorType type, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> length(0.25, 4.0);
  double p1 = length(rng), p2 = length(rng);
  if (type == ManipulatorType::B1) {
    while (!(p1 > 1.05 * p2)) {
      p1 = length(rng);
      p2 = length(rng);
    }
  }
  return geometry_for(type, p1, p2);
}

/// The worked type-C example.
inline const GeometryParams kExampleC{0.0, 0.0, 1.5, 1.0, 0.0};

}  // namespace rdwkit::test
