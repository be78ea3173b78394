#pragma once

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Geometry>

#include "harmonode/fea.hpp"

namespace testing_helpers {

inline std::string data_path(const std::string& name) { return std::string(HARMONODE_TEST_DATA) + "/" + name; }

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  return v.normalized();
}

// Uniform random rotation from a normalized Gaussian quaternion.
inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

// Member-only demand with the given number of random entries.
inline harmonode::NodalDemand random_demand(std::mt19937_64& rng, int entries) {
  std::uniform_real_distribution<double> mag(1.0, 100.0);
  std::bernoulli_distribution coin;
  harmonode::NodalDemand d;
  d.node = 1;
  d.load_case = "default";
  for (int i = 0; i < entries; ++i) {
    harmonode::DemandEntry e;
    e.direction = random_unit(rng);
    e.magnitude = mag(rng);
    e.sense = coin(rng) ? harmonode::Sense::tension : harmonode::Sense::compression;
    e.source_id = i + 1;
    d.entries.push_back(e);
  }
  return d;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_helpers
