#pragma once

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "equicohom/equicohom.hpp"

namespace testing_support {

inline std::string bundle_path(const std::string& name) { return std::string(EQUICOHOM_BUNDLE_DIR) + "/" + name + ".json"; }

inline equicohom::Bundle load(const std::string& name) { return equicohom::load_bundle(bundle_path(name)); }

inline nlohmann::json load_json(const std::string& name) {
  std::ifstream in(bundle_path(name));
  return nlohmann::json::parse(in);
}

inline const std::vector<std::string>& all_bundles() {
  static const std::vector<std::string> names = {"circle_trivial", "circle_twisted", "theta_z2",   "theta_z2_raw_f",
                                                 "theta_sign",     "cone_theta",     "free_circle_z2", "delta2_s3",
                                                 "rp2_twisted",    "s3_star"};
  return names;
}

// Bundles whose fixed sets are connected and which carry a path system.
inline const std::vector<std::string>& connected_bundles() {
  static const std::vector<std::string> names = {"circle_trivial", "circle_twisted", "theta_z2",  "theta_z2_raw_f",
                                                 "theta_sign",     "cone_theta",     "delta2_s3", "rp2_twisted",
                                                 "s3_star"};
  return names;
}

// Bundles over the trivial group.
inline const std::vector<std::string>& trivial_group_bundles() {
  static const std::vector<std::string> names = {"circle_trivial", "circle_twisted", "delta2_s3", "rp2_twisted"};
  return names;
}

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x5eed1234ULL + salt); }

}  // namespace testing_support
