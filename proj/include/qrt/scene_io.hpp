#pragma once

#include <string>

#include "qrt/geometry.hpp"

namespace qrt {

// Line-based key-value scene format:
//
//   world_bits 4
//   camera { position 8 8 0  look_at 8 8 15  vfov 58 }   -- one key per line
//   primitive { min 0 0 0  max 15 0 15  albedo .7 .7 .7  mirror 1 }
//   point_light { position 5 13 9  intensity .7 .7 .7 }
//   area_light { min ... max ... intensity ... }
//   directional_light { direction 0 -1 0  intensity 1 1 1 }
//
// '#' starts a comment. Parse and invariant violations throw
// std::runtime_error with the offending line number.
Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& text, const std::string& origin = "scene");

void save_scene(const Scene& scene, const std::string& path);

} // namespace qrt
