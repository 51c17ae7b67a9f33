#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrt/search.hpp"

namespace qrt {

struct Vec3i {
    int x = 0, y = 0, z = 0;

    int operator[](int a) const { return a == 0 ? x : (a == 1 ? y : z); }
    int& operator[](int a) { return a == 0 ? x : (a == 1 ? y : z); }
    bool operator==(const Vec3i&) const = default;
};

struct Vec3d {
    double x = 0, y = 0, z = 0;

    double operator[](int a) const { return a == 0 ? x : (a == 1 ? y : z); }
    double& operator[](int a) { return a == 0 ? x : (a == 1 ? y : z); }

    Vec3d operator+(const Vec3d& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3d operator-(const Vec3d& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3d operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3d& o) const { return x * o.x + y * o.y + z * o.z; }
    double length() const { return std::sqrt(dot(*this)); }
    Vec3d normalized() const {
        const double l = length();
        return {x / l, y / l, z / l};
    }
    Vec3d cross(const Vec3d& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
};

inline Vec3d to_vec3d(const Vec3i& v) {
    return {double(v.x), double(v.y), double(v.z)};
}

using Rgb = std::array<double, 3>;

struct Material {
    Rgb albedo{0.8, 0.8, 0.8};
    bool mirror = false;
    Rgb emissive{0.0, 0.0, 0.0};
};

// Axis-aligned rectangle: exactly one axis has lo == hi (the supporting
// plane), the other two span [lo, hi] inclusive.
struct ScenePrimitive {
    std::uint32_t id = 0;
    Vec3i lo, hi;
    Material material;

    int plane_axis() const {
        if (lo.x == hi.x) return 0;
        if (lo.y == hi.y) return 1;
        return 2;
    }
};

struct Ray {
    Vec3i origin;
    Vec3d direction; // unit
    int near = 0;
    int far = 0;

    int principal_axis() const {
        const double ax = std::fabs(direction.x);
        const double ay = std::fabs(direction.y);
        const double az = std::fabs(direction.z);
        if (ax >= ay && ax >= az) return 0;
        return ay >= az ? 1 : 2;
    }
};

constexpr int kMaxDepth = 1 << 24; // stands in for an unbounded depth range

struct PointLight {
    Vec3d position;
    Rgb intensity{1.0, 1.0, 1.0};
};

struct AreaLight {
    // Rectangle on an axis-aligned plane, same convention as primitives.
    Vec3i lo, hi;
    Rgb intensity{1.0, 1.0, 1.0};

    int plane_axis() const {
        if (lo.x == hi.x) return 0;
        if (lo.y == hi.y) return 1;
        return 2;
    }
};

struct DirectionalLight {
    Vec3d direction; // unit, pointing from the light into the scene
    Rgb intensity{1.0, 1.0, 1.0};
};

struct Camera {
    Vec3i position;
    Vec3d look_at;
    double vfov_deg = 58.0;
};

struct Scene {
    int cb = 4; // coordinate bit width; world volume is [0, 2^cb)^3
    std::vector<ScenePrimitive> primitives;
    std::vector<PointLight> point_lights;
    std::vector<AreaLight> area_lights;
    std::vector<DirectionalLight> directional_lights;
    Camera camera;

    // pb such that 2^pb >= primitive count; indices past the raw count are
    // sentinels that never intersect anything.
    int padded_bits() const;
    std::uint64_t padded_count() const { return std::uint64_t(1) << padded_bits(); }
};

struct Hit {
    bool hit = false;
    int depth = 0;
};

// Intersection point of the ray with the primitive's supporting plane,
// floored to integer coordinates. nullopt for parallel or behind-origin.
std::optional<Vec3i> eval_rpc(const Ray& ray, const ScenePrimitive& prim);

// Containment and depth-range test for an rpc produced by eval_rpc.
// Depth is |rpc[D] - origin[D]| along the ray's principal axis.
Hit verify_rpc(const Ray& ray, const ScenePrimitive& prim, const Vec3i& rpc,
               int depth_limit);

// eval_rpc followed by verify_rpc: the single definition of "ray r
// intersects primitive p" shared by the oracle, the classical verifier and
// the reference renderer.
Hit classical_intersect(const Ray& ray, const ScenePrimitive& prim,
                        int depth_limit);

// Oracle predicate over the padded primitive index space.
OracleSpec build_oracle(const Ray& ray, const Scene& scene, int depth_limit);

// Scene validation; returns an error message or empty string.
std::string validate_scene(const Scene& scene);

// Procedural scene families used throughout the experiments.
Scene make_qornell(std::uint32_t n_primitives);          // Cornell-box-like
Scene make_depth_complexity(std::uint32_t n_primitives); // quadrant depth test

} // namespace qrt
