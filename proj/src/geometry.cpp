#include "qrt/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace qrt {

int Scene::padded_bits() const {
    int pb = 0;
    while ((std::uint64_t(1) << pb) < primitives.size())
        ++pb;
    return std::max(pb, 1);
}

std::optional<Vec3i> eval_rpc(const Ray& ray, const ScenePrimitive& prim) {
    const int a = prim.plane_axis();
    const double d = ray.direction[a];
    if (d == 0.0)
        return std::nullopt;
    const double t = (double(prim.lo[a]) - double(ray.origin[a])) / d;
    if (t < 0.0)
        return std::nullopt;
    Vec3i rpc;
    for (int axis = 0; axis < 3; ++axis)
        rpc[axis] =
            int(std::floor(double(ray.origin[axis]) + t * ray.direction[axis]));
    rpc[a] = prim.lo[a]; // exact on the supporting plane
    return rpc;
}

Hit verify_rpc(const Ray& ray, const ScenePrimitive& prim, const Vec3i& rpc,
               int depth_limit) {
    for (int axis = 0; axis < 3; ++axis)
        if (rpc[axis] < prim.lo[axis] || rpc[axis] > prim.hi[axis])
            return {};
    const int d_axis = ray.principal_axis();
    const int depth = std::abs(rpc[d_axis] - ray.origin[d_axis]);
    if (depth < ray.near || depth > std::min(ray.far, depth_limit))
        return {false, depth};
    return {true, depth};
}

Hit classical_intersect(const Ray& ray, const ScenePrimitive& prim,
                        int depth_limit) {
    const auto rpc = eval_rpc(ray, prim);
    if (!rpc)
        return {};
    return verify_rpc(ray, prim, *rpc, depth_limit);
}

OracleSpec build_oracle(const Ray& ray, const Scene& scene, int depth_limit) {
    OracleSpec spec;
    spec.n_qubits = scene.padded_bits();
    const std::vector<ScenePrimitive>* prims = &scene.primitives;
    spec.marks = [ray, prims, depth_limit](std::uint32_t p) {
        if (p >= prims->size())
            return false; // sentinel padding
        return classical_intersect(ray, (*prims)[p], depth_limit).hit;
    };
    return spec;
}

std::string validate_scene(const Scene& scene) {
    if (scene.cb < 1 || scene.cb > 10)
        return "world_bits must be in [1, 10]";
    if (scene.primitives.empty())
        return "scene has no primitives";
    const int w = 1 << scene.cb;
    for (const auto& p : scene.primitives) {
        int planes = 0;
        for (int a = 0; a < 3; ++a) {
            if (p.lo[a] > p.hi[a])
                return "primitive " + std::to_string(p.id) + ": min > max";
            if (p.lo[a] == p.hi[a])
                ++planes;
        }
        if (planes != 1)
            return "primitive " + std::to_string(p.id) +
                   ": must be planar on exactly one axis";
        const bool inside = p.lo.x >= 0 && p.lo.y >= 0 && p.lo.z >= 0 &&
                            p.hi.x < w && p.hi.y < w && p.hi.z < w;
        const bool outside = p.hi.x < 0 || p.hi.y < 0 || p.hi.z < 0 ||
                             p.lo.x >= w || p.lo.y >= w || p.lo.z >= w;
        if (!inside && !outside)
            return "primitive " + std::to_string(p.id) +
                   ": straddles the world volume boundary";
    }
    return {};
}

namespace {

ScenePrimitive rect(std::uint32_t id, Vec3i lo, Vec3i hi, Rgb albedo,
                    bool mirror = false) {
    ScenePrimitive p;
    p.id = id;
    p.lo = lo;
    p.hi = hi;
    p.material.albedo = albedo;
    p.material.mirror = mirror;
    return p;
}

// Never-intersectable filler: a tiny rectangle far outside the world volume,
// beyond any ray's far clip. Keeps the primitive count at the requested
// power of two without changing what any ray can see.
ScenePrimitive sentinel(std::uint32_t id) {
    return rect(id, {-10000, -10000, -10000}, {-10000, -9999, -9999},
                {0, 0, 0});
}

} // namespace

Scene make_qornell(std::uint32_t n) {
    Scene s;
    s.cb = 4;
    s.camera.position = {8, 8, -14};
    s.camera.look_at = {8, 8, 15};
    s.camera.vfov_deg = 58.0;
    s.point_lights.push_back({{5.0, 13.0, 9.0}, {0.7, 0.7, 0.7}});
    s.point_lights.push_back({{11.0, 13.0, 9.0}, {0.7, 0.7, 0.7}});

    auto& p = s.primitives;
    const Rgb white{0.73, 0.73, 0.73};
    p.push_back(rect(0, {0, 0, 0}, {15, 0, 15}, white));    // floor
    p.push_back(rect(1, {0, 15, 0}, {15, 15, 15}, white));  // ceiling
    p.push_back(rect(2, {0, 0, 15}, {15, 15, 15}, white));  // back wall
    p.push_back(rect(3, {0, 0, 0}, {0, 15, 15}, {0.9, 0.9, 0.9}, true)); // mirror
    p.push_back(rect(4, {15, 0, 0}, {15, 15, 15}, {0.15, 0.45, 0.12}));  // right

    const Rgb blue{0.2, 0.3, 0.6};
    if (n <= 8) {
        // Simplified short box: three faces visible from the camera.
        p.push_back(rect(5, {2, 4, 4}, {5, 4, 7}, blue));  // top
        p.push_back(rect(6, {2, 0, 4}, {5, 4, 4}, blue));  // front
        p.push_back(rect(7, {5, 0, 4}, {5, 4, 7}, blue));  // right side
    } else {
        const Rgb red{0.63, 0.07, 0.05};
        // Tall box, five faces.
        p.push_back(rect(5, {9, 0, 8}, {9, 8, 11}, red));
        p.push_back(rect(6, {12, 0, 8}, {12, 8, 11}, red));
        p.push_back(rect(7, {9, 8, 8}, {12, 8, 11}, red));
        p.push_back(rect(8, {9, 0, 8}, {12, 8, 8}, red));
        p.push_back(rect(9, {9, 0, 11}, {12, 8, 11}, red));
        // Short box, four faces (back face skipped).
        p.push_back(rect(10, {2, 4, 4}, {5, 4, 7}, blue));
        p.push_back(rect(11, {2, 0, 4}, {5, 4, 4}, blue));
        p.push_back(rect(12, {5, 0, 4}, {5, 4, 7}, blue));
        p.push_back(rect(13, {2, 0, 4}, {2, 4, 7}, blue));
    }
    while (p.size() < n)
        p.push_back(sentinel(std::uint32_t(p.size())));
    return s;
}

Scene make_depth_complexity(std::uint32_t n) {
    Scene s;
    s.cb = 4;
    s.camera.position = {8, 8, -14};
    s.camera.look_at = {8, 8, 15};
    s.camera.vfov_deg = 58.0;
    // Headlight: shadow rays retrace the primary ray, so visibility is
    // deterministic and the image isolates depth-convergence errors.
    s.point_lights.push_back({{8.0, 8.0, -14.0}, {1.0, 1.0, 1.0}});

    auto& p = s.primitives;
    std::uint32_t id = 0;
    p.push_back(rect(id++, {0, 0, 14}, {15, 15, 14}, {0.75, 0.75, 0.7}));

    // Upper-left quadrant: depth 2.
    p.push_back(rect(id++, {0, 8, 8}, {7, 15, 8}, {0.7, 0.1, 0.1}));

    // Lower-right quadrant: eight stacked planes, depth 9.
    for (int k = 0; k < 8; ++k)
        p.push_back(rect(id++, {8, 0, 6 + k}, {15, 7, 6 + k},
                         {0.10 + 0.09 * k, 0.25, 0.85 - 0.09 * k}));

    // Upper-right quadrant: checkerboard at depth 2 for spatial frequency.
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if ((i + j) % 2 == 0)
                p.push_back(rect(id++, {8 + 2 * i, 8 + 2 * j, 8},
                                 {9 + 2 * i, 9 + 2 * j, 8}, {0.9, 0.8, 0.1}));

    // Lower-left quadrant: checkerboard over six stacked planes.
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if ((i + j) % 2 == 0)
                p.push_back(rect(id++, {2 * i, 2 * j, 6}, {1 + 2 * i, 1 + 2 * j, 6},
                                 {0.1, 0.8, 0.3}));
    for (int k = 0; k < 6; ++k)
        p.push_back(rect(id++, {0, 0, 7 + k}, {7, 7, 7 + k},
                         {0.2, 0.55 + 0.05 * k, 0.35 + 0.08 * k}));

    while (p.size() < n)
        p.push_back(sentinel(std::uint32_t(p.size())));
    return s;
}

} // namespace qrt
