#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qrt/geometry.hpp"
#include "qrt/image.hpp"
#include "qrt/metrics.hpp"
#include "qrt/rng.hpp"

namespace qrt {

enum class RenderMode { classical, quantum, randomized_classical };

struct RenderConfig {
    RenderMode mode = RenderMode::quantum;
    int iterations = 8;        // trace-pass iterations (#IT)
    bool neighbor_opt = false;
    bool termination = false;
    int direct_iterations = 2; // shadow-ray repetitions per light
    int light_samples = 16;    // area-light samples per pixel
    int vpl_count = 0;         // VPLs per pixel (0 = direct only)
    std::uint64_t seed = 0;
    int width = 128;
    int height = 128;
    int workers = 0; // 0 = hardware concurrency
};

struct PixelRecord {
    std::int32_t prim = -1; // visible primitive id, -1 = none
    Vec3i point;
    Vec3d normal;
    int depth = kMaxDepth; // D_map
    int sn = 0;            // consecutive negatives
    bool active = true;
};

struct RenderMaps {
    int width = 0;
    int height = 0;
    std::vector<PixelRecord> pixels;

    RenderMaps() = default;
    RenderMaps(int w, int h) : width(w), height(h), pixels(std::size_t(w) * h) {}
};

struct TraceResult {
    bool found = false;
    std::int32_t prim = -1;
    Vec3i point;
    Vec3d normal;
    int depth = 0;
};

// Camera ray through pixel (x, y), top-left origin, y down.
Ray primary_ray(const Scene& scene, int width, int height, int x, int y);

// One full qsearch over the depth-limited intersection oracle, with
// classical verification of the measurement.
TraceResult qtrace(const Ray& ray, const Scene& scene, int depth_limit,
                   MeasureRng& rng, MetricsCounters& counters);

// Occlusion-only qtrace (no depth minimization).
bool qoccluded(const Ray& ray, const Scene& scene, MeasureRng& rng,
               MetricsCounters& counters);

// Randomized classical baseline: tests a uniformly sampled floor(sqrt(N))
// subset without replacement, returns the minimum-depth hit in the subset.
TraceResult rc_intersect(const Ray& ray, const Scene& scene, int depth_limit,
                         MeasureRng& rng, MetricsCounters& counters);

// Deterministic full scan; ties resolved by primitive storage order.
TraceResult classical_trace(const Ray& ray, const Scene& scene, int depth_limit,
                            MetricsCounters& counters);

// Iterative minimum-depth pass over the listed pixels (one ray each).
// pass_id keys the rng substreams; per_iteration (optional) receives one
// counter snapshot per executed iteration.
void trace_pass(const Scene& scene, const std::vector<int>& pixel_indices,
                const std::vector<Ray>& rays, RenderMaps& maps,
                const RenderConfig& cfg, int pass_id, MetricsCounters& counters,
                std::vector<MetricsCounters>* per_iteration = nullptr);

// Row-major in-place neighbor gathering (4-neighborhood) over the pixels
// marked in in_pass. Returns the number of updated pixels; classical tests
// are added to counters.c_int.
long long neigh_opt(const Scene& scene, const std::vector<Ray>& rays,
                    RenderMaps& maps, const std::vector<std::uint8_t>& in_pass,
                    std::vector<std::uint8_t>& improved,
                    MetricsCounters& counters);

// Termination rule: continue iff xi <= fn_estimate^sn.
bool should_continue(int sn, double fn_estimate, MeasureRng& rng);

// Analytic per-trace false-negative estimate used by the termination rule.
double fn_estimate_for(const Scene& scene, RenderMode mode);

struct RenderResult {
    Image image;
    MetricsCounters counters;
    std::vector<MetricsCounters> iteration_stats; // primary pass breakdown
    RenderMaps primary;                           // final visible-primitive maps
};

RenderResult render_scene(const Scene& scene, const RenderConfig& cfg);

// Pixels whose classical comparison is ambiguous: several primitives tie at
// the minimum depth on the primary ray (or on the specular ray behind a
// mirror pixel).
std::vector<bool> tie_mask(const Scene& scene, int width, int height);

} // namespace qrt
