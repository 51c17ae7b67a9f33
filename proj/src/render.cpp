#include "qrt/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "qrt/search.hpp"

namespace qrt {

namespace {

// Substream pass ids. Trace passes use consecutive (trace, termination)
// pairs; lighting passes are keyed per light / per VPL slot.
constexpr int kPassPrimary = 0;
constexpr int kPassSpecular = 2;
constexpr int kPassDirectPrimary = 10;  // + light index
constexpr int kPassDirectSpecular = 40; // + light index
constexpr int kPassArea = 100;          // + area light index
constexpr int kPassVplGen = 200;
constexpr int kPassVplVis = 210;

int resolve_workers(int workers) {
    if (workers > 0)
        return workers;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? int(hc) : 1;
}

// Fixed chunking; results must not depend on the split, only throughput does.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& fn) {
    const int w = std::min<std::size_t>(std::size_t(resolve_workers(workers)),
                                        n > 0 ? n : 1);
    if (w <= 1) {
        fn(std::size_t(0), n, 0);
        return;
    }
    const std::size_t chunk = (n + w - 1) / std::size_t(w);
    std::vector<std::thread> threads;
    for (int t = 0; t < w; ++t) {
        const std::size_t b = std::min(n, std::size_t(t) * chunk);
        const std::size_t e = std::min(n, b + chunk);
        threads.emplace_back([&fn, b, e, t] { fn(b, e, t); });
    }
    for (auto& th : threads)
        th.join();
}

TraceResult result_from(const Ray& ray, const Scene& scene,
                        std::uint32_t prim_idx, int depth_limit) {
    const ScenePrimitive& prim = scene.primitives[prim_idx];
    const auto rpc = eval_rpc(ray, prim);
    const Hit h = verify_rpc(ray, prim, *rpc, depth_limit);
    TraceResult tr;
    tr.found = true;
    tr.prim = std::int32_t(prim_idx);
    tr.point = *rpc;
    tr.depth = h.depth;
    const int a = prim.plane_axis();
    tr.normal = {0, 0, 0};
    tr.normal[a] = ray.direction[a] > 0 ? -1.0 : 1.0;
    return tr;
}

TraceResult trace_once(const Ray& ray, const Scene& scene, int depth_limit,
                       RenderMode mode, MeasureRng& rng,
                       MetricsCounters& counters) {
    switch (mode) {
    case RenderMode::classical:
        return classical_trace(ray, scene, depth_limit, counters);
    case RenderMode::quantum:
        return qtrace(ray, scene, depth_limit, rng, counters);
    case RenderMode::randomized_classical:
        return rc_intersect(ray, scene, depth_limit, rng, counters);
    }
    return {};
}

} // namespace

Ray primary_ray(const Scene& scene, int width, int height, int x, int y) {
    const Vec3d origin = to_vec3d(scene.camera.position);
    const Vec3d forward = (scene.camera.look_at - origin).normalized();
    Vec3d up0{0, 1, 0};
    if (std::fabs(forward.y) > 0.999)
        up0 = {1, 0, 0};
    const Vec3d right = up0.cross(forward).normalized();
    const Vec3d up = forward.cross(right);

    const double tan_half =
        std::tan(scene.camera.vfov_deg * std::numbers::pi / 360.0);
    const double aspect = double(width) / double(height);
    const double ndc_x = (2.0 * (x + 0.5) / width - 1.0) * tan_half * aspect;
    const double ndc_y = (1.0 - 2.0 * (y + 0.5) / height) * tan_half;

    Ray ray;
    ray.origin = scene.camera.position;
    ray.direction = (forward + right * ndc_x + up * ndc_y).normalized();
    ray.near = 1;
    ray.far = 4 << scene.cb;
    return ray;
}

TraceResult qtrace(const Ray& ray, const Scene& scene, int depth_limit,
                   MeasureRng& rng, MetricsCounters& counters) {
    const OracleSpec oracle = build_oracle(ray, scene, depth_limit);
    const SearchOutcome out = qsearch(oracle, oracle.marks, {}, rng);
    counters.eval += out.eval_count;
    counters.c_int += out.classical_checks;
    if (!out.found)
        return {};
    return result_from(ray, scene, std::uint32_t(out.index), depth_limit);
}

bool qoccluded(const Ray& ray, const Scene& scene, MeasureRng& rng,
               MetricsCounters& counters) {
    return qtrace(ray, scene, kMaxDepth, rng, counters).found;
}

TraceResult rc_intersect(const Ray& ray, const Scene& scene, int depth_limit,
                         MeasureRng& rng, MetricsCounters& counters) {
    const std::size_t n = scene.primitives.size();
    const std::size_t k = std::size_t(std::floor(std::sqrt(double(n))));
    std::vector<std::uint32_t> idx(n);
    for (std::size_t i = 0; i < n; ++i)
        idx[i] = std::uint32_t(i);

    TraceResult best;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j =
            std::size_t(rng.next_int(int(i), int(n - 1))); // without replacement
        std::swap(idx[i], idx[j]);
        ++counters.c_int;
        const Hit h = classical_intersect(ray, scene.primitives[idx[i]],
                                          depth_limit);
        if (h.hit && (!best.found || h.depth < best.depth))
            best = result_from(ray, scene, idx[i], depth_limit);
    }
    return best;
}

TraceResult classical_trace(const Ray& ray, const Scene& scene, int depth_limit,
                            MetricsCounters& counters) {
    TraceResult best;
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        ++counters.c_int;
        const Hit h = classical_intersect(ray, scene.primitives[i], depth_limit);
        if (h.hit && (!best.found || h.depth < best.depth))
            best = result_from(ray, scene, std::uint32_t(i), depth_limit);
    }
    return best;
}

bool should_continue(int sn, double fn_estimate, MeasureRng& rng) {
    return rng.next_double() <= std::pow(fn_estimate, double(sn));
}

double fn_estimate_for(const Scene& scene, RenderMode mode) {
    switch (mode) {
    case RenderMode::quantum:
        return fn_prob_qs(scene.padded_count());
    case RenderMode::randomized_classical:
        return fn_prob_rc(scene.primitives.size());
    case RenderMode::classical:
        return 0.0;
    }
    return 0.0;
}

long long neigh_opt(const Scene& scene, const std::vector<Ray>& rays,
                    RenderMaps& maps, const std::vector<std::uint8_t>& in_pass,
                    std::vector<std::uint8_t>& improved,
                    MetricsCounters& counters) {
    const int w = maps.width, h = maps.height;
    long long updated = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t p = std::size_t(y) * w + x;
            if (!in_pass[p])
                continue;
            PixelRecord& rec = maps.pixels[p];

            std::int32_t cand[4];
            int n_cand = 0;
            const auto consider = [&](int nx, int ny) {
                if (nx < 0 || ny < 0 || nx >= w || ny >= h)
                    return;
                const std::size_t q = std::size_t(ny) * w + nx;
                if (!in_pass[q])
                    return;
                const std::int32_t c = maps.pixels[q].prim;
                if (c < 0 || c == rec.prim)
                    return;
                for (int i = 0; i < n_cand; ++i)
                    if (cand[i] == c)
                        return;
                cand[n_cand++] = c;
            };
            consider(x - 1, y);
            consider(x + 1, y);
            consider(x, y - 1);
            consider(x, y + 1);

            bool upd = false;
            for (int i = 0; i < n_cand; ++i) {
                const int limit = rec.depth == kMaxDepth ? kMaxDepth
                                                         : rec.depth - 1;
                ++counters.c_int;
                const Hit hit = classical_intersect(
                    rays[p], scene.primitives[std::size_t(cand[i])], limit);
                if (hit.hit && hit.depth < rec.depth) {
                    const TraceResult tr = result_from(
                        rays[p], scene, std::uint32_t(cand[i]), limit);
                    rec.prim = tr.prim;
                    rec.point = tr.point;
                    rec.normal = tr.normal;
                    rec.depth = tr.depth;
                    upd = true;
                }
            }
            if (upd) {
                ++updated;
                ++counters.cpix;
                improved[p] = 1;
            }
        }
    }
    return updated;
}

void trace_pass(const Scene& scene, const std::vector<int>& pixel_indices,
                const std::vector<Ray>& rays, RenderMaps& maps,
                const RenderConfig& cfg, int pass_id, MetricsCounters& counters,
                std::vector<MetricsCounters>* per_iteration) {
    const std::size_t npix = maps.pixels.size();
    std::vector<std::uint8_t> in_pass(npix, 0);
    for (int p : pixel_indices)
        in_pass[std::size_t(p)] = 1;

    counters.rays += (long long)pixel_indices.size();

    const MeasureRng root(cfg.seed);
    const double fn_est = cfg.termination ? fn_estimate_for(scene, cfg.mode)
                                          : 0.0;
    const int iters = cfg.mode == RenderMode::classical ? 1 : cfg.iterations;
    const int nworkers = resolve_workers(cfg.workers);

    std::vector<std::uint8_t> improved(npix, 0);
    for (int it = 0; it < iters; ++it) {
        if (cfg.termination) {
            bool any_active = false;
            for (int p : pixel_indices)
                if (maps.pixels[std::size_t(p)].active) {
                    any_active = true;
                    break;
                }
            if (!any_active)
                break;
        }

        std::fill(improved.begin(), improved.end(), 0);
        std::vector<MetricsCounters> wc(std::size_t(nworkers) + 1);
        parallel_for(pixel_indices.size(), cfg.workers,
                     [&](std::size_t b, std::size_t e, int worker) {
            MetricsCounters& c = wc[std::size_t(worker)];
            for (std::size_t i = b; i < e; ++i) {
                const int p = pixel_indices[i];
                PixelRecord& rec = maps.pixels[std::size_t(p)];
                if (!rec.active)
                    continue;
                const int limit = rec.depth == kMaxDepth ? kMaxDepth
                                                         : rec.depth - 1;
                MeasureRng rng = root.substream(MeasureRng::stream(
                    std::uint32_t(p), std::uint32_t(pass_id),
                    std::uint32_t(it)));
                const TraceResult tr =
                    trace_once(rays[std::size_t(p)], scene, limit, cfg.mode,
                               rng, c);
                if (tr.found && tr.depth < rec.depth) {
                    rec.prim = tr.prim;
                    rec.point = tr.point;
                    rec.normal = tr.normal;
                    rec.depth = tr.depth;
                    improved[std::size_t(p)] = 1;
                }
            }
        });

        MetricsCounters delta;
        for (const auto& c : wc)
            delta = merge(delta, c);

        if (cfg.neighbor_opt)
            neigh_opt(scene, rays, maps, in_pass, improved, delta);

        if (cfg.termination) {
            for (int p : pixel_indices) {
                PixelRecord& rec = maps.pixels[std::size_t(p)];
                if (!rec.active)
                    continue;
                if (improved[std::size_t(p)]) {
                    rec.sn = 0;
                } else {
                    ++rec.sn;
                    MeasureRng rng = root.substream(MeasureRng::stream(
                        std::uint32_t(p), std::uint32_t(pass_id + 1),
                        std::uint32_t(it)));
                    rec.active = should_continue(rec.sn, fn_est, rng);
                }
            }
        }

        delta.iterations = 1;
        counters = merge(counters, delta);
        if (per_iteration)
            per_iteration->push_back(delta);
    }
}

namespace {

struct LightSample {
    Vec3d position;   // for point-like lights
    Vec3d direction;  // toward the light (unit), directional lights only
    Rgb intensity;
    bool directional = false;
};

std::vector<LightSample> direct_lights(const Scene& scene) {
    std::vector<LightSample> ls;
    for (const auto& l : scene.point_lights)
        ls.push_back({l.position, {}, l.intensity, false});
    for (const auto& l : scene.directional_lights)
        ls.push_back({{}, l.direction * -1.0, l.intensity, true});
    return ls;
}

// Shadow ray from an integer hit point toward a target. Returns nullopt for
// degenerate directions or when the light is behind the surface.
std::optional<Ray> shadow_ray(const Vec3i& point, const Vec3d& normal,
                              const LightSample& light, int cb) {
    Vec3d dir;
    int far;
    if (light.directional) {
        dir = light.direction;
        far = 4 << cb;
    } else {
        const Vec3d delta = light.position - to_vec3d(point);
        const double len = delta.length();
        if (len == 0.0)
            return std::nullopt;
        dir = delta * (1.0 / len);
        const int d_axis = [&] {
            Ray probe;
            probe.direction = dir;
            return probe.principal_axis();
        }();
        far = int(std::floor(std::fabs(light.position[d_axis] -
                                       double(point[d_axis])))); // up to the light
    }
    if (normal.dot(dir) <= 0.0)
        return std::nullopt;
    Ray ray;
    ray.origin = point;
    ray.direction = dir;
    ray.near = 1; // integer self-intersection epsilon
    ray.far = far;
    return ray;
}

bool occluded_once(const Ray& ray, const Scene& scene, RenderMode mode,
                   MeasureRng& rng, MetricsCounters& counters) {
    switch (mode) {
    case RenderMode::classical:
        return classical_trace(ray, scene, kMaxDepth, counters).found;
    case RenderMode::quantum:
        return qoccluded(ray, scene, rng, counters);
    case RenderMode::randomized_classical:
        return rc_intersect(ray, scene, kMaxDepth, rng, counters).found;
    }
    return false;
}

// Per-(pixel, light) occlusion with sticky positives across iterations.
// Entries for lights behind the surface (or degenerate rays) are marked
// occluded without tracing.
std::vector<std::uint8_t> direct_occlusion(const Scene& scene,
                                           const RenderMaps& maps,
                                           const std::vector<LightSample>& lights,
                                           const RenderConfig& cfg, int pass_base,
                                           MetricsCounters& counters) {
    const std::size_t npix = maps.pixels.size();
    std::vector<std::uint8_t> occ(lights.size() * npix, 0);
    if (lights.empty())
        return occ;

    const MeasureRng root(cfg.seed);
    const int iters = cfg.mode == RenderMode::classical
                          ? 1
                          : std::max(1, cfg.direct_iterations);
    const int nworkers = resolve_workers(cfg.workers);

    for (int it = 0; it < iters; ++it) {
        std::vector<MetricsCounters> wc(std::size_t(nworkers) + 1);
        parallel_for(npix, cfg.workers,
                     [&](std::size_t b, std::size_t e, int worker) {
            MetricsCounters& c = wc[std::size_t(worker)];
            for (std::size_t p = b; p < e; ++p) {
                const PixelRecord& rec = maps.pixels[p];
                if (rec.prim < 0)
                    continue;
                for (std::size_t li = 0; li < lights.size(); ++li) {
                    std::uint8_t& o = occ[li * npix + p];
                    if (o)
                        continue;
                    const auto ray = shadow_ray(rec.point, rec.normal,
                                                lights[li], scene.cb);
                    if (!ray) {
                        o = 1;
                        continue;
                    }
                    if (it == 0)
                        ++c.rays;
                    MeasureRng rng = root.substream(MeasureRng::stream(
                        std::uint32_t(p), std::uint32_t(pass_base + int(li)),
                        std::uint32_t(it)));
                    if (occluded_once(*ray, scene, cfg.mode, rng, c))
                        o = 1;
                }
            }
        });
        for (const auto& c : wc)
            counters = merge(counters, c);
    }
    return occ;
}

Rgb shade_direct(const PixelRecord& rec, const std::vector<LightSample>& lights,
                 const std::vector<std::uint8_t>& occ, std::size_t npix,
                 std::size_t pix) {
    Rgb out{0, 0, 0};
    for (std::size_t li = 0; li < lights.size(); ++li) {
        if (occ[li * npix + pix])
            continue;
        const Vec3d dir = lights[li].directional
                              ? lights[li].direction
                              : (lights[li].position - to_vec3d(rec.point))
                                    .normalized();
        const double nl = std::max(0.0, rec.normal.dot(dir));
        for (int ch = 0; ch < 3; ++ch)
            out[std::size_t(ch)] += lights[li].intensity[std::size_t(ch)] * nl;
    }
    return out;
}

std::vector<Rgb> area_light_radiance(const Scene& scene, const RenderMaps& maps,
                                     const RenderConfig& cfg,
                                     MetricsCounters& counters) {
    const std::size_t npix = maps.pixels.size();
    std::vector<Rgb> rad(npix, Rgb{0, 0, 0});
    if (scene.area_lights.empty())
        return rad;

    const MeasureRng root(cfg.seed);
    const int samples = std::max(1, cfg.light_samples);
    int sx = std::max(1, int(std::floor(std::sqrt(double(samples)))));
    while (samples % sx != 0)
        --sx;
    const int sy = samples / sx; // stratified sx-by-sy jittered grid

    const int nworkers = resolve_workers(cfg.workers);
    std::vector<MetricsCounters> wc(std::size_t(nworkers) + 1);
    parallel_for(npix, cfg.workers, [&](std::size_t b, std::size_t e,
                                        int worker) {
        MetricsCounters& c = wc[std::size_t(worker)];
        for (std::size_t p = b; p < e; ++p) {
            const PixelRecord& rec = maps.pixels[p];
            if (rec.prim < 0)
                continue;
            for (std::size_t li = 0; li < scene.area_lights.size(); ++li) {
                const AreaLight& al = scene.area_lights[li];
                const int axis = al.plane_axis();
                const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
                Rgb sum{0, 0, 0};
                for (int s = 0; s < samples; ++s) {
                    MeasureRng rng = root.substream(MeasureRng::stream(
                        std::uint32_t(p), std::uint32_t(kPassArea + int(li)),
                        std::uint32_t(s)));
                    const double u =
                        (s % sx + rng.next_double()) / double(sx);
                    const double v =
                        (s / sx + rng.next_double()) / double(sy);
                    LightSample sample;
                    sample.intensity = al.intensity;
                    sample.position[axis] = double(al.lo[axis]);
                    sample.position[a1] =
                        al.lo[a1] + u * double(al.hi[a1] - al.lo[a1]);
                    sample.position[a2] =
                        al.lo[a2] + v * double(al.hi[a2] - al.lo[a2]);
                    const auto ray =
                        shadow_ray(rec.point, rec.normal, sample, scene.cb);
                    if (!ray)
                        continue;
                    ++c.rays;
                    if (occluded_once(*ray, scene, cfg.mode, rng, c))
                        continue;
                    const double nl = std::max(
                        0.0, rec.normal.dot((sample.position -
                                             to_vec3d(rec.point))
                                                .normalized()));
                    for (int ch = 0; ch < 3; ++ch)
                        sum[std::size_t(ch)] +=
                            al.intensity[std::size_t(ch)] * nl;
                }
                for (int ch = 0; ch < 3; ++ch)
                    rad[p][std::size_t(ch)] +=
                        sum[std::size_t(ch)] / double(samples);
            }
        }
    });
    for (const auto& c : wc)
        counters = merge(counters, c);
    return rad;
}

std::vector<Rgb> vpl_radiance(const Scene& scene, const RenderMaps& maps,
                              const RenderConfig& cfg,
                              MetricsCounters& counters) {
    const std::size_t npix = maps.pixels.size();
    std::vector<Rgb> rad(npix, Rgb{0, 0, 0});
    if (cfg.vpl_count <= 0 || scene.point_lights.empty())
        return rad;

    const PointLight& source = scene.point_lights.front();
    const MeasureRng root(cfg.seed);
    const double clamp_d2 = 16.0; // distance-squared clamp

    const int nworkers = resolve_workers(cfg.workers);
    std::vector<MetricsCounters> wc(std::size_t(nworkers) + 1);
    parallel_for(npix, cfg.workers, [&](std::size_t b, std::size_t e,
                                        int worker) {
        MetricsCounters& c = wc[std::size_t(worker)];
        for (std::size_t p = b; p < e; ++p) {
            const PixelRecord& rec = maps.pixels[p];
            if (rec.prim < 0)
                continue;
            Rgb sum{0, 0, 0};
            for (int k = 0; k < cfg.vpl_count; ++k) {
                // Place a single-bounce VPL: classical trace from the light
                // along a uniform sphere direction.
                MeasureRng gen = root.substream(MeasureRng::stream(
                    std::uint32_t(p), kPassVplGen, std::uint32_t(k)));
                const double z = 2.0 * gen.next_double() - 1.0;
                const double phi =
                    2.0 * std::numbers::pi * gen.next_double();
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                Ray gen_ray;
                gen_ray.origin = {int(std::llround(source.position.x)),
                                  int(std::llround(source.position.y)),
                                  int(std::llround(source.position.z))};
                gen_ray.direction = {r * std::cos(phi), r * std::sin(phi), z};
                gen_ray.near = 1;
                gen_ray.far = 4 << scene.cb;
                ++c.rays;
                const TraceResult vpl =
                    classical_trace(gen_ray, scene, kMaxDepth, c);
                if (!vpl.found)
                    continue;
                const Rgb& va =
                    scene.primitives[std::size_t(vpl.prim)].material.albedo;

                const Vec3d delta = to_vec3d(vpl.point) - to_vec3d(rec.point);
                const double d2 = delta.dot(delta);
                if (d2 == 0.0)
                    continue;
                const Vec3d dir = delta * (1.0 / std::sqrt(d2));
                const double nl = rec.normal.dot(dir);
                const double nv = vpl.normal.dot(dir * -1.0);
                if (nl <= 0.0 || nv <= 0.0)
                    continue;

                LightSample sample;
                sample.position = to_vec3d(vpl.point);
                auto ray = shadow_ray(rec.point, rec.normal, sample, scene.cb);
                if (!ray)
                    continue;
                // The target sits on geometry: exclude its own supporting
                // plane from the visibility segment.
                ray->far = std::max(0, ray->far - 1);
                ++c.rays;
                MeasureRng vis = root.substream(MeasureRng::stream(
                    std::uint32_t(p), kPassVplVis, std::uint32_t(k)));
                if (occluded_once(*ray, scene, cfg.mode, vis, c))
                    continue;
                // Uniform-sphere sampling: 1/pdf = 4*pi.
                const double geom = 4.0 * std::numbers::pi * nl * nv /
                                    std::max(d2, clamp_d2);
                for (int ch = 0; ch < 3; ++ch)
                    sum[std::size_t(ch)] += source.intensity[std::size_t(ch)] *
                                            va[std::size_t(ch)] * geom;
            }
            for (int ch = 0; ch < 3; ++ch)
                rad[p][std::size_t(ch)] =
                    sum[std::size_t(ch)] / double(cfg.vpl_count);
        }
    });
    for (const auto& c : wc)
        counters = merge(counters, c);
    return rad;
}

std::uint8_t quantize(double v) {
    return std::uint8_t(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

} // namespace

RenderResult render_scene(const Scene& scene, const RenderConfig& cfg) {
    const std::string err = validate_scene(scene);
    if (!err.empty())
        throw std::invalid_argument("invalid scene: " + err);
    if (cfg.width <= 0 || cfg.height <= 0)
        throw std::invalid_argument("invalid resolution");
    if (cfg.iterations < 1 || cfg.light_samples < 1)
        throw std::invalid_argument("iterations and light samples must be >= 1");

    const int w = cfg.width, h = cfg.height;
    const std::size_t npix = std::size_t(w) * h;

    RenderResult res;
    res.primary = RenderMaps(w, h);

    // Primary pass.
    std::vector<Ray> rays(npix);
    std::vector<int> all_pixels(npix);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t p = std::size_t(y) * w + x;
            rays[p] = primary_ray(scene, w, h, x, y);
            all_pixels[p] = int(p);
        }
    trace_pass(scene, all_pixels, rays, res.primary, cfg, kPassPrimary,
               res.counters, &res.iteration_stats);

    // Specular pass for mirror pixels: one reflection bounce.
    RenderMaps spec(w, h);
    std::vector<Ray> spec_rays(npix);
    std::vector<int> spec_pixels;
    for (std::size_t p = 0; p < npix; ++p) {
        const PixelRecord& rec = res.primary.pixels[p];
        if (rec.prim < 0 ||
            !scene.primitives[std::size_t(rec.prim)].material.mirror)
            continue;
        const Vec3d d = rays[p].direction;
        Ray r;
        r.origin = rec.point;
        r.direction = d - rec.normal * (2.0 * d.dot(rec.normal));
        r.near = 1;
        r.far = 4 << scene.cb;
        spec_rays[p] = r;
        spec_pixels.push_back(int(p));
    }
    if (!spec_pixels.empty())
        trace_pass(scene, spec_pixels, spec_rays, spec, cfg, kPassSpecular,
                   res.counters);

    // Direct lighting (point + directional).
    const std::vector<LightSample> lights = direct_lights(scene);
    const std::vector<std::uint8_t> occ_primary = direct_occlusion(
        scene, res.primary, lights, cfg, kPassDirectPrimary, res.counters);
    std::vector<std::uint8_t> occ_spec;
    if (!spec_pixels.empty())
        occ_spec = direct_occlusion(scene, spec, lights, cfg,
                                    kPassDirectSpecular, res.counters);

    const std::vector<Rgb> area_rad =
        area_light_radiance(scene, res.primary, cfg, res.counters);
    const std::vector<Rgb> vpl_rad =
        vpl_radiance(scene, res.primary, cfg, res.counters);

    // Shading.
    res.image = Image(w, h);
    for (std::size_t p = 0; p < npix; ++p) {
        const PixelRecord& rec = res.primary.pixels[p];
        Rgb col{0, 0, 0};
        if (rec.prim >= 0) {
            const Material& mat =
                scene.primitives[std::size_t(rec.prim)].material;
            col = mat.emissive;
            if (mat.mirror) {
                const PixelRecord& srec = spec.pixels[p];
                if (srec.prim >= 0) {
                    const Material& smat =
                        scene.primitives[std::size_t(srec.prim)].material;
                    const Rgb direct =
                        shade_direct(srec, lights, occ_spec, npix, p);
                    for (int ch = 0; ch < 3; ++ch)
                        col[std::size_t(ch)] +=
                            0.9 * (smat.emissive[std::size_t(ch)] +
                                   smat.albedo[std::size_t(ch)] *
                                       direct[std::size_t(ch)]);
                }
            } else {
                const Rgb direct =
                    shade_direct(rec, lights, occ_primary, npix, p);
                for (int ch = 0; ch < 3; ++ch)
                    col[std::size_t(ch)] +=
                        mat.albedo[std::size_t(ch)] *
                        (direct[std::size_t(ch)] + area_rad[p][std::size_t(ch)] +
                         vpl_rad[p][std::size_t(ch)]);
            }
        }
        std::uint8_t* px = res.image.pixels.data() + 3 * p;
        px[0] = quantize(col[0]);
        px[1] = quantize(col[1]);
        px[2] = quantize(col[2]);
    }
    return res;
}

std::vector<bool> tie_mask(const Scene& scene, int width, int height) {
    std::vector<bool> mask(std::size_t(width) * height, false);
    MetricsCounters scratch;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t p = std::size_t(y) * width + x;
            const Ray ray = primary_ray(scene, width, height, x, y);
            int min_depth = kMaxDepth;
            int at_min = 0;
            std::int32_t min_prim = -1;
            for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
                const Hit hit =
                    classical_intersect(ray, scene.primitives[i], kMaxDepth);
                if (!hit.hit)
                    continue;
                if (hit.depth < min_depth) {
                    min_depth = hit.depth;
                    at_min = 1;
                    min_prim = std::int32_t(i);
                } else if (hit.depth == min_depth) {
                    ++at_min;
                }
            }
            if (at_min >= 2) {
                mask[p] = true;
                continue;
            }
            if (min_prim >= 0 &&
                scene.primitives[std::size_t(min_prim)].material.mirror) {
                // Check the reflected ray as well: a tie behind the mirror is
                // just as ambiguous for image comparison.
                const TraceResult rec =
                    classical_trace(ray, scene, kMaxDepth, scratch);
                Ray refl;
                refl.origin = rec.point;
                refl.direction =
                    ray.direction -
                    rec.normal * (2.0 * ray.direction.dot(rec.normal));
                refl.near = 1;
                refl.far = 4 << scene.cb;
                int smin = kMaxDepth, scount = 0;
                for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
                    const Hit hit =
                        classical_intersect(refl, scene.primitives[i],
                                            kMaxDepth);
                    if (!hit.hit)
                        continue;
                    if (hit.depth < smin) {
                        smin = hit.depth;
                        scount = 1;
                    } else if (hit.depth == smin) {
                        ++scount;
                    }
                }
                if (scount >= 2)
                    mask[p] = true;
            }
        }
    }
    return mask;
}

} // namespace qrt
