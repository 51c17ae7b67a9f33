// qrt: hybrid quantum-classical ray tracer front end.
//
//   qrt render gen:qornell:64 --mode quantum --iters 8 --out img.ppm
//   qrt sweep --family qornell --n 8,16,32,64 --mode quantum,classical --out s.csv
//   qrt estimate --n 8,16,32,64,128,256,512

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrt/geometry.hpp"
#include "qrt/image.hpp"
#include "qrt/metrics.hpp"
#include "qrt/render.hpp"
#include "qrt/scene_io.hpp"
#include "qrt/search.hpp"

namespace {

using namespace qrt;

RenderMode parse_mode(const std::string& m) {
    if (m == "classical")
        return RenderMode::classical;
    if (m == "quantum")
        return RenderMode::quantum;
    if (m == "rc" || m == "randomized_classical")
        return RenderMode::randomized_classical;
    throw CLI::ValidationError("--mode", "unknown mode '" + m + "'");
}

const char* mode_name(RenderMode m) {
    switch (m) {
    case RenderMode::classical: return "classical";
    case RenderMode::quantum: return "quantum";
    case RenderMode::randomized_classical: return "rc";
    }
    return "?";
}

Scene resolve_scene(const std::string& path) {
    if (path.rfind("gen:", 0) != 0)
        return load_scene(path);
    const auto second = path.find(':', 4);
    if (second == std::string::npos)
        throw std::runtime_error("generator path must be gen:<family>:<N>");
    const std::string family = path.substr(4, second - 4);
    const unsigned long n = std::stoul(path.substr(second + 1));
    if (family == "qornell")
        return make_qornell(std::uint32_t(n));
    if (family == "depth")
        return make_depth_complexity(std::uint32_t(n));
    if (family == "qornell_area") {
        Scene s = make_qornell(std::uint32_t(n));
        s.point_lights.clear();
        s.area_lights.push_back({{4, 13, 6}, {11, 13, 10}, {0.9, 0.9, 0.9}});
        return s;
    }
    throw std::runtime_error("unknown scene family '" + family + "'");
}

std::pair<int, int> parse_res(const std::string& res) {
    const auto x = res.find('x');
    if (x == std::string::npos) {
        const int n = std::stoi(res);
        return {n, n};
    }
    return {std::stoi(res.substr(0, x)), std::stoi(res.substr(x + 1))};
}

std::vector<std::uint64_t> parse_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty())
            out.push_back(std::stoull(tok));
    return out;
}

std::vector<std::string> parse_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty())
            out.push_back(tok);
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// The report deliberately excludes wall time and worker count so that runs
// are byte-comparable; both are printed to stdout instead.
void write_report(const std::string& path, const std::string& scene_path,
                  const RenderConfig& cfg, const RenderResult& res,
                  const ImageError* err) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write report: " + path);
    out << "scene " << scene_path << "\n";
    out << "mode " << mode_name(cfg.mode) << "\n";
    out << "iterations " << cfg.iterations << "\n";
    out << "neighbor_opt " << (cfg.neighbor_opt ? 1 : 0) << "\n";
    out << "termination " << (cfg.termination ? 1 : 0) << "\n";
    out << "direct_iterations " << cfg.direct_iterations << "\n";
    out << "light_samples " << cfg.light_samples << "\n";
    out << "vpls " << cfg.vpl_count << "\n";
    out << "seed " << cfg.seed << "\n";
    out << "resolution " << cfg.width << "x" << cfg.height << "\n";
    const MetricsCounters& c = res.counters;
    out << "rays " << c.rays << "\n";
    out << "eval " << c.eval << "\n";
    out << "c_int " << c.c_int << "\n";
    out << "int " << c.int_total() << "\n";
    out << "int_per_ray " << fmt(c.int_per_ray()) << "\n";
    out << "cpix " << c.cpix << "\n";
    out << "iterations_executed " << c.iterations << "\n";
    for (std::size_t i = 0; i < res.iteration_stats.size(); ++i) {
        const MetricsCounters& it = res.iteration_stats[i];
        out << "iter " << i << " eval " << it.eval << " c_int " << it.c_int
            << " cpix " << it.cpix << "\n";
    }
    if (err) {
        out << "nrmse " << fmt(err->nrmse) << "\n";
        out << "dpix " << err->dpix << "\n";
        out << "dpix_pct " << fmt(err->dpix_pct) << "\n";
    }
}

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = double(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_render(const std::string& scene_path, const RenderConfig& cfg,
               const std::string& out_path, const std::string& report_path,
               const std::string& reference_path) {
    const Scene scene = resolve_scene(scene_path);
    const auto t0 = std::chrono::steady_clock::now();
    const RenderResult res = render_scene(scene, cfg);
    const auto wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    ImageError err;
    bool have_err = false;
    if (!reference_path.empty()) {
        const Image ref = read_ppm(reference_path);
        err = image_error(ref, res.image);
        have_err = true;
    }

    if (!out_path.empty())
        write_ppm(res.image, out_path);
    if (!report_path.empty())
        write_report(report_path, scene_path, cfg, res,
                     have_err ? &err : nullptr);

    std::cout << "mode=" << mode_name(cfg.mode) << " rays=" << res.counters.rays
              << " int=" << res.counters.int_total()
              << " int_per_ray=" << fmt(res.counters.int_per_ray())
              << " wall_s=" << fmt(wall) << "\n";
    if (have_err)
        std::cout << "nrmse=" << fmt(err.nrmse) << " dpix=" << err.dpix << "\n";
    return 0;
}

int cmd_sweep(const std::string& family, const std::vector<std::uint64_t>& ns,
              const std::vector<std::string>& modes, RenderConfig cfg,
              bool iters_fixed, const std::string& out_csv) {
    std::ostringstream csv;
    csv << "scene,n,mode,rays,int,int_per_ray,dpix,nrmse\n";
    std::vector<std::pair<std::string, double>> slopes;

    for (const auto& mode_name_str : modes) {
        const RenderMode mode = parse_mode(mode_name_str);
        std::vector<std::pair<double, double>> pts;
        for (std::uint64_t n : ns) {
            const std::string path =
                "gen:" + family + ":" + std::to_string(n);
            const Scene scene = resolve_scene(path);
            // Unless pinned by --iters, give each scene its convergence
            // budget so int_per_ray measures the cost to converge.
            if (!iters_fixed)
                cfg.iterations = default_minimum_iters(scene.padded_count());

            RenderConfig ref_cfg = cfg;
            ref_cfg.mode = RenderMode::classical;
            const RenderResult ref = render_scene(scene, ref_cfg);

            RenderConfig run_cfg = cfg;
            run_cfg.mode = mode;
            RenderResult run_storage;
            const RenderResult* use = &ref;
            if (mode != RenderMode::classical) {
                run_storage = render_scene(scene, run_cfg);
                use = &run_storage;
            }
            const ImageError err = image_error(ref.image, use->image);

            csv << path << "," << n << "," << mode_name(mode) << ","
                << use->counters.rays << "," << use->counters.int_total() << ","
                << fmt(use->counters.int_per_ray()) << "," << err.dpix << ","
                << fmt(err.nrmse) << "\n";
            pts.push_back({double(n), use->counters.int_per_ray()});
            std::cout << path << " " << mode_name(mode)
                      << " int_per_ray=" << fmt(use->counters.int_per_ray())
                      << " dpix=" << err.dpix << "\n";
        }
        if (pts.size() >= 2)
            slopes.push_back({mode_name(mode), loglog_slope(pts)});
    }
    for (const auto& [m, s] : slopes)
        csv << "slope," << m << ",,,," << fmt(s) << ",,\n";

    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        if (!out)
            throw std::runtime_error("cannot write csv: " + out_csv);
        out << csv.str();
    } else {
        std::cout << csv.str();
    }
    for (const auto& [m, s] : slopes)
        std::cout << "slope " << m << " " << fmt(s) << "\n";
    return 0;
}

int cmd_estimate(const std::vector<std::uint64_t>& ns, double c) {
    QSearchConfig cfg;
    cfg.c = c;
    std::printf("%6s  %-24s %3s  %8s  %8s\n", "N", "M", "L", "p_qs", "p_rc");
    for (std::uint64_t n : ns) {
        const auto sched = cfg.schedule(n);
        std::string m = "{";
        for (std::size_t i = 0; i < sched.size(); ++i)
            m += (i ? "," : "") + std::to_string(sched[i]);
        m += "}";
        std::printf("%6llu  %-24s %3zu  %8.3f  %8.3f\n",
                    (unsigned long long)n, m.c_str(), sched.size(),
                    fn_prob_qs(n, cfg), fn_prob_rc(n));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid quantum-classical ray tracer"};
    app.require_subcommand(1);

    // Shared render options.
    std::string mode = "quantum";
    RenderConfig cfg;
    std::string res = "128x128";
    CLI::Option* iters_opt = nullptr;
    const auto add_render_opts = [&](CLI::App* sub) {
        sub->add_option("--mode", mode, "classical | quantum | rc");
        iters_opt = sub->add_option("--iters", cfg.iterations,
                                    "trace iterations (#IT)");
        sub->add_flag("--neighbor-opt", cfg.neighbor_opt, "neighbor gathering");
        sub->add_flag("--terminate", cfg.termination, "termination criterion");
        sub->add_option("--direct-iters", cfg.direct_iterations,
                        "shadow-ray repetitions");
        sub->add_option("--light-samples", cfg.light_samples,
                        "area-light samples per pixel");
        sub->add_option("--vpls", cfg.vpl_count, "VPLs per pixel");
        sub->add_option("--seed", cfg.seed, "rng seed");
        sub->add_option("--res", res, "resolution WxH (or N for square)");
        sub->add_option("--workers", cfg.workers,
                        "worker threads (0 = hardware)")
            ->envname("QTRACE_WORKERS");
    };

    // render
    auto* render = app.add_subcommand("render", "render one scene");
    std::string scene_path, out_path, report_path, reference_path;
    render->add_option("scene", scene_path,
                       "scene file or gen:<family>:<N>")
        ->required();
    add_render_opts(render);
    render->add_option("--out", out_path, "output image (PPM P6)");
    render->add_option("--report", report_path, "metrics report file");
    render->add_option("--reference", reference_path,
                       "reference PPM for error metrics");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "scalability sweep");
    std::string family = "qornell", n_csv = "8,16,32,64,128,256,512";
    std::string modes_csv = "quantum,classical";
    sweep->add_option("--family", family, "qornell | depth | qornell_area");
    sweep->add_option("--n", n_csv, "comma-separated primitive counts");
    sweep->add_option("--modes", modes_csv, "comma-separated modes");
    add_render_opts(sweep);
    std::string csv_path;
    sweep->add_option("--out", csv_path, "output CSV");

    // estimate
    auto* estimate =
        app.add_subcommand("estimate", "print false-negative estimates");
    std::string est_n = "8,16,32,64,128,256,512";
    double est_c = 1.8;
    estimate->add_option("--n", est_n, "comma-separated N values");
    estimate->add_option("--c", est_c, "schedule growth constant");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.mode = parse_mode(mode);
        const auto [w, h] = parse_res(res);
        cfg.width = w;
        cfg.height = h;
        if (render->parsed())
            return cmd_render(scene_path, cfg, out_path, report_path,
                              reference_path);
        if (sweep->parsed())
            return cmd_sweep(family, parse_list(n_csv),
                             parse_names(modes_csv), cfg,
                             iters_opt->count() > 0, csv_path);
        if (estimate->parsed())
            return cmd_estimate(parse_list(est_n), est_c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
