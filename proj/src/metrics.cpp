#include "qrt/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrt {

MetricsCounters merge(const MetricsCounters& a, const MetricsCounters& b) {
    MetricsCounters m;
    m.rays = a.rays + b.rays;
    m.c_int = a.c_int + b.c_int;
    m.eval = a.eval + b.eval;
    m.cpix = a.cpix + b.cpix;
    m.iterations = a.iterations + b.iterations;
    return m;
}

namespace {

void check_dims(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("image dimension mismatch");
}

} // namespace

double nrmse(const Image& reference, const Image& candidate) {
    check_dims(reference, candidate);
    double sq = 0.0, ref_sum = 0.0;
    const std::size_t n = reference.pixels.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d =
            double(reference.pixels[i]) - double(candidate.pixels[i]);
        sq += d * d;
        ref_sum += double(reference.pixels[i]);
    }
    if (n == 0 || ref_sum == 0.0)
        return sq == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(sq / double(n)) / (ref_sum / double(n));
}

std::pair<long long, double> dpix(const Image& reference, const Image& candidate,
                                  const std::vector<bool>* tie_mask) {
    check_dims(reference, candidate);
    const long long total = (long long)reference.width * reference.height;
    long long diff = 0;
    for (long long p = 0; p < total; ++p) {
        if (tie_mask && (*tie_mask)[std::size_t(p)])
            continue;
        const std::size_t o = std::size_t(p) * 3;
        if (reference.pixels[o] != candidate.pixels[o] ||
            reference.pixels[o + 1] != candidate.pixels[o + 1] ||
            reference.pixels[o + 2] != candidate.pixels[o + 2])
            ++diff;
    }
    return {diff, total > 0 ? 100.0 * double(diff) / double(total) : 0.0};
}

ImageError image_error(const Image& reference, const Image& candidate,
                       const std::vector<bool>* tie_mask) {
    ImageError e;
    e.nrmse = nrmse(reference, candidate);
    const auto [d, pct] = dpix(reference, candidate, tie_mask);
    e.dpix = d;
    e.dpix_pct = pct;
    return e;
}

} // namespace qrt
