#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qrt/image.hpp"

namespace qrt {

struct MetricsCounters {
    long long rays = 0;       // distinct rays traced
    long long c_int = 0;      // classical intersection evaluations
    long long eval = 0;       // oracle evaluations
    long long cpix = 0;       // pixels updated by neighbor gathering
    long long iterations = 0; // trace iterations executed

    long long int_total() const { return c_int + eval; }
    double int_per_ray() const {
        return rays > 0 ? double(int_total()) / double(rays) : 0.0;
    }
};

MetricsCounters merge(const MetricsCounters& a, const MetricsCounters& b);

struct ImageError {
    double nrmse = 0.0;
    long long dpix = 0;
    double dpix_pct = 0.0;
};

// RMS of the 8-bit channel differences divided by the mean channel value of
// the reference. Throws std::invalid_argument on dimension mismatch.
double nrmse(const Image& reference, const Image& candidate);

// Pixels differing in any channel; tie_mask (optional, size w*h) excludes
// pixels where the comparison is not meaningful.
std::pair<long long, double> dpix(const Image& reference, const Image& candidate,
                                  const std::vector<bool>* tie_mask = nullptr);

ImageError image_error(const Image& reference, const Image& candidate,
                       const std::vector<bool>* tie_mask = nullptr);

} // namespace qrt
