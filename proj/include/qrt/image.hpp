#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qrt {

// 8-bit RGB image, row-major, top-left origin.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // 3 bytes per pixel

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(std::size_t(w) * h * 3) {}

    std::uint8_t* at(int x, int y) {
        return pixels.data() + 3 * (std::size_t(y) * width + x);
    }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + 3 * (std::size_t(y) * width + x);
    }

    bool operator==(const Image&) const = default;
};

// Binary PPM (P6), maxval 255. Throws std::runtime_error on I/O failure or
// zero-sized image.
void write_ppm(const Image& img, const std::string& path);

Image read_ppm(const std::string& path);

} // namespace qrt
