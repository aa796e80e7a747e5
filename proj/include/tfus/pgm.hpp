#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tfus::pgm {

// Binary PGM (P5). 16-bit images use maxval 65535 with big-endian samples;
// 8-bit masks use maxval 255.

struct Image16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> pixels; // row-major

    std::uint16_t at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
    std::uint16_t& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
};

struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
    std::uint8_t& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
};

Image16 read_image16(const std::string& path);
void write_image16(const std::string& path, const Image16& img);

Image8 read_image8(const std::string& path);
void write_image8(const std::string& path, const Image8& img);

} // namespace tfus::pgm
