#include "tfus/pgm.hpp"

#include <fstream>

#include "tfus/errors.hpp"

namespace tfus::pgm {

namespace {

// Reads one whitespace-delimited token, skipping '#' comments per the PNM spec.
std::string next_token(std::istream& is, const std::string& path) {
    std::string tok;
    int c;
    while ((c = is.get()) != EOF) {
        if (c == '#') {
            while ((c = is.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok += static_cast<char>(c);
    }
    if (tok.empty()) throw DataError("truncated PGM header: " + path);
    return tok;
}

struct Header {
    int width;
    int height;
    long maxval;
};

Header read_header(std::istream& is, const std::string& path) {
    std::string magic = next_token(is, path);
    if (magic != "P5") throw DataError("not a binary PGM (P5): " + path);
    Header h{};
    try {
        h.width = std::stoi(next_token(is, path));
        h.height = std::stoi(next_token(is, path));
        h.maxval = std::stol(next_token(is, path));
    } catch (const std::exception&) {
        throw DataError("malformed PGM header: " + path);
    }
    if (h.width <= 0 || h.height <= 0) throw DataError("non-positive PGM dimensions: " + path);
    return h;
}

} // namespace

Image16 read_image16(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open image: " + path);
    Header h = read_header(is, path);
    if (h.maxval != 65535)
        throw DataError("expected 16-bit PGM (maxval 65535), got maxval " +
                        std::to_string(h.maxval) + ": " + path);
    Image16 img;
    img.width = h.width;
    img.height = h.height;
    const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
    std::vector<unsigned char> raw(n * 2);
    if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
        throw DataError("truncated PGM pixel data: " + path);
    img.pixels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        img.pixels[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    return img;
}

void write_image16(const std::string& path, const Image16& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write image: " + path);
    os << "P5\n" << img.width << " " << img.height << "\n65535\n";
    std::vector<unsigned char> raw(img.pixels.size() * 2);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        raw[2 * i] = static_cast<unsigned char>(img.pixels[i] >> 8);
        raw[2 * i + 1] = static_cast<unsigned char>(img.pixels[i] & 0xff);
    }
    os.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!os) throw DataError("short write on image: " + path);
}

Image8 read_image8(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open mask: " + path);
    Header h = read_header(is, path);
    if (h.maxval != 255)
        throw DataError("expected 8-bit PGM (maxval 255), got maxval " +
                        std::to_string(h.maxval) + ": " + path);
    Image8 img;
    img.width = h.width;
    img.height = h.height;
    const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
    img.pixels.resize(n);
    if (!is.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n)))
        throw DataError("truncated PGM pixel data: " + path);
    return img;
}

void write_image8(const std::string& path, const Image8& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write mask: " + path);
    os << "P5\n" << img.width << " " << img.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.pixels.data()),
             static_cast<std::streamsize>(img.pixels.size()));
    if (!os) throw DataError("short write on mask: " + path);
}

} // namespace tfus::pgm
