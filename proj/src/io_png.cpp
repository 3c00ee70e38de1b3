#include "gaze3d/io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <vector>

namespace gaze3d::io {

namespace {

struct MemoryWriter {
    std::string bytes;
};

void png_write_to_string(png_structp png, png_bytep data, png_size_t length) {
    auto* writer = static_cast<MemoryWriter*>(png_get_io_ptr(png));
    writer->bytes.append(reinterpret_cast<const char*>(data), length);
}

void png_flush_noop(png_structp) {}

struct MemoryReader {
    const unsigned char* data;
    std::size_t size;
    std::size_t offset;
};

void png_read_from_string(png_structp png, png_bytep out, png_size_t length) {
    auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
    if (reader->offset + length > reader->size)
        png_error(png, "unexpected end of PNG data");
    std::memcpy(out, reader->data + reader->offset, length);
    reader->offset += length;
}

void png_error_to_message(png_structp png, png_const_charp message) {
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    if (text && text->empty()) *text = message;
    longjmp(png_jmpbuf(png), 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

} // namespace

void write_coordmap_png(const CoordinateMap& map, const fs::path& png_path) {
    map.validate();

    std::string error_text;
    MemoryWriter writer;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error_text,
                                              png_error_to_message, png_warning_ignore);
    if (!png) throw Error("libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(png_path.string() + ": PNG write failed: " + error_text);
    }

    png_set_write_fn(png, &writer, png_write_to_string, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(map.width),
                 static_cast<png_uint_32>(map.height), 16, PNG_COLOR_TYPE_RGB_ALPHA,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    // Rows packed big-endian, the PNG network order, regardless of host.
    std::vector<png_byte> row(static_cast<std::size_t>(map.width) * 8);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const std::size_t i = map.index(x, y);
            const std::uint16_t samples[4] = {
                map.r[i], map.g[i], map.b[i],
                static_cast<std::uint16_t>(map.mask[i] ? 65535 : 0)};
            for (int c = 0; c < 4; ++c) {
                row[x * 8 + c * 2] = static_cast<png_byte>(samples[c] >> 8);
                row[x * 8 + c * 2 + 1] = static_cast<png_byte>(samples[c] & 0xff);
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);

    atomic_write_bytes(png_path, writer.bytes);
}

CoordinateMap read_coordmap_png(const fs::path& png_path, const ScaleSpec& scale) {
    std::string bytes;
    {
        if (!fs::exists(png_path)) throw Error(png_path.string() + ": file not found");
        std::FILE* f = std::fopen(png_path.string().c_str(), "rb");
        if (!f) throw Error(png_path.string() + ": cannot open file");
        std::fseek(f, 0, SEEK_END);
        const long size = std::ftell(f);
        std::fseek(f, 0, SEEK_SET);
        bytes.resize(static_cast<std::size_t>(size));
        const std::size_t got = std::fread(bytes.data(), 1, bytes.size(), f);
        std::fclose(f);
        if (got != bytes.size()) throw Error(png_path.string() + ": short read");
    }
    if (bytes.size() < 8 ||
        png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0)
        throw Error(png_path.string() + ": not a PNG file");

    std::string error_text;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error_text,
                                             png_error_to_message, png_warning_ignore);
    if (!png) throw Error("libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("libpng initialization failed");
    }

    // Collected before the longjmp cleanup so the throw happens outside
    // libpng's frames.
    CoordinateMap map;
    std::string defect;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(png_path.string() + ": PNG read failed: " + error_text);
    }

    MemoryReader reader {reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), 0};
    png_set_read_fn(png, &reader, png_read_from_string);
    png_read_info(png, info);

    png_uint_32 width = 0, height = 0;
    int bit_depth = 0, color_type = 0, interlace = 0;
    png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, &interlace, nullptr,
                 nullptr);
    if (bit_depth != 16)
        defect = "coordinate maps require 16-bit depth";
    else if (color_type != PNG_COLOR_TYPE_RGB_ALPHA)
        defect = "coordinate maps require an RGBA pixel layout";
    else if (interlace != PNG_INTERLACE_NONE)
        defect = "interlaced PNGs are not supported";

    if (defect.empty()) {
        map.width = static_cast<int>(width);
        map.height = static_cast<int>(height);
        map.scale = scale;
        const std::size_t n = static_cast<std::size_t>(width) * height;
        map.r.assign(n, 0);
        map.g.assign(n, 0);
        map.b.assign(n, 0);
        map.mask.assign(n, 0);

        std::vector<png_byte> row(static_cast<std::size_t>(width) * 8);
        for (png_uint_32 y = 0; y < height; ++y) {
            png_read_row(png, row.data(), nullptr);
            for (png_uint_32 x = 0; x < width; ++x) {
                std::uint16_t samples[4];
                for (int c = 0; c < 4; ++c)
                    samples[c] = static_cast<std::uint16_t>((row[x * 8 + c * 2] << 8) |
                                                            row[x * 8 + c * 2 + 1]);
                const std::size_t i = map.index(static_cast<int>(x), static_cast<int>(y));
                if (samples[3] != 0) { // alpha 0 = background, whatever the color says
                    map.mask[i] = 1;
                    map.r[i] = samples[0];
                    map.g[i] = samples[1];
                    map.b[i] = samples[2];
                }
            }
        }
        png_read_end(png, nullptr);
    }
    png_destroy_read_struct(&png, &info, nullptr);
    if (!defect.empty()) throw Error(png_path.string() + ": " + defect);
    return map;
}

} // namespace gaze3d::io
