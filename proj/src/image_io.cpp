#include "inkgrain/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <random>

#include "inkgrain/error.hpp"

namespace inkgrain::io {
namespace {

namespace fs = std::filesystem;

constexpr double kMetersPerInch = 0.0254;

struct PngErrorState {
    std::jmp_buf jump;
    char message[256] = {};
};

void png_error_handler(png_structp png, png_const_charp msg) {
    auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
    std::snprintf(state->message, sizeof state->message, "%s", msg);
    std::longjmp(state->jump, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};

struct DecodedPng {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 (gray) or 3 (rgb) after transforms
    int bit_depth = 0;
    double dpi = 0.0;  // 0 when pHYs absent
    std::vector<std::uint8_t> bytes;
};

// Keeps only trivially-destructible locals between setjmp and any longjmp.
DecodedPng decode_png(const fs::path& path, bool want_gray) {
    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
    if (!file) throw IoError("cannot open image: " + path.string());

    std::uint8_t sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw IoError("not a PNG file: " + path.string());

    PngErrorState state;
    DecodedPng out;
    std::vector<png_bytep> rows;
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, png_error_handler, png_warning_handler);
    if (!png) throw IoError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng initialisation failed");
    }
    if (setjmp(state.jump)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG decode error in " + path.string() + ": " + state.message);
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_strip_alpha(png);
    if (want_gray) {
        if (color & PNG_COLOR_MASK_COLOR || color == PNG_COLOR_TYPE_PALETTE)
            png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    } else if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    if (depth == 16) png_set_swap(png);  // host little-endian u16
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    out.bit_depth = png_get_bit_depth(png, info);

    png_uint_32 res_x = 0, res_y = 0;
    int unit = 0;
    if (png_get_pHYs(png, info, &res_x, &res_y, &unit) && unit == PNG_RESOLUTION_METER && res_x > 0)
        out.dpi = static_cast<double>(res_x) * kMetersPerInch;

    const std::size_t stride = png_get_rowbytes(png, info);
    out.bytes.resize(stride * static_cast<std::size_t>(out.height));
    rows.resize(static_cast<std::size_t>(out.height));
    for (int y = 0; y < out.height; ++y) rows[y] = out.bytes.data() + stride * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

double sample_at(const DecodedPng& d, std::size_t i) {
    if (d.bit_depth == 16) {
        std::uint16_t v;
        std::memcpy(&v, d.bytes.data() + 2 * i, 2);
        return v / 65535.0;
    }
    return d.bytes[i] / 255.0;
}

// pHYs stores integer pixels per meter; snap back to the integer dpi that produced it.
double snap_dpi(double dpi) {
    const double r = std::round(dpi);
    return std::abs(dpi - r) < 0.05 ? r : dpi;
}

void append_bytes(png_structp png, png_bytep data, png_size_t len) {
    auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    buf->insert(buf->end(), data, data + len);
}

void flush_noop(png_structp) {}

// rows: height rows of `stride` bytes already in PNG byte order.
std::vector<std::uint8_t> encode_png(int width, int height, int color_type, int depth, double dpi,
                                     const std::vector<std::uint8_t>& pixels) {
    PngErrorState state;
    std::vector<std::uint8_t> buffer;
    std::vector<png_const_bytep> rows(static_cast<std::size_t>(height));
    const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    const std::size_t stride = static_cast<std::size_t>(width) * channels * (depth / 8);
    for (int y = 0; y < height; ++y) rows[y] = pixels.data() + stride * y;

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, png_error_handler,
                                              png_warning_handler);
    if (!png) throw IoError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng initialisation failed");
    }
    if (setjmp(state.jump)) {
        png_destroy_write_struct(&png, &info);
        throw IoError(std::string("PNG encode error: ") + state.message);
    }
    png_set_write_fn(png, &buffer, append_bytes, flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    const auto ppm = static_cast<png_uint_32>(std::lround(dpi / kMetersPerInch));
    png_set_pHYs(png, info, ppm, ppm, PNG_RESOLUTION_METER);
    png_write_info(png, info);
    png_write_rows(png, const_cast<png_bytepp>(rows.data()), static_cast<png_uint_32>(height));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return buffer;
}

void put_u16_be(std::vector<std::uint8_t>& out, double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    const auto q = static_cast<std::uint16_t>(std::lround(c * 65535.0));
    out.push_back(static_cast<std::uint8_t>(q >> 8));
    out.push_back(static_cast<std::uint8_t>(q & 0xff));
}

std::vector<std::uint8_t> read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32_le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

}  // namespace

RasterImage read_png(const fs::path& path, double fallback_dpi) {
    DecodedPng d = decode_png(path, false);
    const double dpi = d.dpi > 0.0 ? snap_dpi(d.dpi) : fallback_dpi;
    std::vector<double> samples(static_cast<std::size_t>(d.width) * d.height * 3);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = sample_at(d, i);
    return RasterImage(d.width, d.height, dpi, std::move(samples));
}

void write_png_rgb16(const fs::path& path, const RasterImage& img) {
    std::vector<std::uint8_t> px;
    px.reserve(img.samples().size() * 2);
    for (double v : img.samples()) put_u16_be(px, v);
    write_file_atomic(path, encode_png(img.width(), img.height(), PNG_COLOR_TYPE_RGB, 16,
                                       img.dpi(), px));
}

void write_png_gray16(const fs::path& path, const Plane& img) {
    std::vector<std::uint8_t> px;
    px.reserve(img.size() * 2);
    for (double v : img.samples()) put_u16_be(px, v);
    write_file_atomic(path, encode_png(img.width(), img.height(), PNG_COLOR_TYPE_GRAY, 16,
                                       img.dpi(), px));
}

void write_label_png(const fs::path& path, const LabelMap& labels, double dpi) {
    std::vector<std::uint8_t> px(labels.size());
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = label_code(labels.get(i));
    write_file_atomic(path,
                      encode_png(labels.width(), labels.height(), PNG_COLOR_TYPE_GRAY, 8, dpi, px));
}

LabelMap read_label_png(const fs::path& path) {
    DecodedPng d = decode_png(path, true);
    if (d.bit_depth != 8) throw IoError("label map must be 8-bit grayscale: " + path.string());
    std::vector<Label> labels(d.bytes.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto l = label_from_code(d.bytes[i]);
        if (!l)
            throw IoError("unknown label code " + std::to_string(d.bytes[i]) + " in " +
                          path.string());
        labels[i] = *l;
    }
    return LabelMap(d.width, d.height, std::move(labels));
}

void write_mask_png(const fs::path& path, const BinaryMask& mask, double dpi) {
    std::vector<std::uint8_t> px(mask.size());
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = mask.get(i) ? 0 : 255;
    write_file_atomic(path, encode_png(mask.width(), mask.height(), PNG_COLOR_TYPE_GRAY, 8, dpi, px));
}

BinaryMask read_mask_png(const fs::path& path) {
    DecodedPng d = decode_png(path, true);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(d.width) * d.height);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = sample_at(d, i) < 0.5 ? 1 : 0;
    return BinaryMask(d.width, d.height, std::move(bits));
}

void write_igr1(const fs::path& path, const Plane& img) {
    static_assert(std::endian::native == std::endian::little, "IGR1 writer assumes little-endian");
    std::vector<std::uint8_t> out;
    out.reserve(16 + img.size() * 8);
    out.insert(out.end(), {'I', 'G', 'R', '1'});
    put_u32_le(out, static_cast<std::uint32_t>(img.width()));
    put_u32_le(out, static_cast<std::uint32_t>(img.height()));
    put_u32_le(out, static_cast<std::uint32_t>(std::lround(img.dpi())));
    const auto* raw = reinterpret_cast<const std::uint8_t*>(img.samples().data());
    out.insert(out.end(), raw, raw + img.size() * sizeof(double));
    write_file_atomic(path, out);
}

Plane read_igr1(const fs::path& path) {
    const auto bytes = read_all(path);
    if (bytes.size() < 16 || std::memcmp(bytes.data(), "IGR1", 4) != 0)
        throw IoError("not an IGR1 file: " + path.string());
    const auto w = get_u32_le(bytes.data() + 4);
    const auto h = get_u32_le(bytes.data() + 8);
    const auto dpi = get_u32_le(bytes.data() + 12);
    const std::size_t n = static_cast<std::size_t>(w) * h;
    if (bytes.size() != 16 + n * 8) throw IoError("truncated IGR1 file: " + path.string());
    std::vector<double> samples(n);
    std::memcpy(samples.data(), bytes.data() + 16, n * 8);
    return Plane(static_cast<int>(w), static_cast<int>(h), static_cast<double>(dpi),
                 std::move(samples));
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    thread_local std::mt19937_64 tag_gen{std::random_device{}()};
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(tag_gen() & 0xffffffu);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write file: " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace inkgrain::io
