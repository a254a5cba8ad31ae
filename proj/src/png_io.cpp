#include "glomorph/png_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <vector>

#include <png.h>

#include "glomorph/errors.hpp"

namespace glomorph {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& file, const char* mode) {
    FilePtr f(std::fopen(file.string().c_str(), mode));
    if (!f) throw MissingFileError("cannot open " + file.string());
    return f;
}

void png_warn_fn(png_structp, png_const_charp) {}

struct Reader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::string path_str;

    explicit Reader(const std::filesystem::path& file) : path_str(file.string()) {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn_fn);
        info = png_create_info_struct(png);
        if (!png || !info) throw Error("png reader allocation failed");
    }
    Reader(const Reader&) = delete;
    ~Reader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct Writer {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::string path_str;

    explicit Writer(const std::filesystem::path& file) : path_str(file.string()) {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn_fn);
        info = png_create_info_struct(png);
        if (!png || !info) throw Error("png writer allocation failed");
    }
    Writer(const Writer&) = delete;
    ~Writer() { png_destroy_write_struct(&png, &info); }
};

// libpng reports fatal errors via longjmp; convert to an exception once we
// are back in this frame.
#define GLOMORPH_PNG_GUARD(ctx, what)                                  \
    if (setjmp(png_jmpbuf((ctx).png)))                                 \
        throw Error(std::string(what) + " failed: " + (ctx).path_str)

// Palette used when writing masks: background, GBM, podocyte, endothelium,
// mesangium. Readers only care about the indices.
constexpr png_color kLabelPalette[kLabelCount] = {
    {0, 0, 0}, {220, 60, 60}, {70, 90, 220}, {80, 200, 120}, {90, 200, 220}};

}  // namespace

LabelImage read_label_png(const std::filesystem::path& file) {
    auto f = open_file(file, "rb");
    Reader r(file);
    LabelImage img;
    std::vector<png_bytep> rows;
    GLOMORPH_PNG_GUARD(r, "png read");

    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);

    const png_uint_32 w = png_get_image_width(r.png, r.info);
    const png_uint_32 h = png_get_image_height(r.png, r.info);
    const int color = png_get_color_type(r.png, r.info);
    const int depth = png_get_bit_depth(r.png, r.info);

    if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_PALETTE)
        throw Error("label PNG must be single-channel gray or palette: " + r.path_str);
    if (depth > 8) throw Error("label PNG must be 8-bit: " + r.path_str);
    if (depth < 8) png_set_packing(r.png);  // expand 1/2/4-bit indices to bytes
    png_read_update_info(r.png, r.info);

    img = LabelImage(static_cast<int>(w), static_cast<int>(h));
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = img.pixels().data() + static_cast<std::size_t>(y) * w;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return img;
}

void write_label_png(const std::filesystem::path& file, const LabelImage& img) {
    auto f = open_file(file, "wb");
    Writer w(file);
    std::vector<png_bytep> rows(img.height());
    GLOMORPH_PNG_GUARD(w, "png write");

    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, img.width(), img.height(), 8,
                 PNG_COLOR_TYPE_PALETTE, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_PLTE(w.png, w.info, kLabelPalette, kLabelCount);
    png_write_info(w.png, w.info);

    for (int y = 0; y < img.height(); ++y)
        rows[y] = const_cast<png_bytep>(img.pixels().data() +
                                        static_cast<std::size_t>(y) * img.width());
    png_write_image(w.png, rows.data());
    png_write_end(w.png, nullptr);
}

Image<std::uint16_t> read_gray16_png(const std::filesystem::path& file) {
    auto f = open_file(file, "rb");
    Reader r(file);
    Image<std::uint16_t> img;
    std::vector<png_bytep> rows;
    GLOMORPH_PNG_GUARD(r, "png read");

    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);

    const png_uint_32 w = png_get_image_width(r.png, r.info);
    const png_uint_32 h = png_get_image_height(r.png, r.info);
    const int color = png_get_color_type(r.png, r.info);
    const int depth = png_get_bit_depth(r.png, r.info);

    if (color != PNG_COLOR_TYPE_GRAY)
        throw Error("probability PNG must be single-channel gray: " + r.path_str);
    if (depth == 8) {
        png_set_expand_16(r.png);  // accept 8-bit maps, scaled onto 16 bits
    } else if (depth != 16) {
        throw Error("probability PNG must be 8- or 16-bit: " + r.path_str);
    }
#if __BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__
    png_set_swap(r.png);  // PNG stores 16-bit samples big-endian
#endif
    png_read_update_info(r.png, r.info);

    img = Image<std::uint16_t>(static_cast<int>(w), static_cast<int>(h));
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = reinterpret_cast<png_bytep>(img.pixels().data() +
                                              static_cast<std::size_t>(y) * w);
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return img;
}

void write_gray16_png(const std::filesystem::path& file, const Image<std::uint16_t>& img) {
    auto f = open_file(file, "wb");
    Writer w(file);
    std::vector<png_bytep> rows(img.height());
    GLOMORPH_PNG_GUARD(w, "png write");

    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, img.width(), img.height(), 16,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
#if __BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__
    png_set_swap(w.png);
#endif
    for (int y = 0; y < img.height(); ++y)
        rows[y] = reinterpret_cast<png_bytep>(
            const_cast<std::uint16_t*>(img.pixels().data()) +
            static_cast<std::size_t>(y) * img.width());
    png_write_image(w.png, rows.data());
    png_write_end(w.png, nullptr);
}

RgbImage read_rgb8_png(const std::filesystem::path& file) {
    auto f = open_file(file, "rb");
    Reader r(file);
    RgbImage img;
    std::vector<png_bytep> rows;
    GLOMORPH_PNG_GUARD(r, "png read");

    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);

    png_set_expand(r.png);  // palette/gray -> full channels
    png_set_strip_16(r.png);
    png_set_strip_alpha(r.png);
    png_set_gray_to_rgb(r.png);
    png_read_update_info(r.png, r.info);

    const png_uint_32 w = png_get_image_width(r.png, r.info);
    const png_uint_32 h = png_get_image_height(r.png, r.info);
    if (png_get_channels(r.png, r.info) != 3)
        throw Error("unsupported channel layout in " + r.path_str);

    static_assert(sizeof(Rgb8) == 3);
    img = RgbImage(static_cast<int>(w), static_cast<int>(h));
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = reinterpret_cast<png_bytep>(img.pixels().data() +
                                              static_cast<std::size_t>(y) * w);
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return img;
}

void write_rgb8_png(const std::filesystem::path& file, const RgbImage& img) {
    auto f = open_file(file, "wb");
    Writer w(file);
    std::vector<png_bytep> rows(img.height());
    GLOMORPH_PNG_GUARD(w, "png write");

    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, img.width(), img.height(), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < img.height(); ++y)
        rows[y] = reinterpret_cast<png_bytep>(
            const_cast<Rgb8*>(img.pixels().data()) +
            static_cast<std::size_t>(y) * img.width());
    png_write_image(w.png, rows.data());
    png_write_end(w.png, nullptr);
}

}  // namespace glomorph
