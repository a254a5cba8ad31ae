#include "glomorph/render.hpp"

#include <algorithm>
#include <cmath>

namespace glomorph {
namespace {

void blend(Rgb8& dst, Rgb8 color, double alpha) {
    dst.r = static_cast<std::uint8_t>(dst.r + (color.r - dst.r) * alpha + 0.5);
    dst.g = static_cast<std::uint8_t>(dst.g + (color.g - dst.g) * alpha + 0.5);
    dst.b = static_cast<std::uint8_t>(dst.b + (color.b - dst.b) * alpha + 0.5);
}

void stamp(RgbImage& img, int cx, int cy, int radius, Rgb8 color) {
    for (int y = cy - radius; y <= cy + radius; ++y)
        for (int x = cx - radius; x <= cx + radius; ++x)
            if (img.contains(x, y)) img.at(x, y) = color;
}

void draw_segment(RgbImage& img, Vec2 a, Vec2 b, Rgb8 color, int width) {
    const double len = distance(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
    const int radius = std::max(0, width / 2);
    for (int i = 0; i <= steps; ++i) {
        const Vec2 p = a + (b - a) * (double(i) / steps);
        stamp(img, round_to_px(p.x), round_to_px(p.y), radius, color);
    }
}

void draw_rect_outline(RgbImage& img, int x0, int y0, int x1, int y1, Rgb8 color,
                       int stroke) {
    for (int s = 0; s < stroke; ++s) {
        const int xa = x0 + s, xb = x1 - 1 - s;
        const int ya = y0 + s, yb = y1 - 1 - s;
        if (xa > xb || ya > yb) break;
        for (int x = xa; x <= xb; ++x) {
            if (img.contains(x, ya)) img.at(x, ya) = color;
            if (img.contains(x, yb)) img.at(x, yb) = color;
        }
        for (int y = ya; y <= yb; ++y) {
            if (img.contains(xa, y)) img.at(xa, y) = color;
            if (img.contains(xb, y)) img.at(xb, y) = color;
        }
    }
}

}  // namespace

RgbImage backdrop_from_mask(const LabelImage& mask) {
    static constexpr Rgb8 kTones[kLabelCount] = {
        {32, 32, 32},    // background
        {120, 84, 84},   // GBM
        {84, 90, 120},   // podocyte
        {86, 114, 96},   // endothelium
        {88, 112, 116},  // mesangium
    };
    RgbImage img(mask.width(), mask.height());
    const auto& in = mask.pixels();
    auto& out = img.pixels();
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = kTones[in[i]];
    return img;
}

OverlayImages render_overlays(const RgbImage& base, const ImageOverlayData& data,
                              const OverlayStyle& style) {
    OverlayImages views{base, base, base};

    for (const Measurement& m : data.measurements)
        draw_segment(views.gbm, m.entry, m.exit, style.measurement_color,
                     style.line_width);

    for (std::size_t i = 0; i < data.patches.size(); ++i) {
        const GfbPatch& p = data.patches[i];
        const bool fused = data.patch_fpe[i] >= style.fpe_block_threshold;
        const Rgb8 color = fused ? style.fused_color : style.intact_color;
        for (int y = p.y0; y < p.y1; ++y)
            for (int x = p.x0; x < p.x1; ++x)
                blend(views.fpe.at(x, y), color, style.block_opacity);
    }

    for (const EddBoxRecord& rec : data.boxes) {
        if (!rec.location) continue;
        const Rgb8 color = style.edd_colors[static_cast<int>(*rec.location)];
        draw_rect_outline(views.edd, round_to_px(rec.box.x_min), round_to_px(rec.box.y_min),
                          round_to_px(rec.box.x_max), round_to_px(rec.box.y_max), color,
                          style.box_stroke);
    }
    return views;
}

void write_overlays(const std::filesystem::path& dir, const std::string& image_id,
                    const OverlayImages& views) {
    write_rgb8_png(dir / (image_id + ".gbm.png"), views.gbm);
    write_rgb8_png(dir / (image_id + ".fpe.png"), views.fpe);
    write_rgb8_png(dir / (image_id + ".edd.png"), views.edd);
}

}  // namespace glomorph
