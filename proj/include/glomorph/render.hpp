#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

#include "glomorph/edd.hpp"
#include "glomorph/gbm.hpp"
#include "glomorph/patches.hpp"
#include "glomorph/png_io.hpp"

namespace glomorph {

struct OverlayStyle {
    Rgb8 measurement_color{255, 140, 0};  // orange cross-section segments
    Rgb8 intact_color{60, 200, 80};       // green blocks: foot processes intact
    Rgb8 fused_color{60, 90, 230};        // blue blocks: fused foot processes
    // Box colors by location: subepithelial, intramembranous, subendothelial,
    // mesangial.
    std::array<Rgb8, 4> edd_colors{Rgb8{60, 90, 230}, Rgb8{230, 60, 60},
                                   Rgb8{60, 200, 80}, Rgb8{80, 210, 220}};
    int line_width = 2;
    int box_stroke = 2;
    double block_opacity = 0.35;
    double fpe_block_threshold = 0.5;  // binary green/blue split
};

/// Everything needed to draw one image's overlays.
struct ImageOverlayData {
    std::vector<Measurement> measurements;
    std::vector<GfbPatch> patches;
    std::vector<double> patch_fpe;  // parallel to patches
    std::vector<EddBoxRecord> boxes;
};

struct OverlayImages {
    RgbImage gbm;
    RgbImage fpe;
    RgbImage edd;
};

/// Muted per-label tones used when the raw micrograph is not available.
RgbImage backdrop_from_mask(const LabelImage& mask);

/// Draws the three views onto copies of `base`. Pixels not covered by a
/// primitive are left byte-identical to the base.
OverlayImages render_overlays(const RgbImage& base, const ImageOverlayData& data,
                              const OverlayStyle& style = {});

/// Writes {image_id}.gbm.png / .fpe.png / .edd.png into `dir`.
void write_overlays(const std::filesystem::path& dir, const std::string& image_id,
                    const OverlayImages& views);

}  // namespace glomorph
