#pragma once

namespace glomorph {

/// Pixel area to physical area: px * (nm/px)^2, expressed in um^2.
inline double to_physical_area_um2(double px_area, double nm_per_pixel) {
    return px_area * nm_per_pixel * nm_per_pixel * 1e-6;
}

inline double px_to_nm(double px, double nm_per_pixel) { return px * nm_per_pixel; }
inline double nm_to_px(double nm, double nm_per_pixel) { return nm / nm_per_pixel; }

}  // namespace glomorph
