#pragma once

#include <string>
#include <vector>

#include "glomorph/geometry.hpp"
#include "glomorph/image.hpp"

namespace glomorph {

struct Polyline {
    std::vector<Vec2> points;
    bool closed = false;  // closed loops: last point is a neighbor of the first

    /// Total arc length in pixels (includes the closing segment when closed).
    double length_px() const;
};

struct Centerline {
    std::string image_id;
    std::vector<Polyline> polylines;
};

/// One sampling site along the centerline.
struct SamplePoint {
    Vec2 position;
    Vec2 tangent;  // unit vector
    int polyline_id = 0;
    double arc_position_nm = 0.0;
};

/// Turns a raw skeleton into ordered polylines: prunes spur branches (and
/// whole components) shorter than `min_branch_nm`, then decomposes the
/// remaining pixels into arcs between junctions/endpoints plus closed loops.
/// Throws EmptyStructureError when pruning removes everything.
Centerline order_and_prune(const Image<std::uint8_t>& skeleton, double min_branch_nm,
                           double nm_per_pixel, std::string image_id = {});

/// Samples each polyline at arc-length multiples of `stride_nm` (starting at
/// `offset_nm`); K = floor(len/S)+1 for open polylines, floor(len/S) for
/// closed loops (minimum 1 either way). Tangents are central differences over
/// a +-8-point window, clamped to forward/backward differences at open ends.
std::vector<SamplePoint> sample_centerline(const Centerline& centerline, double stride_nm,
                                           double nm_per_pixel, double offset_nm = 0.0);

}  // namespace glomorph
