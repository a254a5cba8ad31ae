#pragma once

#include "glomorph/image.hpp"

namespace glomorph {

/// Thins the GBM-labeled foreground of `mask` to a one-pixel-wide,
/// topology-preserving skeleton (8-connected foreground). Returns a binary
/// image (1 = skeleton). Throws EmptyStructureError when the mask contains
/// no GBM pixels.
Image<std::uint8_t> skeletonize_gbm(const LabelImage& mask);

/// Thinning of an arbitrary binary foreground (1 = foreground).
Image<std::uint8_t> thin_binary(const Image<std::uint8_t>& fg);

}  // namespace glomorph
