#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace glomorph {

/// Row-major single-channel raster. Pixel (x, y) has its center at
/// continuous coordinates (x, y); x indexes columns, y indexes rows.
template <typename T>
class Image {
  public:
    Image() = default;
    Image(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }

    bool contains(int x, int y) const {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    T& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const T& at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    /// Bounds-checked read; out-of-image reads as `outside`.
    T get_or(int x, int y, T outside) const {
        return contains(x, y) ? at(x, y) : outside;
    }

    std::vector<T>& pixels() { return data_; }
    const std::vector<T>& pixels() const { return data_; }

    bool operator==(const Image&) const = default;

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// Ultrastructure labels as stored in segmentation masks.
enum Label : std::uint8_t {
    kBackground = 0,
    kGbm = 1,
    kPodocyte = 2,
    kEndothelium = 3,
    kMesangium = 4,
};
inline constexpr int kLabelCount = 5;

using LabelImage = Image<std::uint8_t>;

enum class ProbKind { kMeasurementSuitability, kFpe };

/// Per-pixel probability surface backed by the 16-bit raster it was loaded
/// from (0..65535 maps linearly onto 0..1).
class ProbabilityMap {
  public:
    ProbabilityMap() = default;
    ProbabilityMap(Image<std::uint16_t> raw, ProbKind kind)
        : raw_(std::move(raw)), kind_(kind) {}

    int width() const { return raw_.width(); }
    int height() const { return raw_.height(); }
    ProbKind kind() const { return kind_; }

    double at(int x, int y) const { return raw_.at(x, y) / 65535.0; }

    const Image<std::uint16_t>& raw() const { return raw_; }

    static std::uint16_t quantize(double p) {
        if (p <= 0.0) return 0;
        if (p >= 1.0) return 65535;
        return static_cast<std::uint16_t>(p * 65535.0 + 0.5);
    }

  private:
    Image<std::uint16_t> raw_;
    ProbKind kind_ = ProbKind::kMeasurementSuitability;
};

}  // namespace glomorph
