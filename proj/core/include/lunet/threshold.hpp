#pragma once

#include <array>
#include <cstdint>

#include "lunet/slice.hpp"

namespace lunet {

struct ThresholdConfig {
  int median_kernel = 3;  // odd
  enum class Mode { Otsu, Fixed } mode = Mode::Otsu;
  double fixed_level = 0.5;
  int morph_open_radius = 1;
  int morph_close_radius = 1;

  void validate() const;
};

struct ThresholdResult {
  SliceImage mask;
  bool constant_input = false;  // Otsu undefined; mask is all-background
  int otsu_threshold = -1;      // chosen bin, Otsu mode only
};

// median filter -> threshold (Otsu over a 256-bin histogram, or fixed
// level) -> morphological opening then closing with disk structuring
// elements. Foreground is the above-threshold class.
ThresholdResult threshold_segment(const SliceImage& img, const ThresholdConfig& cfg);

// Exhaustive 256-bin Otsu: returns the threshold t maximizing inter-class
// variance, pixels with bin > t being foreground; ties break toward the
// lower threshold. Returns -1 when all mass sits in one bin.
int otsu_threshold(const std::array<uint64_t, 256>& histogram);

// Clamp-to-edge median filter with a k x k window, k odd.
SliceImage median_filter(const SliceImage& img, int kernel);

// Binary morphology with a disk structuring element (dx^2 + dy^2 <= r^2).
// Out-of-bounds neighbors count as background.
SliceImage erode_disk(const SliceImage& mask, int radius);
SliceImage dilate_disk(const SliceImage& mask, int radius);
SliceImage morph_open(const SliceImage& mask, int radius);
SliceImage morph_close(const SliceImage& mask, int radius);

}  // namespace lunet
