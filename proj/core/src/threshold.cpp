#include "lunet/threshold.hpp"

#include <algorithm>
#include <cmath>

namespace lunet {

void ThresholdConfig::validate() const {
  require(median_kernel >= 1 && median_kernel % 2 == 1, ErrorKind::InvalidConfig,
          "median_kernel must be odd and >= 1");
  require(morph_open_radius >= 0 && morph_close_radius >= 0, ErrorKind::InvalidConfig,
          "morphology radii must be >= 0");
  if (mode == Mode::Fixed)
    require(fixed_level > 0.0 && fixed_level < 1.0, ErrorKind::InvalidConfig,
            "fixed level must be in (0,1)");
}

int otsu_threshold(const std::array<uint64_t, 256>& histogram) {
  uint64_t total = 0;
  double moment = 0.0;
  for (int i = 0; i < 256; ++i) {
    total += histogram[size_t(i)];
    moment += double(i) * double(histogram[size_t(i)]);
  }
  if (total == 0) return -1;

  int best = -1;
  double best_var = -1.0;
  uint64_t w0 = 0;
  double m0 = 0.0;
  for (int t = 0; t < 255; ++t) {
    w0 += histogram[size_t(t)];
    m0 += double(t) * double(histogram[size_t(t)]);
    const uint64_t w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const double mean0 = m0 / double(w0);
    const double mean1 = (moment - m0) / double(w1);
    const double d = mean0 - mean1;
    const double var = double(w0) * double(w1) * d * d;
    if (var > best_var) {  // strict: ties keep the lower threshold
      best_var = var;
      best = t;
    }
  }
  return best;
}

SliceImage median_filter(const SliceImage& img, int kernel) {
  if (kernel <= 1) return img;
  const int r = kernel / 2;
  SliceImage out = img;
  std::vector<float> window(size_t(kernel) * kernel);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      size_t n = 0;
      for (int dy = -r; dy <= r; ++dy) {
        int sy = std::clamp(y + dy, 0, img.height - 1);
        for (int dx = -r; dx <= r; ++dx) {
          int sx = std::clamp(x + dx, 0, img.width - 1);
          window[n++] = img.at(sy, sx);
        }
      }
      auto mid = window.begin() + std::ptrdiff_t(n / 2);
      std::nth_element(window.begin(), mid, window.begin() + std::ptrdiff_t(n));
      out.at(y, x) = *mid;
    }
  }
  return out;
}

namespace {

SliceImage morph_pass(const SliceImage& mask, int radius, bool erode) {
  if (radius <= 0) return mask;
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dy * dy + dx * dx <= radius * radius) offsets.emplace_back(dy, dx);

  SliceImage out = mask;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      bool hit = erode;
      for (auto [dy, dx] : offsets) {
        int sy = y + dy, sx = x + dx;
        bool fg = sy >= 0 && sy < mask.height && sx >= 0 && sx < mask.width &&
                  mask.at(sy, sx) > 0.5f;
        if (erode && !fg) {
          hit = false;
          break;
        }
        if (!erode && fg) {
          hit = true;
          break;
        }
      }
      out.at(y, x) = hit ? 1.0f : 0.0f;
    }
  }
  return out;
}

}  // namespace

SliceImage erode_disk(const SliceImage& mask, int radius) { return morph_pass(mask, radius, true); }
SliceImage dilate_disk(const SliceImage& mask, int radius) {
  return morph_pass(mask, radius, false);
}
SliceImage morph_open(const SliceImage& mask, int radius) {
  return dilate_disk(erode_disk(mask, radius), radius);
}
SliceImage morph_close(const SliceImage& mask, int radius) {
  return erode_disk(dilate_disk(mask, radius), radius);
}

ThresholdResult threshold_segment(const SliceImage& img, const ThresholdConfig& cfg) {
  cfg.validate();
  for (float p : img.pixels)
    require(p >= 0.0f && p <= 1.0f, ErrorKind::InvalidConfig, "pixels must be in [0,1]");

  SliceImage filtered = median_filter(img, cfg.median_kernel);

  ThresholdResult r;
  r.mask = SliceImage(img.height, img.width);
  r.mask.plane = img.plane;
  r.mask.source_id = img.source_id;
  r.mask.slice_index = img.slice_index;

  if (cfg.mode == ThresholdConfig::Mode::Otsu) {
    std::array<uint64_t, 256> hist{};
    for (float p : filtered.pixels) ++hist[size_t(std::lround(p * 255.0f))];
    r.otsu_threshold = otsu_threshold(hist);
    if (r.otsu_threshold < 0) {
      r.constant_input = true;  // all mass in one bin: leave all-background
      return r;
    }
    for (int64_t i = 0; i < filtered.size(); ++i)
      r.mask.pixels[size_t(i)] =
          std::lround(filtered.pixels[size_t(i)] * 255.0f) > r.otsu_threshold ? 1.0f : 0.0f;
  } else {
    for (int64_t i = 0; i < filtered.size(); ++i)
      r.mask.pixels[size_t(i)] = filtered.pixels[size_t(i)] > float(cfg.fixed_level) ? 1.0f : 0.0f;
  }

  r.mask = morph_close(morph_open(r.mask, cfg.morph_open_radius), cfg.morph_close_radius);
  return r;
}

}  // namespace lunet
