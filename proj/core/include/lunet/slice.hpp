#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lunet/volume.hpp"

namespace lunet {

enum class PlaneLabel { Coronal, Sagittal, Transversal };

const char* to_string(PlaneLabel p);
PlaneLabel plane_from_string(const std::string& s);

// 2-D grayscale image with pixels in [0,1]. Masks use the same type with
// pixels restricted to {0,1}.
struct SliceImage {
  std::vector<float> pixels;
  int height = 0, width = 0;
  PlaneLabel plane = PlaneLabel::Transversal;
  std::string source_id;
  int slice_index = 0;

  SliceImage() = default;
  SliceImage(int h, int w, float fill = 0.0f)
      : pixels(size_t(int64_t(h) * w), fill), height(h), width(w) {}

  int64_t size() const { return int64_t(height) * width; }
  float& at(int r, int c) { return pixels[size_t(int64_t(r) * width + c)]; }
  float at(int r, int c) const { return pixels[size_t(int64_t(r) * width + c)]; }

  bool is_binary(float tol = 1e-6f) const;
};

struct SlicePair {
  SliceImage image, mask;
};

enum class Split { Train, Test };

struct SliceDataset {
  std::vector<SlicePair> items;
  std::vector<Split> split;  // aligned with items
  uint64_t seed = 0;

  size_t count(Split s) const;
};

// Cuts every slice along the plane's axis (Transversal = axis i,
// Coronal = axis j, Sagittal = axis k). Image slices are min-max normalized
// to [0,1] per slice; constant slices map to all-zeros. Mask slices must be
// binary and pass through unchanged.
std::vector<SlicePair> extract_slices(const Volume& vol, const Volume& mask, PlaneLabel plane,
                                      const std::string& source_id);

// Corner-aligned bilinear resize for images.
SliceImage resize_bilinear(const SliceImage& img, int out_h, int out_w);

// Nearest-neighbor resize (src = floor(dst * in / out)); keeps masks binary.
SliceImage resize_nearest(const SliceImage& img, int out_h, int out_w);

// Deterministic shuffle keyed by seed; |Test| = round(fraction_test * N).
SliceDataset split_dataset(std::vector<SlicePair> items, double fraction_test, uint64_t seed);

// Tab-separated manifest: source_id, plane, slice_index, image_path,
// mask_path, split — one line per item. Relative paths are resolved against
// the manifest's directory on read.
struct ManifestRow {
  std::string source_id;
  PlaneLabel plane = PlaneLabel::Transversal;
  int slice_index = 0;
  std::string image_path, mask_path;
  Split split = Split::Train;
};

void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path);
std::vector<ManifestRow> read_manifest(const std::string& path);

// Loads every manifest row into memory. When resize_hw > 0, images are
// resized bilinearly and masks by nearest-neighbor to (resize_hw, resize_hw).
SliceDataset load_dataset(const std::string& manifest_path, int resize_hw = 0);

}  // namespace lunet
