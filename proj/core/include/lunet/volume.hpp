#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lunet/error.hpp"

namespace lunet {

// 3-D voxel grid. Storage is i-major: flat index (i * D_j + j) * D_k + k.
// For volumes read from NIfTI-1 files, axis i is the file's slowest axis
// (z), so transversal slices index i.
struct Volume {
  std::vector<float> voxels;
  int di = 0, dj = 0, dk = 0;
  float voxel_size[3] = {1.0f, 1.0f, 1.0f};  // (s_i, s_j, s_k), millimetres
  float vmin = 0.0f, vmax = 0.0f;            // intensity range

  Volume() = default;
  Volume(int i, int j, int k, float fill = 0.0f)
      : voxels(size_t(int64_t(i) * j * k), fill), di(i), dj(j), dk(k) {}

  int64_t size() const { return int64_t(di) * dj * dk; }
  int64_t offset(int i, int j, int k) const { return (int64_t(i) * dj + j) * dk + k; }
  float& at(int i, int j, int k) { return voxels[size_t(offset(i, j, k))]; }
  float at(int i, int j, int k) const { return voxels[size_t(offset(i, j, k))]; }

  bool same_dims(const Volume& o) const { return di == o.di && dj == o.dj && dk == o.dk; }

  // Recomputes vmin/vmax from the voxel data.
  void update_range();
};

enum class VolumeFormat { Native, Nifti1 };

// Native format: magic "LUV1", then little-endian u32 D_i, u32 D_j, u32 D_k,
// 3x f32 voxel sizes, 2x f32 intensity range, then D_i*D_j*D_k f32 voxels in
// i-major order.
Volume read_volume(const std::string& path, VolumeFormat format);
void write_volume(const Volume& vol, const std::string& path);

// Picks Native for .luv, Nifti1 for .nii.
Volume read_volume_auto(const std::string& path);

// Nearest-neighbor resample of a binary mask onto target's grid:
// src_idx = floor(dst_idx * src_dim / dst_dim) per axis. Voxels outside
// {0,1} (tolerance 1e-6) raise NonBinaryMask.
Volume resample_mask(const Volume& mask, const Volume& target);

}  // namespace lunet
