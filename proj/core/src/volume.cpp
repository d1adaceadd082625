#include "lunet/volume.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "lunet/nifti.hpp"

namespace lunet {

namespace {

constexpr char kMagic[4] = {'L', 'U', 'V', '1'};

void put_u32(std::string& out, uint32_t v) {
  out.push_back(char(v & 0xff));
  out.push_back(char((v >> 8) & 0xff));
  out.push_back(char((v >> 16) & 0xff));
  out.push_back(char((v >> 24) & 0xff));
}

void put_f32(std::string& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

uint32_t get_u32(const uint8_t* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}

float get_f32(const uint8_t* p) {
  uint32_t bits = get_u32(p);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::IoFailure, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(!in.bad(), ErrorKind::IoFailure, "read failed for " + path);
  return bytes;
}

Volume read_native(const std::string& path) {
  std::string bytes = read_file(path);
  constexpr size_t kHeader = 4 + 3 * 4 + 3 * 4 + 2 * 4;
  require(bytes.size() >= kHeader, ErrorKind::MalformedHeader, path + ": header too short");
  const uint8_t* p = reinterpret_cast<const uint8_t*>(bytes.data());
  require(std::memcmp(p, kMagic, 4) == 0, ErrorKind::MalformedHeader, path + ": bad magic");

  Volume v;
  uint32_t di = get_u32(p + 4), dj = get_u32(p + 8), dk = get_u32(p + 12);
  require(di >= 1 && dj >= 1 && dk >= 1, ErrorKind::MalformedHeader,
          path + ": volume dims must be >= 1");
  require(int64_t(di) * dj * dk <= (int64_t(1) << 31), ErrorKind::MalformedHeader,
          path + ": dims unreasonably large");
  v.di = int(di);
  v.dj = int(dj);
  v.dk = int(dk);
  for (int i = 0; i < 3; ++i) {
    v.voxel_size[i] = get_f32(p + 16 + 4 * i);
    require(v.voxel_size[i] > 0.0f, ErrorKind::MalformedHeader, path + ": voxel size must be > 0");
  }
  v.vmin = get_f32(p + 28);
  v.vmax = get_f32(p + 32);
  require(v.vmin <= v.vmax, ErrorKind::MalformedHeader, path + ": inverted intensity range");

  int64_t n = v.size();
  require(bytes.size() >= kHeader + size_t(n) * 4, ErrorKind::TruncatedData,
          path + ": voxel payload shorter than header promises");
  v.voxels.resize(size_t(n));
  const uint8_t* q = p + kHeader;
  for (int64_t i = 0; i < n; ++i) v.voxels[size_t(i)] = get_f32(q + i * 4);
  for (float x : v.voxels)
    require(x >= v.vmin && x <= v.vmax, ErrorKind::MalformedHeader,
            path + ": voxel outside declared intensity range");
  return v;
}

}  // namespace

void Volume::update_range() {
  if (voxels.empty()) {
    vmin = vmax = 0.0f;
    return;
  }
  auto [lo, hi] = std::minmax_element(voxels.begin(), voxels.end());
  vmin = *lo;
  vmax = *hi;
}

Volume read_volume(const std::string& path, VolumeFormat format) {
  if (format == VolumeFormat::Native) return read_native(path);
  return read_nifti1(path);
}

Volume read_volume_auto(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".nii") == 0)
    return read_volume(path, VolumeFormat::Nifti1);
  return read_volume(path, VolumeFormat::Native);
}

void write_volume(const Volume& vol, const std::string& path) {
  require(vol.di >= 1 && vol.dj >= 1 && vol.dk >= 1, ErrorKind::InvalidConfig,
          "volume dims must be >= 1");
  require(vol.size() == int64_t(vol.voxels.size()), ErrorKind::ShapeMismatch,
          "voxel count does not match dims");
  std::string out;
  out.reserve(36 + vol.voxels.size() * 4);
  out.append(kMagic, 4);
  put_u32(out, uint32_t(vol.di));
  put_u32(out, uint32_t(vol.dj));
  put_u32(out, uint32_t(vol.dk));
  for (int i = 0; i < 3; ++i) put_f32(out, vol.voxel_size[i]);
  put_f32(out, vol.vmin);
  put_f32(out, vol.vmax);
  for (float v : vol.voxels) put_f32(out, v);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), ErrorKind::IoFailure, "cannot open " + path + " for writing");
  f.write(out.data(), std::streamsize(out.size()));
  require(f.good(), ErrorKind::IoFailure, "write failed for " + path);
}

Volume resample_mask(const Volume& mask, const Volume& target) {
  for (float v : mask.voxels)
    require(std::fabs(v) <= 1e-6f || std::fabs(v - 1.0f) <= 1e-6f, ErrorKind::NonBinaryMask,
            "mask voxel outside {0,1}");

  Volume out(target.di, target.dj, target.dk);
  out.voxel_size[0] = target.voxel_size[0];
  out.voxel_size[1] = target.voxel_size[1];
  out.voxel_size[2] = target.voxel_size[2];
  for (int i = 0; i < target.di; ++i) {
    int si = int(int64_t(i) * mask.di / target.di);
    for (int j = 0; j < target.dj; ++j) {
      int sj = int(int64_t(j) * mask.dj / target.dj);
      for (int k = 0; k < target.dk; ++k) {
        int sk = int(int64_t(k) * mask.dk / target.dk);
        out.at(i, j, k) = mask.at(si, sj, sk) > 0.5f ? 1.0f : 0.0f;
      }
    }
  }
  out.update_range();
  return out;
}

}  // namespace lunet
