#include "lunet/nifti.hpp"

#include <cstring>
#include <fstream>

namespace lunet {

namespace {

// NIfTI-1 datatype codes for the supported subset.
constexpr int16_t kDtUint8 = 2;
constexpr int16_t kDtInt16 = 4;
constexpr int16_t kDtFloat32 = 16;

constexpr size_t kHeaderSize = 348;

int16_t get_i16(const uint8_t* p) { return int16_t(uint16_t(p[0]) | uint16_t(p[1]) << 8); }
int32_t get_i32(const uint8_t* p) {
  return int32_t(uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
                 uint32_t(p[3]) << 24);
}
float get_f32(const uint8_t* p) {
  uint32_t bits = uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

void put_i16(uint8_t* p, int16_t v) {
  p[0] = uint8_t(uint16_t(v) & 0xff);
  p[1] = uint8_t(uint16_t(v) >> 8);
}
void put_i32(uint8_t* p, int32_t v) {
  uint32_t u = uint32_t(v);
  p[0] = uint8_t(u & 0xff);
  p[1] = uint8_t((u >> 8) & 0xff);
  p[2] = uint8_t((u >> 16) & 0xff);
  p[3] = uint8_t((u >> 24) & 0xff);
}
void put_f32(uint8_t* p, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_i32(p, int32_t(bits));
}

}  // namespace

Volume read_nifti1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::IoFailure, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(bytes.size() >= kHeaderSize, ErrorKind::MalformedHeader, path + ": file shorter than header");
  const uint8_t* h = reinterpret_cast<const uint8_t*>(bytes.data());

  require(get_i32(h) == 348, ErrorKind::MalformedHeader,
          path + ": sizeof_hdr != 348 (big-endian or not NIfTI-1)");
  require(std::memcmp(h + 344, "n+1", 3) == 0, ErrorKind::MalformedHeader,
          path + ": magic is not 'n+1' (only single-file NIfTI-1 supported)");

  int16_t ndim = get_i16(h + 40);
  require(ndim >= 3 && ndim <= 7, ErrorKind::MalformedHeader, path + ": dim[0] outside 3..7");
  int16_t nx = get_i16(h + 42), ny = get_i16(h + 44), nz = get_i16(h + 46);
  require(nx >= 1 && ny >= 1 && nz >= 1, ErrorKind::MalformedHeader, path + ": non-positive dims");
  for (int d = 4; d <= ndim; ++d)
    require(get_i16(h + 40 + 2 * d) <= 1, ErrorKind::UnsupportedDtype,
            path + ": 4-d+ volumes not supported");

  int16_t datatype = get_i16(h + 70);
  int bytes_per = 0;
  switch (datatype) {
    case kDtUint8: bytes_per = 1; break;
    case kDtInt16: bytes_per = 2; break;
    case kDtFloat32: bytes_per = 4; break;
    default:
      fail(ErrorKind::UnsupportedDtype,
           path + ": datatype code " + std::to_string(datatype) +
               " (supported: uint8=2, int16=4, float32=16)");
  }

  float vox_offset = get_f32(h + 108);
  require(vox_offset >= float(kHeaderSize), ErrorKind::MalformedHeader,
          path + ": vox_offset before end of header");
  float slope = get_f32(h + 112);
  float inter = get_f32(h + 116);

  int64_t n = int64_t(nx) * ny * nz;
  size_t offset = size_t(vox_offset);
  require(bytes.size() >= offset + size_t(n) * size_t(bytes_per), ErrorKind::TruncatedData,
          path + ": voxel payload shorter than header promises");

  Volume v;
  // file axis z (slowest) -> i, y -> j, x (fastest) -> k
  v.di = nz;
  v.dj = ny;
  v.dk = nx;
  float px = get_f32(h + 80), py = get_f32(h + 84), pz = get_f32(h + 88);
  v.voxel_size[0] = pz > 0 ? pz : 1.0f;
  v.voxel_size[1] = py > 0 ? py : 1.0f;
  v.voxel_size[2] = px > 0 ? px : 1.0f;

  v.voxels.resize(size_t(n));
  const uint8_t* d = h + offset;
  const bool scale = slope != 0.0f;
  for (int64_t i = 0; i < n; ++i) {
    float raw;
    switch (datatype) {
      case kDtUint8: raw = float(d[i]); break;
      case kDtInt16: raw = float(get_i16(d + i * 2)); break;
      default: raw = get_f32(d + i * 4); break;
    }
    v.voxels[size_t(i)] = scale ? slope * raw + inter : raw;
  }
  v.update_range();
  return v;
}

void write_nifti1(const Volume& vol, const std::string& path) {
  uint8_t h[352] = {0};
  put_i32(h, 348);
  put_i16(h + 40, 3);
  put_i16(h + 42, int16_t(vol.dk));
  put_i16(h + 44, int16_t(vol.dj));
  put_i16(h + 46, int16_t(vol.di));
  for (int d = 4; d <= 7; ++d) put_i16(h + 40 + 2 * d, 1);
  put_i16(h + 70, kDtFloat32);
  put_i16(h + 72, 32);  // bitpix
  put_f32(h + 76, 1.0f);
  put_f32(h + 80, vol.voxel_size[2]);
  put_f32(h + 84, vol.voxel_size[1]);
  put_f32(h + 88, vol.voxel_size[0]);
  put_f32(h + 108, 352.0f);  // vox_offset, header + 4-byte extension flag
  put_f32(h + 112, 0.0f);    // scl_slope 0: no scaling
  std::memcpy(h + 344, "n+1", 4);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), ErrorKind::IoFailure, "cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(h), 352);
  std::string payload;
  payload.resize(vol.voxels.size() * 4);
  for (size_t i = 0; i < vol.voxels.size(); ++i) {
    uint32_t bits;
    std::memcpy(&bits, &vol.voxels[i], 4);
    payload[i * 4] = char(bits & 0xff);
    payload[i * 4 + 1] = char((bits >> 8) & 0xff);
    payload[i * 4 + 2] = char((bits >> 16) & 0xff);
    payload[i * 4 + 3] = char((bits >> 24) & 0xff);
  }
  f.write(payload.data(), std::streamsize(payload.size()));
  require(f.good(), ErrorKind::IoFailure, "write failed for " + path);
}

}  // namespace lunet
