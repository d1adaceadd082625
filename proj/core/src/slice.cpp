#include "lunet/slice.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lunet/raster.hpp"
#include "lunet/rng.hpp"

namespace lunet {

const char* to_string(PlaneLabel p) {
  switch (p) {
    case PlaneLabel::Coronal: return "coronal";
    case PlaneLabel::Sagittal: return "sagittal";
    case PlaneLabel::Transversal: return "transversal";
  }
  return "?";
}

PlaneLabel plane_from_string(const std::string& s) {
  if (s == "coronal") return PlaneLabel::Coronal;
  if (s == "sagittal") return PlaneLabel::Sagittal;
  if (s == "transversal") return PlaneLabel::Transversal;
  fail(ErrorKind::UsageError, "unknown plane '" + s + "'");
}

bool SliceImage::is_binary(float tol) const {
  for (float p : pixels)
    if (std::fabs(p) > tol && std::fabs(p - 1.0f) > tol) return false;
  return true;
}

size_t SliceDataset::count(Split s) const {
  size_t n = 0;
  for (Split t : split)
    if (t == s) ++n;
  return n;
}

namespace {

// Gathers the 2-D slice at position `s` along `plane`'s axis. Slice layout:
// axis i -> rows j, cols k; axis j -> rows i, cols k; axis k -> rows i, cols j.
SliceImage cut_plane(const Volume& v, PlaneLabel plane, int s) {
  SliceImage img;
  switch (plane) {
    case PlaneLabel::Transversal:
      img = SliceImage(v.dj, v.dk);
      for (int j = 0; j < v.dj; ++j)
        for (int k = 0; k < v.dk; ++k) img.at(j, k) = v.at(s, j, k);
      break;
    case PlaneLabel::Coronal:
      img = SliceImage(v.di, v.dk);
      for (int i = 0; i < v.di; ++i)
        for (int k = 0; k < v.dk; ++k) img.at(i, k) = v.at(i, s, k);
      break;
    case PlaneLabel::Sagittal:
      img = SliceImage(v.di, v.dj);
      for (int i = 0; i < v.di; ++i)
        for (int j = 0; j < v.dj; ++j) img.at(i, j) = v.at(i, j, s);
      break;
  }
  img.plane = plane;
  img.slice_index = s;
  return img;
}

void normalize_minmax(SliceImage& img) {
  auto [lo, hi] = std::minmax_element(img.pixels.begin(), img.pixels.end());
  float mn = *lo, mx = *hi;
  if (mx - mn <= 0.0f) {
    std::fill(img.pixels.begin(), img.pixels.end(), 0.0f);
    return;
  }
  float inv = 1.0f / (mx - mn);
  for (float& p : img.pixels) p = (p - mn) * inv;
}

}  // namespace

std::vector<SlicePair> extract_slices(const Volume& vol, const Volume& mask, PlaneLabel plane,
                                      const std::string& source_id) {
  require(vol.same_dims(mask), ErrorKind::DimMismatch,
          "volume and mask dims differ for " + source_id);
  int axis_len = plane == PlaneLabel::Transversal ? vol.di
                 : plane == PlaneLabel::Coronal   ? vol.dj
                                                  : vol.dk;
  std::vector<SlicePair> out;
  out.reserve(size_t(axis_len));
  for (int s = 0; s < axis_len; ++s) {
    SlicePair pair;
    pair.image = cut_plane(vol, plane, s);
    normalize_minmax(pair.image);
    pair.image.source_id = source_id;
    pair.mask = cut_plane(mask, plane, s);
    require(pair.mask.is_binary(), ErrorKind::NonBinaryMask,
            source_id + ": mask slice has non-binary values");
    pair.mask.source_id = source_id;
    out.push_back(std::move(pair));
  }
  return out;
}

SliceImage resize_bilinear(const SliceImage& img, int out_h, int out_w) {
  require(out_h >= 1 && out_w >= 1, ErrorKind::InvalidConfig, "resize dims must be >= 1");
  SliceImage out(out_h, out_w);
  out.plane = img.plane;
  out.source_id = img.source_id;
  out.slice_index = img.slice_index;
  const double sy = out_h > 1 ? double(img.height - 1) / double(out_h - 1) : 0.0;
  const double sx = out_w > 1 ? double(img.width - 1) / double(out_w - 1) : 0.0;
  for (int r = 0; r < out_h; ++r) {
    double fy = r * sy;
    int y0 = int(fy);
    int y1 = std::min(y0 + 1, img.height - 1);
    double wy = fy - y0;
    for (int c = 0; c < out_w; ++c) {
      double fx = c * sx;
      int x0 = int(fx);
      int x1 = std::min(x0 + 1, img.width - 1);
      double wx = fx - x0;
      double top = (1.0 - wx) * img.at(y0, x0) + wx * img.at(y0, x1);
      double bot = (1.0 - wx) * img.at(y1, x0) + wx * img.at(y1, x1);
      out.at(r, c) = float((1.0 - wy) * top + wy * bot);
    }
  }
  return out;
}

SliceImage resize_nearest(const SliceImage& img, int out_h, int out_w) {
  require(out_h >= 1 && out_w >= 1, ErrorKind::InvalidConfig, "resize dims must be >= 1");
  SliceImage out(out_h, out_w);
  out.plane = img.plane;
  out.source_id = img.source_id;
  out.slice_index = img.slice_index;
  for (int r = 0; r < out_h; ++r) {
    int sr = int(int64_t(r) * img.height / out_h);
    for (int c = 0; c < out_w; ++c) {
      int sc = int(int64_t(c) * img.width / out_w);
      out.at(r, c) = img.at(sr, sc);
    }
  }
  return out;
}

SliceDataset split_dataset(std::vector<SlicePair> items, double fraction_test, uint64_t seed) {
  require(!items.empty(), ErrorKind::EmptyDataset, "cannot split an empty dataset");
  require(fraction_test > 0.0 && fraction_test < 1.0, ErrorKind::InvalidConfig,
          "fraction_test must be in (0,1)");
  const size_t n = items.size();
  const size_t n_test = size_t(std::llround(fraction_test * double(n)));

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t(0));
  Rng rng(mix_seed(seed, 0xda7a5e7ull));
  shuffle(order, rng);

  SliceDataset ds;
  ds.items = std::move(items);
  ds.seed = seed;
  ds.split.assign(n, Split::Train);
  for (size_t i = 0; i < n_test; ++i) ds.split[order[i]] = Split::Test;
  return ds;
}

void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  require(f.good(), ErrorKind::IoFailure, "cannot open " + path + " for writing");
  for (const auto& r : rows) {
    f << r.source_id << '\t' << to_string(r.plane) << '\t' << r.slice_index << '\t'
      << r.image_path << '\t' << r.mask_path << '\t'
      << (r.split == Split::Train ? "train" : "test") << '\n';
  }
  require(f.good(), ErrorKind::IoFailure, "write failed for " + path);
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), ErrorKind::IoFailure, "cannot open " + path);
  std::vector<ManifestRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    ManifestRow r;
    std::string plane, index, split;
    if (!std::getline(ss, r.source_id, '\t') || !std::getline(ss, plane, '\t') ||
        !std::getline(ss, index, '\t') || !std::getline(ss, r.image_path, '\t') ||
        !std::getline(ss, r.mask_path, '\t') || !std::getline(ss, split, '\t')) {
      fail(ErrorKind::MalformedLog, path + ":" + std::to_string(lineno) + ": expected 6 fields");
    }
    r.plane = plane_from_string(plane);
    r.slice_index = std::stoi(index);
    if (split == "train")
      r.split = Split::Train;
    else if (split == "test")
      r.split = Split::Test;
    else
      fail(ErrorKind::MalformedLog, path + ":" + std::to_string(lineno) + ": bad split tag");
    rows.push_back(std::move(r));
  }
  return rows;
}

SliceDataset load_dataset(const std::string& manifest_path, int resize_hw) {
  auto rows = read_manifest(manifest_path);
  require(!rows.empty(), ErrorKind::EmptyDataset, manifest_path + " lists no items");
  std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };

  SliceDataset ds;
  for (const auto& r : rows) {
    SlicePair pair;
    pair.image = read_raster(resolve(r.image_path));
    pair.mask = read_raster(resolve(r.mask_path));
    require(pair.image.height == pair.mask.height && pair.image.width == pair.mask.width,
            ErrorKind::DimMismatch, r.image_path + ": image/mask size mismatch");
    require(pair.mask.is_binary(1e-3f), ErrorKind::NonBinaryMask,
            r.mask_path + ": mask raster is not binary");
    for (float& p : pair.mask.pixels) p = p > 0.5f ? 1.0f : 0.0f;
    if (resize_hw > 0) {
      pair.image = resize_bilinear(pair.image, resize_hw, resize_hw);
      pair.mask = resize_nearest(pair.mask, resize_hw, resize_hw);
    }
    for (auto* img : {&pair.image, &pair.mask}) {
      img->plane = r.plane;
      img->source_id = r.source_id;
      img->slice_index = r.slice_index;
    }
    ds.items.push_back(std::move(pair));
    ds.split.push_back(r.split);
  }
  return ds;
}

}  // namespace lunet
