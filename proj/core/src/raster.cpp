#include "lunet/raster.hpp"

#include <cmath>
#include <fstream>

namespace lunet {

void write_raster(const SliceImage& img, const std::string& path) {
  require(img.height >= 1 && img.width >= 1, ErrorKind::InvalidConfig, "empty image");
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels.size());
  for (float p : img.pixels) {
    require(p >= 0.0f && p <= 1.0f, ErrorKind::InvalidConfig, "pixel outside [0,1]");
    out.push_back(char(uint8_t(std::lround(p * 255.0f))));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), ErrorKind::IoFailure, "cannot open " + path + " for writing");
  f.write(out.data(), std::streamsize(out.size()));
  require(f.good(), ErrorKind::IoFailure, "write failed for " + path);
}

namespace {

// Reads a PGM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(char(c));
  }
  return tok;
}

}  // namespace

SliceImage read_raster(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), ErrorKind::IoFailure, "cannot open " + path);

  require(next_token(f) == "P5", ErrorKind::MalformedRaster, path + ": not a P5 PGM");
  std::string ws = next_token(f), hs = next_token(f), ms = next_token(f);
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(ws);
    h = std::stoi(hs);
    maxval = std::stoi(ms);
  } catch (const std::exception&) {
    fail(ErrorKind::MalformedRaster, path + ": bad header fields");
  }
  require(w >= 1 && h >= 1, ErrorKind::MalformedRaster, path + ": non-positive dims");
  require(maxval == 255, ErrorKind::MalformedRaster, path + ": maxval must be 255");

  SliceImage img(h, w);
  std::string bytes(size_t(img.size()), '\0');
  f.read(bytes.data(), std::streamsize(bytes.size()));
  require(f.gcount() == std::streamsize(bytes.size()), ErrorKind::MalformedRaster,
          path + ": pixel payload truncated");
  for (int64_t i = 0; i < img.size(); ++i)
    img.pixels[size_t(i)] = float(uint8_t(bytes[size_t(i)])) / 255.0f;
  return img;
}

}  // namespace lunet
