#pragma once

#include <string>

#include "lunet/slice.hpp"

namespace lunet {

// 8-bit binary PGM (P5), maxval 255. Pixels quantize as round(p * 255) on
// write and recover as v / 255 on read, so a round trip is exact to 1/510.
void write_raster(const SliceImage& img, const std::string& path);
SliceImage read_raster(const std::string& path);

}  // namespace lunet
