#pragma once

#include <string>

#include "lunet/volume.hpp"

namespace lunet {

// Reads an uncompressed single-file NIfTI-1 volume (magic "n+1"). Supported
// element types: unsigned 8-bit, signed 16-bit, real32. scl_slope/scl_inter
// scaling is applied when slope is nonzero. The file's slowest axis (z) maps
// to axis i so the flat voxel order is preserved verbatim.
Volume read_nifti1(const std::string& path);

// Writes the supported subset (real32 data, no scaling). Used by tests and
// the synthetic generator when NIfTI output is requested.
void write_nifti1(const Volume& vol, const std::string& path);

}  // namespace lunet
