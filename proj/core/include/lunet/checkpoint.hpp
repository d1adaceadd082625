#pragma once

#include <string>

#include "lunet/model.hpp"

namespace lunet::nn {

// Checkpoint file: magic "LUNT", u32 version = 1, u32 record count, then per
// record: u16 name length, name bytes, u8 ndim, ndim x u32 dims, real32
// little-endian payload. Parameter records come first, then buffer records,
// both in fixed build order. A round trip reproduces eval-mode predictions
// bitwise.
void save_checkpoint(Model& model, const std::string& path);

// Loads records into an already-built model; names and shapes must match
// exactly (MalformedCheckpoint otherwise, VersionMismatch for unknown
// versions).
void load_checkpoint(Model& model, const std::string& path);

}  // namespace lunet::nn
