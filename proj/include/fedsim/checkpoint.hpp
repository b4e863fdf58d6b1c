#pragma once

#include <string>

#include "fedsim/weights.hpp"

namespace fedsim {

// Checkpoint = <path>.json manifest (layer/parameter names, dims, byte
// offsets) + <path>.bin blob of little-endian 64-bit floats. Round trips are
// bit-exact.
void save_checkpoint(const LayeredWeights& weights, const std::string& path_stem);

LayeredWeights load_checkpoint(const std::string& path_stem);

}  // namespace fedsim
