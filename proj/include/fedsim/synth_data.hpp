#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fedsim/rng.hpp"
#include "fedsim/tensor.hpp"

namespace fedsim {

// Generator parameters for one client's heterogeneous "pathology-like" data:
// styled backgrounds with ellipse blob foregrounds.
struct ClientProfile {
    std::vector<double> style_mean;  // per channel
    std::vector<double> style_std;   // per channel, >= 0
    std::int64_t blob_count_min = 0;
    std::int64_t blob_count_max = 0;
    double blob_radius_min = 1.0;
    double blob_radius_max = 1.0;
    std::vector<double> fg_offset;  // per-channel additive shift inside blobs
    double noise_std = 0.0;
};

// One image-label pair. image: (1,3,h,w) in [0,1]; mask: (1,1,h,w) in {0,1}.
struct SamplePair {
    Tensor4 image;
    Tensor4 mask;
};

// Deterministic per (profile, rng): background color drawn per image from
// N(style_mean, style_std), k ellipse blobs shifted by fg_offset, pixel noise
// N(0, noise_std), everything clamped to [0,1]. Mask is the blob union.
std::vector<SamplePair> generate_client_dataset(const ClientProfile& profile, std::int64_t n,
                                                std::int64_t h, std::int64_t w, Rng& rng);

// Random permutation split into ceil(ratio*n) train and the remainder.
std::pair<std::vector<SamplePair>, std::vector<SamplePair>> split_dataset(
    std::vector<SamplePair> samples, double ratio, Rng& rng);

// Random permutation split with an explicit train count.
std::pair<std::vector<SamplePair>, std::vector<SamplePair>> split_dataset_counts(
    std::vector<SamplePair> samples, std::int64_t n_train, Rng& rng);

}  // namespace fedsim
