#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fedsim/rng.hpp"
#include "fedsim/tensor.hpp"

namespace fedsim {

// Per-channel image statistics of one client's batch (or epoch average).
struct StyleStats {
    std::vector<double> mean;  // length c, in [0,1] for valid images
    std::vector<double> std;   // length c, >= 0
};

// The round's collection of every client's published StyleStats. Assembled at
// the round barrier, immutable afterwards.
struct StylePool {
    std::int64_t round = 0;
    std::map<int, StyleStats> entries;  // client id -> stats
};

// Spatial 0/1 mask; the ones always cover half the pixels (floor or ceil).
struct BinaryMask {
    std::int64_t h = 0, w = 0;
    std::vector<std::uint8_t> bits;

    std::int64_t ones_count() const {
        std::int64_t k = 0;
        for (auto b : bits) k += b;
        return k;
    }
};

// Per-channel mean and population standard deviation over all n*h*w pixels.
// With scalar_mode, a single mean/std over every element is replicated to all
// channels (the paper's scalar formulation).
StyleStats compute_image_stats(const Tensor4& batch, bool scalar_mode = false);

// Uniformly random entry among pool entries not belonging to self_id;
// nullopt when no foreign entry exists (caller skips the style step).
std::optional<StyleStats> sample_style(const StylePool& pool, int self_id, Rng& rng);

// Re-normalizes the batch from source stats to target stats per channel:
// ((x - mu_src) / (sigma_src + eps)) * sigma_tgt + mu_tgt. Output clamped to
// [0,1] unless clamp_output is false (used by the algebraic oracles).
Tensor4 adain_transfer(const Tensor4& batch, const StyleStats& source, const StyleStats& target,
                       double eps, bool clamp_output = true);

// Half-plane mask (ones fill the first floor(h*w/2) cells column-major) put
// through a uniformly random element of
// {rot 0,90,180,270} x {identity, hflip, vflip}.
BinaryMask make_random_mask(std::int64_t h, std::int64_t w, Rng& rng);

// x_hybrid = mask * original + (1 - mask) * styled, broadcast over (n, c).
Tensor4 hybridize(const Tensor4& original, const Tensor4& styled, const BinaryMask& mask);

// Wire format for the round barrier exchange ({"v":1, round, clients}).
std::string style_pool_to_json(const StylePool& pool);
StylePool style_pool_from_json(const std::string& text);

}  // namespace fedsim
