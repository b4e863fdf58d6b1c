#pragma once

#include <cstdint>
#include <vector>

#include "fedsim/rng.hpp"
#include "fedsim/tensor.hpp"
#include "fedsim/weights.hpp"

namespace fedsim {

// Per-channel intensity statistics over a client's entire training set; the
// sampling distribution for similarity probes.
struct DatasetStats {
    std::vector<double> mean;
    std::vector<double> std;
};

// L x M x M pairwise layer similarities. raw holds cosine values in [-1,1]
// (symmetric, diagonal unused); normalized holds the non-negative scores
// whose off-diagonal sum is M per layer.
class SimilarityTensor {
public:
    SimilarityTensor() = default;
    SimilarityTensor(std::int64_t num_layers, std::int64_t num_clients)
        : L_(num_layers),
          M_(num_clients),
          raw_(static_cast<std::size_t>(L_ * M_ * M_), 0.0),
          normalized_(static_cast<std::size_t>(L_ * M_ * M_), 0.0) {}

    std::int64_t num_layers() const { return L_; }
    std::int64_t num_clients() const { return M_; }

    double& raw(std::int64_t l, std::int64_t m, std::int64_t j) {
        return raw_[static_cast<std::size_t>((l * M_ + m) * M_ + j)];
    }
    double raw(std::int64_t l, std::int64_t m, std::int64_t j) const {
        return raw_[static_cast<std::size_t>((l * M_ + m) * M_ + j)];
    }
    double& normalized(std::int64_t l, std::int64_t m, std::int64_t j) {
        return normalized_[static_cast<std::size_t>((l * M_ + m) * M_ + j)];
    }
    double normalized(std::int64_t l, std::int64_t m, std::int64_t j) const {
        return normalized_[static_cast<std::size_t>((l * M_ + m) * M_ + j)];
    }

private:
    std::int64_t L_ = 0, M_ = 0;
    std::vector<double> raw_;
    std::vector<double> normalized_;
};

// Per-channel mean/std over every pixel of every image in the dataset.
DatasetStats compute_dataset_stats(const std::vector<Tensor4>& images);

// i.i.d. per-channel normal samples with the dataset's statistics, clamped to
// [0,1] to stay in image range.
Tensor4 gen_probe(const DatasetStats& stats, Shape4 shape, Rng& rng);

// a.b / (|a||b| + eps), in [-1, 1].
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b,
                         double eps = 1e-12);

// Per layer: clamp negatives to zero, scale so the off-diagonal sum is M;
// degenerate layers (sum ~ 0) fall back to the uniform score 1/(M-1).
// With global_norm a single scaling constant is shared across layers (the sum
// over all layers is L*M); the per-layer rule is the default.
SimilarityTensor normalize_similarities(const SimilarityTensor& raw, bool global_norm = false);

// Layer-stratified aggregation: per layer l each client k contributes with
// coefficient (1 + sum_{m != k} s[l][m][k]) / (2M); the coefficients are
// non-negative and sum to 1.
LayeredWeights aggregate_ssa(const std::vector<LayeredWeights>& clients,
                             const SimilarityTensor& s);

// Sample-count weighted mean of every parameter tensor.
LayeredWeights aggregate_fedavg(const std::vector<LayeredWeights>& clients,
                                const std::vector<std::int64_t>& sample_counts);

// (mu/2) * sum ||w_local - w_global||^2 over every parameter tensor.
double fedprox_penalty(const LayeredWeights& local, const LayeredWeights& global, double mu_prox);

}  // namespace fedsim
