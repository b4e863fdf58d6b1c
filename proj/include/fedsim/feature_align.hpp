#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fedsim/tensor.hpp"

namespace fedsim {

// Scalar bottleneck-feature statistics exchanged at the round barrier.
struct FeatureStats {
    double mean = 0.0;
    double std = 0.0;  // >= 0
    std::int64_t round = 0;
};

// Scalar mean and population std over all elements of the feature map.
std::pair<double, double> compute_feature_stats(const Tensor4& features);

// Global stats: mean over clients of client means, mean over clients of
// client stds. The round tag is set by the caller.
FeatureStats aggregate_feature_stats(const std::vector<std::pair<double, double>>& per_client);

// Z' = global.std * (Z - mu_batch) / (sigma_batch + eps) + global.mean, with
// the batch statistics treated as constants. Plain-tensor version; the
// trainer reproduces it inside the graph via affine_const.
Tensor4 align_features(const Tensor4& features, const FeatureStats& global, double eps);

// The affine coefficients (scale, shift) alignment applies for given batch
// stats; shared between the tensor and graph paths.
std::pair<double, double> align_coefficients(double batch_mean, double batch_std,
                                             const FeatureStats& global, double eps);

std::string feature_stats_to_json(const FeatureStats& stats);
FeatureStats feature_stats_from_json(const std::string& text);

}  // namespace fedsim
