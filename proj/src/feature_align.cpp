#include "fedsim/feature_align.hpp"

#include <cmath>

#include <json.hpp>

#include "fedsim/error.hpp"

namespace fedsim {

std::pair<double, double> compute_feature_stats(const Tensor4& features) {
    if (features.empty()) throw ValidationError("compute_feature_stats: empty tensor");
    const double n = static_cast<double>(features.size());
    double mean = 0.0;
    for (std::int64_t i = 0; i < features.size(); ++i) mean += features[i];
    mean /= n;
    double var = 0.0;
    for (std::int64_t i = 0; i < features.size(); ++i) {
        const double d = features[i] - mean;
        var += d * d;
    }
    return {mean, std::sqrt(var / n)};
}

FeatureStats aggregate_feature_stats(const std::vector<std::pair<double, double>>& per_client) {
    if (per_client.empty()) throw ValidationError("aggregate_feature_stats: empty list");
    FeatureStats out;
    for (const auto& [mean, std] : per_client) {
        out.mean += mean;
        out.std += std;
    }
    out.mean /= static_cast<double>(per_client.size());
    out.std /= static_cast<double>(per_client.size());
    return out;
}

std::pair<double, double> align_coefficients(double batch_mean, double batch_std,
                                             const FeatureStats& global, double eps) {
    const double scale = global.std / (batch_std + eps);
    return {scale, global.mean - scale * batch_mean};
}

Tensor4 align_features(const Tensor4& features, const FeatureStats& global, double eps) {
    if (eps <= 0.0) throw ValidationError("align_features: eps must be positive");
    const auto [mean, std] = compute_feature_stats(features);
    const auto [scale, shift] = align_coefficients(mean, std, global, eps);
    Tensor4 out(features.dims());
    for (std::int64_t i = 0; i < features.size(); ++i) out[i] = scale * features[i] + shift;
    return out;
}

std::string feature_stats_to_json(const FeatureStats& stats) {
    nlohmann::json j{{"round", stats.round}, {"mean", stats.mean}, {"std", stats.std}};
    return j.dump();
}

FeatureStats feature_stats_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("feature stats parse error: " + std::string(e.what()));
    }
    FeatureStats out;
    out.round = j.at("round").get<std::int64_t>();
    out.mean = j.at("mean").get<double>();
    out.std = j.at("std").get<double>();
    return out;
}

}  // namespace fedsim
