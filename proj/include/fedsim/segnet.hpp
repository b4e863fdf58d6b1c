#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fedsim/adam.hpp"
#include "fedsim/aggregate.hpp"
#include "fedsim/feature_align.hpp"
#include "fedsim/graph.hpp"
#include "fedsim/style.hpp"
#include "fedsim/synth_data.hpp"
#include "fedsim/weights.hpp"

namespace fedsim {

// Depth-2 encoder-decoder with skip connections; one 3x3 conv + relu per
// stage and a 1x1 classification head. Layer partition (the unit of
// stratified aggregation): enc1, enc2, bottleneck, dec2, dec1, head.
struct SegNetConfig {
    std::int64_t in_channels = 3;
    std::int64_t base_channels = 8;
    std::int64_t depth = 2;  // down/up stages; the architecture is fixed at 2
    std::int64_t classes = 2;
};

inline constexpr std::int64_t kSegNetLayers = 6;

// He-initialized weights (fan-in scaled normal, zero biases) in the layer
// partition above.
LayeredWeights build_segnet_weights(const SegNetConfig& config, Rng& rng);

// Closed-form parameter count for a given config.
std::int64_t segnet_param_count(const SegNetConfig& config);

// Flat parameter views in (layer, param) order; the canonical ordering shared
// with AdamState.
std::vector<Tensor4*> flat_params(LayeredWeights& w);
std::vector<const Tensor4*> flat_params(const LayeredWeights& w);

struct SegForward {
    NodeId logits = -1;
    NodeId bottleneck = -1;  // post-relu, before feature alignment
    std::vector<NodeId> params;
};

// Records the full forward pass in g. With afa present, the bottleneck
// activation is re-normalized toward the global stats (coefficients computed
// from the batch's own bottleneck statistics, no gradient through them).
// With trainable=false weights are registered as plain inputs.
SegForward segnet_forward(Graph& g, const LayeredWeights& weights, const Tensor4& batch,
                          const std::optional<FeatureStats>& afa, double eps,
                          bool trainable);

// Convenience value-only forward: (logits, pre-alignment bottleneck).
std::pair<Tensor4, Tensor4> segnet_infer(const LayeredWeights& weights, const Tensor4& batch,
                                         const std::optional<FeatureStats>& afa = std::nullopt,
                                         double eps = 1e-5);

// Activations at the end of every layer group for a probe input, style and
// alignment hooks disabled.
std::vector<Tensor4> segnet_stage_activations(const LayeredWeights& weights,
                                              const Tensor4& probe);

// Flattened activation at layer group l (1-based, l in [1, kSegNetLayers]).
std::vector<double> layer_features(const LayeredWeights& weights, const Tensor4& probe,
                                   std::int64_t l);

// Per-pixel argmax over the two classes; exact ties resolve to class 0.
Tensor4 predict(const LayeredWeights& weights, const Tensor4& batch);

// One simulated client.
struct ClientState {
    int id = 0;
    LayeredWeights weights;
    AdamState opt;
    std::vector<SamplePair> train;
    std::vector<SamplePair> test;
    DatasetStats data_stats;
    StyleStats last_style;
    std::int64_t sample_count = 0;
};

struct LocalTrainOptions {
    AdamHyper adam;
    std::int64_t batch_size = 4;
    double mu_prox = 0.0;  // > 0 adds the proximal term toward the entry weights
    bool cse = false;
    double eps = 1e-5;
    bool scalar_style_stats = false;
    std::uint64_t rng_seed = 0;  // derived (seed, client, round) stream
};

struct LocalTrainResult {
    StyleStats style;                        // mean of per-batch image stats
    std::pair<double, double> feature_stats; // mean of per-batch bottleneck stats
    double mean_loss = 0.0;
};

// Local update epochs: per batch, optionally build the hybrid styled input
// (when opt.cse and the pool holds a foreign entry), forward with optional
// alignment, cross-entropy (+ proximal term), backward, Adam step. Returns
// the round's averaged style and bottleneck statistics for the barrier.
LocalTrainResult train_local(ClientState& state, const StylePool& pool,
                             const std::optional<FeatureStats>& afa, std::int64_t epochs,
                             const LocalTrainOptions& opt);

}  // namespace fedsim
