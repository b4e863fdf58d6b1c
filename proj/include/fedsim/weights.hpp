#pragma once

#include <string>
#include <vector>

#include "fedsim/tensor.hpp"

namespace fedsim {

struct NamedTensor {
    std::string name;
    Tensor4 value;
};

// One stratum of the aggregation: an ordered group of parameter tensors.
struct LayerGroup {
    std::string name;
    std::vector<NamedTensor> params;
};

// Model parameters partitioned into L named, ordered layer groups. All clients
// in a federation share the same structure (names, order, dims).
struct LayeredWeights {
    std::vector<LayerGroup> layers;

    std::int64_t num_layers() const { return static_cast<std::int64_t>(layers.size()); }

    std::int64_t param_count() const {
        std::int64_t total = 0;
        for (const auto& l : layers)
            for (const auto& p : l.params) total += p.value.size();
        return total;
    }

    bool same_structure(const LayeredWeights& other) const {
        if (layers.size() != other.layers.size()) return false;
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (layers[i].name != other.layers[i].name) return false;
            if (layers[i].params.size() != other.layers[i].params.size()) return false;
            for (std::size_t j = 0; j < layers[i].params.size(); ++j) {
                if (layers[i].params[j].name != other.layers[i].params[j].name) return false;
                if (layers[i].params[j].value.dims() != other.layers[i].params[j].value.dims())
                    return false;
            }
        }
        return true;
    }

    bool all_finite() const {
        for (const auto& l : layers)
            for (const auto& p : l.params)
                if (!p.value.all_finite()) return false;
        return true;
    }

    // Same structure, all values zero.
    LayeredWeights zeros_like() const {
        LayeredWeights out = *this;
        for (auto& l : out.layers)
            for (auto& p : l.params) p.value.fill(0.0);
        return out;
    }
};

}  // namespace fedsim
