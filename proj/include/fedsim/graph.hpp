#pragma once

#include <cstdint>
#include <vector>

#include "fedsim/tensor.hpp"

namespace fedsim {

using NodeId = std::int32_t;

enum class OpKind : std::uint8_t {
    kInput,
    kParameter,
    kConv3x3,
    kConv1x1,
    kRelu,
    kMaxPool2,
    kUpsample2,
    kConcatChannels,
    kAffineConst,
    kCrossEntropy,
    kSum,
    kAdd,
    kScale,
    kSqDiffSum,
};

// Reverse-mode autodiff over a fixed layer vocabulary. One Graph per training
// step; nodes are recorded in topological (creation) order and replayed in
// reverse by backward(). A Graph is confined to a single worker.
class Graph {
public:
    // Leaf without gradient tracking (images, labels-as-input).
    NodeId input(Tensor4 x);

    // Leaf with a zero-initialized gradient accumulator.
    NodeId parameter(Tensor4 w);

    // 3x3 convolution, stride 1, zero padding 1, bias included.
    // x: (n,ci,h,w), w: (co,ci,3,3), b: (1,co,1,1) -> (n,co,h,w)
    NodeId conv3x3(NodeId x, NodeId w, NodeId b);

    // 1x1 convolution with bias. w: (co,ci,1,1), b: (1,co,1,1).
    NodeId conv1x1(NodeId x, NodeId w, NodeId b);

    NodeId relu(NodeId x);

    // 2x2 max pooling, stride 2; spatial dims must be even.
    NodeId maxpool2(NodeId x);

    // Nearest-neighbour 2x upsampling; spatial dims must be even.
    NodeId upsample2_nearest(NodeId x);

    // Channel concatenation of two tensors with equal (n,h,w).
    NodeId concat_channels(NodeId a, NodeId b);

    // out = scale * x + shift with compile-time-constant coefficients; the
    // stop-gradient building block for feature alignment.
    NodeId affine_const(NodeId x, double scale, double shift);

    // Mean per-pixel softmax cross-entropy. logits: (n,2,h,w),
    // labels: (n,1,h,w) with values in {0,1}. Returns a scalar node.
    NodeId cross_entropy(NodeId logits, const Tensor4& labels);

    // Sum of all elements -> scalar node.
    NodeId sum(NodeId x);

    // Elementwise sum of two same-shape tensors.
    NodeId add(NodeId a, NodeId b);

    NodeId scale(NodeId x, double k);

    // sum((x - ref)^2) -> scalar node; ref is a constant.
    NodeId sq_diff_sum(NodeId x, const Tensor4& ref);

    // Reverse sweep from a scalar loss node. Parameters not reachable from
    // the loss keep their zero gradients.
    void backward(NodeId loss);

    const Tensor4& value(NodeId id) const { return node(id).value; }

    // Gradient of the last backward() w.r.t. a node; StateError before backward.
    const Tensor4& grad(NodeId id) const;

    std::size_t num_nodes() const { return nodes_.size(); }

private:
    struct Node {
        OpKind kind;
        NodeId in0 = -1, in1 = -1, in2 = -1;
        bool requires_grad = false;
        double k0 = 0.0, k1 = 0.0;
        Tensor4 value;
        Tensor4 grad;
        Tensor4 aux;                       // CE labels / SqDiffSum reference
        std::vector<std::int32_t> argmax;  // MaxPool2 winner indices
    };

    Node& node(NodeId id);
    const Node& node(NodeId id) const;
    NodeId push(Node n);
    void ensure_grad(Node& n);
    void backward_node(Node& n);

    std::vector<Node> nodes_;
    bool ran_backward_ = false;
};

}  // namespace fedsim
