#pragma once

#include <vector>

#include "fedsim/tensor.hpp"

namespace fedsim {

struct AdamHyper {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.95;
    double eps = 1e-8;
};

// First/second moment accumulators, parallel to a flat parameter list.
struct AdamState {
    std::vector<Tensor4> m;
    std::vector<Tensor4> v;
    std::int64_t t = 0;

    static AdamState like(const std::vector<const Tensor4*>& params) {
        AdamState s;
        s.m.reserve(params.size());
        s.v.reserve(params.size());
        for (const Tensor4* p : params) {
            s.m.emplace_back(p->dims());
            s.v.emplace_back(p->dims());
        }
        return s;
    }
};

// One elementwise Adam update with bias correction. Increments state.t.
void adam_step(std::vector<Tensor4*> params, const std::vector<const Tensor4*>& grads,
               AdamState& state, const AdamHyper& hyper);

}  // namespace fedsim
