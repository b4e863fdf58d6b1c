#include "fedsim/adam.hpp"

#include <cmath>

#include "fedsim/error.hpp"

namespace fedsim {

void adam_step(std::vector<Tensor4*> params, const std::vector<const Tensor4*>& grads,
               AdamState& state, const AdamHyper& hyper) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size())
        throw ShapeError("adam_step: parameter/gradient/state count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i]->dims() != grads[i]->dims() || params[i]->dims() != state.m[i].dims())
            throw ShapeError("adam_step: dims mismatch at parameter " + std::to_string(i));

    state.t += 1;
    const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        double* w = params[i]->data();
        const double* g = grads[i]->data();
        double* m = state.m[i].data();
        double* v = state.v[i].data();
        const std::int64_t sz = params[i]->size();
        for (std::int64_t j = 0; j < sz; ++j) {
            m[j] = hyper.beta1 * m[j] + (1.0 - hyper.beta1) * g[j];
            v[j] = hyper.beta2 * v[j] + (1.0 - hyper.beta2) * g[j] * g[j];
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            w[j] -= hyper.lr * mhat / (std::sqrt(vhat) + hyper.eps);
        }
    }
}

}  // namespace fedsim
