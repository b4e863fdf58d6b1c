#include "fedsim/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "fedsim/error.hpp"

namespace fedsim {

DatasetStats compute_dataset_stats(const std::vector<Tensor4>& images) {
    if (images.empty()) throw ValidationError("compute_dataset_stats: empty dataset");
    const std::int64_t c = images.front().c();
    for (const auto& img : images)
        if (img.c() != c) throw ShapeError("compute_dataset_stats: channel count mismatch");

    DatasetStats out;
    out.mean.assign(static_cast<std::size_t>(c), 0.0);
    out.std.assign(static_cast<std::size_t>(c), 0.0);
    std::vector<double> count(static_cast<std::size_t>(c), 0.0);

    for (const auto& img : images) {
        const auto [n, ic, h, w] = img.dims();
        const std::int64_t hw = h * w;
        for (std::int64_t in = 0; in < n; ++in)
            for (std::int64_t ch = 0; ch < c; ++ch) {
                const double* p = img.data() + (in * c + ch) * hw;
                for (std::int64_t i = 0; i < hw; ++i) out.mean[static_cast<std::size_t>(ch)] += p[i];
                count[static_cast<std::size_t>(ch)] += static_cast<double>(hw);
            }
    }
    for (std::int64_t ch = 0; ch < c; ++ch)
        out.mean[static_cast<std::size_t>(ch)] /= count[static_cast<std::size_t>(ch)];

    for (const auto& img : images) {
        const auto [n, ic, h, w] = img.dims();
        const std::int64_t hw = h * w;
        for (std::int64_t in = 0; in < n; ++in)
            for (std::int64_t ch = 0; ch < c; ++ch) {
                const double* p = img.data() + (in * c + ch) * hw;
                const double m = out.mean[static_cast<std::size_t>(ch)];
                double acc = 0.0;
                for (std::int64_t i = 0; i < hw; ++i) {
                    const double d = p[i] - m;
                    acc += d * d;
                }
                out.std[static_cast<std::size_t>(ch)] += acc;
            }
    }
    for (std::int64_t ch = 0; ch < c; ++ch)
        out.std[static_cast<std::size_t>(ch)] =
            std::sqrt(out.std[static_cast<std::size_t>(ch)] / count[static_cast<std::size_t>(ch)]);
    return out;
}

Tensor4 gen_probe(const DatasetStats& stats, Shape4 shape, Rng& rng) {
    if (static_cast<std::int64_t>(stats.mean.size()) != shape.c)
        throw ShapeError("gen_probe: channel count mismatch");
    Tensor4 out(shape);
    const std::int64_t hw = shape.h * shape.w;
    for (std::int64_t n = 0; n < shape.n; ++n)
        for (std::int64_t ch = 0; ch < shape.c; ++ch) {
            const auto ci = static_cast<std::size_t>(ch);
            double* p = out.data() + (n * shape.c + ch) * hw;
            for (std::int64_t i = 0; i < hw; ++i)
                p[i] = std::clamp(rng.normal(stats.mean[ci], stats.std[ci]), 0.0, 1.0);
        }
    return out;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b, double eps) {
    if (a.size() != b.size()) throw ShapeError("cosine_similarity: length mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb) + eps);
}

SimilarityTensor normalize_similarities(const SimilarityTensor& raw, bool global_norm) {
    const std::int64_t L = raw.num_layers(), M = raw.num_clients();
    if (M < 2) throw ValidationError("normalize_similarities: need at least 2 clients");

    SimilarityTensor out = raw;
    const double uniform = 1.0 / static_cast<double>(M - 1);

    auto layer_sum = [&](std::int64_t l) {
        double sum = 0.0;
        for (std::int64_t m = 0; m < M; ++m)
            for (std::int64_t j = 0; j < M; ++j)
                if (m != j) sum += std::max(0.0, raw.raw(l, m, j));
        return sum;
    };

    double global_sum = 0.0;
    if (global_norm)
        for (std::int64_t l = 0; l < L; ++l) global_sum += layer_sum(l);

    for (std::int64_t l = 0; l < L; ++l) {
        const double sum = global_norm ? global_sum / static_cast<double>(L) : layer_sum(l);
        for (std::int64_t m = 0; m < M; ++m)
            for (std::int64_t j = 0; j < M; ++j) {
                if (m == j) {
                    out.normalized(l, m, j) = 0.0;
                    continue;
                }
                out.normalized(l, m, j) =
                    sum <= 1e-12
                        ? uniform
                        : static_cast<double>(M) * std::max(0.0, raw.raw(l, m, j)) / sum;
            }
    }
    return out;
}

LayeredWeights aggregate_ssa(const std::vector<LayeredWeights>& clients,
                             const SimilarityTensor& s) {
    if (clients.empty()) throw ValidationError("aggregate_ssa: no clients");
    const std::int64_t M = static_cast<std::int64_t>(clients.size());
    const std::int64_t L = clients.front().num_layers();
    for (const auto& c : clients)
        if (!c.same_structure(clients.front()))
            throw ShapeError("aggregate_ssa: client weight structures differ");
    if (s.num_layers() != L || s.num_clients() != M)
        throw ShapeError("aggregate_ssa: similarity tensor dims mismatch");

    LayeredWeights out = clients.front().zeros_like();
    for (std::int64_t l = 0; l < L; ++l) {
        // coefficient of client k = (1 + sum_{m != k} s[l][m][k]) / (2M)
        std::vector<double> coef(static_cast<std::size_t>(M), 0.0);
        for (std::int64_t k = 0; k < M; ++k) {
            double acc = 1.0;
            for (std::int64_t m = 0; m < M; ++m)
                if (m != k) acc += s.normalized(l, m, k);
            coef[static_cast<std::size_t>(k)] = acc / (2.0 * static_cast<double>(M));
        }
        auto& dst = out.layers[static_cast<std::size_t>(l)];
        for (std::size_t p = 0; p < dst.params.size(); ++p) {
            double* d = dst.params[p].value.data();
            const std::int64_t sz = dst.params[p].value.size();
            for (std::int64_t k = 0; k < M; ++k) {
                const double ck = coef[static_cast<std::size_t>(k)];
                const double* src =
                    clients[static_cast<std::size_t>(k)].layers[static_cast<std::size_t>(l)]
                        .params[p].value.data();
                for (std::int64_t i = 0; i < sz; ++i) d[i] += ck * src[i];
            }
        }
    }
    return out;
}

LayeredWeights aggregate_fedavg(const std::vector<LayeredWeights>& clients,
                                const std::vector<std::int64_t>& sample_counts) {
    if (clients.empty()) throw ValidationError("aggregate_fedavg: no clients");
    if (clients.size() != sample_counts.size())
        throw ShapeError("aggregate_fedavg: sample count list size mismatch");
    double total = 0.0;
    for (std::int64_t n : sample_counts) {
        if (n <= 0) throw ValidationError("aggregate_fedavg: sample counts must be positive");
        total += static_cast<double>(n);
    }
    for (const auto& c : clients)
        if (!c.same_structure(clients.front()))
            throw ShapeError("aggregate_fedavg: client weight structures differ");

    LayeredWeights out = clients.front().zeros_like();
    for (std::size_t k = 0; k < clients.size(); ++k) {
        const double wk = static_cast<double>(sample_counts[k]) / total;
        for (std::size_t l = 0; l < out.layers.size(); ++l)
            for (std::size_t p = 0; p < out.layers[l].params.size(); ++p) {
                double* d = out.layers[l].params[p].value.data();
                const double* src = clients[k].layers[l].params[p].value.data();
                const std::int64_t sz = out.layers[l].params[p].value.size();
                for (std::int64_t i = 0; i < sz; ++i) d[i] += wk * src[i];
            }
    }
    return out;
}

double fedprox_penalty(const LayeredWeights& local, const LayeredWeights& global,
                       double mu_prox) {
    if (!local.same_structure(global)) throw ShapeError("fedprox_penalty: structure mismatch");
    if (mu_prox < 0.0) throw ValidationError("fedprox_penalty: mu must be >= 0");
    double acc = 0.0;
    for (std::size_t l = 0; l < local.layers.size(); ++l)
        for (std::size_t p = 0; p < local.layers[l].params.size(); ++p) {
            const auto& a = local.layers[l].params[p].value;
            const auto& b = global.layers[l].params[p].value;
            for (std::int64_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                acc += d * d;
            }
        }
    return 0.5 * mu_prox * acc;
}

}  // namespace fedsim
