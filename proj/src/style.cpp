#include "fedsim/style.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fedsim/error.hpp"

namespace fedsim {

StyleStats compute_image_stats(const Tensor4& batch, bool scalar_mode) {
    if (batch.empty()) throw ValidationError("compute_image_stats: empty batch");
    const auto [n, c, h, w] = batch.dims();
    StyleStats out;
    out.mean.assign(static_cast<std::size_t>(c), 0.0);
    out.std.assign(static_cast<std::size_t>(c), 0.0);

    if (scalar_mode) {
        double mean = 0.0;
        for (std::int64_t i = 0; i < batch.size(); ++i) mean += batch[i];
        mean /= static_cast<double>(batch.size());
        double var = 0.0;
        for (std::int64_t i = 0; i < batch.size(); ++i) {
            const double d = batch[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(batch.size());
        std::fill(out.mean.begin(), out.mean.end(), mean);
        std::fill(out.std.begin(), out.std.end(), std::sqrt(var));
        return out;
    }

    const std::int64_t hw = h * w;
    const double denom = static_cast<double>(n * hw);
    for (std::int64_t ch = 0; ch < c; ++ch) {
        double mean = 0.0;
        for (std::int64_t in = 0; in < n; ++in) {
            const double* p = batch.data() + (in * c + ch) * hw;
            for (std::int64_t i = 0; i < hw; ++i) mean += p[i];
        }
        mean /= denom;
        double var = 0.0;
        for (std::int64_t in = 0; in < n; ++in) {
            const double* p = batch.data() + (in * c + ch) * hw;
            for (std::int64_t i = 0; i < hw; ++i) {
                const double d = p[i] - mean;
                var += d * d;
            }
        }
        out.mean[static_cast<std::size_t>(ch)] = mean;
        out.std[static_cast<std::size_t>(ch)] = std::sqrt(var / denom);
    }
    return out;
}

std::optional<StyleStats> sample_style(const StylePool& pool, int self_id, Rng& rng) {
    std::vector<const StyleStats*> foreign;
    for (const auto& [id, stats] : pool.entries)
        if (id != self_id) foreign.push_back(&stats);
    if (foreign.empty()) return std::nullopt;
    return *foreign[rng.uniform_int(foreign.size())];
}

Tensor4 adain_transfer(const Tensor4& batch, const StyleStats& source, const StyleStats& target,
                       double eps, bool clamp_output) {
    const auto [n, c, h, w] = batch.dims();
    if (static_cast<std::int64_t>(source.mean.size()) != c ||
        static_cast<std::int64_t>(target.mean.size()) != c)
        throw ShapeError("adain_transfer: channel count mismatch");
    if (eps <= 0.0) throw ValidationError("adain_transfer: eps must be positive");

    Tensor4 out(batch.dims());
    const std::int64_t hw = h * w;
    for (std::int64_t in = 0; in < n; ++in) {
        for (std::int64_t ch = 0; ch < c; ++ch) {
            const auto ci = static_cast<std::size_t>(ch);
            const double scale = target.std[ci] / (source.std[ci] + eps);
            const double shift = target.mean[ci] - scale * source.mean[ci];
            const double* src = batch.data() + (in * c + ch) * hw;
            double* dst = out.data() + (in * c + ch) * hw;
            if (clamp_output) {
                for (std::int64_t i = 0; i < hw; ++i)
                    dst[i] = std::clamp(scale * src[i] + shift, 0.0, 1.0);
            } else {
                for (std::int64_t i = 0; i < hw; ++i) dst[i] = scale * src[i] + shift;
            }
        }
    }
    return out;
}

namespace {

// Quarter-turn rotations and flips over an h x w bit grid.
BinaryMask rotate90(const BinaryMask& m) {
    BinaryMask out;
    out.h = m.w;
    out.w = m.h;
    out.bits.resize(m.bits.size());
    for (std::int64_t y = 0; y < m.h; ++y)
        for (std::int64_t x = 0; x < m.w; ++x)
            out.bits[static_cast<std::size_t>((m.w - 1 - x) * out.w + y)] =
                m.bits[static_cast<std::size_t>(y * m.w + x)];
    return out;
}

BinaryMask hflip(const BinaryMask& m) {
    BinaryMask out = m;
    for (std::int64_t y = 0; y < m.h; ++y)
        for (std::int64_t x = 0; x < m.w; ++x)
            out.bits[static_cast<std::size_t>(y * m.w + x)] =
                m.bits[static_cast<std::size_t>(y * m.w + (m.w - 1 - x))];
    return out;
}

BinaryMask vflip(const BinaryMask& m) {
    BinaryMask out = m;
    for (std::int64_t y = 0; y < m.h; ++y)
        for (std::int64_t x = 0; x < m.w; ++x)
            out.bits[static_cast<std::size_t>(y * m.w + x)] =
                m.bits[static_cast<std::size_t>((m.h - 1 - y) * m.w + x)];
    return out;
}

}  // namespace

BinaryMask make_random_mask(std::int64_t h, std::int64_t w, Rng& rng) {
    if (h < 1 || w < 1) throw ValidationError("make_random_mask: dims must be >= 1");
    const int rot = static_cast<int>(rng.uniform_int(4));
    const int flip = static_cast<int>(rng.uniform_int(3));

    // Build the base half-plane on the pre-rotation dims so odd quarter turns
    // land back on (h, w). Column-major fill keeps the ones a left half-plane
    // for even w and splits the middle column for odd w so the ones count is
    // always floor(h*w/2).
    const std::int64_t bh = (rot % 2 == 0) ? h : w;
    const std::int64_t bw = (rot % 2 == 0) ? w : h;
    BinaryMask m;
    m.h = bh;
    m.w = bw;
    m.bits.assign(static_cast<std::size_t>(bh * bw), 0);
    const std::int64_t ones = (bh * bw) / 2;
    for (std::int64_t x = 0; x < bw; ++x)
        for (std::int64_t y = 0; y < bh; ++y)
            if (x * bh + y < ones) m.bits[static_cast<std::size_t>(y * bw + x)] = 1;

    for (int r = 0; r < rot; ++r) m = rotate90(m);
    if (flip == 1) m = hflip(m);
    else if (flip == 2) m = vflip(m);
    return m;
}

Tensor4 hybridize(const Tensor4& original, const Tensor4& styled, const BinaryMask& mask) {
    if (original.dims() != styled.dims()) throw ShapeError("hybridize: batch dims mismatch");
    const auto [n, c, h, w] = original.dims();
    if (mask.h != h || mask.w != w) throw ShapeError("hybridize: mask dims mismatch");

    Tensor4 out(original.dims());
    const std::int64_t hw = h * w;
    for (std::int64_t i = 0; i < n * c; ++i) {
        const double* po = original.data() + i * hw;
        const double* ps = styled.data() + i * hw;
        double* dst = out.data() + i * hw;
        for (std::int64_t j = 0; j < hw; ++j)
            dst[j] = mask.bits[static_cast<std::size_t>(j)] ? po[j] : ps[j];
    }
    return out;
}

std::string style_pool_to_json(const StylePool& pool) {
    nlohmann::json j;
    j["v"] = 1;
    j["round"] = pool.round;
    nlohmann::json clients = nlohmann::json::object();
    for (const auto& [id, stats] : pool.entries)
        clients[std::to_string(id)] = {{"mean", stats.mean}, {"std", stats.std}};
    j["clients"] = std::move(clients);
    return j.dump();
}

StylePool style_pool_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("style pool parse error: " + std::string(e.what()));
    }
    if (!j.contains("v") || j["v"].get<int>() != 1)
        throw FormatError("style pool: unsupported version");
    StylePool pool;
    pool.round = j.at("round").get<std::int64_t>();
    for (const auto& [key, value] : j.at("clients").items()) {
        StyleStats stats;
        stats.mean = value.at("mean").get<std::vector<double>>();
        stats.std = value.at("std").get<std::vector<double>>();
        pool.entries[std::stoi(key)] = std::move(stats);
    }
    return pool;
}

}  // namespace fedsim
