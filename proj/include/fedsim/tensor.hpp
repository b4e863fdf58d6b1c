#pragma once

#include <cstdint>
#include <vector>

#include "fedsim/error.hpp"

namespace fedsim {

struct Shape4 {
    std::int64_t n = 0, c = 0, h = 0, w = 0;

    std::int64_t numel() const { return n * c * h * w; }
    bool operator==(const Shape4&) const = default;
};

// Dense rank-4 array (batch, channel, height, width), row-major, 64-bit floats.
// The single data carrier for images, labels, activations, probes and weights.
class Tensor4 {
public:
    Tensor4() = default;

    Tensor4(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w, double fill = 0.0)
        : dims_{n, c, h, w}, data_(static_cast<std::size_t>(check_dims(n, c, h, w)), fill) {}

    explicit Tensor4(Shape4 s, double fill = 0.0) : Tensor4(s.n, s.c, s.h, s.w, fill) {}

    Tensor4(Shape4 s, std::vector<double> data) : dims_(s), data_(std::move(data)) {
        if (static_cast<std::int64_t>(data_.size()) != s.numel())
            throw ShapeError("Tensor4: data length does not match dims");
    }

    const Shape4& dims() const { return dims_; }
    std::int64_t n() const { return dims_.n; }
    std::int64_t c() const { return dims_.c; }
    std::int64_t h() const { return dims_.h; }
    std::int64_t w() const { return dims_.w; }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

    double& at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) {
        return data_[static_cast<std::size_t>(index(n, c, h, w))];
    }
    double at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) const {
        return data_[static_cast<std::size_t>(index(n, c, h, w))];
    }

    std::int64_t index(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) const {
        return ((n * dims_.c + c) * dims_.h + h) * dims_.w + w;
    }

    bool all_finite() const;

    // Throws NumericError if any element is NaN/Inf.
    void require_finite(const char* what) const;

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    bool operator==(const Tensor4&) const = default;

private:
    static std::int64_t check_dims(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) {
        if (n < 0 || c < 0 || h < 0 || w < 0) throw ShapeError("Tensor4: negative dimension");
        return n * c * h * w;
    }

    Shape4 dims_{};
    std::vector<double> data_;
};

}  // namespace fedsim
