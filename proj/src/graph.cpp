#include "fedsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fedsim {

namespace {

// Copies (n,c,h,w) into an (n,c,h+2,w+2) zero-padded buffer so the conv inner
// loops run branch-free and contiguous.
std::vector<double> pad1(const Tensor4& x) {
    const std::int64_t n = x.n(), c = x.c(), h = x.h(), w = x.w();
    const std::int64_t ph = h + 2, pw = w + 2;
    std::vector<double> out(static_cast<std::size_t>(n * c * ph * pw), 0.0);
    const double* src = x.data();
    for (std::int64_t i = 0; i < n * c; ++i) {
        const double* sp = src + i * h * w;
        double* dp = out.data() + i * ph * pw + pw + 1;
        for (std::int64_t y = 0; y < h; ++y)
            std::copy(sp + y * w, sp + (y + 1) * w, dp + y * pw);
    }
    return out;
}

}  // namespace

Graph::Node& Graph::node(NodeId id) {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
        throw StateError("Graph: invalid node id " + std::to_string(id));
    return nodes_[static_cast<std::size_t>(id)];
}

const Graph::Node& Graph::node(NodeId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
        throw StateError("Graph: invalid node id " + std::to_string(id));
    return nodes_[static_cast<std::size_t>(id)];
}

NodeId Graph::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

void Graph::ensure_grad(Node& n) {
    if (n.requires_grad && n.grad.dims() != n.value.dims()) n.grad = Tensor4(n.value.dims());
}

NodeId Graph::input(Tensor4 x) {
    Node n;
    n.kind = OpKind::kInput;
    n.value = std::move(x);
    return push(std::move(n));
}

NodeId Graph::parameter(Tensor4 w) {
    Node n;
    n.kind = OpKind::kParameter;
    n.requires_grad = true;
    n.value = std::move(w);
    n.grad = Tensor4(n.value.dims());
    return push(std::move(n));
}

NodeId Graph::conv3x3(NodeId xid, NodeId wid, NodeId bid) {
    const Node& x = node(xid);
    const Node& w = node(wid);
    const Node& b = node(bid);
    const auto [n, ci, h, wd] = x.value.dims();
    const Shape4 ws = w.value.dims();
    if (ws.c != ci || ws.h != 3 || ws.w != 3)
        throw ShapeError("conv3x3: weight dims incompatible with input");
    const std::int64_t co = ws.n;
    if (b.value.dims() != Shape4{1, co, 1, 1}) throw ShapeError("conv3x3: bias dims");
    if (h < 1 || wd < 1) throw ShapeError("conv3x3: empty spatial dims");

    Node out;
    out.kind = OpKind::kConv3x3;
    out.in0 = xid;
    out.in1 = wid;
    out.in2 = bid;
    out.requires_grad = x.requires_grad || w.requires_grad || b.requires_grad;
    out.value = Tensor4(n, co, h, wd);

    const std::vector<double> xp = pad1(x.value);
    const std::int64_t pw = wd + 2;
    const double* wp = w.value.data();
    const double* bp = b.value.data();
    double* op = out.value.data();
    for (std::int64_t in = 0; in < n; ++in) {
        for (std::int64_t oc = 0; oc < co; ++oc) {
            double* oplane = op + (in * co + oc) * h * wd;
            std::fill(oplane, oplane + h * wd, bp[oc]);
            for (std::int64_t ic = 0; ic < ci; ++ic) {
                const double* pplane = xp.data() + (in * ci + ic) * (h + 2) * pw;
                const double* wk = wp + (oc * ci + ic) * 9;
                for (std::int64_t ky = 0; ky < 3; ++ky) {
                    for (std::int64_t kx = 0; kx < 3; ++kx) {
                        const double coef = wk[ky * 3 + kx];
                        for (std::int64_t y = 0; y < h; ++y) {
                            const double* row = pplane + (y + ky) * pw + kx;
                            double* orow = oplane + y * wd;
                            for (std::int64_t xx = 0; xx < wd; ++xx) orow[xx] += coef * row[xx];
                        }
                    }
                }
            }
        }
    }
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::conv1x1(NodeId xid, NodeId wid, NodeId bid) {
    const Node& x = node(xid);
    const Node& w = node(wid);
    const Node& b = node(bid);
    const auto [n, ci, h, wd] = x.value.dims();
    const Shape4 ws = w.value.dims();
    if (ws.c != ci || ws.h != 1 || ws.w != 1)
        throw ShapeError("conv1x1: weight dims incompatible with input");
    const std::int64_t co = ws.n;
    if (b.value.dims() != Shape4{1, co, 1, 1}) throw ShapeError("conv1x1: bias dims");

    Node out;
    out.kind = OpKind::kConv1x1;
    out.in0 = xid;
    out.in1 = wid;
    out.in2 = bid;
    out.requires_grad = x.requires_grad || w.requires_grad || b.requires_grad;
    out.value = Tensor4(n, co, h, wd);

    const std::int64_t hw = h * wd;
    const double* xpv = x.value.data();
    const double* wp = w.value.data();
    const double* bp = b.value.data();
    double* op = out.value.data();
    for (std::int64_t in = 0; in < n; ++in) {
        for (std::int64_t oc = 0; oc < co; ++oc) {
            double* oplane = op + (in * co + oc) * hw;
            std::fill(oplane, oplane + hw, bp[oc]);
            for (std::int64_t ic = 0; ic < ci; ++ic) {
                const double coef = wp[oc * ci + ic];
                const double* xplane = xpv + (in * ci + ic) * hw;
                for (std::int64_t i = 0; i < hw; ++i) oplane[i] += coef * xplane[i];
            }
        }
    }
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::relu(NodeId xid) {
    const Node& x = node(xid);
    Node out;
    out.kind = OpKind::kRelu;
    out.in0 = xid;
    out.requires_grad = x.requires_grad;
    out.value = Tensor4(x.value.dims());
    const double* xp = x.value.data();
    double* op = out.value.data();
    const std::int64_t sz = x.value.size();
    for (std::int64_t i = 0; i < sz; ++i) op[i] = xp[i] > 0.0 ? xp[i] : 0.0;
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::maxpool2(NodeId xid) {
    const Node& x = node(xid);
    const auto [n, c, h, w] = x.value.dims();
    if (h % 2 != 0 || w % 2 != 0) throw ShapeError("maxpool2: spatial dims must be even");
    const std::int64_t oh = h / 2, ow = w / 2;

    Node out;
    out.kind = OpKind::kMaxPool2;
    out.in0 = xid;
    out.requires_grad = x.requires_grad;
    out.value = Tensor4(n, c, oh, ow);
    out.argmax.resize(static_cast<std::size_t>(n * c * oh * ow));

    const double* xp = x.value.data();
    double* op = out.value.data();
    std::int32_t* am = out.argmax.data();
    for (std::int64_t i = 0; i < n * c; ++i) {
        const double* plane = xp + i * h * w;
        double* oplane = op + i * oh * ow;
        std::int32_t* aplane = am + i * oh * ow;
        for (std::int64_t y = 0; y < oh; ++y) {
            for (std::int64_t xx = 0; xx < ow; ++xx) {
                const std::int64_t base = (2 * y) * w + 2 * xx;
                std::int64_t best = base;
                double bv = plane[base];
                const std::int64_t cand[3] = {base + 1, base + w, base + w + 1};
                for (std::int64_t k : cand)
                    if (plane[k] > bv) {
                        bv = plane[k];
                        best = k;
                    }
                oplane[y * ow + xx] = bv;
                aplane[y * ow + xx] = static_cast<std::int32_t>(best);
            }
        }
    }
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::upsample2_nearest(NodeId xid) {
    const Node& x = node(xid);
    const auto [n, c, h, w] = x.value.dims();
    if (h % 2 != 0 || w % 2 != 0) throw ShapeError("upsample2_nearest: spatial dims must be even");

    Node out;
    out.kind = OpKind::kUpsample2;
    out.in0 = xid;
    out.requires_grad = x.requires_grad;
    out.value = Tensor4(n, c, 2 * h, 2 * w);
    const double* xp = x.value.data();
    double* op = out.value.data();
    for (std::int64_t i = 0; i < n * c; ++i) {
        const double* plane = xp + i * h * w;
        double* oplane = op + i * 4 * h * w;
        for (std::int64_t y = 0; y < h; ++y) {
            double* r0 = oplane + (2 * y) * 2 * w;
            double* r1 = r0 + 2 * w;
            for (std::int64_t xx = 0; xx < w; ++xx) {
                const double v = plane[y * w + xx];
                r0[2 * xx] = v;
                r0[2 * xx + 1] = v;
                r1[2 * xx] = v;
                r1[2 * xx + 1] = v;
            }
        }
    }
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::concat_channels(NodeId aid, NodeId bid) {
    const Node& a = node(aid);
    const Node& b = node(bid);
    const Shape4 da = a.value.dims(), db = b.value.dims();
    if (da.n != db.n || da.h != db.h || da.w != db.w)
        throw ShapeError("concat_channels: (n,h,w) mismatch");

    Node out;
    out.kind = OpKind::kConcatChannels;
    out.in0 = aid;
    out.in1 = bid;
    out.requires_grad = a.requires_grad || b.requires_grad;
    out.value = Tensor4(da.n, da.c + db.c, da.h, da.w);
    const std::int64_t hw = da.h * da.w;
    for (std::int64_t in = 0; in < da.n; ++in) {
        double* dst = out.value.data() + in * (da.c + db.c) * hw;
        const double* pa = a.value.data() + in * da.c * hw;
        const double* pb = b.value.data() + in * db.c * hw;
        std::copy(pa, pa + da.c * hw, dst);
        std::copy(pb, pb + db.c * hw, dst + da.c * hw);
    }
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::affine_const(NodeId xid, double scale, double shift) {
    const Node& x = node(xid);
    Node out;
    out.kind = OpKind::kAffineConst;
    out.in0 = xid;
    out.requires_grad = x.requires_grad;
    out.k0 = scale;
    out.k1 = shift;
    out.value = Tensor4(x.value.dims());
    const double* xp = x.value.data();
    double* op = out.value.data();
    const std::int64_t sz = x.value.size();
    for (std::int64_t i = 0; i < sz; ++i) op[i] = scale * xp[i] + shift;
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::cross_entropy(NodeId lid, const Tensor4& labels) {
    const Node& l = node(lid);
    const auto [n, c, h, w] = l.value.dims();
    if (c != 2) throw ShapeError("cross_entropy: logits must have 2 channels");
    if (labels.dims() != Shape4{n, 1, h, w})
        throw ShapeError("cross_entropy: label dims must be (n,1,h,w) matching logits");
    for (std::int64_t i = 0; i < labels.size(); ++i)
        if (labels[i] != 0.0 && labels[i] != 1.0)
            throw ValidationError("cross_entropy: labels must be exactly 0 or 1");

    Node out;
    out.kind = OpKind::kCrossEntropy;
    out.in0 = lid;
    out.requires_grad = l.requires_grad;
    out.aux = labels;
    out.value = Tensor4(1, 1, 1, 1);

    const std::int64_t hw = h * w;
    const double* lp = l.value.data();
    double total = 0.0;
    for (std::int64_t in = 0; in < n; ++in) {
        const double* l0 = lp + (in * 2) * hw;
        const double* l1 = l0 + hw;
        const double* lab = labels.data() + in * hw;
        for (std::int64_t i = 0; i < hw; ++i) {
            const double m = std::max(l0[i], l1[i]);
            const double log_z = m + std::log(std::exp(l0[i] - m) + std::exp(l1[i] - m));
            total += log_z - (lab[i] == 1.0 ? l1[i] : l0[i]);
        }
    }
    out.value[0] = total / static_cast<double>(n * hw);
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::sum(NodeId xid) {
    const Node& x = node(xid);
    Node out;
    out.kind = OpKind::kSum;
    out.in0 = xid;
    out.requires_grad = x.requires_grad;
    out.value = Tensor4(1, 1, 1, 1);
    double acc = 0.0;
    const double* xp = x.value.data();
    for (std::int64_t i = 0; i < x.value.size(); ++i) acc += xp[i];
    out.value[0] = acc;
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::add(NodeId aid, NodeId bid) {
    const Node& a = node(aid);
    const Node& b = node(bid);
    if (a.value.dims() != b.value.dims()) throw ShapeError("add: dims mismatch");
    Node out;
    out.kind = OpKind::kAdd;
    out.in0 = aid;
    out.in1 = bid;
    out.requires_grad = a.requires_grad || b.requires_grad;
    out.value = Tensor4(a.value.dims());
    for (std::int64_t i = 0; i < out.value.size(); ++i) out.value[i] = a.value[i] + b.value[i];
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::scale(NodeId xid, double k) {
    const Node& x = node(xid);
    Node out;
    out.kind = OpKind::kScale;
    out.in0 = xid;
    out.requires_grad = x.requires_grad;
    out.k0 = k;
    out.value = Tensor4(x.value.dims());
    for (std::int64_t i = 0; i < out.value.size(); ++i) out.value[i] = k * x.value[i];
    ensure_grad(out);
    return push(std::move(out));
}

NodeId Graph::sq_diff_sum(NodeId xid, const Tensor4& ref) {
    const Node& x = node(xid);
    if (x.value.dims() != ref.dims()) throw ShapeError("sq_diff_sum: dims mismatch");
    Node out;
    out.kind = OpKind::kSqDiffSum;
    out.in0 = xid;
    out.requires_grad = x.requires_grad;
    out.aux = ref;
    out.value = Tensor4(1, 1, 1, 1);
    double acc = 0.0;
    for (std::int64_t i = 0; i < x.value.size(); ++i) {
        const double d = x.value[i] - ref[i];
        acc += d * d;
    }
    out.value[0] = acc;
    ensure_grad(out);
    return push(std::move(out));
}

const Tensor4& Graph::grad(NodeId id) const {
    if (!ran_backward_) throw StateError("Graph::grad: backward has not run");
    const Node& n = node(id);
    if (!n.requires_grad) throw StateError("Graph::grad: node does not track gradients");
    return n.grad;
}

void Graph::backward(NodeId lossid) {
    if (ran_backward_) throw StateError("backward: already ran on this graph");
    Node& loss = node(lossid);
    if (loss.value.size() != 1) throw StateError("backward: loss must be scalar");
    if (!loss.requires_grad)
        throw StateError("backward: loss does not depend on any parameter");
    loss.grad[0] = 1.0;
    for (std::int32_t i = lossid; i >= 0; --i) {
        Node& n = nodes_[static_cast<std::size_t>(i)];
        if (n.requires_grad) backward_node(n);
    }
    ran_backward_ = true;
}

void Graph::backward_node(Node& n) {
    switch (n.kind) {
        case OpKind::kInput:
        case OpKind::kParameter:
            return;
        case OpKind::kConv3x3: {
            Node& x = node(n.in0);
            Node& w = node(n.in1);
            Node& b = node(n.in2);
            const auto [bn, ci, h, wd] = x.value.dims();
            const std::int64_t co = w.value.dims().n;
            const std::int64_t pw = wd + 2, ph = h + 2;
            const std::vector<double> xp = pad1(x.value);
            std::vector<double> gpad;
            if (x.requires_grad) gpad.assign(static_cast<std::size_t>(bn * ci * ph * pw), 0.0);
            const double* gop = n.grad.data();
            for (std::int64_t in = 0; in < bn; ++in) {
                for (std::int64_t oc = 0; oc < co; ++oc) {
                    const double* gplane = gop + (in * co + oc) * h * wd;
                    if (b.requires_grad) {
                        double acc = 0.0;
                        for (std::int64_t i = 0; i < h * wd; ++i) acc += gplane[i];
                        b.grad[oc] += acc;
                    }
                    for (std::int64_t ic = 0; ic < ci; ++ic) {
                        const double* pplane = xp.data() + (in * ci + ic) * ph * pw;
                        double* gw = w.requires_grad
                                         ? w.grad.data() + (oc * ci + ic) * 9
                                         : nullptr;
                        double* gpplane =
                            x.requires_grad ? gpad.data() + (in * ci + ic) * ph * pw : nullptr;
                        const double* wk = w.value.data() + (oc * ci + ic) * 9;
                        for (std::int64_t ky = 0; ky < 3; ++ky) {
                            for (std::int64_t kx = 0; kx < 3; ++kx) {
                                const double coef = wk[ky * 3 + kx];
                                double acc = 0.0;
                                for (std::int64_t y = 0; y < h; ++y) {
                                    const double* grow = gplane + y * wd;
                                    const double* prow = pplane + (y + ky) * pw + kx;
                                    if (gpplane) {
                                        double* gprow = gpplane + (y + ky) * pw + kx;
                                        for (std::int64_t xx = 0; xx < wd; ++xx) {
                                            acc += grow[xx] * prow[xx];
                                            gprow[xx] += coef * grow[xx];
                                        }
                                    } else {
                                        for (std::int64_t xx = 0; xx < wd; ++xx)
                                            acc += grow[xx] * prow[xx];
                                    }
                                }
                                if (gw) gw[ky * 3 + kx] += acc;
                            }
                        }
                    }
                }
            }
            if (x.requires_grad) {
                for (std::int64_t i = 0; i < bn * ci; ++i) {
                    const double* gp = gpad.data() + i * ph * pw + pw + 1;
                    double* gx = x.grad.data() + i * h * wd;
                    for (std::int64_t y = 0; y < h; ++y)
                        for (std::int64_t xx = 0; xx < wd; ++xx) gx[y * wd + xx] += gp[y * pw + xx];
                }
            }
            return;
        }
        case OpKind::kConv1x1: {
            Node& x = node(n.in0);
            Node& w = node(n.in1);
            Node& b = node(n.in2);
            const auto [bn, ci, h, wd] = x.value.dims();
            const std::int64_t co = w.value.dims().n;
            const std::int64_t hw = h * wd;
            const double* gop = n.grad.data();
            for (std::int64_t in = 0; in < bn; ++in) {
                for (std::int64_t oc = 0; oc < co; ++oc) {
                    const double* gplane = gop + (in * co + oc) * hw;
                    if (b.requires_grad) {
                        double acc = 0.0;
                        for (std::int64_t i = 0; i < hw; ++i) acc += gplane[i];
                        b.grad[oc] += acc;
                    }
                    for (std::int64_t ic = 0; ic < ci; ++ic) {
                        const double* xplane = x.value.data() + (in * ci + ic) * hw;
                        if (w.requires_grad) {
                            double acc = 0.0;
                            for (std::int64_t i = 0; i < hw; ++i) acc += gplane[i] * xplane[i];
                            w.grad[oc * ci + ic] += acc;
                        }
                        if (x.requires_grad) {
                            const double coef = w.value[oc * ci + ic];
                            double* gx = x.grad.data() + (in * ci + ic) * hw;
                            for (std::int64_t i = 0; i < hw; ++i) gx[i] += coef * gplane[i];
                        }
                    }
                }
            }
            return;
        }
        case OpKind::kRelu: {
            Node& x = node(n.in0);
            if (!x.requires_grad) return;
            const double* xp = x.value.data();
            const double* gp = n.grad.data();
            double* gx = x.grad.data();
            for (std::int64_t i = 0; i < x.value.size(); ++i)
                if (xp[i] > 0.0) gx[i] += gp[i];
            return;
        }
        case OpKind::kMaxPool2: {
            Node& x = node(n.in0);
            if (!x.requires_grad) return;
            const auto [bn, c, h, w] = x.value.dims();
            const std::int64_t ohw = (h / 2) * (w / 2);
            for (std::int64_t i = 0; i < bn * c; ++i) {
                double* gx = x.grad.data() + i * h * w;
                const double* gp = n.grad.data() + i * ohw;
                const std::int32_t* am = n.argmax.data() + i * ohw;
                for (std::int64_t j = 0; j < ohw; ++j) gx[am[j]] += gp[j];
            }
            return;
        }
        case OpKind::kUpsample2: {
            Node& x = node(n.in0);
            if (!x.requires_grad) return;
            const auto [bn, c, h, w] = x.value.dims();
            for (std::int64_t i = 0; i < bn * c; ++i) {
                double* gx = x.grad.data() + i * h * w;
                const double* gp = n.grad.data() + i * 4 * h * w;
                for (std::int64_t y = 0; y < h; ++y) {
                    const double* r0 = gp + (2 * y) * 2 * w;
                    const double* r1 = r0 + 2 * w;
                    for (std::int64_t xx = 0; xx < w; ++xx)
                        gx[y * w + xx] += r0[2 * xx] + r0[2 * xx + 1] + r1[2 * xx] + r1[2 * xx + 1];
                }
            }
            return;
        }
        case OpKind::kConcatChannels: {
            Node& a = node(n.in0);
            Node& b = node(n.in1);
            const Shape4 da = a.value.dims(), db = b.value.dims();
            const std::int64_t hw = da.h * da.w;
            for (std::int64_t in = 0; in < da.n; ++in) {
                const double* gp = n.grad.data() + in * (da.c + db.c) * hw;
                if (a.requires_grad) {
                    double* ga = a.grad.data() + in * da.c * hw;
                    for (std::int64_t i = 0; i < da.c * hw; ++i) ga[i] += gp[i];
                }
                if (b.requires_grad) {
                    double* gb = b.grad.data() + in * db.c * hw;
                    const double* gpb = gp + da.c * hw;
                    for (std::int64_t i = 0; i < db.c * hw; ++i) gb[i] += gpb[i];
                }
            }
            return;
        }
        case OpKind::kAffineConst: {
            Node& x = node(n.in0);
            if (!x.requires_grad) return;
            const double* gp = n.grad.data();
            double* gx = x.grad.data();
            for (std::int64_t i = 0; i < x.value.size(); ++i) gx[i] += n.k0 * gp[i];
            return;
        }
        case OpKind::kCrossEntropy: {
            Node& l = node(n.in0);
            if (!l.requires_grad) return;
            const auto [bn, c, h, w] = l.value.dims();
            const std::int64_t hw = h * w;
            const double g = n.grad[0] / static_cast<double>(bn * hw);
            const double* lp = l.value.data();
            for (std::int64_t in = 0; in < bn; ++in) {
                const double* l0 = lp + (in * 2) * hw;
                const double* l1 = l0 + hw;
                const double* lab = n.aux.data() + in * hw;
                double* g0 = l.grad.data() + (in * 2) * hw;
                double* g1 = g0 + hw;
                for (std::int64_t i = 0; i < hw; ++i) {
                    const double m = std::max(l0[i], l1[i]);
                    const double e0 = std::exp(l0[i] - m), e1 = std::exp(l1[i] - m);
                    const double z = e0 + e1;
                    const double p0 = e0 / z, p1 = e1 / z;
                    const bool one = lab[i] == 1.0;
                    g0[i] += g * (p0 - (one ? 0.0 : 1.0));
                    g1[i] += g * (p1 - (one ? 1.0 : 0.0));
                }
            }
            return;
        }
        case OpKind::kSum: {
            Node& x = node(n.in0);
            if (!x.requires_grad) return;
            const double g = n.grad[0];
            double* gx = x.grad.data();
            for (std::int64_t i = 0; i < x.value.size(); ++i) gx[i] += g;
            return;
        }
        case OpKind::kAdd: {
            Node& a = node(n.in0);
            Node& b = node(n.in1);
            const double* gp = n.grad.data();
            if (a.requires_grad) {
                double* ga = a.grad.data();
                for (std::int64_t i = 0; i < a.value.size(); ++i) ga[i] += gp[i];
            }
            if (b.requires_grad) {
                double* gb = b.grad.data();
                for (std::int64_t i = 0; i < b.value.size(); ++i) gb[i] += gp[i];
            }
            return;
        }
        case OpKind::kScale: {
            Node& x = node(n.in0);
            if (!x.requires_grad) return;
            const double* gp = n.grad.data();
            double* gx = x.grad.data();
            for (std::int64_t i = 0; i < x.value.size(); ++i) gx[i] += n.k0 * gp[i];
            return;
        }
        case OpKind::kSqDiffSum: {
            Node& x = node(n.in0);
            if (!x.requires_grad) return;
            const double g = n.grad[0];
            double* gx = x.grad.data();
            for (std::int64_t i = 0; i < x.value.size(); ++i)
                gx[i] += 2.0 * g * (x.value[i] - n.aux[i]);
            return;
        }
    }
}

}  // namespace fedsim
