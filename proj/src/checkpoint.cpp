#include "fedsim/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "fedsim/error.hpp"

namespace fedsim {

namespace {

static_assert(sizeof(double) == 8);

void write_le_doubles(std::ofstream& os, const double* p, std::int64_t count) {
    for (std::int64_t i = 0; i < count; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &p[i], 8);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        char buf[8];
        std::memcpy(buf, &bits, 8);
        os.write(buf, 8);
    }
}

void read_le_doubles(std::ifstream& is, double* p, std::int64_t count) {
    for (std::int64_t i = 0; i < count; ++i) {
        char buf[8];
        is.read(buf, 8);
        std::uint64_t bits;
        std::memcpy(&bits, buf, 8);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        std::memcpy(&p[i], &bits, 8);
    }
}

}  // namespace

void save_checkpoint(const LayeredWeights& weights, const std::string& path_stem) {
    nlohmann::json manifest;
    manifest["v"] = 1;
    manifest["layers"] = nlohmann::json::array();
    std::int64_t offset = 0;
    for (const auto& layer : weights.layers) {
        nlohmann::json jl;
        jl["name"] = layer.name;
        jl["params"] = nlohmann::json::array();
        for (const auto& p : layer.params) {
            const Shape4 d = p.value.dims();
            jl["params"].push_back({{"name", p.name},
                                    {"dims", {d.n, d.c, d.h, d.w}},
                                    {"offset", offset}});
            offset += p.value.size() * 8;
        }
        manifest["layers"].push_back(std::move(jl));
    }

    std::ofstream mf(path_stem + ".json");
    if (!mf) throw IoError("cannot write " + path_stem + ".json");
    mf << manifest.dump(2) << "\n";
    if (!mf) throw IoError("write failed: " + path_stem + ".json");

    std::ofstream bf(path_stem + ".bin", std::ios::binary);
    if (!bf) throw IoError("cannot write " + path_stem + ".bin");
    for (const auto& layer : weights.layers)
        for (const auto& p : layer.params) write_le_doubles(bf, p.value.data(), p.value.size());
    if (!bf) throw IoError("write failed: " + path_stem + ".bin");
}

LayeredWeights load_checkpoint(const std::string& path_stem) {
    std::ifstream mf(path_stem + ".json");
    if (!mf) throw IoError("cannot read " + path_stem + ".json");
    nlohmann::json manifest;
    try {
        mf >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("checkpoint manifest parse error: " + std::string(e.what()));
    }
    if (!manifest.contains("v") || manifest["v"].get<int>() != 1)
        throw FormatError("checkpoint manifest: unsupported version");

    std::ifstream bf(path_stem + ".bin", std::ios::binary);
    if (!bf) throw IoError("cannot read " + path_stem + ".bin");

    LayeredWeights out;
    for (const auto& jl : manifest.at("layers")) {
        LayerGroup layer;
        layer.name = jl.at("name").get<std::string>();
        for (const auto& jp : jl.at("params")) {
            const auto dims = jp.at("dims");
            Tensor4 t(dims.at(0).get<std::int64_t>(), dims.at(1).get<std::int64_t>(),
                      dims.at(2).get<std::int64_t>(), dims.at(3).get<std::int64_t>());
            bf.seekg(jp.at("offset").get<std::int64_t>());
            read_le_doubles(bf, t.data(), t.size());
            if (!bf) throw FormatError("checkpoint blob truncated: " + path_stem + ".bin");
            layer.params.push_back({jp.at("name").get<std::string>(), std::move(t)});
        }
        out.layers.push_back(std::move(layer));
    }
    return out;
}

}  // namespace fedsim
