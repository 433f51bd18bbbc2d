#pragma once

#include <vector>

#include "tatlab/types.hpp"

namespace tatlab {

/// Uniform node-centered grid over a box: `resolution[a]` nodes per axis,
/// boundary nodes included.
struct GridSpec {
    Box box;
    std::vector<int> resolution;

    static constexpr long kMaxCells = 1L << 24;

    GridSpec() = default;
    GridSpec(Box b, std::vector<int> res) : box(std::move(b)), resolution(std::move(res)) {
        if (static_cast<int>(resolution.size()) != box.dim())
            throw ConfigError("grid: resolution entries must match box dimension");
        long total = 1;
        for (int r : resolution) {
            if (r < 8) throw ConfigError("grid: resolution must be >= 8 per axis");
            total *= r;
            if (total > kMaxCells)
                throw ConfigError("grid: total node count exceeds the configured maximum");
        }
    }

    int dim() const { return box.dim(); }

    long total_nodes() const {
        long total = 1;
        for (int r : resolution) total *= r;
        return total;
    }

    double spacing(int axis) const {
        return box.extent(axis) / (resolution[axis] - 1);
    }

    /// Row-major strides: axis 0 varies slowest.
    std::vector<long> strides() const {
        std::vector<long> s(resolution.size());
        long acc = 1;
        for (int a = static_cast<int>(resolution.size()) - 1; a >= 0; --a) {
            s[a] = acc;
            acc *= resolution[a];
        }
        return s;
    }

    Vec node(const std::vector<int>& idx) const {
        Vec p(dim());
        for (int a = 0; a < dim(); ++a) p[a] = box.lo[a] + spacing(a) * idx[a];
        return p;
    }

    std::vector<int> unflatten(long flat) const {
        std::vector<int> idx(resolution.size());
        for (int a = static_cast<int>(resolution.size()) - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % resolution[a]);
            flat /= resolution[a];
        }
        return idx;
    }
};

}  // namespace tatlab
