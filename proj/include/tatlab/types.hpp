#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace tatlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

// Error taxonomy mirrors the CLI exit-code contract:
// config 2, numerical 3, io 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Axis-aligned evaluation domain. Fields are total on their box and
/// evaluation outside it is an error, not an extrapolation.
struct Box {
    Vec lo;
    Vec hi;

    Box() = default;
    Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (lo.size() != hi.size())
            throw ConfigError("box: lo/hi dimension mismatch");
        for (Eigen::Index a = 0; a < lo.size(); ++a)
            if (!(lo[a] < hi[a]))
                throw ConfigError("box: requires lo < hi per axis (axis " +
                                  std::to_string(a) + ")");
    }

    int dim() const { return static_cast<int>(lo.size()); }

    double extent(int axis) const { return hi[axis] - lo[axis]; }

    // `slack` is a per-axis fraction of the extent tolerated outside the
    // bounds; interior finite-difference probes need a sliver of room.
    bool contains(const Vec& p, double slack = 0.0) const {
        if (p.size() != lo.size()) return false;
        for (Eigen::Index a = 0; a < lo.size(); ++a) {
            const double pad = slack * extent(static_cast<int>(a));
            if (p[a] < lo[a] - pad || p[a] > hi[a] + pad) return false;
        }
        return true;
    }

    static Box centered(const Vec& center, double half_width) {
        return Box(center.array() - half_width, center.array() + half_width);
    }
};

inline void require_finite(const Vec& v, const std::string& what) {
    if (!v.allFinite())
        throw NumericalError(what + ": non-finite values");
}

}  // namespace tatlab
