#include "tatlab/critical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "tatlab/detail/integrate.hpp"

namespace tatlab {

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Saddle: return "saddle";
        case Stability::Unstable: return "unstable";
        case Stability::Marginal: return "marginal";
    }
    return "unknown";
}

namespace {

Mat jacobian_for(const FieldSpec& field, const Vec& p) {
    return eval_jacobian(field, p,
                         field.has_jacobian() ? JacobianMode::Analytic
                                              : JacobianMode::FiniteDifference);
}

bool lexicographic_less(const Vec& a, const Vec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - 1e-12) return true;
        if (a[i] > b[i] + 1e-12) return false;
    }
    return false;
}

}  // namespace

CriticalPoint classify(const FieldSpec& field, const Vec& location) {
    const Vec a = field.evaluate(location);
    const double residual = a.norm();
    if (residual > 1e-6)
        throw ConfigError("classify: |A| = " + std::to_string(residual) +
                          " at the given location; not a critical point");

    const Mat J = jacobian_for(field, location);
    Eigen::EigenSolver<Mat> solver(J);
    if (solver.info() != Eigen::Success)
        throw NumericalError("classify: eigenvalue computation failed");

    CVec eigs = solver.eigenvalues();
    std::vector<std::complex<double>> sorted(eigs.data(), eigs.data() + eigs.size());
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    for (Eigen::Index i = 0; i < eigs.size(); ++i) eigs[i] = sorted[i];

    CriticalPoint cp;
    cp.location = location;
    cp.eigenvalues = eigs;
    cp.residual = residual;

    bool marginal = false;
    int index = 0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        const double re = eigs[i].real();
        if (std::abs(re) <= kEigenTieTol)
            marginal = true;
        else if (re > 0.0)
            ++index;
    }
    cp.index = index;
    const int n = field.dimension();
    if (marginal)
        cp.stability = Stability::Marginal;
    else if (index == 0)
        cp.stability = Stability::Stable;
    else if (index == n)
        cp.stability = Stability::Unstable;
    else
        cp.stability = Stability::Saddle;
    return cp;
}

std::vector<CriticalPoint> find_critical_points(const FieldSpec& field, const Box& box,
                                                int multistart_per_axis, double tol) {
    if (tol <= 0.0) throw ConfigError("find_critical_points: tol must be > 0");
    if (multistart_per_axis < 2)
        throw ConfigError("find_critical_points: multistart must be >= 2 per axis");
    const int n = field.dimension();
    if (box.dim() != n) throw ConfigError("find_critical_points: box dimension mismatch");

    // Multistart lattice, endpoints included.
    long n_starts = 1;
    for (int a = 0; a < n; ++a) n_starts *= multistart_per_axis;
    constexpr int kMaxIters = 60;

    std::vector<Vec> roots;
    for (long s = 0; s < n_starts; ++s) {
        Vec p(n);
        long rem = s;
        for (int a = n - 1; a >= 0; --a) {
            const int i = static_cast<int>(rem % multistart_per_axis);
            rem /= multistart_per_axis;
            p[a] = box.lo[a] + box.extent(a) * i / (multistart_per_axis - 1);
        }

        bool converged = false;
        for (int it = 0; it < kMaxIters; ++it) {
            Vec a_val;
            try {
                a_val = field.evaluate_unchecked(p);
            } catch (const std::exception&) {
                break;
            }
            if (!a_val.allFinite()) break;
            if (a_val.norm() <= tol) {
                converged = true;
                break;
            }
            Mat J;
            try {
                J = jacobian_for(field, p);
            } catch (const std::exception&) {
                break;
            }
            Eigen::FullPivLU<Mat> lu(J);
            if (!lu.isInvertible()) break;  // abandon this start
            const Vec step = lu.solve(-a_val);
            if (!step.allFinite()) break;
            p += step;
            if (!box.contains(p, 1.0)) break;  // wandered far outside
        }
        if (converged && box.contains(p, FieldSpec::kDomainSlack)) roots.push_back(p);
    }

    // Deduplicate: cluster within 1e-6, keep the smallest-residual member.
    std::sort(roots.begin(), roots.end(), lexicographic_less);
    std::vector<Vec> unique;
    for (const auto& r : roots) {
        bool dup = false;
        for (const auto& u : unique)
            if ((r - u).norm() < 1e-6) { dup = true; break; }
        if (!dup) unique.push_back(r);
    }

    std::vector<CriticalPoint> out;
    out.reserve(unique.size());
    for (const auto& r : unique) out.push_back(classify(field, r));
    std::sort(out.begin(), out.end(), [](const CriticalPoint& x, const CriticalPoint& y) {
        return lexicographic_less(x.location, y.location);
    });
    return out;
}

BasinMap basin_of_attraction(const FieldSpec& field,
                             const std::vector<CriticalPoint>& points,
                             const GridSpec& grid, double capture_radius,
                             double t_max, double dt) {
    if (points.empty())
        throw ConfigError("basin_of_attraction: at least one critical point required");
    if (capture_radius <= 0.0)
        throw ConfigError("basin_of_attraction: capture radius must be > 0");
    if (dt <= 0.0 || t_max <= 0.0)
        throw ConfigError("basin_of_attraction: dt and t_max must be > 0");

    std::vector<int> stable_ids;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].stability == Stability::Stable)
            stable_ids.push_back(static_cast<int>(i));

    BasinMap map;
    map.grid = grid;
    map.labels.assign(grid.total_nodes(), BasinMap::kUnresolved);

    const long total = grid.total_nodes();
    const long steps = static_cast<long>(std::ceil(t_max / dt));
    for (long node = 0; node < total; ++node) {
        Vec p = grid.node(grid.unflatten(node));
        int label = BasinMap::kUnresolved;
        for (long s = 0; s <= steps; ++s) {
            for (int id : stable_ids) {
                if ((p - points[id].location).norm() <= capture_radius) {
                    label = id;
                    break;
                }
            }
            if (label != BasinMap::kUnresolved) break;
            if (!field.domain().contains(p, FieldSpec::kDomainSlack)) {
                label = BasinMap::kEscaped;
                break;
            }
            p = detail::rk4_step(field, p, dt);
            if (!p.allFinite()) {
                label = BasinMap::kEscaped;
                break;
            }
        }
        map.labels[node] = label;
    }
    return map;
}

ScenarioComparison compare_scenarios(const FieldSpec& field, const Vec& params,
                                     const Vec& params_prime, const Box& box,
                                     double tol, int multistart_per_axis) {
    const FieldSpec base = field.with_parameters(params);
    const FieldSpec variant = field.with_parameters(params_prime);

    ScenarioComparison cmp;
    cmp.base_points = find_critical_points(base, box, multistart_per_axis, tol);
    cmp.variant_points = find_critical_points(variant, box, multistart_per_axis, tol);

    std::vector<bool> base_used(cmp.base_points.size(), false);
    std::vector<bool> variant_used(cmp.variant_points.size(), false);

    // Greedy nearest-displacement pairing.
    const std::size_t n_pairs = std::min(cmp.base_points.size(), cmp.variant_points.size());
    for (std::size_t k = 0; k < n_pairs; ++k) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1, vi = -1;
        for (std::size_t i = 0; i < cmp.base_points.size(); ++i) {
            if (base_used[i]) continue;
            for (std::size_t j = 0; j < cmp.variant_points.size(); ++j) {
                if (variant_used[j]) continue;
                const double d =
                    (cmp.base_points[i].location - cmp.variant_points[j].location).norm();
                if (d < best) { best = d; bi = static_cast<int>(i); vi = static_cast<int>(j); }
            }
        }
        base_used[bi] = true;
        variant_used[vi] = true;
        MatchedPair pair;
        pair.base = cmp.base_points[bi];
        pair.variant = cmp.variant_points[vi];
        pair.displacement = best;
        pair.index_changed = pair.base.index != pair.variant.index;
        cmp.pairs.push_back(std::move(pair));
    }
    std::sort(cmp.pairs.begin(), cmp.pairs.end(), [](const MatchedPair& x, const MatchedPair& y) {
        return lexicographic_less(x.base.location, y.base.location);
    });
    for (std::size_t i = 0; i < cmp.base_points.size(); ++i)
        if (!base_used[i]) cmp.unmatched_base.push_back(cmp.base_points[i]);
    for (std::size_t j = 0; j < cmp.variant_points.size(); ++j)
        if (!variant_used[j]) cmp.unmatched_variant.push_back(cmp.variant_points[j]);
    return cmp;
}

}  // namespace tatlab
