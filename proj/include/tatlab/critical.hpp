#pragma once

#include <string>
#include <vector>

#include "tatlab/field.hpp"
#include "tatlab/grid.hpp"

namespace tatlab {

enum class Stability { Stable, Saddle, Unstable, Marginal };

std::string to_string(Stability s);

/// A zero of the excess-demand field with its linearization. The index
/// counts eigenvalues of the Jacobian with positive real part (unstable
/// directions); for gradient fields this coincides with the count of
/// negative Hessian eigenvalues of the potential.
struct CriticalPoint {
    Vec location;
    CVec eigenvalues;  // sorted by (re, im)
    int index = 0;
    Stability stability = Stability::Marginal;
    double residual = 0.0;
};

/// Real parts within this tolerance of zero mark a point marginal and
/// exclude it from stability claims.
inline constexpr double kEigenTieTol = 1e-9;

/// Multistart Newton search over a lattice of starting points. Converged
/// roots are deduplicated (distance < 1e-6) and returned sorted by
/// location. An empty result means no start converged; that is a
/// diagnostic, not an error.
std::vector<CriticalPoint> find_critical_points(const FieldSpec& field, const Box& box,
                                                int multistart_per_axis = 16,
                                                double tol = 1e-10);

/// Classify a location already known to be a critical point
/// (|A(location)| <= 1e-6 required).
CriticalPoint classify(const FieldSpec& field, const Vec& location);

struct BasinMap {
    GridSpec grid;
    /// Per flat node index: index into the registered points of the stable
    /// point reached, or kUnresolved / kEscaped.
    std::vector<int> labels;
    static constexpr int kUnresolved = -1;
    static constexpr int kEscaped = -2;
};

/// Integrate the deterministic flow from every grid node until it lands
/// within capture_radius of a registered stable point, leaves the field
/// domain, or t_max elapses.
BasinMap basin_of_attraction(const FieldSpec& field,
                             const std::vector<CriticalPoint>& points,
                             const GridSpec& grid, double capture_radius,
                             double t_max, double dt = 1e-2);

struct MatchedPair {
    CriticalPoint base;
    CriticalPoint variant;
    double displacement = 0.0;
    bool index_changed = false;
};

struct ScenarioComparison {
    std::vector<CriticalPoint> base_points;
    std::vector<CriticalPoint> variant_points;
    std::vector<MatchedPair> pairs;           // matched by nearest displacement
    std::vector<CriticalPoint> unmatched_base;
    std::vector<CriticalPoint> unmatched_variant;
};

/// Critical-point search under two parameter vectors with nearest-
/// displacement pairing; index changes are flagged per pair.
ScenarioComparison compare_scenarios(const FieldSpec& field, const Vec& params,
                                     const Vec& params_prime, const Box& box,
                                     double tol = 1e-10,
                                     int multistart_per_axis = 16);

}  // namespace tatlab
