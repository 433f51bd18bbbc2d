#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tatlab/dynamics.hpp"
#include "tatlab/field.hpp"

namespace tatlab {

/// Polyline in price space, optionally carrying a uniform time grid.
/// Without times the path is purely geometric (line integrals only).
struct PiecewisePath {
    Mat nodes;  // dimension x n_nodes
    std::optional<std::vector<double>> times;

    static PiecewisePath geometric(Mat nodes);
    static PiecewisePath timed(Mat nodes, double total_time);
    static PiecewisePath from_trajectory(const Trajectory& traj);

    long size() const { return nodes.cols(); }
    int dimension() const { return static_cast<int>(nodes.rows()); }
    Vec node(long i) const { return nodes.col(i); }
    bool geometric_only() const { return !times.has_value(); }
    double segment_dt() const;

    PiecewisePath reversed() const;
    void validate() const;
};

/// Composite 5-point Gauss-Legendre quadrature of int dp . Abar along the
/// polyline.
double line_integral_solenoidal(const PiecewisePath& path,
                                const std::function<Vec(const Vec&)>& solenoidal);
double line_integral_solenoidal(const PiecewisePath& path, const FieldSpec& field);

/// V(start) - V(end) + int dp . Abar; classically admissible iff >= 0.
double positivity_margin(const PiecewisePath& path, const FieldSpec& field);

struct ActionValue {
    double total = 0.0;
    std::vector<double> per_segment;
    Mat node_residual;  // K = dp/dt - A per node (central; one-sided ends)
    double epsilon = 0.0;
};

/// Midpoint-rule Onsager-Machlup action under isotropic noise eps * I:
///   total = (1/2eps) * sum_s |dp_s/dt - A(midpoint_s)|^2 dt.
ActionValue onsager_machlup_action(const PiecewisePath& path, const FieldSpec& field,
                                   double epsilon);

struct MinimizeActionResult {
    PiecewisePath path;
    ActionValue action;
    bool converged = false;
    int iterations = 0;
    double last_decrease = 0.0;
};

/// Gradient descent with backtracking line search on the discretized action
/// over interior nodes, endpoints pinned. Starts from the straight line,
/// nudged by 1e-3 toward `ridge_hint` (a saddle) when provided, otherwise by
/// a transverse sinusoidal bump, so symmetric ridges do not stall descent.
MinimizeActionResult minimize_action(const FieldSpec& field, double epsilon,
                                     const Vec& start, const Vec& end, int n_nodes,
                                     double total_time, int max_iterations = 20000,
                                     double tol = 1e-10,
                                     std::optional<Vec> ridge_hint = std::nullopt);

/// The two corner paths between the double-well minima: path A moves the
/// second price first, path B the first price. Closed forms come from exact
/// leg-wise integration of the rotational part; quadrature must agree.
struct LPathReport {
    DoubleWellParams params;
    PiecewisePath path_a;
    PiecewisePath path_b;
    double integral_a_closed = 0.0;
    double integral_b_closed = 0.0;
    double integral_a_quadrature = 0.0;
    double integral_b_quadrature = 0.0;
    double margin_a = 0.0;
    double margin_b = 0.0;
    double potential_drop = 0.0;  // V(start) - V(end), zero for this family
    std::string favored;          // "A", "B" or "none"
};

LPathReport l_path_report(const DoubleWellParams& params);

}  // namespace tatlab
