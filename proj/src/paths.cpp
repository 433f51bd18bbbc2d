#include "tatlab/paths.hpp"

#include <algorithm>
#include <cmath>

namespace tatlab {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr double kGlNode[5] = {-0.906179845938664, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.906179845938664};
constexpr double kGlWeight[5] = {0.23692688505618908, 0.47862867049936647,
                                 0.5688888888888889, 0.47862867049936647,
                                 0.23692688505618908};

Mat jacobian_unchecked(const FieldSpec& field, const Vec& p) {
    if (field.has_jacobian()) return field.jacobian_at(p);
    const int n = static_cast<int>(p.size());
    Mat J(n, n);
    for (int j = 0; j < n; ++j) {
        const double h = std::max(1e-5 * std::max(1.0, std::abs(p[j])), 1e-8);
        Vec pp = p, pm = p;
        pp[j] += h;
        pm[j] -= h;
        J.col(j) = (field.evaluate_unchecked(pp) - field.evaluate_unchecked(pm)) / (2.0 * h);
    }
    return J;
}

}  // namespace

PiecewisePath PiecewisePath::geometric(Mat nodes) {
    PiecewisePath p;
    p.nodes = std::move(nodes);
    p.validate();
    return p;
}

PiecewisePath PiecewisePath::timed(Mat nodes, double total_time) {
    if (total_time <= 0.0) throw ConfigError("path: total time must be > 0");
    PiecewisePath p;
    p.nodes = std::move(nodes);
    const long n = p.nodes.cols();
    std::vector<double> times(n);
    for (long i = 0; i < n; ++i) times[i] = total_time * i / (n - 1);
    p.times = std::move(times);
    p.validate();
    return p;
}

PiecewisePath PiecewisePath::from_trajectory(const Trajectory& traj) {
    PiecewisePath p;
    p.nodes = traj.states;
    p.times = traj.times;
    p.validate();
    return p;
}

double PiecewisePath::segment_dt() const {
    if (geometric_only()) throw ConfigError("path: no time grid attached");
    return (*times)[1] - (*times)[0];
}

PiecewisePath PiecewisePath::reversed() const {
    PiecewisePath r;
    r.nodes = nodes.rowwise().reverse();
    r.times = times;  // same uniform grid, traversed the other way
    return r;
}

void PiecewisePath::validate() const {
    if (nodes.cols() < 2) throw ConfigError("path: need at least two nodes");
    if (!nodes.allFinite()) throw ConfigError("path: non-finite node coordinates");
    if (times) {
        if (static_cast<long>(times->size()) != nodes.cols())
            throw ConfigError("path: time count must match node count");
        const double dt0 = (*times)[1] - (*times)[0];
        if (dt0 <= 0.0) throw ConfigError("path: times must be strictly increasing");
        for (std::size_t i = 1; i < times->size(); ++i) {
            const double d = (*times)[i] - (*times)[i - 1];
            if (d <= 0.0) throw ConfigError("path: times must be strictly increasing");
            if (std::abs(d - dt0) > 1e-9 * std::max(1.0, std::abs(dt0)))
                throw ConfigError("path: time grid must be uniform");
        }
    }
}

double line_integral_solenoidal(const PiecewisePath& path,
                                const std::function<Vec(const Vec&)>& solenoidal) {
    path.validate();
    double total = 0.0;
    for (long s = 0; s + 1 < path.size(); ++s) {
        const Vec p0 = path.node(s);
        const Vec delta = path.node(s + 1) - p0;
        const Vec mid = p0 + 0.5 * delta;
        double seg = 0.0;
        for (int q = 0; q < 5; ++q) {
            const Vec x = mid + (0.5 * kGlNode[q]) * delta;
            seg += kGlWeight[q] * solenoidal(x).dot(delta);
        }
        total += 0.5 * seg;
    }
    return total;
}

double line_integral_solenoidal(const PiecewisePath& path, const FieldSpec& field) {
    if (!field.has_solenoidal())
        throw ConfigError("line integral: field does not declare an analytic solenoidal part");
    return line_integral_solenoidal(path, [&field](const Vec& p) { return field.solenoidal_at(p); });
}

double positivity_margin(const PiecewisePath& path, const FieldSpec& field) {
    if (!field.has_potential() || !field.has_solenoidal())
        throw ConfigError("positivity margin: field must declare analytic potential and solenoidal parts");
    const double drop =
        field.potential_at(path.node(0)) - field.potential_at(path.node(path.size() - 1));
    return drop + line_integral_solenoidal(path, field);
}

ActionValue onsager_machlup_action(const PiecewisePath& path, const FieldSpec& field,
                                   double epsilon) {
    if (epsilon <= 0.0) throw ConfigError("action: epsilon must be > 0");
    path.validate();
    if (path.geometric_only())
        throw ConfigError("action: path must carry a uniform time grid");
    const double dt = path.segment_dt();
    const long n = path.size();

    ActionValue value;
    value.epsilon = epsilon;
    value.per_segment.reserve(n - 1);
    double total = 0.0;
    for (long s = 0; s + 1 < n; ++s) {
        const Vec delta = path.node(s + 1) - path.node(s);
        const Vec mid = path.node(s) + 0.5 * delta;
        const Vec u = delta / dt - field.evaluate_unchecked(mid);
        const double seg = 0.5 / epsilon * u.squaredNorm() * dt;
        value.per_segment.push_back(seg);
        total += seg;
    }
    value.total = total;

    value.node_residual.resize(path.dimension(), n);
    for (long i = 0; i < n; ++i) {
        Vec v;
        if (i == 0)
            v = (path.node(1) - path.node(0)) / dt;
        else if (i == n - 1)
            v = (path.node(n - 1) - path.node(n - 2)) / dt;
        else
            v = (path.node(i + 1) - path.node(i - 1)) / (2.0 * dt);
        value.node_residual.col(i) = v - field.evaluate_unchecked(path.node(i));
    }
    return value;
}

namespace {

struct ActionWorkspace {
    double operator()(const FieldSpec& field, const Mat& nodes, double dt,
                      double epsilon) const {
        double total = 0.0;
        for (long s = 0; s + 1 < nodes.cols(); ++s) {
            const Vec delta = nodes.col(s + 1) - nodes.col(s);
            const Vec mid = nodes.col(s) + 0.5 * delta;
            const Vec u = delta / dt - field.evaluate_unchecked(mid);
            total += 0.5 / epsilon * u.squaredNorm() * dt;
        }
        return total;
    }

    /// Gradient with respect to the interior nodes (columns 1..n-2).
    Mat gradient(const FieldSpec& field, const Mat& nodes, double dt,
                 double epsilon) const {
        const long n = nodes.cols();
        const int d = static_cast<int>(nodes.rows());
        Mat g = Mat::Zero(d, n);
        for (long s = 0; s + 1 < n; ++s) {
            const Vec delta = nodes.col(s + 1) - nodes.col(s);
            const Vec mid = nodes.col(s) + 0.5 * delta;
            const Vec u = delta / dt - field.evaluate_unchecked(mid);
            const Mat J = jacobian_unchecked(field, mid);
            const Vec jt_u = J.transpose() * u;
            // d/dp_s   of segment s: -(1/eps) u - (dt/2eps) J^T u
            // d/dp_s+1 of segment s: +(1/eps) u - (dt/2eps) J^T u
            g.col(s) += (-u - 0.5 * dt * jt_u) / epsilon;
            g.col(s + 1) += (u - 0.5 * dt * jt_u) / epsilon;
        }
        g.col(0).setZero();
        g.col(n - 1).setZero();
        return g;
    }
};

}  // namespace

MinimizeActionResult minimize_action(const FieldSpec& field, double epsilon,
                                     const Vec& start, const Vec& end, int n_nodes,
                                     double total_time, int max_iterations, double tol,
                                     std::optional<Vec> ridge_hint) {
    if (n_nodes < 32) throw ConfigError("minimize_action: need at least 32 nodes");
    if (total_time <= 0.0) throw ConfigError("minimize_action: total time must be > 0");
    if (epsilon <= 0.0) throw ConfigError("minimize_action: epsilon must be > 0");
    if (tol <= 0.0) throw ConfigError("minimize_action: tol must be > 0");
    if ((start - end).norm() < 1e-12)
        throw ConfigError("minimize_action: start and end coincide");
    const int d = field.dimension();
    if (start.size() != d || end.size() != d)
        throw ConfigError("minimize_action: endpoint dimension mismatch");

    const double dt = total_time / (n_nodes - 1);
    Mat nodes(d, n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double s = static_cast<double>(i) / (n_nodes - 1);
        nodes.col(i) = (1.0 - s) * start + s * end;
    }
    // Symmetry-breaking nudge of the interior nodes.
    const Vec chord = (end - start).normalized();
    for (int i = 1; i + 1 < n_nodes; ++i) {
        const double s = static_cast<double>(i) / (n_nodes - 1);
        const double bump = 1e-3 * std::sin(M_PI * s);
        Vec dir = Vec::Zero(d);
        if (ridge_hint && (*ridge_hint - nodes.col(i)).norm() > 1e-9)
            dir = (*ridge_hint - nodes.col(i)).normalized();
        if (dir.norm() < 1e-12) {
            dir = Vec::Zero(d);
            // deterministic transverse direction
            int axis = 0;
            double smallest = std::abs(chord[0]);
            for (int a = 1; a < d; ++a)
                if (std::abs(chord[a]) < smallest) { smallest = std::abs(chord[a]); axis = a; }
            dir[axis] = 1.0;
            dir -= dir.dot(chord) * chord;
            dir.normalize();
        }
        nodes.col(i) += bump * dir;
    }

    const ActionWorkspace action;
    double current = action(field, nodes, dt, epsilon);
    double step = epsilon * dt;  // natural curvature scale of the kinetic term
    bool converged = false;
    int it = 0;
    double last_decrease = 0.0;
    constexpr double kArmijo = 1e-4;
    for (; it < max_iterations; ++it) {
        const Mat g = action.gradient(field, nodes, dt, epsilon);
        const double g2 = g.squaredNorm();
        if (g2 == 0.0) { converged = true; break; }
        double alpha = step * 2.0;
        double trial = current;
        Mat candidate;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            candidate = nodes - alpha * g;
            trial = action(field, candidate, dt, epsilon);
            if (trial <= current - kArmijo * alpha * g2) { accepted = true; break; }
            alpha *= 0.5;
        }
        if (!accepted) { converged = true; last_decrease = 0.0; break; }
        step = alpha;
        nodes = std::move(candidate);
        last_decrease = current - trial;
        current = trial;
        if (last_decrease < tol) { converged = true; ++it; break; }
    }

    MinimizeActionResult result;
    result.path = PiecewisePath::timed(nodes, total_time);
    result.action = onsager_machlup_action(result.path, field, epsilon);
    result.converged = converged;
    result.iterations = it;
    result.last_decrease = last_decrease;
    return result;
}

LPathReport l_path_report(const DoubleWellParams& params) {
    params.validate();
    if (!params.two_well())
        throw ConfigError("l_path_report: wells are degenerate (a^2 - k^2/b <= 0)");
    const double k = params.k;
    const Vec well_b = params.well(-1);  // lower first-price well
    const Vec well_a = params.well(+1);
    const Vec ref = params.reference_point;
    const double d1b = well_b[0] - ref[0], d2b = well_b[1] - ref[1];
    const double d1a = well_a[0] - ref[0], d2a = well_a[1] - ref[1];

    Mat a_nodes(2, 3), b_nodes(2, 3);
    a_nodes.col(0) = well_b;
    a_nodes.col(1) = ref + (Vec(2) << d1b, d2a).finished();
    a_nodes.col(2) = well_a;
    b_nodes.col(0) = well_b;
    b_nodes.col(1) = ref + (Vec(2) << d1a, d2b).finished();
    b_nodes.col(2) = well_a;

    LPathReport report;
    report.params = params;
    report.path_a = PiecewisePath::geometric(a_nodes);
    report.path_b = PiecewisePath::geometric(b_nodes);

    // Exact leg-wise integrals of (k d2, -k d1) along the corner paths.
    report.integral_a_closed = -k * d1b * (d2a - d2b) + k * d2a * (d1a - d1b);
    report.integral_b_closed = k * d2b * (d1a - d1b) - k * d1a * (d2a - d2b);

    const FieldSpec field = make_double_well_field(params);
    report.integral_a_quadrature = line_integral_solenoidal(report.path_a, field);
    report.integral_b_quadrature = line_integral_solenoidal(report.path_b, field);
    report.potential_drop = field.potential_at(well_b) - field.potential_at(well_a);
    report.margin_a = report.potential_drop + report.integral_a_quadrature;
    report.margin_b = report.potential_drop + report.integral_b_quadrature;

    if (std::abs(report.margin_a - report.margin_b) < 1e-12)
        report.favored = "none";
    else
        report.favored = report.margin_b > report.margin_a ? "B" : "A";
    return report;
}

}  // namespace tatlab
