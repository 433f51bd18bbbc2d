#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tatlab/polynomial.hpp"
#include "tatlab/types.hpp"

namespace tatlab {

/// An excess-demand vector field A(p, pi) with its current parameter vector
/// bound, an evaluation box, and optional analytic structure: a scalar
/// potential V (with its gradient), a divergence-free part, and a Jacobian.
/// Immutable after construction; all queries are pure and safe to share
/// across workers.
class FieldSpec {
public:
    using VectorFn = std::function<Vec(const Vec&)>;
    using ScalarFn = std::function<double(const Vec&)>;
    using MatrixFn = std::function<Mat(const Vec&)>;
    using Rebinder = std::function<FieldSpec(const Vec&)>;

    struct Setup {
        int dimension = 0;
        Vec parameters;               // may be size 0
        Box domain;
        VectorFn evaluator;           // required
        ScalarFn potential;           // optional; requires potential_gradient
        VectorFn potential_gradient;  // optional
        VectorFn solenoidal;          // optional
        MatrixFn jacobian;            // optional
        std::string family = "custom";
        Rebinder rebind;              // optional; enables with_parameters
    };

    explicit FieldSpec(Setup setup);

    int dimension() const;
    const Vec& parameters() const;
    const Box& domain() const;
    const std::string& family() const;

    bool has_potential() const;
    bool has_solenoidal() const;
    bool has_jacobian() const;

    /// A(p). Checks dimension, domain membership (with a small slack so
    /// boundary finite-difference probes stay legal) and finiteness.
    Vec evaluate(const Vec& p) const;

    /// Raw evaluator without the domain check. Integrators use this for
    /// intermediate stages and police domain exit on committed states.
    Vec evaluate_unchecked(const Vec& p) const;

    double potential_at(const Vec& p) const;
    Vec potential_gradient_at(const Vec& p) const;
    Vec solenoidal_at(const Vec& p) const;
    Mat jacobian_at(const Vec& p) const;

    /// Same family and structure under a new parameter vector.
    FieldSpec with_parameters(const Vec& params) const;

    /// Fraction of each axis extent tolerated outside the box: room for
    /// finite-difference stencils and quadrature midpoints at the walls.
    static constexpr double kDomainSlack = 1e-3;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

enum class JacobianMode { Analytic, FiniteDifference };

Vec eval_excess_demand(const FieldSpec& field, const Vec& p);

/// d A_i / d p_j. Finite-difference mode uses central differences with
/// per-axis step step_rel * max(1, |p_j|), floored at 1e-8.
Mat eval_jacobian(const FieldSpec& field, const Vec& p,
                  JacobianMode mode = JacobianMode::Analytic,
                  double step_rel = 1e-5);

/// Frobenius norm of the antisymmetric Jacobian part (J - J^T)/2.
/// Zero exactly when price responses are symmetric at p.
double asymmetry_norm(const FieldSpec& field, const Vec& p,
                      double step_rel = 1e-5);

/// Two-good double-well family: symmetric quartic potential in the first
/// deviation coordinate, quadratic in the second, plus an antisymmetric
/// rotational coupling of strength k. Everything is expressed in deviations
/// from the reference point.
struct DoubleWellParams {
    double a = 1.0;
    double b = 1.0;
    double k = 0.0;
    Vec reference_point;  // dimension 2; defaults to the origin

    DoubleWellParams() : reference_point(Vec::Zero(2)) {}
    DoubleWellParams(double a_, double b_, double k_)
        : a(a_), b(b_), k(k_), reference_point(Vec::Zero(2)) {}
    DoubleWellParams(double a_, double b_, double k_, Vec ref)
        : a(a_), b(b_), k(k_), reference_point(std::move(ref)) {}

    void validate() const;
    /// a^2 - k^2/b > 0: the two minima exist.
    bool two_well() const { return a * a - k * k / b > 0.0; }
    /// +/- sqrt(a^2 - k^2/b), the well abscissa in deviation coordinates.
    double well_abscissa() const;
    /// Well location in price coordinates; sign picks the branch.
    Vec well(int sign) const;
    Vec saddle() const { return reference_point; }
};

FieldSpec make_double_well_field(const DoubleWellParams& params);
FieldSpec make_double_well_field(const DoubleWellParams& params, const Box& box);

/// Polynomial field: one polynomial per component, optional declared
/// potential and solenoidal polynomial parts. The parameter vector is the
/// concatenation of canonical-order coefficients (components, then
/// potential, then solenoidal), so parametric comparisons rebind
/// coefficients.
FieldSpec make_polynomial_field(std::vector<Polynomial> components,
                                std::optional<Polynomial> potential,
                                std::optional<std::vector<Polynomial>> solenoidal,
                                const Box& box);

/// Deterministic low-discrepancy-ish sample of points inside a box,
/// used for construction-time identity checks and tests.
std::vector<Vec> sample_box(const Box& box, int count, std::uint64_t seed);

}  // namespace tatlab
