#include "tatlab/field.hpp"

#include <cmath>

#include "tatlab/rng.hpp"

namespace tatlab {

struct FieldSpec::Impl {
    Setup setup;
};

namespace {

Mat finite_difference_jacobian(const FieldSpec::VectorFn& f, const Vec& p,
                               double step_rel) {
    const int n = static_cast<int>(p.size());
    Mat J(n, n);
    for (int j = 0; j < n; ++j) {
        const double h = std::max(step_rel * std::max(1.0, std::abs(p[j])), 1e-8);
        Vec pp = p, pm = p;
        pp[j] += h;
        pm[j] -= h;
        J.col(j) = (f(pp) - f(pm)) / (2.0 * h);
    }
    return J;
}

double finite_difference_divergence(const FieldSpec::VectorFn& f, const Vec& p) {
    const int n = static_cast<int>(p.size());
    double div = 0.0;
    for (int j = 0; j < n; ++j) {
        const double h = std::max(1e-5 * std::max(1.0, std::abs(p[j])), 1e-8);
        Vec pp = p, pm = p;
        pp[j] += h;
        pm[j] -= h;
        div += (f(pp)[j] - f(pm)[j]) / (2.0 * h);
    }
    return div;
}

}  // namespace

std::vector<Vec> sample_box(const Box& box, int count, std::uint64_t seed) {
    std::vector<Vec> points;
    points.reserve(count);
    std::uint64_t s = seed;
    const int n = box.dim();
    for (int i = 0; i < count; ++i) {
        Vec p(n);
        for (int a = 0; a < n; ++a) {
            const double u = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
            // keep samples slightly inside so FD probes stay in-domain
            p[a] = box.lo[a] + (0.02 + 0.96 * u) * box.extent(a);
        }
        points.push_back(std::move(p));
    }
    return points;
}

FieldSpec::FieldSpec(Setup setup) {
    if (setup.dimension < 1)
        throw ConfigError("field: dimension must be >= 1");
    if (!setup.evaluator)
        throw ConfigError("field: evaluator is required");
    if (setup.domain.dim() != setup.dimension)
        throw ConfigError("field: domain box dimension mismatch");
    if (static_cast<bool>(setup.potential) != static_cast<bool>(setup.potential_gradient))
        throw ConfigError("field: potential and potential_gradient must be declared together");
    if (!setup.parameters.allFinite())
        throw ConfigError("field: non-finite parameter vector");

    // Construction-time identity checks at sampled points.
    const auto samples = sample_box(setup.domain, 32, 0x7a71ab5eedULL);
    for (const auto& p : samples) {
        const Vec a = setup.evaluator(p);
        if (!a.allFinite())
            throw NumericalError("field: evaluator returned non-finite values at a sample point");
        if (a.size() != setup.dimension)
            throw ConfigError("field: evaluator output dimension mismatch");
        if (setup.potential && setup.solenoidal) {
            const Vec recon = -setup.potential_gradient(p) + setup.solenoidal(p);
            if ((a - recon).cwiseAbs().maxCoeff() > 1e-10)
                throw ConfigError(
                    "field: evaluator does not equal -grad(potential) + solenoidal "
                    "within 1e-10 at sampled points");
        }
        if (setup.solenoidal) {
            if (std::abs(finite_difference_divergence(setup.solenoidal, p)) > 1e-8)
                throw ConfigError("field: declared solenoidal part has divergence > 1e-8");
        }
    }
    if (setup.jacobian) {
        for (int i = 0; i < 4; ++i) {
            const Vec& p = samples[i];
            const Mat ja = setup.jacobian(p);
            const Mat jf = finite_difference_jacobian(setup.evaluator, p, 1e-5);
            const double scale = std::max(1.0, ja.cwiseAbs().maxCoeff());
            if ((ja - jf).cwiseAbs().maxCoeff() > 1e-4 * scale)
                throw ConfigError("field: analytic Jacobian disagrees with finite differences");
        }
    }

    impl_ = std::make_shared<const Impl>(Impl{std::move(setup)});
}

int FieldSpec::dimension() const { return impl_->setup.dimension; }
const Vec& FieldSpec::parameters() const { return impl_->setup.parameters; }
const Box& FieldSpec::domain() const { return impl_->setup.domain; }
const std::string& FieldSpec::family() const { return impl_->setup.family; }

bool FieldSpec::has_potential() const { return static_cast<bool>(impl_->setup.potential); }
bool FieldSpec::has_solenoidal() const { return static_cast<bool>(impl_->setup.solenoidal); }
bool FieldSpec::has_jacobian() const { return static_cast<bool>(impl_->setup.jacobian); }

Vec FieldSpec::evaluate(const Vec& p) const {
    if (p.size() != impl_->setup.dimension)
        throw ConfigError("field: price vector dimension mismatch (expected " +
                          std::to_string(impl_->setup.dimension) + ", got " +
                          std::to_string(p.size()) + ")");
    if (!impl_->setup.domain.contains(p, kDomainSlack))
        throw ConfigError("field: evaluation point outside the domain box");
    Vec a = impl_->setup.evaluator(p);
    require_finite(a, "field: evaluation");
    return a;
}

Vec FieldSpec::evaluate_unchecked(const Vec& p) const {
    return impl_->setup.evaluator(p);
}

double FieldSpec::potential_at(const Vec& p) const {
    if (!has_potential())
        throw ConfigError("field: no analytic potential declared");
    return impl_->setup.potential(p);
}

Vec FieldSpec::potential_gradient_at(const Vec& p) const {
    if (!has_potential())
        throw ConfigError("field: no analytic potential declared");
    return impl_->setup.potential_gradient(p);
}

Vec FieldSpec::solenoidal_at(const Vec& p) const {
    if (!has_solenoidal())
        throw ConfigError("field: no analytic solenoidal part declared");
    return impl_->setup.solenoidal(p);
}

Mat FieldSpec::jacobian_at(const Vec& p) const {
    if (!has_jacobian())
        throw ConfigError("field: no analytic Jacobian declared");
    return impl_->setup.jacobian(p);
}

FieldSpec FieldSpec::with_parameters(const Vec& params) const {
    if (!impl_->setup.rebind)
        throw ConfigError("field: family '" + impl_->setup.family +
                          "' does not support parameter rebinding");
    return impl_->setup.rebind(params);
}

Vec eval_excess_demand(const FieldSpec& field, const Vec& p) {
    return field.evaluate(p);
}

Mat eval_jacobian(const FieldSpec& field, const Vec& p, JacobianMode mode,
                  double step_rel) {
    if (p.size() != field.dimension())
        throw ConfigError("jacobian: price vector dimension mismatch");
    Mat J;
    if (mode == JacobianMode::Analytic) {
        J = field.jacobian_at(p);
    } else {
        J = finite_difference_jacobian(
            [&field](const Vec& q) { return field.evaluate(q); }, p, step_rel);
    }
    if (!J.allFinite()) throw NumericalError("jacobian: non-finite entries");
    return J;
}

double asymmetry_norm(const FieldSpec& field, const Vec& p, double step_rel) {
    const Mat J = eval_jacobian(field, p,
                                field.has_jacobian() ? JacobianMode::Analytic
                                                     : JacobianMode::FiniteDifference,
                                step_rel);
    return 0.5 * (J - J.transpose()).norm();
}

void DoubleWellParams::validate() const {
    if (!(a > 0.0)) throw ConfigError("double-well: a must be > 0");
    if (!(b > 0.0)) throw ConfigError("double-well: b must be > 0");
    if (!std::isfinite(k)) throw ConfigError("double-well: k must be finite");
    if (reference_point.size() != 2)
        throw ConfigError("double-well: reference point must have dimension 2");
    if (!reference_point.allFinite())
        throw ConfigError("double-well: non-finite reference point");
}

double DoubleWellParams::well_abscissa() const {
    if (!two_well())
        throw ConfigError("double-well: a^2 - k^2/b <= 0, wells do not exist");
    return std::sqrt(a * a - k * k / b);
}

Vec DoubleWellParams::well(int sign) const {
    const double w = well_abscissa();
    const double d1 = (sign >= 0 ? w : -w);
    Vec p(2);
    p[0] = reference_point[0] + d1;
    p[1] = reference_point[1] - k / b * d1;
    return p;
}

FieldSpec make_double_well_field(const DoubleWellParams& params) {
    params.validate();
    const double half = 2.5 * std::max(1.0, params.a);
    return make_double_well_field(params, Box::centered(params.reference_point, half));
}

FieldSpec make_double_well_field(const DoubleWellParams& params, const Box& box) {
    params.validate();
    if (box.dim() != 2) throw ConfigError("double-well: box must be two-dimensional");
    const double a = params.a, b = params.b, k = params.k;
    const Vec ref = params.reference_point;

    FieldSpec::Setup s;
    s.dimension = 2;
    s.parameters = Vec(3);
    s.parameters << a, b, k;
    s.domain = box;
    s.family = "double_well";
    s.evaluator = [a, b, k, ref](const Vec& p) {
        const double d1 = p[0] - ref[0], d2 = p[1] - ref[1];
        Vec out(2);
        out[0] = d1 * (a * a - d1 * d1) + k * d2;
        out[1] = -b * d2 - k * d1;
        return out;
    };
    s.potential = [a, b, ref](const Vec& p) {
        const double d1 = p[0] - ref[0], d2 = p[1] - ref[1];
        const double q = a * a - d1 * d1;
        return 0.25 * q * q + 0.5 * b * d2 * d2;
    };
    s.potential_gradient = [a, b, ref](const Vec& p) {
        const double d1 = p[0] - ref[0], d2 = p[1] - ref[1];
        Vec g(2);
        g[0] = -d1 * (a * a - d1 * d1);
        g[1] = b * d2;
        return g;
    };
    s.solenoidal = [k, ref](const Vec& p) {
        Vec out(2);
        out[0] = k * (p[1] - ref[1]);
        out[1] = -k * (p[0] - ref[0]);
        return out;
    };
    s.jacobian = [a, b, k, ref](const Vec& p) {
        const double d1 = p[0] - ref[0];
        Mat J(2, 2);
        J << a * a - 3.0 * d1 * d1, k, -k, -b;
        return J;
    };
    s.rebind = [ref, box](const Vec& params) {
        if (params.size() != 3)
            throw ConfigError("double-well: parameter vector must be (a, b, k)");
        return make_double_well_field(DoubleWellParams(params[0], params[1], params[2], ref), box);
    };
    return FieldSpec(std::move(s));
}

FieldSpec make_polynomial_field(std::vector<Polynomial> components,
                                std::optional<Polynomial> potential,
                                std::optional<std::vector<Polynomial>> solenoidal,
                                const Box& box) {
    const int n = box.dim();
    if (static_cast<int>(components.size()) != n)
        throw ConfigError("polynomial field: component count must equal box dimension");
    for (const auto& c : components)
        if (c.nvars() != n) throw ConfigError("polynomial field: component nvars mismatch");
    if (potential && potential->nvars() != n)
        throw ConfigError("polynomial field: potential nvars mismatch");
    if (solenoidal) {
        if (static_cast<int>(solenoidal->size()) != n)
            throw ConfigError("polynomial field: solenoidal component count mismatch");
        for (const auto& c : *solenoidal)
            if (c.nvars() != n) throw ConfigError("polynomial field: solenoidal nvars mismatch");
    }
    // If only the potential is declared, derive the solenoidal remainder
    // A + grad V in exact polynomial arithmetic; the construction-time
    // divergence check then validates the declared split.
    if (potential && !solenoidal) {
        std::vector<Polynomial> derived;
        derived.reserve(n);
        for (int i = 0; i < n; ++i)
            derived.push_back(components[i] + potential->derivative(i));
        solenoidal = std::move(derived);
    }

    // Parameter vector: canonical coefficients of components, then potential,
    // then solenoidal.
    std::vector<double> flat;
    auto append = [&flat](const Polynomial& p) {
        const auto c = p.coefficients();
        flat.insert(flat.end(), c.begin(), c.end());
    };
    for (const auto& c : components) append(c);
    if (potential) append(*potential);
    if (solenoidal)
        for (const auto& c : *solenoidal) append(c);

    std::vector<Polynomial> jac;  // row-major n x n
    jac.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) jac.push_back(components[i].derivative(j));

    std::vector<Polynomial> grad;
    if (potential)
        for (int i = 0; i < n; ++i) grad.push_back(potential->derivative(i));

    FieldSpec::Setup s;
    s.dimension = n;
    s.parameters = flat.empty()
                       ? Vec(0)
                       : Vec(Eigen::Map<const Vec>(flat.data(),
                                                   static_cast<Eigen::Index>(flat.size())));
    s.domain = box;
    s.family = "polynomial";
    s.evaluator = [components](const Vec& p) {
        Vec out(components.size());
        for (std::size_t i = 0; i < components.size(); ++i) out[i] = components[i].eval(p);
        return out;
    };
    if (potential) {
        auto pot = *potential;
        s.potential = [pot](const Vec& p) { return pot.eval(p); };
        s.potential_gradient = [grad](const Vec& p) {
            Vec g(grad.size());
            for (std::size_t i = 0; i < grad.size(); ++i) g[i] = grad[i].eval(p);
            return g;
        };
    }
    if (solenoidal) {
        auto sol = *solenoidal;
        s.solenoidal = [sol](const Vec& p) {
            Vec out(sol.size());
            for (std::size_t i = 0; i < sol.size(); ++i) out[i] = sol[i].eval(p);
            return out;
        };
    }
    s.jacobian = [jac, n](const Vec& p) {
        Mat J(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) J(i, j) = jac[static_cast<std::size_t>(i) * n + j].eval(p);
        return J;
    };
    s.rebind = [components, potential, solenoidal, box](const Vec& params) {
        std::size_t cursor = 0;
        auto take = [&params, &cursor](const Polynomial& p) {
            const std::size_t m = p.coefficients().size();
            if (cursor + m > static_cast<std::size_t>(params.size()))
                throw ConfigError("polynomial field: parameter vector too short in rebind");
            std::vector<double> c(params.data() + cursor, params.data() + cursor + m);
            cursor += m;
            return p.with_coefficients(c);
        };
        std::vector<Polynomial> comps;
        for (const auto& c : components) comps.push_back(take(c));
        std::optional<Polynomial> pot;
        if (potential) pot = take(*potential);
        std::optional<std::vector<Polynomial>> sol;
        if (solenoidal) {
            std::vector<Polynomial> sv;
            for (const auto& c : *solenoidal) sv.push_back(take(c));
            sol = std::move(sv);
        }
        if (cursor != static_cast<std::size_t>(params.size()))
            throw ConfigError("polynomial field: parameter vector length mismatch in rebind");
        return make_polynomial_field(std::move(comps), std::move(pot), std::move(sol), box);
    };
    return FieldSpec(std::move(s));
}

}  // namespace tatlab
