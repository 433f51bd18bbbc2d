#include "tatlab/scenario.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "tatlab/parallel.hpp"
#include "tatlab/toml_lite.hpp"

namespace tatlab {

namespace {

/// Collects violations while pulling typed values out of the config tree, so
/// a single pass reports every problem.
class Extractor {
public:
    Extractor(const Json& root, std::vector<std::string>& issues)
        : root_(root), issues_(issues) {}

    void violation(const std::string& path, const std::string& message) {
        issues_.push_back(path + ": " + message);
    }

    const Json* find(const std::string& path) const {
        const Json* node = &root_;
        std::stringstream ss(path);
        std::string part;
        while (std::getline(ss, part, '.')) {
            if (!node->is_object() || !node->contains(part)) return nullptr;
            node = &(*node)[part];
        }
        return node;
    }

    bool has(const std::string& path) const { return find(path) != nullptr; }

    double number(const std::string& path, double fallback) {
        const Json* n = find(path);
        if (!n) return fallback;
        if (!n->is_number()) {
            violation(path, "must be a number");
            return fallback;
        }
        return n->get<double>();
    }

    std::optional<double> number_opt(const std::string& path) {
        const Json* n = find(path);
        if (!n) return std::nullopt;
        if (!n->is_number()) {
            violation(path, "must be a number");
            return std::nullopt;
        }
        return n->get<double>();
    }

    long integer(const std::string& path, long fallback) {
        const Json* n = find(path);
        if (!n) return fallback;
        if (!n->is_number_integer()) {
            violation(path, "must be an integer");
            return fallback;
        }
        return n->get<long>();
    }

    bool boolean(const std::string& path, bool fallback) {
        const Json* n = find(path);
        if (!n) return fallback;
        if (!n->is_boolean()) {
            violation(path, "must be a boolean");
            return fallback;
        }
        return n->get<bool>();
    }

    std::string text(const std::string& path, const std::string& fallback) {
        const Json* n = find(path);
        if (!n) return fallback;
        if (!n->is_string()) {
            violation(path, "must be a string");
            return fallback;
        }
        return n->get<std::string>();
    }

    std::optional<Vec> vector(const std::string& path, int expect_dim = -1) {
        const Json* n = find(path);
        if (!n) return std::nullopt;
        if (!n->is_array()) {
            violation(path, "must be an array of numbers");
            return std::nullopt;
        }
        Vec v(n->size());
        for (std::size_t i = 0; i < n->size(); ++i) {
            if (!(*n)[i].is_number()) {
                violation(path, "must contain only numbers");
                return std::nullopt;
            }
            v[static_cast<Eigen::Index>(i)] = (*n)[i].get<double>();
        }
        if (expect_dim >= 0 && v.size() != expect_dim) {
            violation(path, "must have " + std::to_string(expect_dim) + " entries (got " +
                                std::to_string(v.size()) + ")");
            return std::nullopt;
        }
        return v;
    }

    std::optional<Mat> matrix(const std::string& path) {
        const Json* n = find(path);
        if (!n) return std::nullopt;
        if (!n->is_array() || n->empty()) {
            violation(path, "must be a non-empty array of rows");
            return std::nullopt;
        }
        const std::size_t cols = (*n)[0].is_array() ? (*n)[0].size() : 0;
        Mat m(n->size(), cols);
        for (std::size_t i = 0; i < n->size(); ++i) {
            const Json& row = (*n)[i];
            if (!row.is_array() || row.size() != cols) {
                violation(path, "rows must be arrays of equal length");
                return std::nullopt;
            }
            for (std::size_t j = 0; j < cols; ++j) {
                if (!row[j].is_number()) {
                    violation(path, "must contain only numbers");
                    return std::nullopt;
                }
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    row[j].get<double>();
            }
        }
        return m;
    }

private:
    const Json& root_;
    std::vector<std::string>& issues_;
};

std::optional<Polynomial> parse_polynomial(Extractor& ex, const std::string& path, int dim) {
    const Json* n = ex.find(path);
    if (!n) return std::nullopt;
    if (!n->is_array()) {
        ex.violation(path, "must be an array of monomial rows [coeff, e1, ..., ed]");
        return std::nullopt;
    }
    std::vector<Polynomial::Term> terms;
    for (std::size_t r = 0; r < n->size(); ++r) {
        const Json& row = (*n)[r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim + 1) {
            ex.violation(path, "row " + std::to_string(r) + " must have " +
                                   std::to_string(dim + 1) + " entries [coeff, exponents...]");
            return std::nullopt;
        }
        Polynomial::Term t;
        if (!row[0].is_number()) {
            ex.violation(path, "row " + std::to_string(r) + ": coefficient must be a number");
            return std::nullopt;
        }
        t.coeff = row[0].get<double>();
        for (int a = 0; a < dim; ++a) {
            const Json& e = row[static_cast<std::size_t>(a) + 1];
            if (!e.is_number_integer() || e.get<long>() < 0) {
                ex.violation(path, "row " + std::to_string(r) +
                                       ": exponents must be non-negative integers");
                return std::nullopt;
            }
            t.powers.push_back(static_cast<int>(e.get<long>()));
        }
        terms.push_back(std::move(t));
    }
    try {
        return Polynomial(dim, std::move(terms));
    } catch (const std::exception& e) {
        ex.violation(path, e.what());
        return std::nullopt;
    }
}

const std::set<std::string> kKnownSections = {
    "name", "workers", "experiments", "field",       "grid",     "noise",
    "integration",     "detection",   "critical",    "poisson",  "simulate",
    "mfpt",            "path_action", "minimize",    "transitions", "compare",
};
const std::set<std::string> kKnownExperiments = {
    "critical-points", "decompose",       "simulate",      "transitions", "mfpt",
    "path-action",     "minimize-action", "appendix-demo", "compare-scenarios",
};

Json vec_to_json(const Vec& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Json mat_to_json(const Mat& m) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        arr.push_back(std::move(row));
    }
    return arr;
}

Json poly_to_json(const Polynomial& p) {
    Json arr = Json::array();
    for (const auto& t : p.terms()) {
        Json row = Json::array();
        row.push_back(t.coeff);
        for (int e : t.powers) row.push_back(e);
        arr.push_back(std::move(row));
    }
    return arr;
}

/// One shared pass: builds the scenario while collecting violations.
Scenario extract(const Json& config, std::vector<std::string>& issues) {
    Scenario sc;
    Extractor ex(config, issues);

    if (!config.is_object()) {
        ex.violation("(root)", "config must be a table");
        return sc;
    }
    for (const auto& [key, value] : config.items()) {
        (void)value;
        if (!kKnownSections.count(key)) ex.violation(key, "unknown section or key");
    }

    sc.name = ex.text("name", "scenario");
    if (sc.name.empty()) ex.violation("name", "must be non-empty");
    const long workers = ex.integer("workers", 0);
    if (workers < 0) ex.violation("workers", "must be >= 0 (0 = auto)");
    sc.workers = static_cast<int>(workers);

    if (const Json* exps = ex.find("experiments")) {
        if (!exps->is_array()) {
            ex.violation("experiments", "must be an array of experiment names");
        } else {
            for (const auto& e : *exps) {
                if (!e.is_string() || !kKnownExperiments.count(e.get<std::string>()))
                    ex.violation("experiments", "unknown experiment '" + e.dump() + "'");
                else
                    sc.experiments.push_back(e.get<std::string>());
            }
        }
    }

    // ---- field ----
    std::string family = ex.text("field.family", "");
    if (family == "appendix") family = "double-well";  // alias
    int dim = 2;
    std::optional<Box> box;
    if (const auto bm = ex.matrix("field.box")) {
        if (bm->cols() != 2) {
            ex.violation("field.box", "rows must be [min, max] pairs");
        } else {
            bool ok = true;
            for (Eigen::Index a = 0; a < bm->rows(); ++a)
                if (!((*bm)(a, 0) < (*bm)(a, 1))) {
                    ex.violation("field.box", "axis " + std::to_string(a) + ": requires min < max");
                    ok = false;
                }
            if (ok) box = Box(bm->col(0), bm->col(1));
        }
    }

    if (family == "double-well") {
        DoubleWellParams params;
        params.a = ex.number("field.a", 1.0);
        params.b = ex.number("field.b", 1.0);
        params.k = ex.number("field.k", 0.0);
        if (auto ref = ex.vector("field.reference_point", 2)) params.reference_point = *ref;
        if (!(params.a > 0.0)) ex.violation("field.a", "must be > 0");
        if (!(params.b > 0.0)) ex.violation("field.b", "must be > 0");
        if (!std::isfinite(params.k)) ex.violation("field.k", "must be finite");
        dim = 2;
        if (box && box->dim() != 2) ex.violation("field.box", "double-well fields are two-dimensional");
        if (issues.empty()) {
            try {
                sc.field = box ? make_double_well_field(params, *box)
                               : make_double_well_field(params);
                sc.box = sc.field->domain();
            } catch (const std::exception& e) {
                ex.violation("field", e.what());
            }
        }
    } else if (family == "polynomial") {
        const long dim_l = ex.integer("field.dimension", 0);
        if (dim_l < 1) {
            ex.violation("field.dimension", "must be an integer >= 1");
        } else {
            dim = static_cast<int>(dim_l);
            if (!box) ex.violation("field.box", "required for polynomial fields");
            else if (box->dim() != dim) ex.violation("field.box", "dimension mismatch");
            std::vector<Polynomial> components;
            bool comps_ok = true;
            for (int i = 1; i <= dim; ++i) {
                const std::string key = "field.component_" + std::to_string(i);
                auto p = parse_polynomial(ex, key, dim);
                if (!p) {
                    if (!ex.has(key)) ex.violation(key, "required for polynomial fields");
                    comps_ok = false;
                    continue;
                }
                components.push_back(std::move(*p));
            }
            std::optional<Polynomial> potential = parse_polynomial(ex, "field.potential", dim);
            std::optional<std::vector<Polynomial>> solenoidal;
            const bool any_sol = ex.has("field.solenoidal_1");
            if (any_sol) {
                std::vector<Polynomial> sol;
                bool sol_ok = true;
                for (int i = 1; i <= dim; ++i) {
                    auto p = parse_polynomial(ex, "field.solenoidal_" + std::to_string(i), dim);
                    if (!p) {
                        ex.violation("field.solenoidal_" + std::to_string(i),
                                     "all solenoidal components are required when any is given");
                        sol_ok = false;
                        continue;
                    }
                    sol.push_back(std::move(*p));
                }
                if (sol_ok) solenoidal = std::move(sol);
            }
            if (comps_ok && box && issues.empty()) {
                try {
                    sc.field = make_polynomial_field(std::move(components), std::move(potential),
                                                     std::move(solenoidal), *box);
                    sc.box = *box;
                } catch (const std::exception& e) {
                    ex.violation("field", e.what());
                }
            }
        }
    } else if (family.empty()) {
        ex.violation("field.family", "required ('double-well' or 'polynomial')");
    } else {
        ex.violation("field.family", "unknown family '" + family + "'");
    }

    // ---- grid ----
    sc.grid_resolution.assign(dim, 129);
    if (const Json* res = ex.find("grid.resolution")) {
        if (!res->is_array()) {
            ex.violation("grid.resolution", "must be an array of integers");
        } else {
            sc.grid_resolution.clear();
            for (const auto& r : *res) {
                if (!r.is_number_integer()) {
                    ex.violation("grid.resolution", "entries must be integers");
                    break;
                }
                sc.grid_resolution.push_back(static_cast<int>(r.get<long>()));
            }
            if (static_cast<int>(sc.grid_resolution.size()) != dim)
                ex.violation("grid.resolution", "must have one entry per axis");
            for (int r : sc.grid_resolution)
                if (r < 8) ex.violation("grid.resolution", "must be >= 8 per axis");
        }
    }

    // ---- noise ----
    {
        const long seed = ex.integer("noise.seed", 0);
        if (seed < 0) ex.violation("noise.seed", "must be >= 0");
        sc.master_seed = static_cast<std::uint64_t>(seed);
        sc.covariance = Mat::Zero(dim, dim);
        if (auto cov = ex.matrix("noise.covariance")) {
            if (cov->rows() != dim || cov->cols() != dim) {
                ex.violation("noise.covariance",
                             "must be " + std::to_string(dim) + "x" + std::to_string(dim));
            } else {
                const double asym = (*cov - cov->transpose()).cwiseAbs().maxCoeff();
                if (asym > 1e-12) {
                    std::ostringstream msg;
                    msg << "must be symmetric within 1e-12 (asymmetry " << asym << ")";
                    ex.violation("noise.covariance", msg.str());
                } else {
                    Eigen::SelfAdjointEigenSolver<Mat> es(*cov);
                    if (es.eigenvalues().minCoeff() < -1e-12)
                        ex.violation("noise.covariance",
                                     "must be positive semi-definite (eigenvalues >= -1e-12)");
                    else
                        sc.covariance = *cov;
                }
            }
        }
    }

    // ---- integration ----
    sc.dt = ex.number("integration.dt", 1e-3);
    if (!(sc.dt > 0.0)) ex.violation("integration.dt", "must be > 0 (got " + std::to_string(sc.dt) + ")");
    sc.t_final = ex.number("integration.t_final", 50.0);
    if (!(sc.t_final >= sc.dt)) ex.violation("integration.t_final", "must be >= dt");
    const long stride = ex.integer("integration.record_stride", 1);
    if (stride < 1) ex.violation("integration.record_stride", "must be >= 1");
    sc.record_stride = static_cast<int>(stride);

    // ---- detection ----
    sc.capture_radius = ex.number("detection.capture_radius", 0.1);
    sc.release_radius = ex.number("detection.release_radius", 0.3);
    if (!(sc.capture_radius > 0.0)) ex.violation("detection.capture_radius", "must be > 0");
    if (!(sc.release_radius > sc.capture_radius))
        ex.violation("detection.release_radius", "must exceed capture_radius");

    // ---- critical ----
    const long multistart = ex.integer("critical.multistart", 16);
    if (multistart < 2) ex.violation("critical.multistart", "must be >= 2");
    sc.multistart = static_cast<int>(multistart);
    sc.root_tol = ex.number("critical.tol", 1e-10);
    if (!(sc.root_tol > 0.0)) ex.violation("critical.tol", "must be > 0");

    // ---- poisson ----
    sc.poisson_tol = ex.number("poisson.tol", 1e-10);
    if (!(sc.poisson_tol > 0.0)) ex.violation("poisson.tol", "must be > 0");
    const long piters = ex.integer("poisson.max_iterations", 20000);
    if (piters < 1) ex.violation("poisson.max_iterations", "must be >= 1");
    sc.poisson_max_iterations = static_cast<int>(piters);

    // ---- simulate ----
    if (ex.has("simulate")) {
        sc.simulate_initial = ex.vector("simulate.initial", dim);
        if (!sc.simulate_initial) ex.violation("simulate.initial", "required in the simulate section");
        sc.simulate_stochastic = ex.boolean("simulate.stochastic", false);
    }

    // ---- mfpt ----
    if (ex.has("mfpt")) {
        MfptConfig m;
        if (const Json* eps = ex.find("mfpt.epsilons")) {
            if (!eps->is_array() || eps->empty())
                ex.violation("mfpt.epsilons", "must be a non-empty array of numbers");
            else
                for (const auto& e : *eps) {
                    if (!e.is_number() || e.get<double>() <= 0.0) {
                        ex.violation("mfpt.epsilons", "entries must be numbers > 0");
                        break;
                    }
                    m.epsilons.push_back(e.get<double>());
                }
        } else {
            ex.violation("mfpt.epsilons", "required in the mfpt section");
        }
        const long ensemble = ex.integer("mfpt.ensemble", 500);
        if (ensemble < 100) ex.violation("mfpt.ensemble", "must be >= 100");
        m.ensemble = static_cast<int>(ensemble);
        m.t_cap = ex.number("mfpt.t_cap", 1e5);
        if (!(m.t_cap > 0.0)) ex.violation("mfpt.t_cap", "must be > 0");
        if (auto s = ex.vector("mfpt.start", dim)) m.start = *s;
        else ex.violation("mfpt.start", "required in the mfpt section");
        if (auto t = ex.vector("mfpt.target", dim)) m.target = *t;
        else ex.violation("mfpt.target", "required in the mfpt section");
        sc.mfpt = std::move(m);
    }

    // ---- path_action ----
    if (ex.has("path_action")) {
        PathActionConfig p;
        p.kind = ex.text("path_action.kind", "straight");
        p.epsilon = ex.number("path_action.epsilon", 0.1);
        if (!(p.epsilon > 0.0)) ex.violation("path_action.epsilon", "must be > 0");
        p.t_total = ex.number_opt("path_action.t_total");
        if (p.t_total && !(*p.t_total > 0.0)) ex.violation("path_action.t_total", "must be > 0");
        if (p.kind == "straight") {
            if (auto s = ex.vector("path_action.start", dim)) p.start = *s;
            else ex.violation("path_action.start", "required for a straight path");
            if (auto e = ex.vector("path_action.end", dim)) p.end = *e;
            else ex.violation("path_action.end", "required for a straight path");
            const long nodes = ex.integer("path_action.n_nodes", 256);
            if (nodes < 2) ex.violation("path_action.n_nodes", "must be >= 2");
            p.n_nodes = static_cast<int>(nodes);
        } else if (p.kind == "explicit") {
            if (auto nodes = ex.matrix("path_action.nodes")) {
                if (nodes->cols() != dim || nodes->rows() < 2)
                    ex.violation("path_action.nodes", "must be >= 2 rows of dimension " +
                                                          std::to_string(dim));
                else
                    p.nodes = nodes->transpose();
            } else {
                ex.violation("path_action.nodes", "required for an explicit path");
            }
        } else {
            ex.violation("path_action.kind", "must be 'straight' or 'explicit'");
        }
        sc.path_action = std::move(p);
    }

    // ---- minimize ----
    if (ex.has("minimize")) {
        MinimizeConfig m;
        if (auto s = ex.vector("minimize.start", dim)) m.start = *s;
        else ex.violation("minimize.start", "required in the minimize section");
        if (auto e = ex.vector("minimize.end", dim)) m.end = *e;
        else ex.violation("minimize.end", "required in the minimize section");
        const long nodes = ex.integer("minimize.n_nodes", 128);
        if (nodes < 32) ex.violation("minimize.n_nodes", "must be >= 32");
        m.n_nodes = static_cast<int>(nodes);
        m.t_total = ex.number("minimize.t_total", 40.0);
        if (!(m.t_total > 0.0)) ex.violation("minimize.t_total", "must be > 0");
        m.epsilon = ex.number("minimize.epsilon", 1.0);
        if (!(m.epsilon > 0.0)) ex.violation("minimize.epsilon", "must be > 0");
        const long iters = ex.integer("minimize.max_iterations", 20000);
        if (iters < 1) ex.violation("minimize.max_iterations", "must be >= 1");
        m.max_iterations = static_cast<int>(iters);
        m.tol = ex.number("minimize.tol", 1e-10);
        if (!(m.tol > 0.0)) ex.violation("minimize.tol", "must be > 0");
        sc.minimize = std::move(m);
    }

    // ---- transitions ----
    if (ex.has("transitions")) {
        TransitionsConfig t;
        if (auto init = ex.vector("transitions.initial", dim)) t.initial = *init;
        else if (sc.simulate_initial) t.initial = *sc.simulate_initial;
        else ex.violation("transitions.initial", "required (or provide simulate.initial)");
        const long stride2 = ex.integer("transitions.slice_stride", 10);
        if (stride2 < 1) ex.violation("transitions.slice_stride", "must be >= 1");
        t.slice_stride = static_cast<int>(stride2);
        sc.transitions = std::move(t);
    }

    // ---- compare ----
    if (ex.has("compare")) {
        if (auto p = ex.vector("compare.parameters_prime")) sc.parameters_prime = *p;
        else ex.violation("compare.parameters_prime", "required in the compare section");
    }

    // ---- per-experiment required sections ----
    for (const auto& expname : sc.experiments) {
        if (expname == "mfpt" && !sc.mfpt)
            ex.violation("mfpt", "section required for the mfpt experiment");
        if (expname == "simulate" && !sc.simulate_initial)
            ex.violation("simulate", "section required for the simulate experiment");
        if (expname == "transitions" && !sc.transitions)
            ex.violation("transitions", "section required for the transitions experiment");
        if (expname == "path-action" && !sc.path_action)
            ex.violation("path_action", "section required for the path-action experiment");
        if (expname == "minimize-action" && !sc.minimize)
            ex.violation("minimize", "section required for the minimize-action experiment");
        if (expname == "compare-scenarios" && !sc.parameters_prime)
            ex.violation("compare", "section required for the compare-scenarios experiment");
    }

    return sc;
}

Json resolve_echo(const Scenario& sc) {
    // Worker count is execution infrastructure, never semantics: it is
    // excluded from the echo so results stay byte-identical across workers.
    Json j;
    j["name"] = sc.name;
    if (!sc.experiments.empty()) j["experiments"] = sc.experiments;

    Json field;
    if (sc.field) {
        field["family"] = sc.field->family();
        field["parameters"] = vec_to_json(sc.field->parameters());
        Json box = Json::array();
        for (int a = 0; a < sc.box.dim(); ++a)
            box.push_back(Json::array({sc.box.lo[a], sc.box.hi[a]}));
        field["box"] = std::move(box);
        field["dimension"] = sc.field->dimension();
    }
    j["field"] = std::move(field);

    j["grid"] = Json{{"resolution", sc.grid_resolution}};
    j["noise"] = Json{{"seed", sc.master_seed}, {"covariance", mat_to_json(sc.covariance)}};
    j["integration"] = Json{{"dt", sc.dt},
                            {"t_final", sc.t_final},
                            {"record_stride", sc.record_stride}};
    j["detection"] = Json{{"capture_radius", sc.capture_radius},
                          {"release_radius", sc.release_radius}};
    j["critical"] = Json{{"multistart", sc.multistart}, {"tol", sc.root_tol}};
    j["poisson"] = Json{{"tol", sc.poisson_tol},
                        {"max_iterations", sc.poisson_max_iterations}};
    if (sc.simulate_initial)
        j["simulate"] = Json{{"initial", vec_to_json(*sc.simulate_initial)},
                             {"stochastic", sc.simulate_stochastic}};
    if (sc.mfpt)
        j["mfpt"] = Json{{"epsilons", sc.mfpt->epsilons},
                         {"ensemble", sc.mfpt->ensemble},
                         {"t_cap", sc.mfpt->t_cap},
                         {"start", vec_to_json(sc.mfpt->start)},
                         {"target", vec_to_json(sc.mfpt->target)}};
    if (sc.path_action) {
        Json p;
        p["kind"] = sc.path_action->kind;
        p["epsilon"] = sc.path_action->epsilon;
        if (sc.path_action->t_total) p["t_total"] = *sc.path_action->t_total;
        if (sc.path_action->kind == "straight") {
            p["start"] = vec_to_json(sc.path_action->start);
            p["end"] = vec_to_json(sc.path_action->end);
            p["n_nodes"] = sc.path_action->n_nodes;
        } else {
            p["nodes"] = mat_to_json(sc.path_action->nodes.transpose());
        }
        j["path_action"] = std::move(p);
    }
    if (sc.minimize)
        j["minimize"] = Json{{"start", vec_to_json(sc.minimize->start)},
                             {"end", vec_to_json(sc.minimize->end)},
                             {"n_nodes", sc.minimize->n_nodes},
                             {"t_total", sc.minimize->t_total},
                             {"epsilon", sc.minimize->epsilon},
                             {"max_iterations", sc.minimize->max_iterations},
                             {"tol", sc.minimize->tol}};
    if (sc.transitions)
        j["transitions"] = Json{{"initial", vec_to_json(sc.transitions->initial)},
                                {"slice_stride", sc.transitions->slice_stride}};
    if (sc.parameters_prime)
        j["compare"] = Json{{"parameters_prime", vec_to_json(*sc.parameters_prime)}};
    return j;
}

}  // namespace

int Scenario::resolved_workers() const {
    return workers == 0 ? default_workers() : workers;
}

std::string scenario_hash(const Json& resolved) {
    const std::string dump = resolved.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

ValidationReport validate_scenario(const Json& config) {
    ValidationReport report;
    (void)extract(config, report.violations);
    return report;
}

ValidationReport validate_scenario_file(const std::string& path) {
    return validate_scenario(parse_toml_file(path));
}

Scenario load_scenario(const Json& config) {
    std::vector<std::string> issues;
    Scenario sc = extract(config, issues);
    if (!issues.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& v : issues) msg += "\n  - " + v;
        throw ConfigError(msg);
    }
    sc.resolved = resolve_echo(sc);
    sc.hash = scenario_hash(sc.resolved);
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    return load_scenario(parse_toml_file(path));
}

}  // namespace tatlab
