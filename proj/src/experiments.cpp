#include "tatlab/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>

#include "tatlab/critical.hpp"
#include "tatlab/dynamics.hpp"
#include "tatlab/hodge.hpp"
#include "tatlab/parallel.hpp"
#include "tatlab/paths.hpp"
#include "tatlab/rng.hpp"

namespace tatlab {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json vec_json(const Vec& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Json point_json(const CriticalPoint& cp) {
    Json eigs = Json::array();
    for (Eigen::Index i = 0; i < cp.eigenvalues.size(); ++i)
        eigs.push_back(Json{{"re", cp.eigenvalues[i].real()}, {"im", cp.eigenvalues[i].imag()}});
    return Json{{"location", vec_json(cp.location)},
                {"eigenvalues", std::move(eigs)},
                {"index", cp.index},
                {"stability", to_string(cp.stability)},
                {"residual", cp.residual}};
}

std::string points_csv(const std::vector<CriticalPoint>& points, int dim) {
    std::string out;
    for (int a = 0; a < dim; ++a) out += "p" + std::to_string(a + 1) + ",";
    out += "index,stability,residual";
    for (int a = 0; a < dim; ++a)
        out += ",eig" + std::to_string(a + 1) + "_re,eig" + std::to_string(a + 1) + "_im";
    out += "\n";
    for (const auto& cp : points) {
        for (int a = 0; a < dim; ++a) out += fmt(cp.location[a]) + ",";
        out += std::to_string(cp.index) + "," + to_string(cp.stability) + "," + fmt(cp.residual);
        for (int a = 0; a < dim; ++a)
            out += "," + fmt(cp.eigenvalues[a].real()) + "," + fmt(cp.eigenvalues[a].imag());
        out += "\n";
    }
    return out;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    for (int a = 0; a < traj.states.rows(); ++a) out += ",p" + std::to_string(a + 1);
    out += "\n";
    for (long i = 0; i < traj.size(); ++i) {
        out += fmt(traj.times[i]);
        for (int a = 0; a < traj.states.rows(); ++a) out += "," + fmt(traj.states(a, i));
        out += "\n";
    }
    return out;
}

Json base_result(const Scenario& sc, const std::string& subcommand) {
    Json j;
    j["subcommand"] = subcommand;
    j["scenario_hash"] = sc.hash;
    j["scenario"] = sc.resolved;
    return j;
}

const FieldSpec& field_of(const Scenario& sc) {
    if (!sc.field) throw ConfigError("scenario has no usable field definition");
    return *sc.field;
}

DoubleWellParams double_well_params(const Scenario& sc) {
    const FieldSpec& f = field_of(sc);
    if (f.family() != "double_well")
        throw ConfigError("this experiment requires the double-well field family");
    const Vec& p = f.parameters();
    DoubleWellParams params(p[0], p[1], p[2]);
    return params;
}

RunOutcome run_critical_points(const Scenario& sc) {
    const FieldSpec& field = field_of(sc);
    const auto points = find_critical_points(field, sc.box, sc.multistart, sc.root_tol);
    RunOutcome out;
    out.json_name = "critical_points.json";
    out.result = base_result(sc, "critical-points");
    Json arr = Json::array();
    for (const auto& cp : points) arr.push_back(point_json(cp));
    out.result["points"] = std::move(arr);
    out.result["count"] = points.size();
    if (points.empty())
        out.result["diagnostic"] = "no Newton start converged; empty critical point set";
    out.csv_files.emplace_back("critical_points.csv", points_csv(points, field.dimension()));
    out.summary = Json{{"points", points.size()}};
    return out;
}

RunOutcome run_decompose(const Scenario& sc) {
    const FieldSpec& field = field_of(sc);
    const GridSpec grid = sc.grid();
    const auto dec = decompose_on_grid(field, grid, sc.poisson_tol, sc.poisson_max_iterations);

    RunOutcome out;
    out.json_name = "decomposition.json";
    out.result = base_result(sc, "decompose");
    out.result["reconstruction_residual"] = dec.reconstruction_residual;
    out.result["divergence_residual"] = dec.divergence_residual;
    out.result["solver_residual"] = dec.solver_residual;
    out.result["solver_iterations"] = dec.solver_iterations;
    out.result["solver"] = dec.solver;
    out.result["incompatibility"] = dec.incompatibility;
    out.result["used_analytic_solenoidal"] = dec.used_analytic_solenoidal;
    out.result["gauge_note"] = dec.gauge_note;

    const int d = grid.dim();
    std::string csv;
    for (int a = 0; a < d; ++a) csv += "p" + std::to_string(a + 1) + ",";
    csv += "V";
    for (int a = 0; a < d; ++a) csv += ",A" + std::to_string(a + 1);
    for (int a = 0; a < d; ++a) csv += ",Abar" + std::to_string(a + 1);
    csv += "\n";
    const long total = grid.total_nodes();
    for (long node = 0; node < total; ++node) {
        const Vec p = grid.node(grid.unflatten(node));
        for (int a = 0; a < d; ++a) csv += fmt(p[a]) + ",";
        csv += fmt(dec.potential[node]);
        for (int a = 0; a < d; ++a) csv += "," + fmt(dec.field_samples(node, a));
        for (int a = 0; a < d; ++a) csv += "," + fmt(dec.solenoidal(node, a));
        csv += "\n";
    }
    out.csv_files.emplace_back("decomposition.csv", std::move(csv));
    out.summary = Json{{"divergence_residual", dec.divergence_residual},
                       {"solver_iterations", dec.solver_iterations}};
    return out;
}

RunOutcome run_simulate(const Scenario& sc) {
    const FieldSpec& field = field_of(sc);
    if (!sc.simulate_initial)
        throw ConfigError("simulate: scenario lacks a [simulate] section");
    Trajectory traj;
    if (sc.simulate_stochastic) {
        NoiseSpec noise{sc.covariance, sc.master_seed};
        traj = simulate_sde(field, noise, *sc.simulate_initial, sc.t_final, sc.dt,
                            sc.record_stride);
    } else {
        traj = integrate_deterministic(field, *sc.simulate_initial, sc.t_final, sc.dt,
                                       sc.record_stride);
    }
    RunOutcome out;
    out.json_name = "simulate.json";
    out.result = base_result(sc, "simulate");
    out.result["scheme"] = traj.scheme;
    out.result["truncated"] = traj.truncated;
    out.result["records"] = traj.size();
    out.result["final_state"] = vec_json(traj.final_state());
    if (traj.seed) out.result["seed"] = *traj.seed;
    out.csv_files.emplace_back("trajectory.csv", trajectory_csv(traj));
    out.summary = Json{{"records", traj.size()}, {"truncated", traj.truncated}};
    return out;
}

RunOutcome run_transitions(const Scenario& sc) {
    const FieldSpec& field = field_of(sc);
    if (!sc.transitions)
        throw ConfigError("transitions: scenario lacks a [transitions] section");
    const auto points = find_critical_points(field, sc.box, sc.multistart, sc.root_tol);
    TransitionDetector detector(points, sc.capture_radius, sc.release_radius,
                                sc.transitions->slice_stride);

    // Streamed Euler-Maruyama identical to simulate_sde's scheme and seeding.
    NoiseSpec noise{sc.covariance, sc.master_seed};
    const Mat L = noise.factor();
    const double sqrt_dt = std::sqrt(sc.dt);
    GaussianStream rng(noise.seed);
    const long steps = std::llround(sc.t_final / sc.dt);
    const int n = field.dimension();
    Vec p = sc.transitions->initial, z(n);
    bool truncated = false;
    detector.observe(0.0, p);
    for (long s = 1; s <= steps; ++s) {
        for (int i = 0; i < n; ++i) z[i] = rng.gauss();
        p += field.evaluate_unchecked(p) * sc.dt + sqrt_dt * (L * z);
        if (!p.allFinite() || !field.domain().contains(p, FieldSpec::kDomainSlack)) {
            truncated = true;
            break;
        }
        detector.observe(s * sc.dt, p);
    }
    const auto events = detector.take_events();

    RunOutcome out;
    out.json_name = "transitions.json";
    out.result = base_result(sc, "transitions");
    Json pts = Json::array();
    for (const auto& cp : points) pts.push_back(point_json(cp));
    out.result["points"] = std::move(pts);
    out.result["truncated"] = truncated;
    Json evs = Json::array();
    std::string csv = "event,from,to,departure_time,arrival_time,duration,min_distance_to_saddle\n";
    std::string slices = "event,t";
    for (int a = 0; a < n; ++a) slices += ",p" + std::to_string(a + 1);
    slices += "\n";
    for (std::size_t e = 0; e < events.size(); ++e) {
        const auto& ev = events[e];
        Json ej;
        ej["from_point"] = ev.from_point;
        ej["to_point"] = ev.to_point;
        ej["from_location"] = vec_json(points[ev.from_point].location);
        ej["to_location"] = vec_json(points[ev.to_point].location);
        ej["departure_time"] = ev.departure_time;
        ej["arrival_time"] = ev.arrival_time;
        if (ev.min_distance_to_saddle) ej["min_distance_to_saddle"] = *ev.min_distance_to_saddle;
        Json sd = Json::array();
        for (const auto& [id, dist] : ev.saddle_distances)
            sd.push_back(Json{{"point", id}, {"distance", dist}});
        ej["saddle_distances"] = std::move(sd);
        evs.push_back(std::move(ej));

        csv += std::to_string(e) + "," + std::to_string(ev.from_point) + "," +
               std::to_string(ev.to_point) + "," + fmt(ev.departure_time) + "," +
               fmt(ev.arrival_time) + "," + fmt(ev.arrival_time - ev.departure_time) + "," +
               (ev.min_distance_to_saddle ? fmt(*ev.min_distance_to_saddle) : "") + "\n";
        for (long i = 0; i < ev.path_slice.size(); ++i) {
            slices += std::to_string(e) + "," + fmt(ev.path_slice.times[i]);
            for (int a = 0; a < n; ++a) slices += "," + fmt(ev.path_slice.states(a, i));
            slices += "\n";
        }
    }
    out.result["events"] = std::move(evs);
    out.result["event_count"] = events.size();
    out.csv_files.emplace_back("transitions.csv", std::move(csv));
    out.csv_files.emplace_back("transition_paths.csv", std::move(slices));
    out.summary = Json{{"events", events.size()}, {"truncated", truncated}};
    return out;
}

const CriticalPoint& nearest_stable(const std::vector<CriticalPoint>& points, const Vec& to,
                                    const std::string& what) {
    const CriticalPoint* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& cp : points) {
        if (cp.stability != Stability::Stable) continue;
        const double d = (cp.location - to).norm();
        if (d < best_d) { best_d = d; best = &cp; }
    }
    if (!best) throw NumericalError(what + ": no stable critical point found");
    return *best;
}

RunOutcome run_mfpt(const Scenario& sc) {
    const FieldSpec& field = field_of(sc);
    if (!sc.mfpt) throw ConfigError("mfpt: scenario lacks an [mfpt] section");
    const auto points = find_critical_points(field, sc.box, sc.multistart, sc.root_tol);
    const CriticalPoint& start = nearest_stable(points, sc.mfpt->start, "mfpt start");
    const CriticalPoint& target = nearest_stable(points, sc.mfpt->target, "mfpt target");
    if ((start.location - target.location).norm() < 1e-9)
        throw ConfigError("mfpt: start and target resolve to the same stable point");

    const auto table =
        mean_first_passage(field, start, target, sc.mfpt->epsilons, sc.mfpt->ensemble, sc.dt,
                           sc.mfpt->t_cap, sc.master_seed, sc.capture_radius,
                           sc.resolved_workers());

    RunOutcome out;
    out.json_name = "mfpt.json";
    out.result = base_result(sc, "mfpt");
    out.result["start"] = vec_json(start.location);
    out.result["target"] = vec_json(target.location);
    Json rows = Json::array();
    std::string csv = "epsilon,mean,std_error,ensemble,censored,t_cap\n";
    for (const auto& row : table.rows) {
        rows.push_back(Json{{"epsilon", row.epsilon},
                            {"mean", row.mean},
                            {"std_error", row.std_error},
                            {"ensemble", row.ensemble},
                            {"censored", row.censored},
                            {"t_cap", row.t_cap}});
        csv += fmt(row.epsilon) + "," + fmt(row.mean) + "," + fmt(row.std_error) + "," +
               std::to_string(row.ensemble) + "," + std::to_string(row.censored) + "," +
               fmt(row.t_cap) + "\n";
    }
    out.result["rows"] = std::move(rows);
    if (table.rows.size() >= 2) out.result["arrhenius_slope"] = arrhenius_slope(table);

    std::string times_csv = "epsilon,member,time\n";
    for (std::size_t e = 0; e < table.passage_times.size(); ++e)
        for (std::size_t m = 0; m < table.passage_times[e].size(); ++m)
            times_csv += fmt(table.rows[e].epsilon) + "," + std::to_string(m) + "," +
                         fmt(table.passage_times[e][m]) + "\n";
    out.csv_files.emplace_back("mfpt.csv", std::move(csv));
    out.csv_files.emplace_back("mfpt_times.csv", std::move(times_csv));
    out.summary = Json{{"epsilons", table.rows.size()}};
    return out;
}

PiecewisePath build_path(const Scenario& sc) {
    const PathActionConfig& cfg = *sc.path_action;
    if (cfg.kind == "straight") {
        Mat nodes(cfg.start.size(), cfg.n_nodes);
        for (int i = 0; i < cfg.n_nodes; ++i) {
            const double s = static_cast<double>(i) / (cfg.n_nodes - 1);
            nodes.col(i) = (1.0 - s) * cfg.start + s * cfg.end;
        }
        return cfg.t_total ? PiecewisePath::timed(std::move(nodes), *cfg.t_total)
                           : PiecewisePath::geometric(std::move(nodes));
    }
    return cfg.t_total ? PiecewisePath::timed(cfg.nodes, *cfg.t_total)
                       : PiecewisePath::geometric(cfg.nodes);
}

std::string path_csv(const PiecewisePath& path) {
    std::string out = path.geometric_only() ? "" : "t,";
    for (int a = 0; a < path.dimension(); ++a)
        out += "p" + std::to_string(a + 1) + (a + 1 < path.dimension() ? "," : "\n");
    for (long i = 0; i < path.size(); ++i) {
        if (!path.geometric_only()) out += fmt((*path.times)[i]) + ",";
        for (int a = 0; a < path.dimension(); ++a)
            out += fmt(path.nodes(a, i)) + (a + 1 < path.dimension() ? "," : "\n");
    }
    return out;
}

RunOutcome run_path_action(const Scenario& sc) {
    const FieldSpec& field = field_of(sc);
    if (!sc.path_action) throw ConfigError("path-action: scenario lacks a [path_action] section");
    const PiecewisePath path = build_path(sc);

    RunOutcome out;
    out.json_name = "path_action.json";
    out.result = base_result(sc, "path-action");
    if (field.has_solenoidal())
        out.result["line_integral_solenoidal"] = line_integral_solenoidal(path, field);
    if (field.has_potential() && field.has_solenoidal())
        out.result["positivity_margin"] = positivity_margin(path, field);
    if (!path.geometric_only()) {
        const ActionValue action = onsager_machlup_action(path, field, sc.path_action->epsilon);
        const ActionValue reversed =
            onsager_machlup_action(path.reversed(), field, sc.path_action->epsilon);
        out.result["action"] = action.total;
        out.result["action_reversed"] = reversed.total;
        out.result["epsilon"] = sc.path_action->epsilon;
    }
    out.csv_files.emplace_back("path.csv", path_csv(path));
    out.summary = Json{{"nodes", path.size()}};
    return out;
}

RunOutcome run_minimize_action(const Scenario& sc) {
    const FieldSpec& field = field_of(sc);
    if (!sc.minimize) throw ConfigError("minimize-action: scenario lacks a [minimize] section");
    const MinimizeConfig& cfg = *sc.minimize;

    // Ridge hint: the saddle nearest to the chord midpoint, when one exists.
    std::optional<Vec> hint;
    const auto points = find_critical_points(field, sc.box, sc.multistart, sc.root_tol);
    const Vec mid = 0.5 * (cfg.start + cfg.end);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cp : points) {
        if (cp.stability != Stability::Saddle && cp.stability != Stability::Unstable) continue;
        const double d = (cp.location - mid).norm();
        if (d < best) { best = d; hint = cp.location; }
    }

    const auto res = minimize_action(field, cfg.epsilon, cfg.start, cfg.end, cfg.n_nodes,
                                     cfg.t_total, cfg.max_iterations, cfg.tol, hint);
    const ActionValue reversed = onsager_machlup_action(res.path.reversed(), field, cfg.epsilon);

    RunOutcome out;
    out.json_name = "minimize_action.json";
    out.result = base_result(sc, "minimize-action");
    out.result["action"] = res.action.total;
    out.result["action_reversed"] = reversed.total;
    out.result["converged"] = res.converged;
    out.result["iterations"] = res.iterations;
    out.result["last_decrease"] = res.last_decrease;
    if (field.has_potential() && field.has_solenoidal())
        out.result["positivity_margin"] = positivity_margin(res.path, field);
    if (hint) out.result["ridge_hint"] = vec_json(*hint);
    out.csv_files.emplace_back("minimizer_path.csv", path_csv(res.path));
    out.summary = Json{{"action", res.action.total}, {"converged", res.converged}};
    return out;
}

RunOutcome run_appendix_demo(const Scenario& sc) {
    const FieldSpec& field = field_of(sc);
    const DoubleWellParams params = double_well_params(sc);
    const auto points = find_critical_points(field, sc.box, sc.multistart, sc.root_tol);
    const LPathReport report = l_path_report(params);

    RunOutcome out;
    out.json_name = "appendix_demo.json";
    out.result = base_result(sc, "appendix-demo");
    Json pts = Json::array();
    for (const auto& cp : points) pts.push_back(point_json(cp));
    out.result["critical_points"] = std::move(pts);
    auto path_json = [](const PiecewisePath& p, double closed, double quad, double margin) {
        Json nodes = Json::array();
        for (long i = 0; i < p.size(); ++i) nodes.push_back(vec_json(p.node(i)));
        return Json{{"nodes", std::move(nodes)},
                    {"integral_closed_form", closed},
                    {"integral_quadrature", quad},
                    {"positivity_margin", margin}};
    };
    out.result["path_a"] = path_json(report.path_a, report.integral_a_closed,
                                     report.integral_a_quadrature, report.margin_a);
    out.result["path_b"] = path_json(report.path_b, report.integral_b_closed,
                                     report.integral_b_quadrature, report.margin_b);
    out.result["potential_drop"] = report.potential_drop;
    out.result["favored"] = report.favored;
    out.csv_files.emplace_back("critical_points.csv", points_csv(points, field.dimension()));
    out.summary = Json{{"favored", report.favored}, {"points", points.size()}};
    return out;
}

RunOutcome run_compare(const Scenario& sc) {
    const FieldSpec& field = field_of(sc);
    if (!sc.parameters_prime) throw ConfigError("compare-scenarios: scenario lacks a [compare] section");
    const auto cmp = compare_scenarios(field, field.parameters(), *sc.parameters_prime, sc.box,
                                       sc.root_tol, sc.multistart);
    RunOutcome out;
    out.json_name = "compare_scenarios.json";
    out.result = base_result(sc, "compare-scenarios");
    Json pairs = Json::array();
    for (const auto& pair : cmp.pairs)
        pairs.push_back(Json{{"base", point_json(pair.base)},
                             {"variant", point_json(pair.variant)},
                             {"displacement", pair.displacement},
                             {"index_changed", pair.index_changed}});
    out.result["pairs"] = std::move(pairs);
    Json ub = Json::array(), uv = Json::array();
    for (const auto& cp : cmp.unmatched_base) ub.push_back(point_json(cp));
    for (const auto& cp : cmp.unmatched_variant) uv.push_back(point_json(cp));
    out.result["unmatched_base"] = std::move(ub);
    out.result["unmatched_variant"] = std::move(uv);
    out.summary = Json{{"pairs", cmp.pairs.size()},
                       {"unmatched", cmp.unmatched_base.size() + cmp.unmatched_variant.size()}};
    return out;
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "critical-points", "decompose",       "simulate",      "transitions", "mfpt",
        "path-action",     "minimize-action", "appendix-demo", "compare-scenarios"};
    return names;
}

RunOutcome run_experiment(const std::string& subcommand, const Scenario& sc) {
    if (subcommand == "critical-points") return run_critical_points(sc);
    if (subcommand == "decompose") return run_decompose(sc);
    if (subcommand == "simulate") return run_simulate(sc);
    if (subcommand == "transitions") return run_transitions(sc);
    if (subcommand == "mfpt") return run_mfpt(sc);
    if (subcommand == "path-action") return run_path_action(sc);
    if (subcommand == "minimize-action") return run_minimize_action(sc);
    if (subcommand == "appendix-demo") return run_appendix_demo(sc);
    if (subcommand == "compare-scenarios") return run_compare(sc);
    throw ConfigError("unknown subcommand '" + subcommand + "'");
}

std::vector<std::string> execute_and_write(const std::string& subcommand, const Scenario& sc,
                                           const std::string& output_dir) {
    const std::string started = iso_now();
    RunOutcome outcome = run_experiment(subcommand, sc);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + output_dir);

    std::vector<std::string> written;
    Json inventory = Json::array();
    auto write_file = [&](const std::string& name, const std::string& content) {
        const fs::path path = fs::path(output_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write " + path.string());
        f << content;
        f.close();
        if (!f) throw IoError("write failed for " + path.string());
        written.push_back(path.string());
        inventory.push_back(Json{{"path", name}, {"bytes", content.size()}});
    };

    write_file(outcome.json_name, outcome.result.dump(2) + "\n");
    for (const auto& [name, content] : outcome.csv_files) write_file(name, content);

    Json manifest;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["subcommand"] = subcommand;
    manifest["scenario_name"] = sc.name;
    manifest["scenario_hash"] = sc.hash;
    manifest["started_at"] = started;
    manifest["finished_at"] = iso_now();
    manifest["outputs"] = std::move(inventory);
    manifest["summary"] = outcome.summary;
    const fs::path mpath = fs::path(output_dir) / "manifest.json";
    std::ofstream mf(mpath, std::ios::binary);
    if (!mf) throw IoError("cannot write " + mpath.string());
    mf << manifest.dump(2) << "\n";
    written.push_back(mpath.string());
    return written;
}

}  // namespace tatlab
