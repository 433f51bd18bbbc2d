#include "tatlab/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "tatlab/detail/integrate.hpp"
#include "tatlab/parallel.hpp"
#include "tatlab/rng.hpp"

namespace tatlab {

void NoiseSpec::validate() const {
    if (covariance.rows() != covariance.cols())
        throw ConfigError("noise: covariance must be square");
    if (!covariance.allFinite())
        throw ConfigError("noise: covariance has non-finite entries");
    const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw ConfigError("noise: covariance must be symmetric within 1e-12 (asymmetry " +
                          std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<Mat> es(covariance);
    if (es.info() != Eigen::Success)
        throw NumericalError("noise: eigenvalue check failed");
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw ConfigError("noise: covariance must be positive semi-definite "
                          "(smallest eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()) + ")");
}

Mat NoiseSpec::factor() const {
    validate();
    Eigen::SelfAdjointEigenSolver<Mat> es(covariance);
    const Vec clipped = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * clipped.cwiseSqrt().asDiagonal();
}

NoiseSpec NoiseSpec::isotropic(int dim, double epsilon, std::uint64_t seed) {
    if (epsilon < 0.0) throw ConfigError("noise: epsilon must be >= 0");
    NoiseSpec n;
    n.covariance = epsilon * Mat::Identity(dim, dim);
    n.seed = seed;
    return n;
}

namespace {

long resolve_steps(double T, double dt, int record_stride) {
    if (dt <= 0.0) throw ConfigError("integration: dt must be > 0");
    if (T < dt) throw ConfigError("integration: T must be >= dt");
    if (record_stride < 1) throw ConfigError("integration: record_stride must be >= 1");
    const long steps = std::llround(T / dt);
    if (steps % record_stride != 0)
        throw ConfigError("integration: record_stride must divide the step count");
    return steps;
}

}  // namespace

Trajectory integrate_deterministic(const FieldSpec& field, const Vec& p0, double T,
                                   double dt, int record_stride) {
    if (p0.size() != field.dimension())
        throw ConfigError("integration: initial state dimension mismatch");
    if (!field.domain().contains(p0, FieldSpec::kDomainSlack))
        throw ConfigError("integration: initial state outside the domain box");
    const long steps = resolve_steps(T, dt, record_stride);
    const long n_records = steps / record_stride + 1;

    Trajectory traj;
    traj.dt = dt;
    traj.record_stride = record_stride;
    traj.scheme = "rk4";
    traj.states.resize(field.dimension(), n_records);
    traj.times.reserve(n_records);

    Vec p = p0;
    traj.states.col(0) = p;
    traj.times.push_back(0.0);
    long written = 1;
    for (long s = 1; s <= steps; ++s) {
        p = detail::rk4_step(field, p, dt);
        if (!p.allFinite())
            throw NumericalError("integration: state became non-finite at t = " +
                                 std::to_string(s * dt));
        if (!field.domain().contains(p, FieldSpec::kDomainSlack)) {
            traj.truncated = true;
            break;
        }
        if (s % record_stride == 0) {
            traj.states.col(written++) = p;
            traj.times.push_back(s * dt);
        }
    }
    traj.states.conservativeResize(Eigen::NoChange, written);
    return traj;
}

Trajectory simulate_sde(const FieldSpec& field, const NoiseSpec& noise, const Vec& p0,
                        double T, double dt, int record_stride) {
    if (p0.size() != field.dimension())
        throw ConfigError("sde: initial state dimension mismatch");
    if (noise.covariance.rows() != field.dimension())
        throw ConfigError("sde: covariance dimension mismatch");
    if (!field.domain().contains(p0, FieldSpec::kDomainSlack))
        throw ConfigError("sde: initial state outside the domain box");
    const long steps = resolve_steps(T, dt, record_stride);
    const long n_records = steps / record_stride + 1;
    const Mat L = noise.factor();
    const double sqrt_dt = std::sqrt(dt);
    GaussianStream rng(noise.seed);

    Trajectory traj;
    traj.dt = dt;
    traj.record_stride = record_stride;
    traj.scheme = "euler-maruyama";
    traj.seed = noise.seed;
    traj.states.resize(field.dimension(), n_records);
    traj.times.reserve(n_records);

    const int n = field.dimension();
    Vec p = p0, z(n);
    traj.states.col(0) = p;
    traj.times.push_back(0.0);
    long written = 1;
    for (long s = 1; s <= steps; ++s) {
        for (int i = 0; i < n; ++i) z[i] = rng.gauss();
        p += field.evaluate_unchecked(p) * dt + sqrt_dt * (L * z);
        if (!p.allFinite() || !field.domain().contains(p, FieldSpec::kDomainSlack)) {
            traj.truncated = true;
            break;
        }
        if (s % record_stride == 0) {
            traj.states.col(written++) = p;
            traj.times.push_back(s * dt);
        }
    }
    traj.states.conservativeResize(Eigen::NoChange, written);
    return traj;
}

TransitionDetector::TransitionDetector(std::vector<CriticalPoint> points,
                                       double capture_radius, double hysteresis_radius,
                                       int slice_stride)
    : points_(std::move(points)),
      capture_(capture_radius),
      release_(hysteresis_radius),
      slice_stride_(slice_stride) {
    if (!(capture_ > 0.0) || !(release_ > capture_))
        throw ConfigError("transitions: need hysteresis_radius > capture_radius > 0");
    if (slice_stride_ < 1) throw ConfigError("transitions: slice stride must be >= 1");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].stability == Stability::Stable)
            stable_ids_.push_back(static_cast<int>(i));
        if (points_[i].stability == Stability::Saddle ||
            points_[i].stability == Stability::Unstable)
            saddle_ids_.push_back(static_cast<int>(i));
    }
    if (stable_ids_.size() < 2)
        throw ConfigError("transitions: at least two stable points must be registered");
    saddle_min_.assign(saddle_ids_.size(), std::numeric_limits<double>::infinity());
}

void TransitionDetector::reset_buffer(double t, const Vec& p) {
    buffer_times_.clear();
    buffer_states_.clear();
    buffer_times_.push_back(t);
    buffer_states_.push_back(p);
    observed_since_reset_ = 0;
    saddle_min_.assign(saddle_ids_.size(), std::numeric_limits<double>::infinity());
    for (std::size_t q = 0; q < saddle_ids_.size(); ++q)
        saddle_min_[q] = (p - points_[saddle_ids_[q]].location).norm();
}

void TransitionDetector::observe(double t, const Vec& p) {
    ++observed_since_reset_;
    for (std::size_t q = 0; q < saddle_ids_.size(); ++q)
        saddle_min_[q] = std::min(saddle_min_[q], (p - points_[saddle_ids_[q]].location).norm());
    if (!buffer_times_.empty() && observed_since_reset_ % slice_stride_ == 0) {
        buffer_times_.push_back(t);
        buffer_states_.push_back(p);
    }

    int captured = -1;
    for (int id : stable_ids_) {
        if ((p - points_[id].location).norm() <= capture_) {
            captured = id;
            break;
        }
    }

    if (captured >= 0) {
        if (last_visited_ >= 0 && captured != last_visited_) {
            TransitionEvent ev;
            ev.from_point = last_visited_;
            ev.to_point = captured;
            ev.departure_time = buffer_times_.empty() ? t : buffer_times_.front();
            ev.arrival_time = t;
            if (!buffer_times_.empty() &&
                (buffer_times_.back() != t)) {
                buffer_times_.push_back(t);
                buffer_states_.push_back(p);
            }
            Trajectory slice;
            slice.scheme = "slice";
            slice.dt = buffer_times_.size() > 1 ? buffer_times_[1] - buffer_times_[0] : 0.0;
            slice.times = buffer_times_;
            slice.states.resize(p.size(), static_cast<long>(buffer_states_.size()));
            for (std::size_t i = 0; i < buffer_states_.size(); ++i)
                slice.states.col(static_cast<long>(i)) = buffer_states_[i];
            ev.path_slice = std::move(slice);
            for (std::size_t q = 0; q < saddle_ids_.size(); ++q)
                ev.saddle_distances.emplace_back(saddle_ids_[q], saddle_min_[q]);
            if (!saddle_ids_.empty())
                ev.min_distance_to_saddle =
                    *std::min_element(saddle_min_.begin(), saddle_min_.end());
            events_.push_back(std::move(ev));
        }
        last_visited_ = captured;
        inside_release_ = true;
        reset_buffer(t, p);  // slice anchor: last sample within capture radius
        return;
    }

    if (last_visited_ >= 0 && inside_release_) {
        if ((p - points_[last_visited_].location).norm() > release_)
            inside_release_ = false;  // the visit has ended
    }
}

std::vector<TransitionEvent> detect_transitions(const Trajectory& traj,
                                                const std::vector<CriticalPoint>& points,
                                                double capture_radius,
                                                double hysteresis_radius) {
    TransitionDetector detector(points, capture_radius, hysteresis_radius, 1);
    for (long i = 0; i < traj.size(); ++i) detector.observe(traj.times[i], traj.state(i));
    return detector.take_events();
}

MfptTable mean_first_passage(const FieldSpec& field, const CriticalPoint& start,
                             const CriticalPoint& target,
                             const std::vector<double>& epsilons, int ensemble,
                             double dt, double t_cap, std::uint64_t master_seed,
                             double capture_radius, int workers) {
    if (epsilons.empty()) throw ConfigError("mfpt: need at least one epsilon");
    for (double e : epsilons)
        if (!(e > 0.0)) throw ConfigError("mfpt: epsilon values must be > 0");
    if (ensemble < 100) throw ConfigError("mfpt: ensemble size must be >= 100");
    if (dt <= 0.0 || t_cap <= dt) throw ConfigError("mfpt: need t_cap > dt > 0");
    if (capture_radius <= 0.0) throw ConfigError("mfpt: capture radius must be > 0");

    const int n = field.dimension();
    const long max_steps = static_cast<long>(std::ceil(t_cap / dt));
    const double sqrt_dt = std::sqrt(dt);

    MfptTable table;
    for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
        const double eps = epsilons[ei];
        const double sigma = std::sqrt(eps);
        std::vector<double> times(ensemble, t_cap);
        std::vector<char> censored(ensemble, 1);

        parallel_for(ensemble, workers, [&](long member) {
            GaussianStream rng(GaussianStream::derive(master_seed, ei, member));
            Vec p = start.location;
            Vec z(n);
            // Unchecked stepping: the escape problem is global, the family
            // extrapolates smoothly outside the declared box.
            for (long s = 1; s <= max_steps; ++s) {
                for (int i = 0; i < n; ++i) z[i] = rng.gauss();
                p += field.evaluate_unchecked(p) * dt + (sigma * sqrt_dt) * z;
                if (!p.allFinite())
                    throw NumericalError("mfpt: state became non-finite (epsilon " +
                                         std::to_string(eps) + ")");
                if ((p - target.location).norm() <= capture_radius) {
                    times[member] = s * dt;
                    censored[member] = 0;
                    break;
                }
            }
        });

        MfptRow row;
        row.epsilon = eps;
        row.ensemble = ensemble;
        row.t_cap = t_cap;
        long n_ok = 0;
        double sum = 0.0;
        for (int i = 0; i < ensemble; ++i) {
            if (censored[i]) ++row.censored;
            else { sum += times[i]; ++n_ok; }
        }
        if (n_ok > 0) {
            row.mean = sum / n_ok;
            double ss = 0.0;
            for (int i = 0; i < ensemble; ++i)
                if (!censored[i]) ss += (times[i] - row.mean) * (times[i] - row.mean);
            row.std_error = n_ok > 1 ? std::sqrt(ss / (n_ok - 1) / n_ok) : 0.0;
        }
        table.rows.push_back(row);
        table.passage_times.push_back(std::move(times));
    }
    return table;
}

double energy_identity_check(const Trajectory& traj, const FieldSpec& field) {
    if (!field.has_potential() || !field.has_solenoidal())
        throw ConfigError("energy identity: field must declare analytic potential and solenoidal parts");
    if (traj.size() < 2) return 0.0;

    double kinetic = 0.0;   // trapezoid of |A(p)|^2 (dp/dt = A along the flow)
    double line_abar = 0.0; // trapezoid of Abar . dp
    const double h = traj.record_dt();
    Vec prev = traj.state(0);
    double prev_speed2 = field.evaluate(prev).squaredNorm();
    Vec prev_abar = field.solenoidal_at(prev);
    for (long i = 1; i < traj.size(); ++i) {
        const Vec cur = traj.state(i);
        const double speed2 = field.evaluate(cur).squaredNorm();
        kinetic += 0.5 * (prev_speed2 + speed2) * h;
        const Vec abar = field.solenoidal_at(cur);
        line_abar += 0.5 * (prev_abar + abar).dot(cur - prev);
        prev = cur;
        prev_speed2 = speed2;
        prev_abar = abar;
    }
    const double drop = field.potential_at(traj.state(0)) - field.potential_at(traj.final_state());
    return std::abs(kinetic - (drop + line_abar));
}

double arrhenius_slope(const MfptTable& table) {
    std::vector<double> xs, ys;
    for (const auto& row : table.rows) {
        if (row.censored >= row.ensemble || row.mean <= 0.0) continue;
        xs.push_back(1.0 / row.epsilon);
        ys.push_back(std::log(row.mean));
    }
    if (xs.size() < 2)
        throw NumericalError("arrhenius_slope: need at least two usable epsilon rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300)
        throw NumericalError("arrhenius_slope: degenerate epsilon spacing");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace tatlab
