#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tatlab/critical.hpp"
#include "tatlab/field.hpp"

namespace tatlab {

/// White-noise specification: <xi_i(t) xi_j(t')> = covariance_ij delta(t-t').
struct NoiseSpec {
    Mat covariance;
    std::uint64_t seed = 0;

    void validate() const;          // symmetric within 1e-12, eigenvalues >= -1e-12
    Mat factor() const;             // L with L L^T = covariance (PSD-safe)
    static NoiseSpec isotropic(int dim, double epsilon, std::uint64_t seed);
};

struct Trajectory {
    std::vector<double> times;  // uniform spacing dt * record_stride
    Mat states;                 // dimension x n_records; column i is p(times[i])
    double dt = 0.0;            // integration step
    int record_stride = 1;
    std::string scheme;
    std::optional<std::uint64_t> seed;
    bool truncated = false;  // stopped early: left the domain box or went non-finite

    long size() const { return static_cast<long>(times.size()); }
    Vec state(long i) const { return states.col(i); }
    Vec final_state() const { return states.col(states.cols() - 1); }
    double record_dt() const { return dt * record_stride; }
};

/// Classical fourth-order fixed-step integration of dp/dt = A(p).
/// record_stride must divide the step count; the final state is always the
/// last recorded column unless the trajectory was truncated at the domain
/// boundary.
Trajectory integrate_deterministic(const FieldSpec& field, const Vec& p0, double T,
                                   double dt, int record_stride = 1);

/// Euler-Maruyama under the Ito convention:
///   p_{t+dt} = p_t + A(p_t) dt + L sqrt(dt) z,   L L^T = covariance.
/// Reproducible for a fixed (seed, dt, T): the same seed gives bit-identical
/// trajectories.
Trajectory simulate_sde(const FieldSpec& field, const NoiseSpec& noise, const Vec& p0,
                        double T, double dt, int record_stride = 1);

struct TransitionEvent {
    int from_point = -1;  // indices into the registered critical points
    int to_point = -1;
    double departure_time = 0.0;  // last sample inside capture radius of from
    double arrival_time = 0.0;    // first sample inside capture radius of to
    Trajectory path_slice;
    /// Per registered saddle: (point index, min distance along the slice).
    std::vector<std::pair<int, double>> saddle_distances;
    /// Min over all registered saddles; absent when none registered.
    std::optional<double> min_distance_to_saddle;
};

/// Streaming visit state machine: a visit starts when the path enters the
/// capture radius of a stable point and ends only when it exits the
/// hysteresis (release) radius; consecutive distinct visits emit one event
/// bridging the last capture-radius sample of the origin to the first
/// capture-radius sample of the destination. Saddle distances are tracked
/// over every observed sample; slice storage may be decimated.
class TransitionDetector {
public:
    TransitionDetector(std::vector<CriticalPoint> points, double capture_radius,
                       double hysteresis_radius, int slice_stride = 1);

    void observe(double t, const Vec& p);
    const std::vector<TransitionEvent>& events() const { return events_; }
    std::vector<TransitionEvent> take_events() { return std::move(events_); }

private:
    void reset_buffer(double t, const Vec& p);

    std::vector<CriticalPoint> points_;
    std::vector<int> stable_ids_;
    std::vector<int> saddle_ids_;
    double capture_;
    double release_;
    int slice_stride_;

    int last_visited_ = -1;
    bool inside_release_ = false;
    std::vector<double> buffer_times_;
    std::vector<Vec> buffer_states_;
    long observed_since_reset_ = 0;
    std::vector<double> saddle_min_;
    std::vector<TransitionEvent> events_;
};

std::vector<TransitionEvent> detect_transitions(const Trajectory& traj,
                                                const std::vector<CriticalPoint>& points,
                                                double capture_radius,
                                                double hysteresis_radius);

struct MfptRow {
    double epsilon = 0.0;
    double mean = 0.0;       // over uncensored runs
    double std_error = 0.0;  // sample std / sqrt(n_uncensored)
    int ensemble = 0;
    int censored = 0;
    double t_cap = 0.0;
};

struct MfptTable {
    std::vector<MfptRow> rows;
    std::vector<std::vector<double>> passage_times;  // per epsilon, by member; censored = t_cap
};

/// Ensemble mean first passage time from `start` to within capture_radius of
/// `target` under isotropic noise eps * I, one independent seeded stream per
/// member. Runs hitting t_cap are censored and excluded from the mean.
/// Worker count never affects the results.
MfptTable mean_first_passage(const FieldSpec& field, const CriticalPoint& start,
                             const CriticalPoint& target,
                             const std::vector<double>& epsilons, int ensemble,
                             double dt, double t_cap, std::uint64_t master_seed,
                             double capture_radius = 0.1, int workers = 1);

/// Residual of the trajectory energy identity
///   int |dp/dt|^2 dt = V(p0) - V(pf) + int dp . Abar
/// under trapezoid quadrature, with dp/dt = A(p) along the flow.
double energy_identity_check(const Trajectory& traj, const FieldSpec& field);

/// Least-squares slope of ln(mean passage time) against 1/epsilon over the
/// table rows with at least one uncensored run. Needs >= 2 usable rows.
double arrhenius_slope(const MfptTable& table);

}  // namespace tatlab
