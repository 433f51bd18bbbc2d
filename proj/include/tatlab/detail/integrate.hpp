#pragma once

#include "tatlab/field.hpp"

namespace tatlab::detail {

/// One classical Runge-Kutta step of dp/dt = A(p). Stage evaluations bypass
/// the domain check; callers police domain exit on committed states.
inline Vec rk4_step(const FieldSpec& field, const Vec& p, double dt) {
    const Vec k1 = field.evaluate_unchecked(p);
    const Vec k2 = field.evaluate_unchecked(p + 0.5 * dt * k1);
    const Vec k3 = field.evaluate_unchecked(p + 0.5 * dt * k2);
    const Vec k4 = field.evaluate_unchecked(p + dt * k3);
    return p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace tatlab::detail
