#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "common.hpp"

namespace modcyl {

/// The two spinor components. Component-two quantities are the sign mirror
/// of component-one ones: the flow coordinate flips sign and trajectories
/// run backwards.
enum class Chirality : int { one = 1, two = 2 };

inline constexpr double chirality_sign(Chirality a) {
    return a == Chirality::one ? 1.0 : -1.0;
}

/// Cylinder of circumference L with the symmetric interval [-ell, ell],
/// 0 < 2 ell < L. All kernel formulas live on this pair.
struct Geometry {
    double L;
    double ell;

    Geometry(double circumference, double half_interval) : L(circumference), ell(half_interval) {
        if (!(L > 0.0) || !std::isfinite(L)) throw std::domain_error("geometry: L must be positive");
        if (!(ell > 0.0) || !(2.0 * ell < L))
            throw std::domain_error("geometry: need 0 < 2*ell < L");
    }

    /// sin[(pi/L) u] with the argument reduced modulo the 2L period first.
    double sin_pl(double u) const { return std::sin(pi / L * std::remainder(u, 2.0 * L)); }
    complex sin_pl(complex u) const { return std::sin(pi / L * u); }
    double cos_pl(double u) const { return std::cos(pi / L * std::remainder(u, 2.0 * L)); }

    double sin_plus(double x) const { return sin_pl(ell + x); }    // sin[(pi/L)(ell+x)]
    double sin_minus(double x) const { return sin_pl(ell - x); }   // sin[(pi/L)(ell-x)]

    /// sin[(pi/L)(ell+x)] sin[(pi/L)(ell-x)]; positive inside the interval,
    /// vanishing linearly at the endpoints.
    double endpoint_product(double x) const { return sin_plus(x) * sin_minus(x); }

    double sin_interval() const { return std::sin(2.0 * pi * ell / L); }  // sin(2 pi ell / L)

    bool at_boundary(double x) const { return ell - std::abs(x) <= 1e-14 * ell; }

    void require_inside(double x, const char* who) const {
        if (!(std::abs(x) <= ell) || !std::isfinite(x))
            throw std::domain_error(std::string(who) + ": position outside [-ell, ell]");
    }
};

/// Monotone coordinate on (-ell, ell) in which the modular trajectories are
/// uniform translations. Component one increases from -inf to +inf across the
/// interval; component two is its negative.
inline double flow_coordinate(Chirality a, double x, const Geometry& g) {
    g.require_inside(x, "flow_coordinate");
    if (g.at_boundary(x)) {
        double inf = std::numeric_limits<double>::infinity();
        return chirality_sign(a) * (x > 0.0 ? inf : -inf);
    }
    return chirality_sign(a) * std::log(g.sin_plus(x) / g.sin_minus(x));
}

/// Derivative of the component-one flow coordinate, in the overflow-safe
/// product form (pi/L) sin(2 pi ell/L) / (sin_plus sin_minus). Positive.
inline double flow_coordinate_deriv(double x, const Geometry& g) {
    g.require_inside(x, "flow_coordinate_deriv");
    return pi / g.L * g.sin_interval() / g.endpoint_product(x);
}

/// Inverse of the component-one flow coordinate.
inline double flow_coordinate_inverse(double eta, const Geometry& g) {
    if (std::isinf(eta)) return eta > 0 ? g.ell : -g.ell;
    return g.L / pi * std::atan(std::tan(pi * g.ell / g.L) * std::tanh(0.5 * eta));
}

/// Position reached from y after modular time t along the component-one
/// trajectory: the unique x in (-ell, ell) whose flow coordinate exceeds the
/// one of y by 2 pi t. Evaluated in a form that never overflows in t.
inline double flow_trajectory(double y, double t, const Geometry& g) {
    g.require_inside(y, "flow_trajectory");
    if (g.at_boundary(y)) throw std::domain_error("flow_trajectory: y at interval endpoint");
    const double sp = g.sin_plus(y), sm = g.sin_minus(y);
    double ratio;
    if (t >= 0.0) {
        const double e = std::exp(-2.0 * pi * t);
        ratio = (sp - sm * e) / (sp + sm * e);
    } else {
        const double e = std::exp(2.0 * pi * t);
        ratio = (sp * e - sm) / (sp * e + sm);
    }
    return g.L / pi * std::atan(std::tan(pi * g.ell / g.L) * ratio);
}

/// Difference sign_a*Omega1(x) - sign_b*Omega1(y) of flow coordinates,
/// computed as the log of a single ratio of four sine factors so that the
/// endpoint divergences never cancel catastrophically.
inline double flow_coordinate_diff(Chirality a, double x, Chirality b, double y,
                                   const Geometry& g) {
    double num = 1.0, den = 1.0;
    if (a == Chirality::one) {
        num *= g.sin_plus(x);
        den *= g.sin_minus(x);
    } else {
        num *= g.sin_minus(x);
        den *= g.sin_plus(x);
    }
    if (b == Chirality::one) {
        num *= g.sin_minus(y);
        den *= g.sin_plus(y);
    } else {
        num *= g.sin_plus(y);
        den *= g.sin_minus(y);
    }
    return std::log(num / den);
}

/// Both sides of the product identity
///   1/sinh[(Omega1(x) - Omega1(y))/2]
///     = 2 sqrt(P(x) P(y)) / (sin(2 pi ell/L) sin[(pi/L)(x-y)]),
/// with P the endpoint product. Exposed as a numerical self-test.
inline std::pair<double, double> sinh_coordinate_identity(double x, double y, const Geometry& g) {
    g.require_inside(x, "sinh_coordinate_identity");
    g.require_inside(y, "sinh_coordinate_identity");
    if (x == y) throw std::domain_error("sinh_coordinate_identity: coincident points");
    const double lhs =
        1.0 / std::sinh(0.5 * flow_coordinate_diff(Chirality::one, x, Chirality::one, y, g));
    const double rhs = 2.0 * std::sqrt(g.endpoint_product(x) * g.endpoint_product(y)) /
                       (g.sin_interval() * g.sin_pl(x - y));
    return {lhs, rhs};
}

}  // namespace modcyl
