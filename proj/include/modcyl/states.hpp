#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "common.hpp"
#include "geometry.hpp"

namespace modcyl {

enum class BoundaryCondition { NS, R };

enum class StateClass { Mixed, PureTipPlus, PureTipMinus, PureRim };

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

/// Ground-state parameters. NS has a unique ground state and carries no
/// zero-mode data; the periodic (R) ground states form a four-parameter
/// family: two eigenvalues h1, h2 of the zero-mode matrix (units 1/length,
/// each bounded by 1/(2L)) and the eigenbasis angles psi in [0, pi],
/// phi in [0, 2 pi). For h1 == h2 the angles are gauge; we canonicalize to
/// psi = phi = 0 on construction.
struct StateParams {
    BoundaryCondition bc = BoundaryCondition::NS;
    double h1 = 0.0, h2 = 0.0;
    double psi = 0.0, phi = 0.0;

    static StateParams ns() { return {}; }

    static StateParams ramond(double h1, double h2, double psi, double phi, const Geometry& g) {
        const double hmax = 0.5 / g.L;
        if (std::abs(h1) > hmax * (1.0 + 1e-12) || std::abs(h2) > hmax * (1.0 + 1e-12))
            throw std::domain_error("state: |h_i| must not exceed 1/(2L)");
        if (!(psi >= 0.0 && psi <= pi)) throw std::domain_error("state: psi outside [0, pi]");
        StateParams p;
        p.bc = BoundaryCondition::R;
        p.h1 = std::clamp(h1, -hmax, hmax);
        p.h2 = std::clamp(h2, -hmax, hmax);
        if (p.h1 == p.h2) {
            p.psi = 0.0;
            p.phi = 0.0;
        } else {
            p.psi = psi;
            p.phi = std::remainder(phi, 2.0 * pi);
            if (p.phi < 0.0) p.phi += 2.0 * pi;
        }
        return p;
    }

    bool is_ramond() const { return bc == BoundaryCondition::R; }
};

/// Zero-mode matrix h = (h1+h2)/2 * 1 + (h1-h2)/2 * n(psi, phi).
inline Mat2 build_h(const StateParams& p, const Geometry& g) {
    if (!p.is_ramond())
        throw std::invalid_argument("build_h: antiperiodic states have no zero mode");
    const double hmax = 0.5 / g.L;
    if (std::abs(p.h1) > hmax || std::abs(p.h2) > hmax)
        throw std::domain_error("build_h: |h_i| must not exceed 1/(2L)");
    const double avg = 0.5 * (p.h1 + p.h2);
    const double dif = 0.5 * (p.h1 - p.h2);
    const complex e = std::exp(1i * p.phi);
    Mat2 h;
    h << avg + dif * std::cos(p.psi), dif * std::sin(p.psi) * e,
        dif * std::sin(p.psi) * std::conj(e), avg - dif * std::cos(p.psi);
    return h;
}

/// Zero-mode covariance g = h + 1/(2L); L*g is Hermitian with spectrum in [0, 1].
inline Mat2 g_covariance(const StateParams& p, const Geometry& g) {
    return build_h(p, g) + Mat2::Identity() * (0.5 / g.L);
}

/// Purity classification with a relative tolerance: the state is pure exactly
/// on the boundary of the admissible double cone, where floating-point
/// equality is meaningless.
inline StateClass classify(const StateParams& p, const Geometry& g) {
    if (!p.is_ramond()) return StateClass::Mixed;  // NS ground state is pure but has no cone
    const double hmax = 0.5 / g.L;
    const double tol = 1e-12 * hmax;
    const bool top1 = std::abs(p.h1 - hmax) <= tol, bot1 = std::abs(p.h1 + hmax) <= tol;
    const bool top2 = std::abs(p.h2 - hmax) <= tol, bot2 = std::abs(p.h2 + hmax) <= tol;
    if (top1 && top2) return StateClass::PureTipPlus;
    if (bot1 && bot2) return StateClass::PureTipMinus;
    if ((top1 && bot2) || (bot1 && top2)) return StateClass::PureRim;
    return StateClass::Mixed;
}

inline const char* to_string(StateClass c) {
    switch (c) {
        case StateClass::Mixed: return "mixed";
        case StateClass::PureTipPlus: return "tip-plus";
        case StateClass::PureTipMinus: return "tip-minus";
        case StateClass::PureRim: return "rim";
    }
    return "?";
}

// Named presets used across the CLI and the verification suite.

inline StateParams preset_ns_vacuum() { return StateParams::ns(); }

inline StateParams preset_zero_temperature(const Geometry& g) {
    return StateParams::ramond(0.0, 0.0, 0.0, 0.0, g);
}

/// Massless limit of the massive vacuum: a pure rim state.
inline StateParams preset_massive_vacuum(const Geometry& g) {
    const double hmax = 0.5 / g.L;
    return StateParams::ramond(-hmax, hmax, 0.5 * pi, 0.5 * pi, g);
}

inline StateParams preset_tip(int sign, const Geometry& g) {
    const double hmax = sign >= 0 ? 0.5 / g.L : -0.5 / g.L;
    return StateParams::ramond(hmax, hmax, 0.0, 0.0, g);
}

inline StateParams preset_rim(double psi, double phi, const Geometry& g, int sign = +1) {
    const double hmax = 0.5 / g.L;
    return sign >= 0 ? StateParams::ramond(hmax, -hmax, psi, phi, g)
                     : StateParams::ramond(-hmax, hmax, psi, phi, g);
}

}  // namespace modcyl
