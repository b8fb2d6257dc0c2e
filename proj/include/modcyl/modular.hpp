#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "singular_kernel.hpp"
#include "states.hpp"
#include "test_functions.hpp"

namespace modcyl {

// ---------------------------------------------------------------------------
// Shared pieces
// ---------------------------------------------------------------------------

/// Chirality-mixing matrices attached to the two eigenvalue channels of the
/// non-local kernels: 1 +- cos(psi) on the diagonal, +- sin(psi) e^{+-i phi}
/// off it.
inline Mat2 channel_matrix(int i, double psi, double phi) {
    const double c = std::cos(psi), s = std::sin(psi);
    const complex e = std::exp(1i * phi);
    Mat2 m;
    if (i == 0)
        m << 1.0 + c, s * e, s * std::conj(e), 1.0 - c;
    else
        m << 1.0 - c, -s * e, -s * std::conj(e), 1.0 + c;
    return m;
}

/// diag(cos psi, -cos psi) + mirror mixing, the matrix of the rim limits.
inline Mat2 rim_matrix(double psi, double phi) {
    const complex e = std::exp(1i * phi);
    Mat2 m;
    m << std::cos(psi), std::sin(psi) * e, std::sin(psi) * std::conj(e), -std::cos(psi);
    return m;
}

/// Local coefficient of the modular Hamiltonian,
/// V(x) = [sin^2(pi ell/L) - sin^2(pi x/L)] / sin(2 pi ell/L);
/// tends to (ell^2 - x^2) pi / (2 ell L) * L ... -> pi (ell^2-x^2)/(2 ell)
/// times 2/L scaling in the flat-space regime (see hamiltonian tests).
inline double local_envelope(double x, const Geometry& g) {
    const double s = std::sin(pi * g.ell / g.L);
    const double sx = std::sin(pi * x / g.L);
    return (s * s - sx * sx) / g.sin_interval();
}

inline bool mixing_ratio_defined(const StateParams& p, const Geometry& g) {
    return std::abs(p.h1) < 0.5 / g.L && std::abs(p.h2) < 0.5 / g.L;
}

/// Oscillation bases (1 + 2 L h_i)/(1 - 2 L h_i) of the two channels.
inline double channel_base(int i, const StateParams& p, const Geometry& g) {
    const double h = i == 0 ? p.h1 : p.h2;
    return (1.0 + 2.0 * g.L * h) / (1.0 - 2.0 * g.L * h);
}

// ---------------------------------------------------------------------------
// Modular flow
// ---------------------------------------------------------------------------

/// Structured pointwise record of the flow kernel at (t, x, y): the local
/// part as a trajectory-condition residual plus transport weight, the
/// non-local part as the coefficient of Pf 1/sinh[(L/4ell) zeta_ab] and its
/// finite pointwise value off the singular locus.
struct FlowKernelRecord {
    double local_residual[2];   // 2 pi t - Omega_a(x) + Omega_a(y), per component
    double local_weight[2];     // transport weight sqrt(P(y*)/P(x)) at the trajectory
    Mat2 nonlocal_prefactor;    // multiplies Pf 1/sinh[(L/4ell) zeta_ab]
    Mat2 nonlocal_value;        // prefactor / sinh, finite off the locus
    bool has_nonlocal = false;
};

namespace detail {

struct FlowPlan {
    const Geometry* geo;
    StateParams state;
    StateClass cls;
    double t;
    bool nonlocal;  // mixed periodic state
    bool pure_extra;  // tip/rim delta terms
};

inline FlowPlan make_flow_plan(double t, const StateParams& state, const Geometry& g) {
    FlowPlan p{&g, state, classify(state, g), t, false, false};
    if (state.is_ramond()) {
        if (p.cls == StateClass::Mixed)
            p.nonlocal = true;
        else
            p.pure_extra = true;
    }
    return p;
}

/// Local transport: component one rides the trajectory forward, component
/// two backward; the weight is the square root of the endpoint-product ratio.
/// Periodic states additionally carry the cos[(pi/L)(x - y*)] factor of the
/// tan-kernel resolvent jump; without it the flow fails to be unitary at
/// second order in t (the factor is invisible in the generator since its
/// t-derivative vanishes at coincidence).
inline complex flow_local(const FlowPlan& p, int a, double x, const TestFunction1D& fa) {
    const Geometry& g = *p.geo;
    if (p.t == 0.0) return fa.f ? fa.f(x) : complex(0.0);
    const double dir = a == 0 ? -p.t : p.t;
    const double ystar = flow_trajectory(x, dir, g);
    if (!fa.f) return 0.0;
    double w = std::sqrt(g.endpoint_product(ystar) / g.endpoint_product(x));
    if (p.state.is_ramond()) w *= g.cos_pl(x - ystar);
    complex v = w * fa.f(ystar);
    if (p.pure_extra) {
        // tips: +- (2 pi i / L) sinh(pi t) delta[2pi t - Omega_a(x) + Omega_a(y)];
        // the same trajectory point with the Jacobian of the flow coordinate
        const double sign = p.cls == StateClass::PureTipPlus ? 1.0 : -1.0;
        if (p.cls == StateClass::PureTipPlus || p.cls == StateClass::PureTipMinus) {
            v += sign * 2.0 * pi * 1i / g.L * std::sinh(pi * p.t) * fa.f(ystar) /
                 flow_coordinate_deriv(ystar, g);
        }
    }
    return v;
}

/// Rim extra terms: delta-transport weighted by the rim matrix. The
/// off-diagonal entries transport from the trajectory through the mirrored
/// point -x; all four entries solve Omega_b(y) = Omega_a(x) - 2 pi t.
inline complex flow_rim_extra(const FlowPlan& p, int a, double x, const TestSpinor& f) {
    const Geometry& g = *p.geo;
    const StateParams& st = p.state;
    const double sign = st.h1 > 0.0 ? 1.0 : -1.0;  // rim branch h1 = -h2 = +-1/(2L)
    const Mat2 m = rim_matrix(st.psi, st.phi);
    complex v = 0.0;
    for (int b = 0; b < 2; ++b) {
        if (m(a, b) == complex(0.0) || !f[b].f) continue;
        const double base = a == b ? x : -x;
        const double y = flow_trajectory(base, b == 0 ? -p.t : p.t, g);
        v += sign * 2.0 * pi * 1i / g.L * std::sinh(pi * p.t) * m(a, b) * f[b].f(y) /
             flow_coordinate_deriv(y, g);
    }
    return v;
}

}  // namespace detail

/// Pointwise structured evaluation of the flow kernel.
inline FlowKernelRecord flow_kernel_eval(double t, double x, double y, const StateParams& state,
                                         const Geometry& g) {
    FlowKernelRecord rec{};
    for (int a = 0; a < 2; ++a) {
        const Chirality ca = a == 0 ? Chirality::one : Chirality::two;
        rec.local_residual[a] = 2.0 * pi * t - flow_coordinate_diff(ca, x, ca, y, g);
        const double dir = a == 0 ? -t : t;
        const double ystar = flow_trajectory(x, dir, g);
        rec.local_weight[a] = std::sqrt(g.endpoint_product(ystar) / g.endpoint_product(x));
        if (state.is_ramond()) rec.local_weight[a] *= g.cos_pl(x - ystar);
    }
    rec.nonlocal_prefactor = Mat2::Zero();
    rec.nonlocal_value = Mat2::Zero();
    if (state.is_ramond() && classify(state, g) == StateClass::Mixed) {
        rec.has_nonlocal = true;
        const double q1 = channel_base(0, state, g), q2 = channel_base(1, state, g);
        const Mat2 m1 = channel_matrix(0, state.psi, state.phi);
        const Mat2 m2 = channel_matrix(1, state.psi, state.phi);
        const double scale = g.L / (4.0 * g.ell);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const Chirality ca = a == 0 ? Chirality::one : Chirality::two;
                const Chirality cb = b == 0 ? Chirality::one : Chirality::two;
                const double zeta = 2.0 * pi * t - flow_coordinate_diff(ca, x, cb, y, g);
                const complex ph1 = std::exp(1i * (zeta * scale / pi * std::log(q1)));
                const complex ph2 = std::exp(1i * (zeta * scale / pi * std::log(q2)));
                const complex pref =
                    std::sinh(pi * t) / (4.0 * g.ell) * (ph1 * m1(a, b) + ph2 * m2(a, b));
                rec.nonlocal_prefactor(a, b) = pref;
                if (zeta != 0.0)
                    rec.nonlocal_value(a, b) = pref / std::sinh(scale * zeta);
            }
    }
    return rec;
}

/// Modular flow as a lazily evaluated spinor: local transport plus, for mixed
/// periodic states, the principal-value sinh smearing of the non-local part.
inline TestSpinor flow_evolve(double t, const TestSpinor& f, const StateParams& state,
                              const Geometry& g, const SmearSpec& spec = {}) {
    auto plan = std::make_shared<detail::FlowPlan>(detail::make_flow_plan(t, state, g));
    auto fcopy = std::make_shared<TestSpinor>(f);
    auto specc = std::make_shared<SmearSpec>(spec);

    // non-local smearing kernel, built once
    std::shared_ptr<SingularKernel1D> nl;
    if (plan->nonlocal && t != 0.0) {
        nl = std::make_shared<SingularKernel1D>();
        nl->geo = &g;
        nl->domain_lo = -g.ell;
        nl->domain_hi = g.ell;
        const double q1 = channel_base(0, state, g), q2 = channel_base(1, state, g);
        const Mat2 m1 = channel_matrix(0, state.psi, state.phi);
        const Mat2 m2 = channel_matrix(1, state.psi, state.phi);
        const double scale = g.L / (4.0 * g.ell);
        const double amp = std::sinh(pi * t) / (4.0 * g.ell);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                PVTerm term;
                term.a = a;
                term.b = b;
                term.sing.family = PVSingularity::Family::inv_sinh_omega;
                term.sing.omega_x = a == 0 ? Chirality::one : Chirality::two;
                term.sing.omega_y = b == 0 ? Chirality::one : Chirality::two;
                term.sing.scale = scale;
                term.sing.shift = 2.0 * pi * t;
                const complex c1 = amp * m1(a, b), c2 = amp * m2(a, b);
                const Chirality ca = term.sing.omega_x, cb = term.sing.omega_y;
                const double lq1 = std::log(q1), lq2 = std::log(q2);
                term.prefactor = [c1, c2, lq1, lq2, ca, cb, scale, t, &g](double x,
                                                                          double y) -> complex {
                    const double zeta = 2.0 * pi * t - flow_coordinate_diff(ca, x, cb, y, g);
                    const double u = zeta * scale / pi;
                    return c1 * std::exp(1i * (u * lq1)) + c2 * std::exp(1i * (u * lq2));
                };
                nl->pv.push_back(std::move(term));
            }
    }

    TestSpinor out;
    for (int a = 0; a < 2; ++a) {
        out[a].smoothness = Smoothness::schwartz_like;
        // transported support of the local part
        if (plan->nonlocal || plan->cls == StateClass::PureRim) {
            out[a].support_lo = -g.ell * (1.0 - 1e-12);
            out[a].support_hi = g.ell * (1.0 - 1e-12);
        } else {
            const double dir = a == 0 ? t : -t;
            const double lo = f[a].support_lo, hi = f[a].support_hi;
            out[a].support_lo = lo <= -g.ell ? -g.ell : flow_trajectory(lo, dir, g);
            out[a].support_hi = hi >= g.ell ? g.ell : flow_trajectory(hi, dir, g);
        }
        out[a].f = [plan, fcopy, specc, nl, a](double x) -> complex {
            complex v = detail::flow_local(*plan, a, x, (*fcopy)[a]);
            if (plan->pure_extra && plan->cls == StateClass::PureRim)
                v += detail::flow_rim_extra(*plan, a, x, *fcopy);
            if (nl) v += smear(*nl, *fcopy, x, *specc).value[a];
            return v;
        };
    }
    return out;
}

inline SampledSpinor flow_apply(double t, const TestSpinor& f, const StateParams& state,
                                const Geometry& g, const std::vector<double>& grid,
                                const SmearSpec& spec = {}) {
    TestSpinor ev = flow_evolve(t, f, state, g, spec);
    SampledSpinor out(grid);
    parallel_for(grid.size(), [&](std::size_t j) {
        out.v1[j] = ev[0].f(grid[j]);
        out.v2[j] = ev[1].f(grid[j]);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Modular Hamiltonian
// ---------------------------------------------------------------------------

/// Structured kernel of the modular Hamiltonian for the given state: the
/// delta-prime local part shared by all states, plus either the non-local
/// principal-value sinh part (mixed periodic states) or the corollary
/// delta / mirror-delta terms (pure periodic states).
inline SingularKernel1D hamiltonian_kernel(const StateParams& state, const Geometry& g) {
    SingularKernel1D k;
    k.geo = &g;
    k.domain_lo = -g.ell;
    k.domain_hi = g.ell;

    const double norm = 2.0 * g.L / g.sin_interval();
    const double s2 = std::sin(pi * g.ell / g.L) * std::sin(pi * g.ell / g.L);
    k.delta_prime = [norm, s2, &g](double x, double y) {
        Mat2 m = Mat2::Zero();
        const complex c = 1i * norm * (s2 - std::sin(pi * x / g.L) * std::sin(pi * y / g.L));
        m(0, 0) = c;
        m(1, 1) = -c;
        return m;
    };
    k.delta_prime_dy = [norm, &g](double x, double y) {
        Mat2 m = Mat2::Zero();
        const complex c =
            -1i * norm * (pi / g.L) * std::sin(pi * x / g.L) * std::cos(pi * y / g.L);
        m(0, 0) = c;
        m(1, 1) = -c;
        return m;
    };

    if (!state.is_ramond()) return k;

    const StateClass cls = classify(state, g);
    if (cls == StateClass::Mixed) {
        const double q1 = channel_base(0, state, g), q2 = channel_base(1, state, g);
        const Mat2 m1 = channel_matrix(0, state.psi, state.phi);
        const Mat2 m2 = channel_matrix(1, state.psi, state.phi);
        const double scale = g.L / (4.0 * g.ell);
        // 1/sinh[(L/4ell)(Omega_a(x)-Omega_b(y))] = -1/sinh[scale(Omega_b(y)-Omega_a(x))]
        const complex amp = -1i * pi / (4.0 * g.ell);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                PVTerm term;
                term.a = a;
                term.b = b;
                term.sing.family = PVSingularity::Family::inv_sinh_omega;
                term.sing.omega_x = a == 0 ? Chirality::one : Chirality::two;
                term.sing.omega_y = b == 0 ? Chirality::one : Chirality::two;
                term.sing.scale = scale;
                term.sing.shift = 0.0;
                const complex c1 = amp * m1(a, b), c2 = amp * m2(a, b);
                const Chirality ca = term.sing.omega_x, cb = term.sing.omega_y;
                const double lq1 = std::log(q1), lq2 = std::log(q2);
                term.prefactor = [c1, c2, lq1, lq2, ca, cb, scale, &g](double x,
                                                                       double y) -> complex {
                    const double d = flow_coordinate_diff(ca, x, cb, y, g);
                    const double u = -d * scale / pi;
                    return c1 * std::exp(1i * (u * lq1)) + c2 * std::exp(1i * (u * lq2));
                };
                k.pv.push_back(std::move(term));
            }
        return k;
    }

    // pure-state corollary terms
    if (cls == StateClass::PureTipPlus || cls == StateClass::PureTipMinus) {
        const double sign = cls == StateClass::PureTipPlus ? 1.0 : -1.0;
        k.delta_diag = [sign, &g](double x) {
            return Mat2(sign * 2.0 * pi * local_envelope(x, g) * Mat2::Identity());
        };
    } else {
        const double sign = state.h1 > 0.0 ? 1.0 : -1.0;
        const double psi = state.psi, phi = state.phi;
        k.delta_diag = [sign, psi, &g](double x) {
            Mat2 m = Mat2::Zero();
            const double c = sign * 2.0 * pi * local_envelope(x, g) * std::cos(psi);
            m(0, 0) = c;
            m(1, 1) = -c;
            return m;
        };
        k.delta_mirror = [sign, psi, phi, &g](double x) {
            Mat2 m = Mat2::Zero();
            const complex c =
                sign * 2.0 * pi * local_envelope(x, g) * std::sin(psi) * std::exp(1i * phi);
            m(0, 1) = c;
            m(1, 0) = std::conj(c);
            return m;
        };
    }
    return k;
}

/// Kernels of the pure-state limits, by cone extreme point. The angles only
/// matter on the rim.
inline SingularKernel1D pure_limit_hamiltonian(StateClass which, double psi, double phi,
                                               const Geometry& g) {
    StateParams p;
    switch (which) {
        case StateClass::PureTipPlus: p = preset_tip(+1, g); break;
        case StateClass::PureTipMinus: p = preset_tip(-1, g); break;
        case StateClass::PureRim: p = preset_rim(psi, phi, g, +1); break;
        default: throw std::invalid_argument("pure_limit_hamiltonian: not an extreme point");
    }
    return hamiltonian_kernel(p, g);
}

inline Vec2 hamiltonian_apply_at(const TestSpinor& f, double x, const StateParams& state,
                                 const Geometry& g, const SmearSpec& spec = {}) {
    SingularKernel1D k = hamiltonian_kernel(state, g);
    return smear(k, f, x, spec).value;
}

inline SampledSpinor hamiltonian_apply(const TestSpinor& f, const StateParams& state,
                                       const Geometry& g, const std::vector<double>& grid,
                                       const SmearSpec& spec = {}) {
    SingularKernel1D k = hamiltonian_kernel(state, g);
    SampledSpinor out(grid);
    parallel_for(grid.size(), [&](std::size_t j) {
        const Vec2 v = smear(k, f, grid[j], spec).value;
        out.v1[j] = v[0];
        out.v2[j] = v[1];
    });
    return out;
}

// ---------------------------------------------------------------------------
// Consistency drivers
// ---------------------------------------------------------------------------

struct GeneratorReport {
    std::vector<double> t;
    std::vector<double> error;  // ||(K_t f - f)/(i t) - H f|| / ||H f||
};

/// Difference quotient of the flow against the Hamiltonian along a list of
/// times; the error must shrink linearly in t.
inline GeneratorReport generator_check(const TestSpinor& f, const StateParams& state,
                                       const Geometry& g, const std::vector<double>& t_list,
                                       const std::vector<double>& grid,
                                       const SmearSpec& spec = {}) {
    GeneratorReport rep;
    SampledSpinor hf = hamiltonian_apply(f, state, g, grid, spec);
    SampledSpinor f0 = SampledSpinor::sample(f, grid);
    const double hnorm = hf.norm2();
    for (double t : t_list) {
        if (t == 0.0) continue;  // 0/0 guard: the quotient is undefined there
        SampledSpinor kf = flow_apply(t, f, state, g, grid, spec);
        SampledSpinor quot(grid);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            quot.v1[j] = (kf.v1[j] - f0.v1[j]) / (1i * t);
            quot.v2[j] = (kf.v2[j] - f0.v2[j]) / (1i * t);
        }
        rep.t.push_back(t);
        rep.error.push_back(quot.distance2(hf) / (hnorm > 0 ? hnorm : 1.0));
    }
    return rep;
}

/// || K_{t1} K_{t2} f - K_{t1+t2} f ||. For locally transported states the
/// composition is exact; mixed states go through a sampled interpolant of
/// the inner flow, whose error is part of the reported residual.
inline double group_law_check(double t1, double t2, const TestSpinor& f,
                              const StateParams& state, const Geometry& g,
                              const std::vector<double>& grid, const SmearSpec& spec = {}) {
    const bool needs_grid =
        state.is_ramond() && classify(state, g) == StateClass::Mixed;
    TestSpinor inner = flow_evolve(t2, f, state, g, spec);
    TestSpinor inner_eval =
        needs_grid ? SampledSpinor::sample(inner, chebyshev_grid(static_cast<int>(grid.size()), g))
                         .to_spinor()
                   : inner;
    SampledSpinor lhs = flow_apply(t1, inner_eval, state, g, grid, spec);
    SampledSpinor rhs = flow_apply(t1 + t2, f, state, g, grid, spec);
    return lhs.distance2(rhs);
}

}  // namespace modcyl
