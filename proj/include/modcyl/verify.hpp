#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "correlators.hpp"
#include "modular.hpp"
#include "oracle.hpp"
#include "resolvent.hpp"
#include "singular_kernel.hpp"

namespace modcyl {

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    double value = 0.0;      // measured quantity (worst case over the sub-sweep)
    double threshold = 0.0;
    std::string detail;
};

namespace verify_detail {

struct DeskStates {
    StateParams ns, zero_t, mixed, near_tip;
    std::vector<std::pair<std::string, StateParams>> all;
};

inline DeskStates desk_states(const Geometry& g) {
    DeskStates s;
    s.ns = StateParams::ns();
    s.zero_t = preset_zero_temperature(g);
    s.mixed = StateParams::ramond(0.2 * 0.5 / g.L, -0.5 * 0.5 / g.L, 1.0, 0.7, g);
    const double eta = 1e-2;
    s.near_tip = StateParams::ramond((1.0 - eta) * 0.5 / g.L, (1.0 - eta) * 0.5 / g.L, 0.0, 0.0, g);
    s.all = {{"NS", s.ns}, {"R-h0", s.zero_t}, {"R-mixed", s.mixed}, {"R-near-tip", s.near_tip}};
    return s;
}

/// Smooth bump spinor pair used by the quadrature-level criteria.
inline TestSpinor desk_probe(const Geometry& g, int which) {
    TestSpinor f;
    if (which == 0) {
        f[0] = bump(-0.25 * g.ell, 0.45 * g.ell);
        f[1] = bump(0.2 * g.ell, 0.4 * g.ell, complex(0.4, 0.6));
    } else {
        f[0] = bump(0.3 * g.ell, 0.35 * g.ell, complex(0.0, 1.0));
        f[1] = bump(-0.35 * g.ell, 0.3 * g.ell, complex(-0.7, 0.2));
    }
    return f;
}

/// Probe pack for the functional-calculus comparisons: packets aligned with
/// the flow coordinate so the spectral content stays inside the numerically
/// faithful window.
inline std::vector<TestSpinor> oracle_probes(const Geometry& g, double margin) {
    std::vector<TestSpinor> p(2);
    p[0][0] = flow_band_probe(g, 0.0, 1.4, margin);
    p[0][1] = flow_band_probe(g, 0.4, 1.4, margin, 0.3, complex(0.5, 0.5));
    p[1][0] = flow_band_probe(g, -0.5, 1.3, margin, -0.4, complex(0.2, -0.9));
    p[1][1] = flow_band_probe(g, 0.2, 1.3, margin, 0.2);
    return p;
}

/// L2 norm of a callable spinor by adaptive quadrature.
inline double spinor_norm(const TestSpinor& f, const Geometry& g, double tol = 1e-11) {
    QuadratureSpec q{tol, 40};
    double s = 0.0;
    for (int a = 0; a < 2; ++a) {
        if (!f[a].f) continue;
        const double lo = std::max(-g.ell * (1 - 1e-12), f[a].support_lo);
        const double hi = std::min(g.ell * (1 - 1e-12), f[a].support_hi);
        if (lo >= hi) continue;
        s += integrate([&](double x) { return complex(std::norm(f[a].f(x)), 0.0); }, lo, hi, q)
                 .real();
    }
    return std::sqrt(s);
}

inline double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Cache of eigendecompositions shared between the oracle criteria.
struct OracleCache {
    std::map<std::pair<std::string, int>, std::pair<DiscretizedOperator, SpectralDecomposition>>
        entries;

    const std::pair<DiscretizedOperator, SpectralDecomposition>& get(const std::string& name,
                                                                     const StateParams& st,
                                                                     const Geometry& g, int n) {
        auto key = std::make_pair(name, n);
        auto it = entries.find(key);
        if (it == entries.end()) {
            DiscretizedOperator d = discretize_two_point(st, g, n);
            SpectralDecomposition s = decompose(d);
            it = entries.emplace(key, std::make_pair(std::move(d), std::move(s))).first;
        }
        return it->second;
    }
};

}  // namespace verify_detail

// ---------------------------------------------------------------------------
// Individual criteria. Each returns one or more results; ids follow the
// numbering of the verification plan in the README.
// ---------------------------------------------------------------------------

inline std::vector<CriterionResult> criterion_resolvent_identity(const Geometry& g) {
    using namespace verify_detail;
    std::vector<CriterionResult> out;
    const auto states = desk_states(g);
    const TestSpinor f = desk_probe(g, 0);
    const double fnorm = spinor_norm(f, g);
    SmearSpec spec;
    spec.quad.abs_tol = 1e-10;
    const std::vector<complex> mus = {2.0, -1.0, complex(0.5, 0.3)};
    for (const auto& [name, st] : states.all) {
        double worst = 0.0;
        SingularKernel1D gk = two_point_kernel(st, g, -g.ell, g.ell);
        for (complex mu : mus) {
            TestSpinor rf_s = resolvent_interpolant(mu, f, st, g, 400, 20.0, spec);
            QuadratureSpec q{1e-11, 40};
            double err2 = 0.0;
            for (int a = 0; a < 2; ++a) {
                auto resid = [&](double x) -> complex {
                    const Vec2 gr = smear(gk, rf_s, x, spec).value;
                    const complex rfx = a == 0 ? rf_s[0].f(x) : rf_s[1].f(x);
                    const complex fx = f[a].f ? f[a].f(x) : complex(0.0);
                    return complex(std::norm(gr[a] - mu * rfx - fx), 0.0);
                };
                err2 += integrate(resid, -g.ell * 0.999, g.ell * 0.999, q).real();
            }
            worst = std::max(worst, std::sqrt(err2) / fnorm);
        }
        out.push_back({"1." + name, "resolvent identity (G-mu)R(mu)f = f", worst <= 1e-6, worst,
                       1e-6, "mu in {2, -1, 0.5+0.3i}"});
    }
    return out;
}

inline std::vector<CriterionResult> criterion_neumann(const Geometry& g) {
    using namespace verify_detail;
    std::vector<CriterionResult> out;
    const auto states = desk_states(g);
    const TestSpinor f = desk_probe(g, 0);
    const double fnorm = spinor_norm(f, g);
    const complex mu = 100.0;
    SmearSpec spec;
    spec.quad.abs_tol = 1e-12;
    for (const auto& [name, st] : states.all) {
        SingularKernel1D gk = two_point_kernel(st, g, -g.ell, g.ell);
        TestSpinor rf_s = resolvent_interpolant(mu, f, st, g, 400, 20.0, spec);
        QuadratureSpec q{1e-13, 40};
        double err2 = 0.0;
        for (int a = 0; a < 2; ++a) {
            auto resid = [&](double x) -> complex {
                const complex rfx = rf_s[a].f(x);
                const complex fx = f[a].f ? f[a].f(x) : complex(0.0);
                const complex gfx = smear(gk, f, x, spec).value[a];
                return complex(std::norm(rfx + fx / mu + gfx / (mu * mu)), 0.0);
            };
            err2 += integrate(resid, -g.ell * 0.999, g.ell * 0.999, q).real();
        }
        const double val = std::sqrt(err2);
        const double thr = 5.0 * fnorm / 1e6;
        out.push_back({"2." + name, "Neumann tail at mu=100", val <= thr, val, thr, ""});
    }
    return out;
}

inline std::vector<CriterionResult> criterion_spectral_moments(const Geometry& g) {
    using namespace verify_detail;
    std::vector<CriterionResult> out;
    const auto states = desk_states(g);
    const TestSpinor f = desk_probe(g, 0);
    const TestSpinor gf = desk_probe(g, 1);
    QuadratureSpec q{1e-11, 40};
    // <g, f> and <g, G f> by direct quadrature
    for (const auto& [name, st] : states.all) {
        SingularKernel1D gk = two_point_kernel(st, g, -g.ell, g.ell);
        complex inner = 0.0, inner_g = 0.0;
        for (int a = 0; a < 2; ++a) {
            inner += integrate(
                [&](double x) { return std::conj(gf[a].f(x)) * f[a].f(x); },
                std::max(gf[a].support_lo, -g.ell), std::min(gf[a].support_hi, g.ell), q);
            inner_g += integrate(
                [&](double x) -> complex {
                    return std::conj(gf[a].f(x)) * smear(gk, f, x).value[a];
                },
                std::max(gf[a].support_lo, -g.ell), std::min(gf[a].support_hi, g.ell), q);
        }
        const complex mass = spectral_integral([](double) { return 1.0; }, f, gf, st, g);
        const complex moment = spectral_integral([](double mu) { return mu; }, f, gf, st, g);
        const double e_mass = std::abs(mass - inner);
        const double e_mom = std::abs(moment - inner_g);
        out.push_back({"3." + name + ".mass", "spectral completeness", e_mass <= 1e-5, e_mass,
                       1e-5, ""});
        out.push_back({"3." + name + ".moment", "spectral first moment vs G", e_mom <= 1e-5,
                       e_mom, 1e-5, ""});
    }
    return out;
}

inline std::vector<CriterionResult> criterion_oracle_hamiltonian(const Geometry& g,
                                                                 verify_detail::OracleCache& cache) {
    using namespace verify_detail;
    std::vector<CriterionResult> out;
    const auto states = desk_states(g);
    const std::vector<int> sweep = {128, 256, 512};
    const double margin = 4.0 * 2.0 * g.ell / sweep.front();
    const auto probes = oracle_probes(g, margin);
    for (const auto& [name, st] : states.all) {
        std::vector<double> errs;
        for (int n : sweep) {
            const auto& [d, s] = cache.get(name, st, g, n);
            Eigen::MatrixXcd h = matrix_modular_hamiltonian(s);
            double worst = 0.0;
            for (const auto& f : probes) {
                SampledSpinor hm = apply_matrix(h, f, d);
                SampledSpinor ha = hamiltonian_apply(f, st, g, d.nodes);
                worst = std::max(worst, ha.distance2(hm) / hm.norm2());
            }
            errs.push_back(worst);
        }
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            lx.push_back(-std::log(double(sweep[i])));
            ly.push_back(std::log(errs[i]));
        }
        const double order = fitted_slope(lx, ly);
        const bool pass = errs.back() <= 1e-3 && order >= 1.0;
        std::string detail = "errs =";
        for (double e : errs) detail += " " + std::to_string(e);
        detail += "; order = " + std::to_string(order);
        out.push_back({"4." + name, "oracle equivalence, modular Hamiltonian", pass, errs.back(),
                       1e-3, detail});
    }
    return out;
}

inline std::vector<CriterionResult> criterion_oracle_flow(const Geometry& g,
                                                          verify_detail::OracleCache& cache) {
    using namespace verify_detail;
    std::vector<CriterionResult> out;
    const auto states = desk_states(g);
    const std::vector<int> sweep = {128, 256, 512};
    for (const auto& [name, st] : states.all) {
        for (double t : {0.1, 0.4, 1.0}) {
            // probe components offset opposite to their transport so input
            // and image both stay inside the resolvable window
            const double margin = 4.0 * 2.0 * g.ell / 512;
            TestSpinor f;
            f[0] = flow_band_probe(g, 0.0, 1.0, margin, -pi * t);
            f[1] = flow_band_probe(g, 0.3, 1.0, margin, pi * t, complex(0.5, 0.5));
            std::vector<double> errs;
            for (int n : sweep) {
                const auto& [d, s] = cache.get(name, st, g, n);
                Eigen::MatrixXcd k = matrix_modular_flow(s, t);
                SampledSpinor km = apply_matrix(k, f, d);
                SampledSpinor ka = flow_apply(t, f, st, g, d.nodes);
                errs.push_back(ka.distance2(km) / km.norm2());
            }
            std::vector<double> lx, ly;
            for (std::size_t i = 0; i < sweep.size(); ++i) {
                lx.push_back(-std::log(double(sweep[i])));
                ly.push_back(std::log(errs[i]));
            }
            const double order = fitted_slope(lx, ly);
            const bool pass = errs.back() <= 1e-3 && order >= 1.0;
            std::string detail = "errs =";
            for (double e : errs) detail += " " + std::to_string(e);
            detail += "; order = " + std::to_string(order);
            char id[64];
            std::snprintf(id, sizeof(id), "5.%s.t=%g", name.c_str(), t);
            out.push_back({id, "oracle equivalence, modular flow", pass, errs.back(), 1e-3,
                           detail});
        }
        // unitarity of the analytic flow, adaptive-quadrature norms
        {
            const TestSpinor f = desk_probe(g, 0);
            SmearSpec spec;
            spec.quad.abs_tol = 1e-11;
            TestSpinor kf = flow_evolve(0.4, f, st, g, spec);
            const double n0 = spinor_norm(f, g), n1 = spinor_norm(kf, g);
            const double val = std::abs(n1 - n0) / n0;
            out.push_back({"5." + name + ".unitarity", "flow norm preservation", val <= 1e-6,
                           val, 1e-6, "t = 0.4"});
        }
        // group law
        {
            const TestSpinor f = desk_probe(g, 0);
            const double fnorm = spinor_norm(f, g);
            const double resid = group_law_check(0.3, 0.5, f, st, g, chebyshev_grid(512, g));
            const double val = resid / fnorm;
            out.push_back({"5." + name + ".group", "flow group law (0.3, 0.5)", val <= 1e-3, val,
                           1e-3, ""});
        }
    }
    return out;
}

inline std::vector<CriterionResult> criterion_generator(const Geometry& g) {
    using namespace verify_detail;
    std::vector<CriterionResult> out;
    const auto states = desk_states(g);
    const std::vector<double> ts = {1e-2, 5e-3, 2.5e-3};
    for (const auto& [name, st] : states.all) {
        const TestSpinor f = desk_probe(g, 0);
        GeneratorReport rep = generator_check(f, st, g, ts, chebyshev_grid(256, g));
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < rep.t.size(); ++i) {
            lx.push_back(std::log(rep.t[i]));
            ly.push_back(std::log(rep.error[i]));
        }
        const double slope = fitted_slope(lx, ly);
        const bool pass = slope >= 0.8 && slope <= 1.2;
        out.push_back({"6." + name, "generator difference quotient, linear in t", pass, slope,
                       1.0, "slope fitted over t = {1e-2, 5e-3, 2.5e-3}"});
    }
    return out;
}

inline std::vector<CriterionResult> criterion_lemma_limits(const Geometry& g) {
    std::vector<CriterionResult> out;
    (void)g;
    TestFunction1D f = gaussian(0.3, 1.0);
    const double f0 = std::abs(f.f(0.0));
    bool monotone = true;
    double last = 1e300, final_small = 0.0, final_large = 0.0;
    for (double a : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const complex v = oscillatory_sinh_pairing(a, f);
        const complex lim = 1i * f.f(0.0) * ((a - 1.0) / (a + 1.0));
        const double d = std::abs(v - lim);
        if (d > last) monotone = false;
        last = d;
        final_small = d;
    }
    double last2 = 1e300;
    bool monotone2 = true;
    for (double a : {1e1, 1e2, 1e3, 1e4}) {
        const complex v = oscillatory_sinh_pairing(a, f);
        const complex lim = 1i * f.f(0.0) * ((a - 1.0) / (a + 1.0));
        const double d = std::abs(v - lim);
        if (d > last2) monotone2 = false;
        last2 = d;
        final_large = d;
    }
    const bool pass = monotone && monotone2 && final_small <= 1e-3 * f0 && final_large <= 1e-3 * f0;
    out.push_back({"7", "oscillatory sinh limits (both ends of the cone)", pass,
                   std::max(final_small, final_large), 1e-3 * f0,
                   monotone && monotone2 ? "monotone" : "NOT monotone"});
    return out;
}

inline std::vector<CriterionResult> criterion_pure_limits(const Geometry& g) {
    using namespace verify_detail;
    std::vector<CriterionResult> out;
    const TestSpinor f = desk_probe(g, 0);
    const TestSpinor w = desk_probe(g, 1);
    QuadratureSpec q{1e-10, 40};

    auto smeared_diff = [&](const StateParams& st, const SingularKernel1D& lim) -> double {
        SingularKernel1D hk = hamiltonian_kernel(st, g);
        complex d = 0.0;
        for (int a = 0; a < 2; ++a) {
            d += integrate(
                [&](double x) -> complex {
                    const Vec2 v1 = smear(hk, f, x).value;
                    const Vec2 v2 = smear(lim, f, x).value;
                    return std::conj(w[a].f(x)) * (v1[a] - v2[a]);
                },
                std::max(w[a].support_lo, -g.ell), std::min(w[a].support_hi, g.ell), q);
        }
        return std::abs(d);
    };

    // tip-plus limit
    {
        SingularKernel1D lim = pure_limit_hamiltonian(StateClass::PureTipPlus, 0, 0, g);
        std::vector<double> ds;
        for (double eta : {1e-2, 1e-3}) {
            StateParams st =
                StateParams::ramond((1 - eta) * 0.5 / g.L, (1 - eta) * 0.5 / g.L, 0, 0, g);
            ds.push_back(smeared_diff(st, lim));
        }
        const bool pass = ds[1] < ds[0];
        out.push_back({"8.tip", "Hamiltonian tip limit, smeared convergence", pass, ds[1], ds[0],
                       "eta = 1e-2 -> " + std::to_string(ds[0]) + ", 1e-3 -> " +
                           std::to_string(ds[1])});
    }
    // rim limit at psi = pi/2
    {
        const double psi = 0.5 * pi, phi = 0.7;
        SingularKernel1D lim = pure_limit_hamiltonian(StateClass::PureRim, psi, phi, g);
        std::vector<double> ds;
        for (double eta : {1e-2, 1e-3}) {
            StateParams st =
                StateParams::ramond((1 - eta) * 0.5 / g.L, -(1 - eta) * 0.5 / g.L, psi, phi, g);
            ds.push_back(smeared_diff(st, lim));
        }
        const bool pass = ds[1] < ds[0];
        out.push_back({"8.rim", "Hamiltonian rim limit, smeared convergence", pass, ds[1], ds[0],
                       "eta = 1e-2 -> " + std::to_string(ds[0]) + ", 1e-3 -> " +
                           std::to_string(ds[1])});
    }
    // mirror response of the rim kernel
    {
        SingularKernel1D lim = pure_limit_hamiltonian(StateClass::PureRim, 0.5 * pi, 0.7, g);
        TestSpinor bump_right;
        bump_right[0] = bump(0.5, 0.08);
        bump_right[1] = zero_function(-g.ell, g.ell);
        double mirror_mass = 0.0;
        for (int a = 0; a < 2; ++a)
            mirror_mass += integrate(
                                [&](double x) {
                                    return complex(std::norm(smear(lim, bump_right, x).value[a]),
                                                   0.0);
                                },
                                -0.62, -0.38, q)
                               .real();
        const double noise = 1e-9;
        const bool pass = std::sqrt(mirror_mass) > 100.0 * noise;
        out.push_back({"8.mirror", "rim kernel mirror response at x = -0.5", pass,
                       std::sqrt(mirror_mass), 100.0 * noise, "bump applied at x = +0.5"});
    }
    return out;
}

inline std::vector<CriterionResult> criterion_locality(const Geometry& g) {
    using namespace verify_detail;
    std::vector<CriterionResult> out;
    const auto states = desk_states(g);
    const double t = 0.4;
    TestSpinor f;
    f[0] = bump(0.3, 0.1);  // supported in [0.2, 0.4]
    f[1] = zero_function(-g.ell, g.ell);
    const double dx = 2.0 * g.ell / 512;
    const double lo = flow_trajectory(0.2, t, g) - 3.0 * dx;
    const double hi = flow_trajectory(0.4, t, g) + 3.0 * dx;
    QuadratureSpec q{1e-12, 42};
    auto masses = [&](const StateParams& st) {
        SmearSpec spec;
        spec.quad.abs_tol = 1e-11;
        TestSpinor kf = flow_evolve(t, f, st, g, spec);
        auto dens = [&](double x) { return complex(std::norm(kf[0].f(x)), 0.0); };
        const double inside = integrate(dens, lo, std::min(hi, g.ell * (1 - 1e-9)), q).real();
        const double outside = integrate(dens, -g.ell * (1 - 1e-9), lo, q).real() +
                               (hi < g.ell ? integrate(dens, hi, g.ell * (1 - 1e-9), q).real()
                                           : 0.0);
        return std::make_pair(inside, outside);
    };
    {
        auto [inside, outside] = masses(states.ns);
        const double frac = outside / (inside + outside);
        out.push_back({"9.local", "antiperiodic flow stays in the transported window", frac <= 1e-6,
                       frac, 1e-6, "window [x0(0.2,t)-3dx, x0(0.4,t)+3dx]"});
    }
    {
        auto [inside, outside] = masses(states.mixed);
        const double frac = outside / (inside + outside);
        out.push_back({"9.nonlocal", "mixed periodic flow leaks outside the window", frac >= 1e-3,
                       frac, 1e-3, "mass fraction outside"});
    }
    return out;
}

inline std::vector<CriterionResult> criterion_identities(const Geometry& g) {
    std::vector<CriterionResult> out;
    // product identity for 1/sinh of the coordinate difference
    {
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> unif(-0.98 * g.ell, 0.98 * g.ell);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            double x = unif(rng), y = unif(rng);
            if (std::abs(x - y) < 1e-6) continue;
            auto [lhs, rhs] = sinh_coordinate_identity(x, y, g);
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
        }
        out.push_back({"10.sinh", "sinh/sine product identity, 1e3 random pairs", worst <= 1e-12,
                       worst, 1e-12, ""});
    }
    // Fourier integral closed form vs direct s-quadrature
    {
        double worst = 0.0;
        for (auto [c, z] : std::vector<std::pair<complex, double>>{
                 {2.0, 1.0}, {complex(1.5, 0.8), -0.7}, {complex(0.3, -0.2), 2.3}}) {
            const complex closed = fourier_exp_pole_pointwise(c, z);
            // oscillatory tail handled analytically: int_{-inf}^{-S} e^{isz}/c ds
            const double S = 14.0;
            QuadratureSpec q{1e-12, 44};
            complex direct =
                integrate([&](double s) { return std::exp(1i * (s * z)) /
                                                 (c + std::exp(2.0 * pi * s)); },
                          -S, S, q) +
                std::exp(complex(0.0, -S * z)) / (1i * z * c);
            worst = std::max(worst, std::abs(closed - direct));
        }
        out.push_back({"10.fourier", "exp-pole Fourier integral closed form", worst <= 1e-8,
                       worst, 1e-8, "pointwise at three (c, z)"});
    }
    // boundary values of the unit-jump function
    {
        double worst = 0.0;
        for (double x : {-0.8, -0.3, 0.1, 0.6, 0.9}) {
            for (int side : {+1, -1}) {
                const complex lim = unit_jump_function(complex(x, side * 1e-13), g);
                const complex ref = unit_jump_boundary(x, side, g);
                worst = std::max(worst, std::abs(lim - ref));
            }
        }
        out.push_back({"10.jump", "unit-jump boundary values", worst <= 1e-12, worst, 1e-12,
                       "approach distance 1e-13"});
    }
    return out;
}

inline std::vector<CriterionResult> criterion_flat_space(const Geometry& desk) {
    std::vector<CriterionResult> out;
    const double ell = desk.ell;
    std::vector<double> ls = {10.0 * ell, 100.0 * ell, 1000.0 * ell};
    std::vector<double> errs;
    for (double L : ls) {
        Geometry g(L, ell);
        SingularKernel1D hk = hamiltonian_kernel(StateParams::ns(), g);
        double worst = 0.0;
        for (double x : {-0.7 * ell, -0.2 * ell, 0.0, 0.4 * ell, 0.8 * ell}) {
            const complex coeff = hk.delta_prime(x, x)(0, 0);  // = i * local coefficient
            const double flat = pi * (ell * ell - x * x) / ell;
            worst = std::max(worst, std::abs(coeff.imag() - flat));
        }
        errs.push_back(worst);
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        lx.push_back(std::log(ls[i]));
        ly.push_back(std::log(errs[i]));
    }
    const double slope = verify_detail::fitted_slope(lx, ly);
    const bool pass = errs[0] > errs[1] && errs[1] > errs[2] && slope <= -1.8 && slope >= -2.2;
    out.push_back({"11", "flat-space limit of the local coefficient, O(1/L^2)", pass, slope, -2.0,
                   "errors " + std::to_string(errs[0]) + " " + std::to_string(errs[1]) + " " +
                       std::to_string(errs[2])});
    return out;
}

/// The full desk-configuration verification battery.
inline std::vector<CriterionResult> run_acceptance() {
    Geometry g(4.0, 1.0);
    verify_detail::OracleCache cache;
    std::vector<CriterionResult> all;
    auto add = [&](std::vector<CriterionResult> v) {
        for (auto& r : v) all.push_back(std::move(r));
    };
    add(criterion_resolvent_identity(g));
    add(criterion_neumann(g));
    add(criterion_spectral_moments(g));
    add(criterion_oracle_hamiltonian(g, cache));
    add(criterion_oracle_flow(g, cache));
    add(criterion_generator(g));
    add(criterion_lemma_limits(g));
    add(criterion_pure_limits(g));
    add(criterion_locality(g));
    add(criterion_identities(g));
    add(criterion_flat_space(g));
    return all;
}

}  // namespace modcyl
