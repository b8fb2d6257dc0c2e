#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "states.hpp"
#include "test_functions.hpp"

namespace modcyl {

// ---------------------------------------------------------------------------
// Structured distributional kernels
//
// Every kernel in this library is a sum of parts that can each be smeared
// against a smooth test function:
//   * a plain integrable ("smooth") part,
//   * principal-value parts: a smooth prefactor times one of the catalogued
//     first-order singular factors,
//   * delta(x-y), delta'(x-y) and mirror delta(x+y) parts.
// ---------------------------------------------------------------------------

/// Catalogue of first-order singular factors appearing in the kernels.
struct PVSingularity {
    enum class Family {
        cauchy_diff,     // 1/(x - y)
        inv_sin_diff,    // 1/sin[(pi/L)(x - y)]
        inv_sinh_omega,  // 1/sinh[scale * (Omega_b(y) - Omega_a(x) + shift)]
    };
    Family family = Family::inv_sin_diff;
    // inv_sinh_omega only: singular where Omega_b(y) = Omega_a(x) - shift
    Chirality omega_x = Chirality::one;  // component whose flow coordinate takes x
    Chirality omega_y = Chirality::one;  // component whose flow coordinate takes y
    double scale = 1.0;
    double shift = 0.0;
};

/// One principal-value term of a matrix kernel: prefactor_{ab}(x, y) times
/// the singular factor. The prefactor must stay smooth where the factor
/// diverges.
struct PVTerm {
    int a = 0, b = 0;  // kernel entry (0-based)
    std::function<complex(double, double)> prefactor;
    PVSingularity sing;
};

using MatrixFn2 = std::function<Mat2(double, double)>;
using MatrixFn1 = std::function<Mat2(double)>;

struct SingularKernel1D {
    double domain_lo = 0.0, domain_hi = 0.0;
    const Geometry* geo = nullptr;

    MatrixFn2 smooth;                  // integrated against f
    std::vector<PVTerm> pv;            // principal-value terms
    MatrixFn1 delta_diag;              // coefficient of delta(x-y)
    MatrixFn2 delta_prime;             // coefficient of delta'(x-y)
    MatrixFn2 delta_prime_dy;          // optional analytic d/dy of the above
    MatrixFn1 delta_mirror;            // coefficient of delta(x+y)

    bool has_delta_prime() const { return static_cast<bool>(delta_prime); }
};

struct SmearSpec {
    QuadratureSpec quad{};
    double sinh_window = 0.0;  // half-width of the subtracted window in the
                               // flow coordinate; 0 picks 1/scale
};

struct SmearResult {
    Vec2 value = Vec2::Zero();
    double residual = 0.0;
};

namespace detail {

/// Closed-form principal value of the bare singular factor over [c, d]
/// (y-integration, singular point y0 inside).
inline double pv_bare_integral(const PVSingularity& s, double x, double c, double d,
                               const Geometry& g) {
    switch (s.family) {
        case PVSingularity::Family::cauchy_diff:
            // PV int_c^d dy/(x-y) = ln|x-c| - ln|d-x|
            return std::log(std::abs(x - c)) - std::log(std::abs(d - x));
        case PVSingularity::Family::inv_sin_diff: {
            // PV int_c^d dy/sin[(pi/L)(x-y)] = (L/pi) ln|tan[(pi/2L)(x-c)] / tan[(pi/2L)(x-d)]|
            const double k = 0.5 * pi / g.L;
            return g.L / pi *
                   std::log(std::abs(std::tan(k * (x - c)) / std::tan(k * (x - d))));
        }
        default:
            return 0.0;  // inv_sinh_omega is handled in the flow coordinate
    }
}

template <class G>
complex pv_difference_smear(const PVSingularity& s, double x, double lo, double hi,
                            const Geometry& g, G&& gy, const QuadratureSpec& q,
                            double& residual) {
    // Subtracted rule over the whole domain:
    //   PV int S(x,y) gy(y) dy
    //     = int S(x,y) [gy(y) - gy(x)] dy + gy(x) * PV int S(x,y) dy,
    // with the second factor in closed form. The first integrand has a
    // removable singularity at y = x; panels are split there so quadrature
    // nodes keep their distance.
    const complex g0 = gy(x);
    auto sing = [&](double y) -> double {
        return s.family == PVSingularity::Family::cauchy_diff ? 1.0 / (x - y)
                                                              : 1.0 / g.sin_pl(x - y);
    };
    auto integrand = [&](double y) -> complex { return (gy(y) - g0) * sing(y); };
    const double brk[1] = {x};
    auto r = integrate_split(integrand, lo, hi, brk, q);
    residual = std::max(residual, r.residual);
    return r.value + g0 * pv_bare_integral(s, x, lo, hi, g);
}

template <class G>
complex pv_sinh_smear(const PVSingularity& s, double x, double lo, double hi, const Geometry& g,
                      G&& gy, double window, const QuadratureSpec& q, double& residual) {
    // Change of variables to the flow coordinate w = Omega_b(y); the factor
    // becomes 1/sinh[scale (w - w0)], odd around its zero, so a symmetric
    // subtracted window carries no closed-form remainder.
    const double sgn = chirality_sign(s.omega_y);
    auto y_of = [&](double w) { return flow_coordinate_inverse(sgn * w, g); };
    auto W = [&](double w) -> complex {
        const double y = y_of(w);
        return gy(y) / flow_coordinate_deriv(y, g);
    };
    // keep the transformed limits finite when a support touches the endpoints
    const double inset = g.ell * (1.0 - 1e-12);
    double wa = flow_coordinate(s.omega_y, std::max(lo, -inset), g);
    double wb = flow_coordinate(s.omega_y, std::min(hi, inset), g);
    if (wa > wb) std::swap(wa, wb);
    const double w0 = flow_coordinate(s.omega_x, x, g) - s.shift;
    const double half = window > 0.0 ? window : 1.0 / s.scale;

    complex total = 0.0;
    auto plain = [&](double w) -> complex { return W(w) / std::sinh(s.scale * (w - w0)); };

    if (w0 - half > wa) {
        auto r = integrate_full(plain, wa, std::min(w0 - half, wb), q);
        total += r.value;
        residual = std::max(residual, r.residual);
    }
    if (w0 + half < wb) {
        auto r = integrate_full(plain, std::max(w0 + half, wa), wb, q);
        total += r.value;
        residual = std::max(residual, r.residual);
    }
    // symmetric window around the locus, fully evaluated even where the
    // original y-domain has ended (W is defined on the whole line)
    if (w0 + half > wa && w0 - half < wb) {
        const complex W0 = W(w0);
        auto sub = [&](double w) -> complex {
            return (W(w) - W0) / std::sinh(s.scale * (w - w0));
        };
        const double brk[1] = {w0};
        auto r = integrate_split(sub, w0 - half, w0 + half, brk, q);
        total += r.value;
        residual = std::max(residual, r.residual);
    }
    return total;
}

}  // namespace detail

/// Apply the structured kernel to a test spinor at the point x:
/// returns (sum_b int K_{ab}(x, y) f_b(y) dy)_a with every distributional
/// part evaluated by its own rule.
inline SmearResult smear(const SingularKernel1D& k, const TestSpinor& f, double x,
                         const SmearSpec& spec = {}) {
    SmearResult out;
    const Geometry& g = *k.geo;

    auto support = [&](int b, double& lo, double& hi) {
        lo = std::max(k.domain_lo, f[b].support_lo);
        hi = std::min(k.domain_hi, f[b].support_hi);
        return lo < hi && static_cast<bool>(f[b].f);
    };

    if (k.smooth) {
        for (int b = 0; b < 2; ++b) {
            double lo, hi;
            if (!support(b, lo, hi)) continue;
            for (int a = 0; a < 2; ++a) {
                auto r = integrate_full(
                    [&](double y) { return k.smooth(x, y)(a, b) * f[b].f(y); }, lo, hi,
                    spec.quad);
                out.value[a] += r.value;
                out.residual = std::max(out.residual, r.residual);
            }
        }
    }

    for (const PVTerm& term : k.pv) {
        const int b = term.b;
        if (!f[b].f) continue;
        auto gy = [&](double y) { return term.prefactor(x, y) * f[b].f(y); };
        if (term.sing.family == PVSingularity::Family::inv_sinh_omega) {
            double lo, hi;
            if (!support(b, lo, hi)) continue;
            out.value[term.a] += detail::pv_sinh_smear(term.sing, x, lo, hi, g, gy,
                                                       spec.sinh_window, spec.quad, out.residual);
        } else {
            double lo = k.domain_lo, hi = k.domain_hi;
            double slo = std::max(lo, f[b].support_lo), shi = std::min(hi, f[b].support_hi);
            if (slo >= shi) continue;
            if (x > slo && x < shi) {
                out.value[term.a] += detail::pv_difference_smear(term.sing, x, slo, shi, g, gy,
                                                                 spec.quad, out.residual);
            } else {
                // singular point outside the support: plain quadrature
                auto sing = [&](double y) -> double {
                    return term.sing.family == PVSingularity::Family::cauchy_diff
                               ? 1.0 / (x - y)
                               : 1.0 / g.sin_pl(x - y);
                };
                auto r = integrate_full([&](double y) { return gy(y) * sing(y); }, slo, shi,
                                        spec.quad);
                out.value[term.a] += r.value;
                out.residual = std::max(out.residual, r.residual);
            }
        }
    }

    if (k.delta_diag) {
        const Mat2 c = k.delta_diag(x);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                if (f[b].f) out.value[a] += c(a, b) * f[b].f(x);
    }

    if (k.delta_prime) {
        // int c(x,y) delta'(x-y) f(y) dy = d/dy [c(x,y) f(y)] at y = x
        for (int b = 0; b < 2; ++b) {
            if (!f[b].f) continue;
            if (f[b].smoothness == Smoothness::l2_only)
                throw std::invalid_argument(
                    "smear: delta' part needs a differentiable test function");
            const Mat2 c = k.delta_prime(x, x);
            Mat2 dc;
            if (k.delta_prime_dy) {
                dc = k.delta_prime_dy(x, x);
            } else {
                const double h = (k.domain_hi - k.domain_lo) * 1e-4;
                dc = (-k.delta_prime(x, x + 2 * h) + 8.0 * k.delta_prime(x, x + h) -
                      8.0 * k.delta_prime(x, x - h) + k.delta_prime(x, x - 2 * h)) /
                     (12.0 * h);
            }
            for (int a = 0; a < 2; ++a)
                out.value[a] += dc(a, b) * f[b].f(x) + c(a, b) * f[b].deriv(x);
        }
    }

    if (k.delta_mirror) {
        const Mat2 c = k.delta_mirror(x);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                if (f[b].f) out.value[a] += c(a, b) * f[b].f(-x);
    }

    return out;
}

// ---------------------------------------------------------------------------
// Boundary-value split of the regularized Cauchy-type kernels
// ---------------------------------------------------------------------------

/// The i-epsilon regularized kernel families this library encounters:
///   coefficient / sin[(pi/L)(x - y -+ i eps)]   (sin_kernel)
///   coefficient * cot[(pi/L)(x - y -+ i eps)]   (cot_kernel)
///   coefficient / (x - y -+ i eps)              (cauchy_kernel)
struct RegularizedKernel {
    enum class Family { sin_kernel, cot_kernel, cauchy_kernel };
    Family family;
    complex coefficient;
    int eps_sign;  // -1 for (x - y - i eps), +1 for (x - y + i eps)
    int a = 0, b = 0;
};

/// Boundary-value split: the epsilon -> 0 limit equals a principal-value
/// part plus a delta part with coefficient -+ i pi c (times the local slope
/// of the regularized denominator).
inline SingularKernel1D sokhotski_split(const RegularizedKernel& k, const Geometry& g,
                                        double domain_lo, double domain_hi) {
    SingularKernel1D out;
    out.geo = &g;
    out.domain_lo = domain_lo;
    out.domain_hi = domain_hi;

    const complex c = k.coefficient;
    complex delta_coeff;
    PVTerm term;
    term.a = k.a;
    term.b = k.b;
    switch (k.family) {
        case RegularizedKernel::Family::cauchy_kernel:
            term.sing.family = PVSingularity::Family::cauchy_diff;
            term.prefactor = [c](double, double) { return c; };
            delta_coeff = -static_cast<double>(k.eps_sign) * 1i * pi * c;
            break;
        case RegularizedKernel::Family::sin_kernel:
            term.sing.family = PVSingularity::Family::inv_sin_diff;
            term.prefactor = [c](double, double) { return c; };
            // 1/sin ~ (L/pi) / (x - y) near coincidence
            delta_coeff = -static_cast<double>(k.eps_sign) * 1i * pi * c * (g.L / pi);
            break;
        case RegularizedKernel::Family::cot_kernel:
            term.sing.family = PVSingularity::Family::inv_sin_diff;
            term.prefactor = [c, &g](double x, double y) { return c * g.cos_pl(x - y); };
            delta_coeff = -static_cast<double>(k.eps_sign) * 1i * pi * c * (g.L / pi);
            break;
    }
    out.pv.push_back(std::move(term));

    const int a = k.a, b = k.b;
    out.delta_diag = [delta_coeff, a, b](double) {
        Mat2 m = Mat2::Zero();
        m(a, b) = delta_coeff;
        return m;
    };
    return out;
}

// ---------------------------------------------------------------------------
// Oscillatory-power limits of 1/sinh, and the Fourier integral behind the
// non-local kernels
// ---------------------------------------------------------------------------

/// Smeared action of a^{i t} Pf 1/sinh(pi t) on a test function over the real
/// line, evaluated through the regularized form
///   int a^{i t} [f(t) - f(0)] / sinh(pi t) dt + i f(0) (a - 1)/(a + 1).
/// Agrees with the symmetric-exclusion definition, and stays usable as
/// a -> 0 or a -> infinity where the phase oscillates without bound.
inline complex oscillatory_sinh_pairing(double a, const TestFunction1D& f,
                                        const QuadratureSpec& q = {}) {
    if (!(a > 0.0)) throw std::domain_error("oscillatory_sinh_pairing: need a > 0");
    const double lna = std::log(a);
    const complex f0 = f.f(0.0);
    // e^{-pi T} below 1e-15 relative
    double T = 14.0 * std::numbers::ln10 / pi + 1.0;
    T = std::max({T, std::abs(f.support_lo), std::abs(f.support_hi)});
    auto integrand = [&](double t) -> complex {
        const complex phase = std::exp(1i * (lna * t));
        return phase * (f.f(t) - f0) / std::sinh(pi * t);
    };
    const double brk[1] = {0.0};
    complex val = integrate_split(integrand, -T, T, brk, q).value;
    return val + 1i * f0 * (a - 1.0) / (a + 1.0);
}

/// Closed form of int e^{i s z} / (c + e^{2 pi s}) ds for Re c > 0:
/// pointwise value away from z = 0. The full distribution carries an extra
/// pi c^{iz/(2pi)-1} delta(z), included by the smeared variant below.
inline complex fourier_exp_pole_pointwise(complex c, double z) {
    if (!(c.real() > 0.0)) throw std::domain_error("fourier_exp_pole: need Re c > 0");
    if (z == 0.0) throw std::domain_error("fourier_exp_pole: pointwise form needs z != 0");
    const complex logc = std::log(c);
    return std::exp((1i * z / (2.0 * pi) - 1.0) * logc) * (-0.5i) / std::sinh(0.5 * z);
}

/// Smeared closed form: int [c^{iz/(2pi)-1} (-i/2) Pf 1/sinh(z/2) ] f(z) dz
/// + pi c^{-1} f(0).
inline complex fourier_exp_pole_smeared(complex c, const TestFunction1D& f,
                                        const QuadratureSpec& q = {}) {
    if (!(c.real() > 0.0)) throw std::domain_error("fourier_exp_pole: need Re c > 0");
    const complex logc = std::log(c);
    // decay rate of c^{iz/2pi}/sinh(z/2) in |z|
    const double rate = 0.5 - std::abs(std::arg(c)) / (2.0 * pi);
    double T = 15.0 * std::numbers::ln10 / rate;
    T = std::max({T, std::abs(f.support_lo), std::abs(f.support_hi)});
    const complex g0 = f.f(0.0);
    auto integrand = [&](double z) -> complex {
        const complex gz = std::exp(1i * z / (2.0 * pi) * logc) * f.f(z);
        return (gz - g0) / std::sinh(0.5 * z);
    };
    const double brk[1] = {0.0};
    complex val = integrate_split(integrand, -T, T, brk, q).value;
    // PV of the bare odd factor vanishes on the symmetric domain
    return -0.5i * val / c + pi * g0 / c;
}

}  // namespace modcyl
