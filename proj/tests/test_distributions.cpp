#include <catch2/catch_amalgamated.hpp>

#include <modcyl/singular_kernel.hpp>

using namespace modcyl;

namespace {
const Geometry desk(4.0, 1.0);

SingularKernel1D scalar_pv_kernel(PVSingularity::Family fam, complex coeff, const Geometry& g,
                                  double lo, double hi) {
    SingularKernel1D k;
    k.geo = &g;
    k.domain_lo = lo;
    k.domain_hi = hi;
    PVTerm t;
    t.a = t.b = 0;
    t.sing.family = fam;
    t.prefactor = [coeff](double, double) { return coeff; };
    k.pv.push_back(std::move(t));
    return k;
}

TestSpinor scalar_spinor(TestFunction1D f) {
    TestSpinor s;
    s[0] = std::move(f);
    s[1] = zero_function(s[0].support_lo, s[0].support_hi);
    return s;
}
}  // namespace

TEST_CASE("identity kernel reproduces the test function") {
    SingularKernel1D k;
    k.geo = &desk;
    k.domain_lo = -1.0;
    k.domain_hi = 1.0;
    k.delta_diag = [](double) { return Mat2(Mat2::Identity()); };
    TestSpinor f = scalar_spinor(gaussian(0.1, 0.3));
    for (double x : {-0.4, 0.0, 0.6})
        CHECK(std::abs(smear(k, f, x).value[0] - f[0].f(x)) < 1e-15);
}

TEST_CASE("odd principal value against constant vanishes at the center") {
    auto k = scalar_pv_kernel(PVSingularity::Family::cauchy_diff, 1.0, desk, -0.8, 0.8);
    TestSpinor one;
    one[0] = {[](double) { return complex(1.0); }, [](double) { return complex(0.0); }, -0.8, 0.8,
              Smoothness::schwartz_like};
    one[1] = zero_function(-0.8, 0.8);
    CHECK(std::abs(smear(k, one, 0.0).value[0]) < 1e-12);
}

TEST_CASE("principal value matches the i-epsilon regularization") {
    // oracle: regularized quadrature at eps in {1e-2, 1e-3, 1e-4}, Richardson in eps
    auto k = scalar_pv_kernel(PVSingularity::Family::inv_sin_diff, 1.0, desk, -0.9, 0.9);
    TestSpinor f = scalar_spinor(gaussian(0.15, 0.25));
    const double x = -0.2;
    const complex pv = smear(k, f, x).value[0];

    auto regularized = [&](double eps) {
        return integrate(
            [&](double y) { return f[0].f(y) / std::sin(pi / desk.L * complex(x - y, -eps)); },
            -0.9, 0.9, QuadratureSpec{1e-12, 44});
    };
    // values at eps and eps/10; the imaginary shift contributes i pi (L/pi) f(x) + O(eps)
    const complex v2 = regularized(1e-3), v3 = regularized(1e-4);
    const complex extrap = (10.0 * v3 - v2) / 9.0 - 1i * desk.L * f[0].f(x);
    CHECK(std::abs(pv - extrap) < 1e-5);
}

TEST_CASE("boundary-value split of the regularized kernels") {
    SECTION("plain Cauchy kernel") {
        RegularizedKernel rk{RegularizedKernel::Family::cauchy_kernel, 1.0, -1, 0, 0};
        SingularKernel1D k = sokhotski_split(rk, desk, -1.0, 1.0);
        CHECK(k.delta_diag(0.3)(0, 0) == complex(0.0, pi));
        rk.eps_sign = +1;
        k = sokhotski_split(rk, desk, -1.0, 1.0);
        CHECK(k.delta_diag(0.3)(0, 0) == complex(0.0, -pi));
    }
    SECTION("sine kernel normalization: the diagonal coefficient is 1/2") {
        RegularizedKernel rk{RegularizedKernel::Family::sin_kernel, 1.0 / (2i * desk.L), -1, 0, 0};
        SingularKernel1D k = sokhotski_split(rk, desk, 0.0, desk.L);
        CHECK(k.delta_diag(1.0)(0, 0).real() == Catch::Approx(0.5));
        CHECK(std::abs(k.delta_diag(1.0)(0, 0).imag()) < 1e-18);
    }
    SECTION("opposite regularization flips the delta part only") {
        RegularizedKernel rk{RegularizedKernel::Family::sin_kernel, -1.0 / (2i * desk.L), +1, 1, 1};
        SingularKernel1D k = sokhotski_split(rk, desk, 0.0, desk.L);
        CHECK(k.delta_diag(1.0)(1, 1).real() == Catch::Approx(0.5));
    }
    SECTION("split then smear reproduces the regularized integral as eps -> 0") {
        RegularizedKernel rk{RegularizedKernel::Family::cot_kernel, 1.0 / (2i * desk.L), -1, 0, 0};
        SingularKernel1D k = sokhotski_split(rk, desk, -0.9, 0.9);
        TestSpinor f = scalar_spinor(gaussian(-0.1, 0.2));
        const double x = 0.25;
        const complex split_val = smear(k, f, x).value[0];
        double last = 1e300;
        for (double eps : {1e-2, 5e-3, 2.5e-3}) {
            const complex reg = integrate(
                [&](double y) {
                    return f[0].f(y) / (2i * desk.L * std::tan(pi / desk.L * complex(x - y, -eps)));
                },
                -0.9, 0.9, QuadratureSpec{1e-12, 44});
            const double err = std::abs(reg - split_val);
            CHECK(err < last);  // O(eps) approach
            last = err;
        }
        CHECK(last < 2.5e-3 * 2.0);
    }
}

TEST_CASE("oscillatory sinh pairing") {
    SECTION("a = 1 with an even function gives zero") {
        TestFunction1D f = gaussian(0.0, 0.8);
        CHECK(std::abs(oscillatory_sinh_pairing(1.0, f)) < 1e-12);
    }
    SECTION("regularized form agrees with symmetric exclusion") {
        TestFunction1D f = gaussian(0.4, 0.9);
        const double a = 5.0;
        const complex reg = oscillatory_sinh_pairing(a, f);
        // independent route: pair t with -t, integrate from 0
        const double lna = std::log(a);
        auto paired = [&](double t) -> complex {
            return (std::exp(1i * (lna * t)) * f.f(t) - std::exp(-1i * (lna * t)) * f.f(-t)) /
                   std::sinh(pi * t);
        };
        const complex excl = integrate(paired, 1e-10, 12.0, QuadratureSpec{1e-12, 44});
        CHECK(std::abs(reg - excl) < 1e-8);
    }
    SECTION("a -> 0 limit approaches -i f(0) monotonically") {
        TestFunction1D f = gaussian(0.2, 0.7);
        const complex target = -1i * f.f(0.0);
        double last = 1e300;
        for (double a : {1e-2, 1e-4, 1e-6}) {
            const double d = std::abs(oscillatory_sinh_pairing(a, f) - target);
            CHECK(d < last);
            last = d;
        }
    }
    CHECK_THROWS_AS(oscillatory_sinh_pairing(-1.0, gaussian(0, 1)), std::domain_error);
}

TEST_CASE("exp-pole Fourier integral") {
    SECTION("pointwise closed form vs direct quadrature") {
        const complex c = 2.0;
        const double z = 1.0;
        const complex closed = fourier_exp_pole_pointwise(c, z);
        const double S = 14.0;
        const complex direct =
            integrate([&](double s) { return std::exp(1i * (s * z)) / (c + std::exp(2 * pi * s)); },
                      -S, S, QuadratureSpec{1e-12, 44}) +
            std::exp(complex(0.0, -S * z)) / (1i * z * c);
        CHECK(std::abs(closed - direct) < 1e-8);
    }
    SECTION("conjugation symmetry for real c") {
        const complex c = 1.7;
        for (double z : {0.4, 1.3, 2.9})
            CHECK(std::abs(fourier_exp_pole_pointwise(c, -z) -
                           std::conj(fourier_exp_pole_pointwise(c, z))) < 1e-14);
    }
    SECTION("smeared closed form vs double quadrature") {
        const complex c = complex(1.2, 0.5);
        TestFunction1D f = gaussian(0.3, 0.8);
        const complex closed = fourier_exp_pole_smeared(c, f);
        // z integral first, then s
        auto fz = [&](double s) {
            return integrate([&](double z) { return std::exp(1i * (s * z)) * f.f(z); },
                             f.support_lo, f.support_hi, QuadratureSpec{1e-12, 40});
        };
        const complex direct = integrate(
            [&](double s) { return fz(s) / (c + std::exp(2 * pi * s)); }, -8.0, 8.0,
            QuadratureSpec{1e-10, 36});
        CHECK(std::abs(closed - direct) < 1e-6);
    }
    CHECK_THROWS_AS(fourier_exp_pole_pointwise(complex(-1.0, 0.2), 1.0), std::domain_error);
}

TEST_CASE("delta-prime smearing needs smooth data") {
    SingularKernel1D k;
    k.geo = &desk;
    k.domain_lo = -1.0;
    k.domain_hi = 1.0;
    k.delta_prime = [](double, double) { return Mat2(Mat2::Identity()); };
    TestSpinor f = scalar_spinor(gaussian(0.0, 0.4));
    f[0].smoothness = Smoothness::l2_only;
    CHECK_THROWS_AS(smear(k, f, 0.1), std::invalid_argument);

    f[0].smoothness = Smoothness::schwartz_like;
    // int delta'(x-y) f(y) dy = f'(x)
    CHECK(std::abs(smear(k, f, 0.1).value[0] - f[0].df(0.1)) < 1e-13);
}

TEST_CASE("mirror delta smears to f(-x)") {
    SingularKernel1D k;
    k.geo = &desk;
    k.domain_lo = -1.0;
    k.domain_hi = 1.0;
    k.delta_mirror = [](double) {
        Mat2 m = Mat2::Zero();
        m(0, 1) = 2.0;
        return m;
    };
    TestSpinor f;
    f[0] = zero_function(-1, 1);
    f[1] = gaussian(0.3, 0.2);
    CHECK(std::abs(smear(k, f, -0.3).value[0] - 2.0 * f[1].f(0.3)) < 1e-15);
}

TEST_CASE("sinh-kernel smearing against brute-force symmetric exclusion") {
    SingularKernel1D k;
    k.geo = &desk;
    k.domain_lo = -1.0;
    k.domain_hi = 1.0;
    PVTerm t;
    t.a = t.b = 0;
    t.sing.family = PVSingularity::Family::inv_sinh_omega;
    t.sing.omega_x = Chirality::one;
    t.sing.omega_y = Chirality::one;
    t.sing.scale = 1.0;
    t.sing.shift = 0.7;
    t.prefactor = [](double x, double y) { return complex(1.0 + 0.2 * x * y, 0.1 * y); };
    k.pv.push_back(t);
    TestSpinor f = scalar_spinor(bump(0.1, 0.6));

    const double x = -0.15;
    const complex via_kernel = smear(k, f, x).value[0];

    const double w0 = flow_coordinate(Chirality::one, x, desk) - t.sing.shift;
    auto paired = [&](double u) -> complex {
        auto eval = [&](double w) -> complex {
            const double y = flow_coordinate_inverse(w, desk);
            return t.prefactor(x, y) * f[0].f(y) / flow_coordinate_deriv(y, desk) /
                   std::sinh(w - w0);
        };
        return eval(w0 + u) + eval(w0 - u);
    };
    const complex brute = integrate(paired, 1e-9, 16.0, QuadratureSpec{1e-12, 44});
    CHECK(std::abs(via_kernel - brute) < 1e-10);
}
