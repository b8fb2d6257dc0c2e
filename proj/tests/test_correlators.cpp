#include <catch2/catch_amalgamated.hpp>

#include <modcyl/correlators.hpp>

using namespace modcyl;

namespace {
const Geometry desk(4.0, 1.0);
}

TEST_CASE("periodic constant test function picks up only the zero mode") {
    StateParams mixed = StateParams::ramond(0.2 * 0.5 / desk.L, -0.5 * 0.5 / desk.L, 1.0, 0.7, desk);
    TestSpinor f;
    f[0] = {[](double) { return complex(1.0); }, [](double) { return complex(0.0); }, 0.0, desk.L,
            Smoothness::schwartz_like};
    f[1] = zero_function(0.0, desk.L);
    const complex tp = two_point(f, f, mixed, desk);
    const Mat2 gz = g_covariance(mixed, desk);
    CHECK(std::abs(tp - gz(0, 0) * desk.L * desk.L) < 1e-9);

    // all n != 0 terms vanish for the constant: the mode sum is exact at any order
    const complex m1 = mode_sum_oracle(f, f, mixed, desk, 1);
    const complex m32 = mode_sum_oracle(f, f, mixed, desk, 32);
    CHECK(std::abs(m1 - m32) < 1e-12);
    CHECK(std::abs(m1 - tp) < 1e-9);
}

TEST_CASE("antiperiodic single-mode occupations") {
    // f = e^{-i 2 pi (n + 1/2) x / L}/sqrt(L): the pairing is 1 for n < 0 and 0 for n >= 0
    for (int n : {-2, -1, 0, 1}) {
        TestSpinor f;
        const double k = n + 0.5;
        f[0] = {[k](double x) { return std::exp(complex(0.0, -2.0 * pi * k * x / desk.L)) /
                                       std::sqrt(desk.L); },
                nullptr, 0.0, desk.L, Smoothness::schwartz_like};
        f[1] = zero_function(0.0, desk.L);
        const complex tp = two_point(f, f, StateParams::ns(), desk);
        CHECK(std::abs(tp - (n < 0 ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("hermiticity of the two-point form") {
    StateParams zt = preset_zero_temperature(desk);
    TestSpinor f, h;
    f[0] = bump(1.2, 0.5);
    f[1] = bump(2.6, 0.4, complex(0.3, -0.2));
    h[0] = bump(1.5, 0.6, complex(0.0, 1.0));
    h[1] = bump(2.2, 0.5);
    const complex ab = two_point(f, h, zt, desk);
    const complex ba = two_point(h, f, zt, desk);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-12);
}

TEST_CASE("mode sum converges to the closed form") {
    TestSpinor f, h;
    f[0] = bump(1.2, 0.5);
    f[1] = bump(2.6, 0.4, complex(0.3, -0.2));
    h[0] = bump(1.5, 0.6, complex(0.0, 1.0));
    h[1] = bump(2.2, 0.5);
    for (auto st : {StateParams::ns(), preset_zero_temperature(desk)}) {
        const complex tp = two_point(f, h, st, desk);
        double e16 = std::abs(mode_sum_oracle(f, h, st, desk, 16) - tp);
        double e32 = std::abs(mode_sum_oracle(f, h, st, desk, 32) - tp);
        double e64 = std::abs(mode_sum_oracle(f, h, st, desk, 64) - tp);
        CHECK(e32 < e16);
        CHECK(e64 < e32);
        // faster than 1/N
        CHECK(e64 < 0.5 * e32);
        CHECK(e64 < 1e-6);
    }
    CHECK_THROWS_AS(mode_sum_oracle(f, h, StateParams::ns(), desk, 0), std::invalid_argument);
}

TEST_CASE("disjoint supports see no contact term") {
    // with disjoint supports only the principal-value (and R smooth) parts act;
    // removing the delta part changes nothing
    StateParams ns = StateParams::ns();
    TestSpinor f, h;
    f[0] = bump(0.8, 0.3);
    f[1] = zero_function(0, desk.L);
    h[0] = bump(2.8, 0.3);
    h[1] = zero_function(0, desk.L);
    const complex with_delta = two_point(f, h, ns, desk);
    SingularKernel1D k = two_point_kernel(ns, desk, 0.0, desk.L);
    k.delta_diag = {};
    const TestSpinor hc = conjugate(h);
    complex without = 0.0;
    without = integrate(
        [&](double x) -> complex { return f[0].f(x) * smear(k, hc, x).value[0]; },
        f[0].support_lo, f[0].support_hi, QuadratureSpec{1e-11, 40});
    CHECK(std::abs(with_delta - without) < 1e-10);
}

TEST_CASE("analytic continuation off the interval") {
    StateParams ns = StateParams::ns();
    StateParams mixed = StateParams::ramond(0.3 * 0.5 / desk.L, -0.4 * 0.5 / desk.L, 0.8, 0.2, desk);
    TestSpinor f;
    f[0] = bump(-0.2, 0.5);
    f[1] = bump(0.3, 0.4, complex(0.4, 0.6));

    SECTION("jump across the cut") {
        // (Hf)^- - (Hf)^+ -> (f_1, -f_2), linear in the approach distance
        for (const auto& st : {ns, mixed}) {
            const double x = 0.12;
            double last1 = 1e300, last2 = 1e300;
            for (double eta : {1e-3, 1e-4, 1e-5}) {
                const Vec2 below = analytic_continuation(f, complex(x, -eta), st, desk);
                const Vec2 above = analytic_continuation(f, complex(x, eta), st, desk);
                const double d1 = std::abs((below - above)[0] - f[0].f(x));
                const double d2 = std::abs((below - above)[1] + f[1].f(x));
                CHECK(d1 < last1);
                CHECK(d2 < last2);
                last1 = d1;
                last2 = d2;
            }
            CHECK(last1 < 1e-4);
            CHECK(last2 < 1e-4);
        }
    }
    SECTION("antiperiodic: decay at large imaginary part") {
        const Vec2 v1 = analytic_continuation(f, complex(0.3, 5.0), ns, desk);
        const Vec2 v2 = analytic_continuation(f, complex(0.3, 12.0), ns, desk);
        CHECK(v1.norm() < 5e-3);
        CHECK(v2.norm() < 5e-5);
        // kernel decays like e^{-pi Y / L}
        CHECK(v2.norm() < v1.norm() * 1.5 * std::exp(-pi * 7.0 / desk.L));
    }
    SECTION("antiperiodicity on the double cover") {
        const complex z(0.4, 0.7);
        const Vec2 a = analytic_continuation(f, z, ns, desk);
        const Vec2 b = analytic_continuation(f, z + desk.L, ns, desk);
        CHECK((a + b).norm() < 1e-10 * a.norm());
    }
    SECTION("periodic: matrix-weighted cancellation at infinity") {
        const Mat2 h = build_h(mixed, desk);
        Mat2 hp, hm;
        hp << h(0, 0) + 0.5 / desk.L, -h(0, 1), h(1, 0), -h(1, 1) + 0.5 / desk.L;
        hm << h(0, 0) - 0.5 / desk.L, -h(0, 1), h(1, 0), -h(1, 1) - 0.5 / desk.L;
        const double x = 0.2;
        double last = 1e300;
        for (double y : {4.0, 7.0, 10.0}) {
            const Vec2 up = analytic_continuation(f, complex(x, y), mixed, desk);
            const Vec2 dn = analytic_continuation(f, complex(x, -y), mixed, desk);
            const double v = (hp * up - hm * dn).norm();
            CHECK(v < last);
            last = v;
        }
        CHECK(last < 1e-6);
    }
    SECTION("endpoint behavior: (z -+ ell)(Hf)(z) -> 0") {
        TestSpinor wide;
        wide[0] = {[](double x) { return complex(1.0 - 0.3 * x); }, nullptr, -desk.ell, desk.ell,
                   Smoothness::l2_only};
        wide[1] = zero_function(-desk.ell, desk.ell);
        double last = 1e300;
        for (double d : {1e-2, 1e-3, 1e-4}) {
            const complex z = complex(desk.ell + d, d);  // non-tangential approach
            const double v = std::abs((z - desk.ell) *
                                      analytic_continuation(wide, z, StateParams::ns(), desk)[0]);
            CHECK(v < last);
            last = v;
        }
    }
    CHECK_THROWS_AS(analytic_continuation(f, complex(0.2, 0.0), ns, desk), std::domain_error);
}

TEST_CASE("restricted operator bound and anticommutator consistency") {
    StateParams mixed = StateParams::ramond(0.2 * 0.5 / desk.L, -0.5 * 0.5 / desk.L, 1.0, 0.7, desk);
    SingularKernel1D gk = two_point_kernel(mixed, desk, -desk.ell, desk.ell);
    SingularKernel1D gq = two_point_complement_kernel(mixed, desk, -desk.ell, desk.ell);
    auto probes = probe_spinors(desk, 4, 99);
    QuadratureSpec q{1e-11, 40};
    for (const auto& f : probes) {
        complex gff = 0.0, qff = 0.0;
        double n2 = 0.0;
        for (int a = 0; a < 2; ++a) {
            gff += integrate(
                [&](double x) { return std::conj(f[a].f(x)) * smear(gk, f, x).value[a]; },
                f[a].support_lo, f[a].support_hi, q);
            qff += integrate(
                [&](double x) { return std::conj(f[a].f(x)) * smear(gq, f, x).value[a]; },
                f[a].support_lo, f[a].support_hi, q);
            n2 += integrate([&](double x) { return complex(std::norm(f[a].f(x)), 0.0); },
                            f[a].support_lo, f[a].support_hi, q)
                      .real();
        }
        CHECK(gff.real() >= -1e-10);
        CHECK(gff.real() <= n2 + 1e-10);
        CHECK(std::abs(gff + qff - n2) < 1e-10);
    }
}
