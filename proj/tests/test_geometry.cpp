#include <catch2/catch_amalgamated.hpp>

#include <modcyl/geometry.hpp>

#include <random>

using namespace modcyl;

namespace {
const Geometry desk(4.0, 1.0);
}

TEST_CASE("flow coordinate basics") {
    CHECK(flow_coordinate(Chirality::one, 0.0, desk) == 0.0);

    // closed form at ell/2: ln(sin(3 pi/8)/sin(pi/8)) = ln(1 + sqrt 2)
    CHECK_THAT(flow_coordinate(Chirality::one, 0.5, desk),
               Catch::Matchers::WithinAbs(0.881373587019543, 1e-15));

    // component two mirrors component one
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(-0.99, 0.99);
    for (int i = 0; i < 50; ++i) {
        const double x = unif(rng);
        CHECK(flow_coordinate(Chirality::two, x, desk) ==
              Catch::Approx(flow_coordinate(Chirality::one, -x, desk)).margin(1e-14));
    }

    CHECK(std::isinf(flow_coordinate(Chirality::one, 1.0, desk)));
    CHECK(flow_coordinate(Chirality::one, -1.0, desk) < 0);
    CHECK_THROWS_AS(flow_coordinate(Chirality::one, 1.5, desk), std::domain_error);
}

TEST_CASE("flow coordinate is strictly monotone") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-0.995, 0.995);
    std::vector<double> xs(40);
    for (auto& x : xs) x = unif(rng);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < xs.size(); ++i)
        CHECK(flow_coordinate(Chirality::one, xs[i - 1], desk) <
              flow_coordinate(Chirality::one, xs[i], desk));
}

TEST_CASE("trajectory properties") {
    CHECK(flow_trajectory(0.37, 0.0, desk) == Catch::Approx(0.37).margin(1e-15));
    CHECK(flow_trajectory(0.1, 1e4, desk) == Catch::Approx(desk.ell).margin(1e-12));
    CHECK(flow_trajectory(0.1, -1e4, desk) == Catch::Approx(-desk.ell).margin(1e-12));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ypos(-0.85, 0.85), tval(-0.9, 0.9);
    for (int i = 0; i < 100; ++i) {
        const double y = ypos(rng), t = tval(rng);
        const double x0 = flow_trajectory(y, t, desk);
        const double resid = flow_coordinate(Chirality::one, x0, desk) -
                             flow_coordinate(Chirality::one, y, desk) - 2.0 * pi * t;
        CHECK(std::abs(resid) < 1e-12);
    }
    // larger times push the image into the endpoint region, where the residual
    // check is limited by the exponential conditioning of the coordinate
    std::uniform_real_distribution<double> tbig(-1.8, 1.8);
    for (int i = 0; i < 50; ++i) {
        const double y = ypos(rng), t = tbig(rng);
        const double x0 = flow_trajectory(y, t, desk);
        const double resid = flow_coordinate(Chirality::one, x0, desk) -
                             flow_coordinate(Chirality::one, y, desk) - 2.0 * pi * t;
        CHECK(std::abs(resid) < 1e-10);
    }

    // group law on trajectories
    for (int i = 0; i < 50; ++i) {
        const double y = ypos(rng), t1 = tval(rng), t2 = tval(rng);
        const double a = flow_trajectory(flow_trajectory(y, t1, desk), t2, desk);
        const double b = flow_trajectory(y, t1 + t2, desk);
        CHECK(std::abs(a - b) < 1e-10);
    }

    CHECK_THROWS_AS(flow_trajectory(1.0, 0.3, desk), std::domain_error);
}

TEST_CASE("trajectory velocity at t = 0") {
    // x0(y, t) = y + t * (2L / sin(2 pi ell / L)) [sin^2(pi ell/L) - sin^2(pi y/L)] + O(t^2),
    // checked by Richardson extrapolation of the difference quotient
    for (double y : {-0.7, -0.1, 0.45}) {
        const double want = 2.0 * desk.L / desk.sin_interval() *
                            (std::pow(std::sin(pi * desk.ell / desk.L), 2) -
                             std::pow(std::sin(pi * y / desk.L), 2));
        const double h = 1e-5;
        const double d1 = (flow_trajectory(y, h, desk) - flow_trajectory(y, -h, desk)) / (2 * h);
        const double d2 =
            (flow_trajectory(y, h / 2, desk) - flow_trajectory(y, -h / 2, desk)) / h;
        const double richardson = (4.0 * d2 - d1) / 3.0;
        CHECK(richardson == Catch::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("sinh product identity") {
    SECTION("antisymmetry under swap") {
        auto [l1, r1] = sinh_coordinate_identity(0.3, -0.5, desk);
        auto [l2, r2] = sinh_coordinate_identity(-0.5, 0.3, desk);
        CHECK(l1 == Catch::Approx(-l2));
        CHECK(r1 == Catch::Approx(-r2));
    }
    SECTION("random pairs to 1e-12 relative") {
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> unif(-0.97, 0.97);
        for (int i = 0; i < 1000; ++i) {
            const double x = unif(rng), y = unif(rng);
            if (std::abs(x - y) < 1e-5) continue;
            auto [lhs, rhs] = sinh_coordinate_identity(x, y, desk);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
        }
    }
    SECTION("coincidence limit") {
        // lhs ~ 2 / (Omega'(y) (x - y)) as x -> y
        const double y = 0.25;
        for (double h : {1e-3, 1e-4}) {
            auto [lhs, rhs] = sinh_coordinate_identity(y + h, y, desk);
            const double leading = 2.0 / (flow_coordinate_deriv(y, desk) * h);
            CHECK(lhs == Catch::Approx(leading).epsilon(5e-3));
            CHECK(rhs == Catch::Approx(leading).epsilon(5e-3));
        }
    }
    CHECK_THROWS_AS(sinh_coordinate_identity(0.2, 0.2, desk), std::domain_error);
}

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(Geometry(4.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(Geometry(4.0, 2.5), std::domain_error);
    CHECK_THROWS_AS(Geometry(-1.0, 0.2), std::domain_error);
    CHECK_NOTHROW(Geometry(4.0, 1.9999));
}
