#include <catch2/catch_amalgamated.hpp>

#include <modcyl/modular.hpp>
#include <modcyl/oracle.hpp>
#include <modcyl/resolvent.hpp>

using namespace modcyl;

namespace {
const Geometry desk(4.0, 1.0);
const StateParams mixed =
    StateParams::ramond(0.2 * 0.5 / desk.L, -0.5 * 0.5 / desk.L, 1.0, 0.7, desk);

TestSpinor plain_probe() {
    TestSpinor f;
    f[0] = bump(-0.2, 0.5);
    f[1] = bump(0.3, 0.4, complex(0.2, 0.4));
    return f;
}
}  // namespace

TEST_CASE("discretized two-point operator structure") {
    for (const auto& st : {StateParams::ns(), mixed}) {
        DiscretizedOperator d = discretize_two_point(st, desk, 64);
        CHECK((d.mat - d.mat.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d.mat);
        CHECK(es.eigenvalues().minCoeff() > -1e-3);
        CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-3);
    }
    SECTION("antiperiodic diagonal is exactly one half") {
        DiscretizedOperator d = discretize_two_point(StateParams::ns(), desk, 64);
        for (int j = 0; j < 2 * 64; ++j) CHECK(d.mat(j, j) == complex(0.5, 0.0));
    }
    SECTION("eigenvalue spill shrinks with resolution") {
        auto spill = [&](int n) {
            DiscretizedOperator d = discretize_two_point(StateParams::ns(), desk, n);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d.mat);
            return std::max(-es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff() - 1.0);
        };
        const double s64 = spill(64), s128 = spill(128);
        CHECK(s128 <= std::max(s64, 1e-13));
    }
    CHECK_THROWS_AS(discretize_two_point(mixed, desk, 15), std::invalid_argument);
    CHECK_THROWS_AS(discretize_two_point(mixed, desk, 33), std::invalid_argument);
}

TEST_CASE("functional calculus at matrix level") {
    DiscretizedOperator d = discretize_two_point(mixed, desk, 64);
    SpectralDecomposition s = decompose(d);
    SECTION("flow at t = 0 is the identity") {
        Eigen::MatrixXcd k = matrix_modular_flow(s, 0.0);
        CHECK((k - Eigen::MatrixXcd::Identity(128, 128)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("unitarity") {
        Eigen::MatrixXcd k = matrix_modular_flow(s, 0.7);
        CHECK((k.adjoint() * k - Eigen::MatrixXcd::Identity(128, 128)).cwiseAbs().maxCoeff() <
              1e-10);
    }
    SECTION("group law") {
        Eigen::MatrixXcd k1 = matrix_modular_flow(s, 0.3);
        Eigen::MatrixXcd k2 = matrix_modular_flow(s, 0.45);
        Eigen::MatrixXcd k12 = matrix_modular_flow(s, 0.75);
        CHECK((k1 * k2 - k12).cwiseAbs().maxCoeff() < 1e-10);
    }
    SECTION("hamiltonian is hermitian and generates the flow") {
        Eigen::MatrixXcd h = matrix_modular_hamiltonian(s);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
        // small-t expansion against the exact matrix flow
        const double t = 1e-6;
        Eigen::MatrixXcd k = matrix_modular_flow(s, t);
        Eigen::MatrixXcd lin = Eigen::MatrixXcd::Identity(128, 128) + 1i * t * h;
        CHECK((k - lin).cwiseAbs().maxCoeff() < 1e-9);
    }
    SECTION("antiperiodic spectrum is symmetric under negation") {
        DiscretizedOperator dn = discretize_two_point(StateParams::ns(), desk, 64);
        SpectralDecomposition sn = decompose(dn);
        for (Eigen::Index i = 0; i < sn.eigenvalues.size(); ++i) {
            const double lg =
                double(std::log(sn.eigenvalues[i] / (1.0L - sn.eigenvalues[i])));
            const double mirror = double(std::log(
                sn.eigenvalues[sn.eigenvalues.size() - 1 - i] /
                (1.0L - sn.eigenvalues[sn.eigenvalues.size() - 1 - i])));
            if (std::abs(lg) < 25.0) CHECK(lg == Catch::Approx(-mirror).margin(1e-7));
        }
    }
}

TEST_CASE("comparison driver") {
    SECTION("identity against identity is exact") {
        auto analytic = [&](const TestSpinor& f, const std::vector<double>& nodes) {
            return SampledSpinor::sample(f, nodes);
        };
        auto numeric = [&](const TestSpinor& f, const DiscretizedOperator& d) {
            return SampledSpinor::sample(f, d.nodes);
        };
        std::vector<TestSpinor> probes = {plain_probe()};
        ComparisonReport rep =
            compare(analytic, numeric, probes, StateParams::ns(), desk, {32, 64});
        CHECK(rep.worst_error(0) == 0.0);
        CHECK(rep.worst_error(1) == 0.0);
    }
    SECTION("flow comparison converges across the sweep") {
        const double margin = 4.0 * 2.0 * desk.ell / 64;
        TestSpinor f;
        f[0] = flow_band_probe(desk, 0.0, 1.0, margin, -pi * 0.3);
        f[1] = flow_band_probe(desk, 0.2, 1.0, margin, pi * 0.3, complex(0.5, 0.5));
        auto analytic = [&](const TestSpinor& p, const std::vector<double>& nodes) {
            return flow_apply(0.3, p, mixed, desk, nodes);
        };
        auto numeric = [&](const TestSpinor& p, const DiscretizedOperator& d) {
            SpectralDecomposition s = decompose(d);
            return apply_matrix(matrix_modular_flow(s, 0.3), p, d);
        };
        ComparisonReport rep = compare(analytic, numeric, {f}, mixed, desk, {64, 128, 256});
        CHECK(rep.worst_error(2) < rep.worst_error(0));
        CHECK(rep.converged);
    }
}

TEST_CASE("spectral measure against the eigen-histogram") {
    // probes with tame spectral content, so 32 bins resolve the density
    const double margin = 4.0 * 2.0 * desk.ell / 256;
    TestSpinor f, w;
    f[0] = flow_band_probe(desk, 0.0, 1.4, margin);
    f[1] = flow_band_probe(desk, 0.3, 1.3, margin, 0.2, complex(0.4, 0.6));
    w[0] = flow_band_probe(desk, -0.2, 1.3, margin, -0.3, complex(0.0, 1.0));
    w[1] = flow_band_probe(desk, 0.1, 1.4, margin, 0.0, complex(-0.7, 0.2));
    DiscretizedOperator d = discretize_two_point(StateParams::ns(), desk, 256);
    SpectralDecomposition s = decompose(d);
    auto density = [&](double mu) { return spectral_density(mu, f, w, StateParams::ns(), desk); };
    SpectralMeasureReport rep = spectral_measure_check(d, s, density, f, w, 32);

    // completeness: both totals equal <w, f>
    QuadratureSpec q{1e-11, 40};
    complex inner = 0.0;
    for (int a = 0; a < 2; ++a)
        inner += integrate([&](double x) { return std::conj(w[a].f(x)) * f[a].f(x); },
                           std::max(w[a].support_lo, f[a].support_lo),
                           std::min(w[a].support_hi, f[a].support_hi), q);
    CHECK(std::abs(rep.discrete_mass - inner) < 1e-5);
    CHECK(std::abs(complex(rep.analytic_mass, 0.0) - inner) < 1e-3);  // 5-point bin average
    CHECK(rep.sup_bin_difference < 5e-3);

    CHECK_THROWS_AS(spectral_measure_check(d, s, density, f, w, 1), std::invalid_argument);
}

TEST_CASE("near-tip occupancy bias") {
    // close to the tip the zero-mode sector is nearly filled: the spectral mass
    // of a constant-ish probe concentrates above mu = 1/2
    StateParams nt = StateParams::ramond(0.99 * 0.5 / desk.L, 0.99 * 0.5 / desk.L, 0, 0, desk);
    DiscretizedOperator d = discretize_two_point(nt, desk, 128);
    SpectralDecomposition s = decompose(d);
    TestSpinor f;
    f[0] = bump(0.0, 0.9);
    f[1] = zero_function(-1, 1);
    Eigen::VectorXcd fv = stack(SampledSpinor::sample(f, d.nodes));
    double below = 0.0, above = 0.0;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        const Eigen::VectorXcd u = s.vectors.col(i).cast<complex>();
        const double m = std::norm((u.adjoint() * fv)(0)) * d.dx;
        (double(s.eigenvalues[i]) < 0.5 ? below : above) += m;
    }
    CHECK(above > below);
}
