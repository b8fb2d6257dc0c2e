#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "common.hpp"
#include "correlators.hpp"
#include "geometry.hpp"
#include "states.hpp"
#include "test_functions.hpp"

namespace modcyl {

// ---------------------------------------------------------------------------
// Independent verification route: midpoint collocation of the two-point
// kernel, then the functional calculus by Hermitian eigendecomposition.
// ---------------------------------------------------------------------------

struct DiscretizedOperator {
    int n = 0;           // nodes per component
    double dx = 0.0;
    std::vector<double> nodes;
    Eigen::MatrixXcd mat;  // 2n x 2n, indexed (component * n + node)
};

/// Midpoint collocation of the two-point operator on [-ell, ell]. Nodes sit
/// at cell centers so no sample touches the endpoints. The kernel is entered
/// through its occupied-mode expansion truncated at the grid's Nyquist band,
/// summed in closed form per entry: sampling the bare principal-value kernel
/// pointwise would alias the 0/1 occupation symbol into a sawtooth, pinning
/// the extreme eigenvalues at distance ~1/n from the endpoints and cutting
/// off exactly the spectral range the functional calculus needs. The
/// band-limited compression keeps the exact 1/2 diagonal and Hermiticity,
/// and its eigenvalues cluster at 0 and 1 the way the continuum spectrum
/// requires.
inline DiscretizedOperator discretize_two_point(const StateParams& state, const Geometry& g,
                                                int n) {
    if (n < 16 || n % 2 != 0)
        throw std::invalid_argument("discretize_two_point: n must be even and >= 16");
    DiscretizedOperator d;
    d.n = n;
    d.dx = 2.0 * g.ell / n;
    d.nodes = midpoint_grid(n, g);
    d.mat = Eigen::MatrixXcd::Zero(2 * n, 2 * n);

    const bool ramond = state.is_ramond();
    Mat2 gz = Mat2::Zero();
    if (ramond) gz = g_covariance(state, g);
    // modes per chirality up to the one-sided Nyquist band of the grid
    const long m_modes = std::lround(g.L / (2.0 * d.dx));

    // sum over occupied modes, closed geometric form:
    //   NS: sum_{k=0}^{M-1} e^{-i (2pi/L)(k+1/2) u}
    //   R:  sum_{k=1}^{M}   e^{-i (2pi/L) k u}
    auto mode_sum = [&](double u) -> complex {
        const double th = 2.0 * pi * std::remainder(u, g.L) / g.L;
        if (std::abs(std::sin(0.5 * th)) < 1e-14) return complex(static_cast<double>(m_modes));
        const complex r = std::exp(complex(0.0, -th));
        const complex num = 1.0 - std::exp(complex(0.0, -th * static_cast<double>(m_modes)));
        const complex head = ramond ? r : std::exp(complex(0.0, -0.5 * th));
        return head * num / (1.0 - r);
    };

    parallel_for(n, [&](std::size_t j) {
        for (int k = 0; k < n; ++k) {
            const double u = d.nodes[j] - d.nodes[k];
            const complex s = mode_sum(u) * (d.dx / g.L);
            if (ramond) {
                d.mat(j, k) = s + gz(0, 0) * d.dx;
                d.mat(j, n + k) = gz(0, 1) * d.dx;
                d.mat(n + j, k) = gz(1, 0) * d.dx;
                d.mat(n + j, n + k) = std::conj(s) + gz(1, 1) * d.dx;
            } else {
                d.mat(j, k) = s;
                d.mat(n + j, n + k) = std::conj(s);
            }
        }
    });
    // symmetrize away the last rounding
    d.mat = 0.5 * (d.mat + d.mat.adjoint()).eval();
    return d;
}

using MatrixXcl = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXl = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// Eigendecomposition of the discretized operator. The solve runs in
/// extended (long double) precision: the spectrum clusters exponentially at
/// 0 and 1, and eigenvalues down to ~1e-17 still carry faithful values of
/// ln(lambda/(1-lambda)); plain double would truncate the usable spectral
/// window at |ln| ~ 36 and leave a visible error floor in the
/// functional-calculus comparisons.
struct SpectralDecomposition {
    VectorXl eigenvalues;  // ascending, clipped into (lambda_min, 1-lambda_min)
    MatrixXcl vectors;     // unitary, columns are eigenvectors
    int clipped = 0;       // eigenvalues pushed back into the open interval
    long double lambda_min = 1e-17L;
};

inline SpectralDecomposition decompose(const DiscretizedOperator& d,
                                       long double lambda_min = 1e-17L) {
    MatrixXcl a = d.mat.cast<std::complex<long double>>();
    Eigen::SelfAdjointEigenSolver<MatrixXcl> es(a);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("decompose: eigensolver failed");
    SpectralDecomposition s;
    s.eigenvalues = es.eigenvalues();
    s.vectors = es.eigenvectors();
    s.lambda_min = lambda_min;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        long double& l = s.eigenvalues[i];
        if (l < lambda_min) {
            l = lambda_min;
            ++s.clipped;
        } else if (l > 1.0L - lambda_min) {
            l = 1.0L - lambda_min;
            ++s.clipped;
        }
    }
    return s;
}

/// ln(G/(1-G)) through the eigendecomposition; Hermitian.
inline Eigen::MatrixXcd matrix_modular_hamiltonian(const SpectralDecomposition& s) {
    VectorXl w(s.eigenvalues.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        w[i] = std::log(s.eigenvalues[i] / (1.0L - s.eigenvalues[i]));
    MatrixXcl h = s.vectors * w.asDiagonal() * s.vectors.adjoint();
    return h.cast<complex>();
}

/// (G/(1-G))^{it} through the eigendecomposition; unitary.
inline Eigen::MatrixXcd matrix_modular_flow(const SpectralDecomposition& s, double t) {
    Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1> w(s.eigenvalues.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const long double lg = std::log(s.eigenvalues[i] / (1.0L - s.eigenvalues[i]));
        w[i] = std::exp(std::complex<long double>(0.0L, t * lg));
    }
    MatrixXcl k = s.vectors * w.asDiagonal() * s.vectors.adjoint();
    return k.cast<complex>();
}

inline Eigen::VectorXcd stack(const SampledSpinor& f) {
    const std::size_t n = f.size();
    Eigen::VectorXcd v(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = f.v1[j];
        v[n + j] = f.v2[j];
    }
    return v;
}

inline SampledSpinor unstack(const Eigen::VectorXcd& v, const std::vector<double>& nodes) {
    SampledSpinor f(nodes);
    const std::size_t n = nodes.size();
    for (std::size_t j = 0; j < n; ++j) {
        f.v1[j] = v[j];
        f.v2[j] = v[n + j];
    }
    return f;
}

inline SampledSpinor apply_matrix(const Eigen::MatrixXcd& m, const TestSpinor& f,
                                  const DiscretizedOperator& d) {
    return unstack(m * stack(SampledSpinor::sample(f, d.nodes)), d.nodes);
}

// ---------------------------------------------------------------------------
// Comparison driver
// ---------------------------------------------------------------------------

struct ProbeComparison {
    double rel_error = 0.0;
    double max_error = 0.0;
    double max_error_at = 0.0;
};

struct ComparisonReport {
    std::string label;
    std::vector<int> grid_sizes;
    // [grid][probe]
    std::vector<std::vector<ProbeComparison>> entries;
    double convergence_order = 0.0;  // slope of log(worst error) vs log(1/N)
    bool converged = true;           // order estimate >= 0.5

    double worst_error(std::size_t grid_index) const {
        double w = 0.0;
        for (const auto& e : entries[grid_index]) w = std::max(w, e.rel_error);
        return w;
    }
};

/// Compare an analytic smeared-apply closure against a matrix route across a
/// grid sweep. analytic(f, nodes) must return the sampled image of f;
/// numeric(f, d) the matrix image on the same nodes.
template <class AnalyticFn, class NumericFn>
ComparisonReport compare(AnalyticFn&& analytic, NumericFn&& numeric,
                         const std::vector<TestSpinor>& probes, const StateParams& state,
                         const Geometry& g, const std::vector<int>& grid_sizes,
                         std::string label = {}) {
    ComparisonReport rep;
    rep.label = std::move(label);
    rep.grid_sizes = grid_sizes;
    for (int n : grid_sizes) {
        DiscretizedOperator d = discretize_two_point(state, g, n);
        std::vector<ProbeComparison> row;
        for (const TestSpinor& f : probes) {
            SampledSpinor a = analytic(f, d.nodes);
            SampledSpinor b = numeric(f, d);
            ProbeComparison pc;
            const double ref = b.norm2();
            pc.rel_error = a.distance2(b) / (ref > 0 ? ref : 1.0);
            for (std::size_t j = 0; j < d.nodes.size(); ++j) {
                const double e = std::abs(a.v1[j] - b.v1[j]) + std::abs(a.v2[j] - b.v2[j]);
                if (e > pc.max_error) {
                    pc.max_error = e;
                    pc.max_error_at = d.nodes[j];
                }
            }
            row.push_back(pc);
        }
        rep.entries.push_back(std::move(row));
    }
    // least-squares slope of log(err) against log(1/N)
    if (grid_sizes.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int m = static_cast<int>(grid_sizes.size());
        for (int i = 0; i < m; ++i) {
            const double x = -std::log(static_cast<double>(grid_sizes[i]));
            const double y = std::log(std::max(rep.worst_error(i), 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        rep.convergence_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        rep.converged = rep.convergence_order >= 0.5;
    }
    return rep;
}

/// Bin-averaged comparison of the analytic spectral density against the
/// eigenvector histogram of the discretized operator.
struct SpectralMeasureReport {
    double analytic_mass = 0.0;     // re of the analytic total
    complex discrete_mass = 0.0;
    double sup_bin_difference = 0.0;
    std::vector<double> bin_centers;
    std::vector<double> analytic_bins;   // re of bin-averaged density
    std::vector<double> discrete_bins;
};

template <class DensityFn>
SpectralMeasureReport spectral_measure_check(const DiscretizedOperator& d,
                                             const SpectralDecomposition& s, DensityFn&& density,
                                             const TestSpinor& f, const TestSpinor& gf,
                                             int bins) {
    SpectralMeasureReport rep;
    const Eigen::VectorXcd fv = stack(SampledSpinor::sample(f, d.nodes));
    const Eigen::VectorXcd gv = stack(SampledSpinor::sample(gf, d.nodes));
    if (bins < 2) throw std::invalid_argument("spectral_measure_check: bins >= 2");
    const double width = 1.0 / bins;
    // eigenvalue spacing must resolve the bins
    double min_gap = 1.0;
    for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i)
        min_gap = std::min(min_gap, static_cast<double>(s.eigenvalues[i] - s.eigenvalues[i - 1]));
    if (width < min_gap)
        throw std::invalid_argument("spectral_measure_check: bin width below eigenvalue spacing");

    std::vector<complex> disc(bins, 0.0);
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        int b = std::min(bins - 1, static_cast<int>(static_cast<double>(s.eigenvalues[i]) / width));
        const Eigen::VectorXcd u = s.vectors.col(i).cast<complex>();
        const complex overlap = (gv.adjoint() * u)(0) * (u.adjoint() * fv)(0) * d.dx;
        disc[b] += overlap;
        rep.discrete_mass += overlap;
    }
    for (int b = 0; b < bins; ++b) {
        const double lo = b * width, hi = lo + width;
        // 5-point average of the analytic density over the bin
        complex avg = 0.0;
        const int m = 5;
        for (int k = 0; k < m; ++k) {
            const double mu = lo + (k + 0.5) * (hi - lo) / m;
            avg += density(mu);
        }
        avg /= static_cast<double>(m);
        rep.bin_centers.push_back(0.5 * (lo + hi));
        rep.analytic_bins.push_back(avg.real());
        rep.discrete_bins.push_back((disc[b] / width).real());
        rep.analytic_mass += avg.real() * width;
        rep.sup_bin_difference =
            std::max(rep.sup_bin_difference, std::abs(avg - disc[b] / width));
    }
    return rep;
}

}  // namespace modcyl
