#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "lec/errors.hpp"
#include "lec/matrix.hpp"

namespace lec {

/// Role of a spectrum column after ordering and snapping.
enum class PairClass { real_ev, pair_first, pair_second, zero };

inline const char* to_string(PairClass p) {
    switch (p) {
        case PairClass::real_ev: return "real";
        case PairClass::pair_first: return "pair_first";
        case PairClass::pair_second: return "pair_second";
        case PairClass::zero: return "zero";
    }
    return "?";
}

struct DecomposeOptions {
    double tol_zero = 1e-10;   ///< |lambda| <= tol_zero * ||M||_F snaps to exactly 0
    double tol_imag = 1e-10;   ///< |Im| <= tol_imag * (1 + |lambda|) snaps to real
    double pair_tol = 1e-8;    ///< relative tolerance for conjugate-partner matching
    double residual_tol = 1e-8;  ///< per-column accuracy contract ||Av - lv|| / ||M||_F
};

/**
 * Ordered eigendecomposition of a real square matrix.
 *
 * Eigenvalues are sorted by descending real part; within a real-part tie,
 * real eigenvalues precede complex ones and each conjugate pair stays
 * adjacent with the +Im member first. Columns of `eigenvectors` pair with
 * `eigenvalues`; non-zero-class columns have unit 2-norm.
 */
struct Spectrum {
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
    std::vector<PairClass> pair_index;
    Eigen::VectorXd residuals;  ///< per column, ||A v - lambda v||_2 / ||A||_F
    MatrixMode mode = MatrixMode::adjacency;
    Eigen::Index rows = 0;          ///< n of the decomposed matrix
    Eigen::Index search_bound = 0;  ///< number of leading eigenpairs computed (== rows when full)
    bool symmetric_input = false;

    Eigen::Index columns() const { return eigenvalues.size(); }
};

namespace detail {

struct SpectralUnit {
    bool is_pair = false;
    Eigen::Index first = 0;   // source column of the eigenvalue (the +Im member for pairs)
    Eigen::Index second = 0;  // source column of the conjugate partner
    double re = 0.0;
    double abs_im = 0.0;
};

/// Canonical sign for a real vector: flip so the entry sum is positive, or,
/// when the sum vanishes, so the first entry of largest magnitude is.
inline void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
    double s = v.sum();
    if (std::abs(s) > 1e-12 * v.size()) {
        if (s < 0.0) v = -v;
        return;
    }
    Eigen::Index lead = 0;
    v.cwiseAbs().maxCoeff(&lead);
    if (v(lead) < 0.0) v = -v;
}

/// Rotates a complex eigenvector to its canonical phase, the one making
/// sum(x_j^2) real and nonnegative. This decouples Re(x) and Im(x)
/// (they become orthogonal with ||Re|| >= ||Im||), so the V-matrix built
/// from the pair no longer depends on the solver's arbitrary phase.
inline void canonicalize_phase(Eigen::Ref<Eigen::VectorXcd> x) {
    std::complex<double> s = (x.array() * x.array()).sum();
    if (std::abs(s) > 1e-12) {
        std::complex<double> rot = std::polar(1.0, -std::arg(s) / 2.0);
        x *= rot;
    }
    // fix the remaining +-1 ambiguity off the real part
    Eigen::VectorXd re = x.real();
    Eigen::Index lead = 0;
    re.cwiseAbs().maxCoeff(&lead);
    if (re(lead) < 0.0) x = -x;
}

inline Spectrum assemble_spectrum(const Eigen::MatrixXd& a, Eigen::VectorXcd values,
                                  Eigen::MatrixXcd vectors, MatrixMode mode, bool symmetric,
                                  Eigen::Index search_bound, const DecomposeOptions& opt) {
    const Eigen::Index n = a.rows();
    const Eigen::Index m = values.size();
    const double fnorm = a.norm();

    // snap: exact zeros first, then real
    for (Eigen::Index j = 0; j < m; ++j) {
        std::complex<double> lam = values(j);
        if (std::abs(lam) <= opt.tol_zero * fnorm) {
            values(j) = 0.0;
        } else if (std::abs(lam.imag()) <= opt.tol_imag * (1.0 + std::abs(lam))) {
            values(j) = std::complex<double>(lam.real(), 0.0);
        }
    }

    // group columns into real singles and conjugate couples
    std::vector<SpectralUnit> units;
    std::vector<Eigen::Index> plus, minus;
    for (Eigen::Index j = 0; j < m; ++j) {
        double im = values(j).imag();
        if (im > 0.0)
            plus.push_back(j);
        else if (im < 0.0)
            minus.push_back(j);
        else
            units.push_back({false, j, j, values(j).real(), 0.0});
    }
    std::vector<bool> used(minus.size(), false);
    for (Eigen::Index p : plus) {
        std::complex<double> want = std::conj(values(p));
        Eigen::Index best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < minus.size(); ++q) {
            if (used[q]) continue;
            double d = std::abs(values(minus[q]) - want);
            if (d < best_dist) {
                best_dist = d;
                best = static_cast<Eigen::Index>(q);
            }
        }
        if (best < 0 || best_dist > opt.pair_tol * (1.0 + std::abs(want)))
            throw NumericalError("unpaired complex eigenvalue in real-matrix spectrum");
        used[static_cast<std::size_t>(best)] = true;
        units.push_back({true, p, minus[static_cast<std::size_t>(best)], values(p).real(),
                         std::abs(values(p).imag())});
    }
    if (std::find(used.begin(), used.end(), false) != used.end())
        throw NumericalError("unpaired complex eigenvalue in real-matrix spectrum");

    // descending real part; ties put real eigenvalues before pairs and
    // narrower pairs before wider ones; stable for exact ties
    std::stable_sort(units.begin(), units.end(), [](const SpectralUnit& a, const SpectralUnit& b) {
        if (a.re != b.re) return a.re > b.re;
        return a.abs_im < b.abs_im;
    });

    Spectrum s;
    s.mode = mode;
    s.rows = n;
    s.search_bound = search_bound;
    s.symmetric_input = symmetric;
    s.eigenvalues.resize(m);
    s.eigenvectors.resize(n, m);
    s.pair_index.resize(static_cast<std::size_t>(m));
    s.residuals.resize(m);

    Eigen::Index out = 0;
    for (const auto& unit : units) {
        if (!unit.is_pair) {
            std::complex<double> lam = values(unit.first);
            Eigen::VectorXd v = vectors.col(unit.first).real();
            double norm = v.norm();
            if (norm < 1e-12)
                throw NumericalError("eigenvector of a real eigenvalue has vanishing real part");
            v /= norm;
            canonicalize_sign(v);
            s.eigenvalues(out) = lam;
            s.eigenvectors.col(out) = v.cast<std::complex<double>>();
            s.pair_index[static_cast<std::size_t>(out)] = (lam == 0.0) ? PairClass::zero : PairClass::real_ev;
            ++out;
        } else {
            Eigen::VectorXcd x = vectors.col(unit.first);
            x /= x.norm();
            canonicalize_phase(x);
            std::complex<double> lam = values(unit.first);
            if (lam == 0.0) {
                // a zero-snapped couple carries no usable direction; both columns are zero-class
                s.eigenvalues(out) = 0.0;
                s.eigenvectors.col(out) = x;
                s.pair_index[static_cast<std::size_t>(out)] = PairClass::zero;
                s.eigenvalues(out + 1) = 0.0;
                s.eigenvectors.col(out + 1) = x.conjugate();
                s.pair_index[static_cast<std::size_t>(out + 1)] = PairClass::zero;
            } else {
                s.eigenvalues(out) = lam;
                s.eigenvectors.col(out) = x;
                s.pair_index[static_cast<std::size_t>(out)] = PairClass::pair_first;
                s.eigenvalues(out + 1) = std::conj(lam);
                s.eigenvectors.col(out + 1) = x.conjugate();
                s.pair_index[static_cast<std::size_t>(out + 1)] = PairClass::pair_second;
            }
            out += 2;
        }
    }

    // residual contract
    for (Eigen::Index j = 0; j < m; ++j) {
        double r = 0.0;
        if (fnorm > 0.0) {
            Eigen::VectorXcd av = a * s.eigenvectors.col(j);
            r = (av - s.eigenvalues(j) * s.eigenvectors.col(j)).norm() / fnorm;
        }
        s.residuals(j) = r;
        if (!(r <= opt.residual_tol))
            throw NumericalError("eigenpair residual " + std::to_string(r) + " exceeds contract at column " +
                                 std::to_string(j));
    }
    return s;
}

}  // namespace detail

/**
 * Full eigendecomposition of a general real matrix.
 *
 * Symmetric inputs go through the self-adjoint solver, which guarantees an
 * orthonormal eigenvector basis for repeated eigenvalues; everything else
 * uses the real-Schur solver. Eigenvalues within tol_zero of 0 (relative to
 * the Frobenius norm) are snapped to exactly zero and marked zero-class;
 * near-real eigenvalues are snapped to real. Conjugate partners are matched
 * by value and emitted adjacently, +Im first, with the pair eigenvector
 * rotated to canonical phase.
 */
inline Spectrum decompose(const SquareMatrix& m, const DecomposeOptions& opt = {}) {
    if (!m.entries.allFinite()) throw InputError("matrix contains non-finite entries");
    if (m.entries.rows() != m.entries.cols()) throw InputError("matrix must be square");
    const Eigen::Index n = m.n();
    if (n == 0) {
        Spectrum s;
        s.mode = m.mode;
        s.symmetric_input = true;
        return s;
    }

    const bool symmetric = m.entries == m.entries.transpose();
    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.entries);
        if (solver.info() != Eigen::Success) throw NumericalError("self-adjoint eigensolver failed to converge");
        return detail::assemble_spectrum(m.entries, solver.eigenvalues().cast<std::complex<double>>(),
                                         solver.eigenvectors().cast<std::complex<double>>(), m.mode,
                                         true, n, opt);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m.entries);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");
    return detail::assemble_spectrum(m.entries, solver.eigenvalues(), solver.eigenvectors(), m.mode,
                                     false, n, opt);
}

struct PartialOptions {
    Eigen::Index block_extra = 12;  ///< extra subspace columns beyond the requested pairs
    Eigen::Index max_iter = 600;
    std::uint64_t seed = 0x5ec7ba11;  ///< start-block seed; fixed for determinism
    DecomposeOptions decompose{};
};

/**
 * Leading @p num_pairs eigenpairs (largest real part) of a symmetric matrix
 * by block subspace iteration with Rayleigh-Ritz projection. The block is
 * wider than the request so clustered and repeated eigenvalues are resolved.
 * Residuals meet the same contract as the dense path. Deterministic for a
 * fixed input and options.
 *
 * The returned Spectrum has search_bound = num_pairs; gap analysis then
 * only sees the computed leading pairs.
 */
inline Spectrum decompose_partial(const SquareMatrix& m, Eigen::Index num_pairs,
                                  const PartialOptions& opt = {}) {
    if (!m.entries.allFinite()) throw InputError("matrix contains non-finite entries");
    const Eigen::Index n = m.n();
    if (num_pairs < 1 || num_pairs > n) throw InputError("requested eigenpair count out of range");
    if (!(m.entries == m.entries.transpose()))
        throw NumericalError("partial eigendecomposition requires a symmetric matrix");
    if (num_pairs == n) return decompose(m, opt.decompose);

    const Eigen::Index block = std::min<Eigen::Index>(n, num_pairs + opt.block_extra);
    const double fnorm = m.entries.norm();

    // the spectrum ordering wants the largest algebraic eigenvalues; shift so
    // they are also largest in magnitude (Gershgorin bound on the low end)
    double low = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double radius = m.entries.row(i).cwiseAbs().sum() - std::abs(m.entries(i, i));
        low = std::min(low, m.entries(i, i) - radius);
    }
    const double shift = low < 0.0 ? -low : 0.0;
    Eigen::MatrixXd shifted = m.entries;
    for (Eigen::Index i = 0; i < n; ++i) shifted(i, i) += shift;

    std::mt19937_64 rng(opt.seed);
    Eigen::MatrixXd q(n, block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            q(i, j) = 2.0 * detail::uniform01(rng) - 1.0;
    q = Eigen::HouseholderQR<Eigen::MatrixXd>(q).householderQ() * Eigen::MatrixXd::Identity(n, block);

    Eigen::VectorXd ritz(block);
    Eigen::MatrixXd vecs;
    bool converged = false;
    for (Eigen::Index it = 0; it < opt.max_iter && !converged; ++it) {
        Eigen::MatrixXd aq = shifted * q;
        // Rayleigh-Ritz on the current subspace
        Eigen::MatrixXd small = q.transpose() * aq;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(small);
        if (rr.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz projection failed");
        // descending order
        Eigen::VectorXd vals = rr.eigenvalues().reverse();
        Eigen::MatrixXd rot = rr.eigenvectors().rowwise().reverse();
        vecs = q * rot;
        ritz = vals;

        // convergence on the pairs we will return
        converged = true;
        for (Eigen::Index j = 0; j < num_pairs; ++j) {
            double res = (shifted * vecs.col(j) - ritz(j) * vecs.col(j)).norm();
            if (res > 0.5 * opt.decompose.residual_tol * std::max(fnorm, 1.0)) {
                converged = false;
                break;
            }
        }
        if (!converged)
            q = Eigen::HouseholderQR<Eigen::MatrixXd>(aq).householderQ() * Eigen::MatrixXd::Identity(n, block);
    }
    if (!converged)
        throw NumericalError("partial eigendecomposition did not converge within iteration budget");

    Eigen::VectorXcd values(num_pairs);
    Eigen::MatrixXcd vectors(n, num_pairs);
    for (Eigen::Index j = 0; j < num_pairs; ++j) {
        values(j) = std::complex<double>(ritz(j) - shift, 0.0);
        vectors.col(j) = vecs.col(j).cast<std::complex<double>>();
    }
    return detail::assemble_spectrum(m.entries, values, vectors, m.mode, true, num_pairs,
                                     opt.decompose);
}

}  // namespace lec
