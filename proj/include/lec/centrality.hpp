#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lec/eigengap.hpp"
#include "lec/errors.hpp"
#include "lec/matrix.hpp"
#include "lec/spectrum.hpp"

namespace lec {

/**
 * Real n-by-k matrix derived from the leading eigenvectors:
 *   - real nonzero eigenvalue: its unit-norm real eigenvector,
 *   - conjugate pair: normalized Re(x) and Im(x) of the pair_first vector,
 *   - zero eigenvalue: the zero column.
 * When the requested k lands on a pair_first column, k is extended by one so
 * the pair enters together.
 */
struct VMatrix {
    Eigen::MatrixXd columns;
    std::vector<Eigen::Index> zero_columns;
    bool pair_extended = false;

    Eigen::Index k() const { return columns.cols(); }
    Eigen::Index nonzero_column_count() const {
        return columns.cols() - static_cast<Eigen::Index>(zero_columns.size());
    }
};

inline VMatrix build_v(const Spectrum& s, int k) {
    if (k < 1 || k > s.columns()) throw InputError("k out of range for this spectrum");
    Eigen::Index k_eff = k;
    VMatrix v;
    if (s.pair_index[static_cast<std::size_t>(k - 1)] == PairClass::pair_first) {
        k_eff = k + 1;  // keep Re/Im replacement vectors together
        v.pair_extended = true;
    }
    v.columns.resize(s.rows, k_eff);

    for (Eigen::Index i = 0; i < k_eff; ++i) {
        switch (s.pair_index[static_cast<std::size_t>(i)]) {
            case PairClass::zero:
                v.columns.col(i).setZero();
                v.zero_columns.push_back(i);
                break;
            case PairClass::real_ev: {
                Eigen::VectorXd col = s.eigenvectors.col(i).real();
                double norm = col.norm();
                if (norm < 1e-12) throw NumericalError("real eigenvector column has vanishing norm");
                v.columns.col(i) = col / norm;
                break;
            }
            case PairClass::pair_first: {
                Eigen::VectorXd re = s.eigenvectors.col(i).real();
                Eigen::VectorXd im = s.eigenvectors.col(i).imag();
                double re_norm = re.norm();
                double im_norm = im.norm();
                if (re_norm < 1e-12 || im_norm < 1e-12)
                    throw NumericalError("complex pair eigenvector has degenerate real or imaginary part");
                v.columns.col(i) = re / re_norm;
                v.columns.col(i + 1) = im / im_norm;
                ++i;  // consumed the pair_second slot
                break;
            }
            case PairClass::pair_second:
                throw NumericalError("conjugate pair_second column without its pair_first");
        }
    }
    return v;
}

enum class CentralityMethod { local_eigenvector, eigenvector, community_eigenvector, pagerank };

inline const char* to_string(CentralityMethod m) {
    switch (m) {
        case CentralityMethod::local_eigenvector: return "local_eigenvector";
        case CentralityMethod::eigenvector: return "eigenvector";
        case CentralityMethod::community_eigenvector: return "community_eigenvector";
        case CentralityMethod::pagerank: return "pagerank";
    }
    return "?";
}

struct Normalization {
    enum class Kind { raw, unit_2_norm, unit_sum, hadamard_power };
    Kind kind = Kind::raw;
    double power = 1.0;  // meaningful for hadamard_power only
};

inline std::string to_string(const Normalization& n) {
    switch (n.kind) {
        case Normalization::Kind::raw: return "raw";
        case Normalization::Kind::unit_2_norm: return "unit_2_norm";
        case Normalization::Kind::unit_sum: return "unit_sum";
        case Normalization::Kind::hadamard_power:
            return "hadamard_power(" + std::to_string(n.power) + ")";
    }
    return "?";
}

/// Per-node nonnegative scores plus the method metadata needed to
/// re-derive them.
struct CentralityVector {
    Eigen::VectorXd values;
    std::vector<std::string> node_ids;  ///< empty for matrix-level results
    CentralityMethod method = CentralityMethod::local_eigenvector;
    MatrixMode matrix_mode = MatrixMode::adjacency;
    std::optional<int> k_used;
    Normalization normalization{};
    std::vector<std::string> warnings;

    CentralityVector& with_ids(std::vector<std::string> ids) {
        node_ids = std::move(ids);
        return *this;
    }
};

struct LocalCentralityOptions {
    std::optional<int> k;                ///< empty = automatic eigengap selection
    DecomposeOptions decompose{};
    Eigen::Index dense_limit = 2000;     ///< symmetric inputs above this use the partial path
    Eigen::Index partial_pairs = 0;      ///< 0 = derive from k (or a default search width)
    bool force_dense = false;
    PartialOptions partial{};
};

/// Pipeline state kept alongside the centrality so reports can echo the
/// spectrum, gaps and selection without recomputing.
struct LocalAnalysis {
    Spectrum spectrum;
    EigengapAnalysis gaps;
    VMatrix v;
    CentralityVector centrality;
    int k_used = 0;
    SelectionMode selection_mode = SelectionMode::automatic;
    Eigen::Index eigenspace_deficiency = 0;
    std::vector<std::string> warnings;
};

namespace detail {

/// Numerical rank deficiency of the non-zero-class eigenvector columns that
/// feed V; nonzero only for defective non-symmetric inputs.
inline Eigen::Index eigenspace_deficiency(const Spectrum& s, Eigen::Index k_eff) {
    if (s.symmetric_input) return 0;
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < k_eff; ++i)
        if (s.pair_index[static_cast<std::size_t>(i)] != PairClass::zero) cols.push_back(i);
    if (cols.empty()) return 0;
    Eigen::MatrixXcd sub(s.rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = s.eigenvectors.col(cols[j]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(sub);
    qr.setThreshold(1e-8);
    return static_cast<Eigen::Index>(cols.size()) - qr.rank();
}

inline LocalAnalysis analyze_spectrum(Spectrum spectrum, const LocalCentralityOptions& opt) {
    LocalAnalysis a;
    a.spectrum = std::move(spectrum);
    if (a.spectrum.columns() >= 2)
        a.gaps = eigengaps(a.spectrum);
    else if (!opt.k)
        throw DegenerateSpectrum("spectrum too small for eigengap selection; no centrality analysis possible",
                                 Eigen::VectorXd::Zero(a.spectrum.rows));
    if (a.spectrum.search_bound < a.spectrum.rows)
        a.warnings.push_back("partial_spectrum: gap search bound " + std::to_string(a.spectrum.search_bound));

    if (opt.k) {
        a.k_used = *opt.k;
        a.selection_mode = SelectionMode::user;
        if (a.k_used < 1 || a.k_used > a.spectrum.columns())
            throw InputError("user k out of range for this spectrum");
        if (!(a.spectrum.eigenvalues(a.k_used - 1).real() > 0.0))
            a.warnings.push_back("user_k_nonpositive_re: Re(lambda_k) <= 0 generalizes beyond the selection rule");
    } else {
        try {
            a.k_used = select_k(a.gaps);
        } catch (const DegenerateSpectrum& d) {
            throw DegenerateSpectrum(std::string(d.what()) + "; no centrality analysis possible",
                                     Eigen::VectorXd::Zero(a.spectrum.rows));
        }
        a.selection_mode = SelectionMode::automatic;
    }
    a.gaps.selected_k = a.k_used;
    a.gaps.selection_mode = a.selection_mode;

    a.v = build_v(a.spectrum, a.k_used);
    int k_recorded = static_cast<int>(a.v.k());
    if (a.v.pair_extended) a.warnings.push_back("pair_boundary_extension: k extended to " + std::to_string(k_recorded));

    a.eigenspace_deficiency = eigenspace_deficiency(a.spectrum, a.v.k());
    if (a.eigenspace_deficiency > 0)
        a.warnings.push_back("eigenspace_deficiency: " + std::to_string(a.eigenspace_deficiency) +
                             " dependent eigenvector column(s); defective eigenvalues used as returned");

    a.centrality.values = a.v.columns.rowwise().norm();
    a.centrality.method = CentralityMethod::local_eigenvector;
    a.centrality.matrix_mode = a.spectrum.mode;
    a.centrality.k_used = k_recorded;
    a.centrality.normalization = {Normalization::Kind::raw, 1.0};
    a.centrality.warnings = a.warnings;
    return a;
}

}  // namespace detail

/**
 * Local eigenvector centrality: the row-wise Euclidean norm of the V matrix
 * built from the first k eigenvector-derived columns, with k chosen by the
 * eigengap rule unless fixed by the caller.
 *
 * Large symmetric inputs (n > dense_limit) use the partial eigensolver and
 * search gaps among the computed leading pairs only; the result then carries
 * a partial_spectrum warning with the search bound.
 */
inline LocalAnalysis analyze_local(const SquareMatrix& m, const LocalCentralityOptions& opt = {}) {
    const Eigen::Index n = m.n();
    const bool want_partial = !opt.force_dense && n > opt.dense_limit &&
                              m.entries == m.entries.transpose();
    if (!want_partial) return detail::analyze_spectrum(decompose(m, opt.decompose), opt);

    Eigen::Index pairs = opt.partial_pairs;
    if (pairs <= 0) pairs = opt.k ? *opt.k + 10 : std::min<Eigen::Index>(n, 128);
    pairs = std::min(std::max<Eigen::Index>(pairs, opt.k ? *opt.k + 10 : 2), n);
    PartialOptions popt = opt.partial;
    popt.decompose = opt.decompose;
    return detail::analyze_spectrum(decompose_partial(m, pairs, popt), opt);
}

inline CentralityVector local_centrality(const SquareMatrix& m, const LocalCentralityOptions& opt = {}) {
    return analyze_local(m, opt).centrality;
}

/**
 * Bonacich eigenvector centrality: absolute value of the unit-norm principal
 * eigenvector of the adjacency matrix. A graph with no edges has no
 * principal direction; that degenerate case returns zeros with a warning.
 */
inline CentralityVector eigenvector_centrality(const SquareMatrix& m, const DecomposeOptions& opt = {}) {
    if (m.mode != MatrixMode::adjacency)
        throw ModeError(std::string("eigenvector centrality requires an adjacency matrix, got ") + to_string(m.mode));
    Spectrum s = decompose(m, opt);
    CentralityVector c;
    c.method = CentralityMethod::eigenvector;
    c.matrix_mode = m.mode;
    c.normalization = {Normalization::Kind::unit_2_norm, 1.0};
    if (s.columns() == 0) {
        c.values.resize(0);
        return c;
    }
    if (s.pair_index.front() == PairClass::zero) {
        c.values = Eigen::VectorXd::Zero(s.rows);
        c.normalization = {Normalization::Kind::raw, 1.0};
        c.warnings.push_back("zero_spectrum: no edges, eigenvector centrality undefined; returning zeros");
        return c;
    }
    Eigen::VectorXd principal = s.eigenvectors.col(0).real();
    double norm = principal.norm();
    if (norm < 1e-12) throw NumericalError("principal eigenvector has vanishing real part");
    c.values = (principal / norm).cwiseAbs();
    return c;
}

}  // namespace lec
