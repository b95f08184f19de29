#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lec/errors.hpp"
#include "lec/spectrum.hpp"

namespace lec {

enum class SelectionMode { none, automatic, user };

/**
 * Eigengap sequence of an ordered spectrum. Index i is 1-based throughout:
 * gaps(i-1) = Re(lambda_i) - Re(lambda_{i+1}), nonnegative by the ordering.
 * A gap index is admissible when Re(lambda_i) > 0; the selection rule only
 * searches admissible gaps.
 */
struct EigengapAnalysis {
    Eigen::VectorXd gaps;
    std::vector<bool> admissible;
    std::vector<std::pair<int, double>> prominent;  ///< (1-based index, gap), descending
    std::optional<int> selected_k;
    SelectionMode selection_mode = SelectionMode::none;
    Eigen::Index search_bound = 0;  ///< gaps were computed from this many leading eigenvalues
};

inline EigengapAnalysis eigengaps(const Spectrum& s) {
    const Eigen::Index m = s.columns();
    if (m < 2) throw InputError("eigengap analysis needs at least two eigenvalues");

    EigengapAnalysis e;
    e.search_bound = s.search_bound;
    e.gaps.resize(m - 1);
    e.admissible.resize(static_cast<std::size_t>(m - 1));
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
        double g = s.eigenvalues(i).real() - s.eigenvalues(i + 1).real();
        e.gaps(i) = g < 0.0 ? 0.0 : g;  // ordering makes negatives pure roundoff
        e.admissible[static_cast<std::size_t>(i)] = s.eigenvalues(i).real() > 0.0;
    }
    e.prominent.reserve(static_cast<std::size_t>(m - 1));
    for (Eigen::Index i = 0; i + 1 < m; ++i)
        e.prominent.emplace_back(static_cast<int>(i) + 1, e.gaps(i));
    std::stable_sort(e.prominent.begin(), e.prominent.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return e;
}

/**
 * The selection rule: smallest admissible 1-based index attaining the
 * maximum admissible gap. Gap values within a relative 1e-12 of the maximum
 * count as ties. Throws DegenerateSpectrum when no index is admissible
 * (every eigenvalue real part <= 0).
 */
inline int select_k(const EigengapAnalysis& e) {
    double gmax = -1.0;
    for (Eigen::Index i = 0; i < e.gaps.size(); ++i)
        if (e.admissible[static_cast<std::size_t>(i)]) gmax = std::max(gmax, e.gaps(i));
    if (gmax < 0.0)
        throw DegenerateSpectrum("no admissible eigengap: every eigenvalue real part is <= 0");
    for (Eigen::Index i = 0; i < e.gaps.size(); ++i)
        if (e.admissible[static_cast<std::size_t>(i)] && gmax - e.gaps(i) <= 1e-12 * gmax)
            return static_cast<int>(i) + 1;
    return static_cast<int>(e.gaps.size());  // unreachable
}

}  // namespace lec
