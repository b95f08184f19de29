#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lec/centrality.hpp"
#include "lec/errors.hpp"
#include "lec/graph.hpp"
#include "lec/matrix.hpp"

namespace lec {

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-12;  ///< L1 change per iteration
    int max_iter = 1000;
};

/**
 * Stationary vector of the damped row-stochastic walk on a weighted
 * adjacency matrix: the walker leaves node i along edge i->j with
 * probability a_ij over i's out-weight, dangling mass spreads uniformly,
 * and teleportation is uniform with probability 1 - damping. damping = 1
 * disables teleportation; on periodic graphs that iteration cannot settle
 * and raises NumericalError.
 */
inline CentralityVector pagerank(const SquareMatrix& m, const PageRankOptions& opt = {}) {
    if (m.mode != MatrixMode::adjacency)
        throw ModeError(std::string("pagerank requires an adjacency matrix, got ") + to_string(m.mode));
    if (!(opt.damping >= 0.0 && opt.damping <= 1.0)) throw InputError("damping must lie in [0, 1]");
    const Eigen::Index n = m.n();
    if (n == 0) throw InputError("pagerank needs a non-empty matrix");

    Eigen::VectorXd out_weight = m.entries.rowwise().sum();
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    Eigen::VectorXd next(n);
    const double teleport = (1.0 - opt.damping) / static_cast<double>(n);

    bool converged = false;
    for (int it = 0; it < opt.max_iter && !converged; ++it) {
        double dangling = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (out_weight(i) <= 0.0) dangling += x(i);
        next.setConstant(teleport + opt.damping * dangling / static_cast<double>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            if (out_weight(i) <= 0.0 || x(i) == 0.0) continue;
            double share = opt.damping * x(i) / out_weight(i);
            for (Eigen::Index j = 0; j < n; ++j)
                if (m.entries(i, j) != 0.0) next(j) += share * m.entries(i, j);
        }
        converged = (next - x).lpNorm<1>() <= opt.tol;
        x.swap(next);
    }
    if (!converged) {
        std::string msg = "pagerank did not converge within " + std::to_string(opt.max_iter) + " iterations";
        if (opt.damping >= 1.0) msg += "; the walk is likely periodic, retry with damping < 1";
        throw NumericalError(msg);
    }
    x /= x.sum();  // remove roundoff drift

    CentralityVector c;
    c.values = std::move(x);
    c.method = CentralityMethod::pagerank;
    c.matrix_mode = MatrixMode::adjacency;
    c.normalization = {Normalization::Kind::unit_sum, 1.0};
    return c;
}

/**
 * Eigenvector centrality computed per community on its induced subgraph and
 * reassembled over the full node set. Each community block carries unit
 * 2-norm on its own; communities without internal edges (including
 * singletons) contribute zeros, as do unlabeled nodes.
 */
inline CentralityVector community_eigenvector_centrality(const Graph& g) {
    if (!g.has_communities()) throw InputError("community eigenvector centrality needs community labels");
    CentralityVector c;
    c.values = Eigen::VectorXd::Zero(g.node_count());
    c.node_ids = g.node_ids();
    c.method = CentralityMethod::community_eigenvector;
    c.matrix_mode = MatrixMode::adjacency;
    c.normalization = {Normalization::Kind::raw, 1.0};

    for (const auto& label : g.community_labels()) {
        Graph sub = induced_subgraph(g, label);
        if (sub.total_edge_weight() <= 0.0) continue;  // no internal edges: zeros
        CentralityVector block = eigenvector_centrality(build_adjacency(sub));
        for (int i = 0; i < sub.node_count(); ++i)
            c.values(g.index_of(sub.node_id(i))) = block.values(i);
    }
    return c;
}

enum class MadMode { center_scale, scale_only };

inline const char* to_string(MadMode m) {
    return m == MadMode::center_scale ? "mad_center_scale" : "mad_scale_only";
}

struct MadResult {
    Eigen::VectorXd values;
    bool degenerate = false;  ///< no spread at all; values are zeros
};

namespace detail {

inline double median(Eigen::VectorXd v) {
    const Eigen::Index n = v.size();
    std::sort(v.data(), v.data() + n);
    return n % 2 == 1 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

/// Quantile with linear interpolation between order statistics.
inline double quantile(const Eigen::VectorXd& sorted, double q) {
    const Eigen::Index n = sorted.size();
    if (n == 1) return sorted(0);
    double pos = q * static_cast<double>(n - 1);
    Eigen::Index lo = static_cast<Eigen::Index>(std::floor(pos));
    Eigen::Index hi = std::min(lo + 1, n - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted(lo) + frac * (sorted(hi) - sorted(lo));
}

}  // namespace detail

/**
 * Robust normalization by the median absolute deviation,
 * MAD = median(|x - median(x)|). center_scale returns (x - median)/MAD,
 * scale_only returns x/MAD. A zero MAD falls back to the mean absolute
 * deviation about the median; if that is also zero the result is all zeros
 * with the degenerate flag set.
 */
inline MadResult mad_normalize(const Eigen::VectorXd& x, MadMode mode) {
    if (x.size() < 2) throw InputError("MAD normalization needs at least two values");
    const double med = detail::median(x);
    Eigen::VectorXd dev = (x.array() - med).abs();
    double scale = detail::median(dev);
    if (scale == 0.0) scale = dev.mean();
    if (scale == 0.0) return {Eigen::VectorXd::Zero(x.size()), true};
    if (mode == MadMode::center_scale) return {(x.array() - med).matrix() / scale, false};
    return {x / scale, false};
}

namespace detail {

inline void check_same_nodes(const CentralityVector& x, const CentralityVector& y) {
    if (x.values.size() != y.values.size())
        throw InputError("centrality vectors have different lengths: " + std::to_string(x.values.size()) +
                         " vs " + std::to_string(y.values.size()));
    if (!x.node_ids.empty() && !y.node_ids.empty() && x.node_ids != y.node_ids) {
        std::string offenders;
        int listed = 0;
        for (std::size_t i = 0; i < x.node_ids.size() && listed < 5; ++i)
            if (x.node_ids[i] != y.node_ids[i]) {
                offenders += (listed ? ", " : "") + x.node_ids[i] + "/" + y.node_ids[i];
                ++listed;
            }
        throw InputError("centrality vectors cover different node orderings: " + offenders);
    }
}

}  // namespace detail

/// Euclidean distance between two independently MAD-normalized vectors.
inline double distance(const CentralityVector& x, const CentralityVector& y, MadMode mode = MadMode::center_scale) {
    detail::check_same_nodes(x, y);
    return (mad_normalize(x.values, mode).values - mad_normalize(y.values, mode).values).norm();
}

/**
 * Nonlinear rescaling N_p(x) = x^p / sum(x^p), elementwise. Requires
 * nonnegative input with at least one positive entry and p > 0. Entries are
 * pre-divided by the maximum so the map is exactly invariant under
 * power-of-two rescalings of x and robust for extreme p.
 */
inline Eigen::VectorXd rescale(const Eigen::VectorXd& x, double p) {
    if (!(p > 0.0)) throw InputError("rescaling power must be > 0");
    if ((x.array() < 0.0).any()) throw InputError("rescaling requires nonnegative values");
    double xmax = x.size() ? x.maxCoeff() : 0.0;
    if (xmax <= 0.0) throw InputError("rescaling requires at least one positive value");
    Eigen::VectorXd y(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = std::pow(x(i) / xmax, p);
    return y / y.sum();
}

inline CentralityVector rescale(const CentralityVector& x, double p) {
    CentralityVector out = x;
    out.values = rescale(x.values, p);
    out.normalization = {Normalization::Kind::hadamard_power, p};
    return out;
}

inline std::vector<double> default_power_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(0.05 * i);
    return grid;
}

struct PowerFit {
    double p = 1.0;
    double distance = 0.0;
};

/// Grid search for the power minimizing distance(N_p(x), ref); exact ties
/// resolve to the smallest p.
inline PowerFit fit_power(const CentralityVector& x, const CentralityVector& ref,
                          std::span<const double> grid, MadMode mode = MadMode::center_scale) {
    if (grid.empty()) throw InputError("power grid is empty");
    detail::check_same_nodes(x, ref);
    std::vector<double> sorted(grid.begin(), grid.end());
    std::sort(sorted.begin(), sorted.end());
    PowerFit best{0.0, std::numeric_limits<double>::infinity()};
    for (double p : sorted) {
        CentralityVector candidate = rescale(x, p);
        double d = distance(candidate, ref, mode);
        if (d < best.distance) best = {p, d};
    }
    return best;
}

inline PowerFit fit_power(const CentralityVector& x, const CentralityVector& ref, MadMode mode = MadMode::center_scale) {
    auto grid = default_power_grid();
    return fit_power(x, ref, std::span<const double>(grid), mode);
}

/// One row of a comparison: raw values plus their difference in MAD units.
struct NodeDifference {
    std::string node_id;
    double x = 0.0;
    double y = 0.0;
    double diff_mad = 0.0;
};

/**
 * Per-node comparison of two centrality vectors over the same node set.
 * Rows are sorted by x descending (ties by node id); differences are taken
 * between the MAD-normalized vectors. Quartiles of the differences feed
 * boxplot emission.
 */
struct ComparisonReport {
    std::vector<NodeDifference> per_node_diff;
    double distance = 0.0;
    MadMode normalization = MadMode::center_scale;
    std::optional<double> fitted_p;
    double fraction_within_one_mad = 0.0;
    std::array<double, 5> diff_quartiles{};  ///< min, q1, median, q3, max
};

inline ComparisonReport difference_report(const CentralityVector& x, const CentralityVector& y,
                                          MadMode mode = MadMode::center_scale) {
    detail::check_same_nodes(x, y);
    const Eigen::Index n = x.values.size();
    if (n < 2) throw InputError("difference report needs at least two nodes");

    Eigen::VectorXd xn = mad_normalize(x.values, mode).values;
    Eigen::VectorXd yn = mad_normalize(y.values, mode).values;
    Eigen::VectorXd diff = xn - yn;

    ComparisonReport rep;
    rep.normalization = mode;
    rep.distance = diff.norm();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (x.values(a) != x.values(b)) return x.values(a) > x.values(b);
        if (!x.node_ids.empty()) return x.node_ids[static_cast<std::size_t>(a)] < x.node_ids[static_cast<std::size_t>(b)];
        return a < b;
    });
    rep.per_node_diff.reserve(static_cast<std::size_t>(n));
    Eigen::Index within = 0;
    for (Eigen::Index idx : order) {
        NodeDifference d;
        d.node_id = x.node_ids.empty() ? std::to_string(idx) : x.node_ids[static_cast<std::size_t>(idx)];
        d.x = x.values(idx);
        d.y = y.values(idx);
        d.diff_mad = diff(idx);
        if (std::abs(d.diff_mad) <= 1.0) ++within;
        rep.per_node_diff.push_back(std::move(d));
    }
    rep.fraction_within_one_mad = static_cast<double>(within) / static_cast<double>(n);

    Eigen::VectorXd sorted_diff = diff;
    std::sort(sorted_diff.data(), sorted_diff.data() + n);
    rep.diff_quartiles = {sorted_diff(0), detail::quantile(sorted_diff, 0.25), detail::quantile(sorted_diff, 0.5),
                          detail::quantile(sorted_diff, 0.75), sorted_diff(n - 1)};
    return rep;
}

}  // namespace lec
