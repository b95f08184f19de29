#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "lec/errors.hpp"
#include "lec/graph.hpp"

namespace lec {

enum class MatrixMode { adjacency, laplacian, normalized_laplacian };

inline const char* to_string(MatrixMode m) {
    switch (m) {
        case MatrixMode::adjacency: return "adjacency";
        case MatrixMode::laplacian: return "laplacian";
        case MatrixMode::normalized_laplacian: return "normalized_laplacian";
    }
    return "?";
}

/// Dense real n-by-n matrix tagged with the graph representation it holds.
struct SquareMatrix {
    Eigen::MatrixXd entries;
    MatrixMode mode = MatrixMode::adjacency;

    Eigen::Index n() const { return entries.rows(); }
};

/// Weighted adjacency matrix: entries(i,j) = summed weight of edges i->j,
/// mirrored for undirected graphs, self-loops on the diagonal.
inline SquareMatrix build_adjacency(const Graph& g) {
    const Eigen::Index n = g.node_count();
    SquareMatrix a{Eigen::MatrixXd::Zero(n, n), MatrixMode::adjacency};
    for (const auto& e : g.edges()) {
        a.entries(e.u, e.v) += e.weight;
        if (!g.directed() && e.u != e.v) a.entries(e.v, e.u) += e.weight;
    }
    return a;
}

/// Combinatorial Laplacian D - A with D the diagonal of row sums
/// (out-degrees for directed input). Rows sum to zero.
inline SquareMatrix laplacian(const SquareMatrix& a) {
    if (a.mode != MatrixMode::adjacency)
        throw ModeError(std::string("laplacian requires an adjacency matrix, got ") + to_string(a.mode));
    Eigen::MatrixXd l = -a.entries;
    for (Eigen::Index i = 0; i < a.n(); ++i) l(i, i) += a.entries.row(i).sum();
    return {std::move(l), MatrixMode::laplacian};
}

/// Normalized Laplacian I - D^{-1/2} A D^{-1/2}. Zero-degree nodes get an
/// all-zero row and column (their D^{-1/2} entry is taken as 0, including
/// the diagonal). Exactly symmetric for symmetric input.
inline SquareMatrix normalized_laplacian(const SquareMatrix& a) {
    if (a.mode != MatrixMode::adjacency)
        throw ModeError(std::string("normalized_laplacian requires an adjacency matrix, got ") + to_string(a.mode));
    const Eigen::Index n = a.n();
    Eigen::VectorXd dinv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double d = a.entries.row(i).sum();
        dinv(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
    }
    Eigen::MatrixXd l(n, n);
    const bool symmetric = a.entries == a.entries.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = symmetric ? i : 0; j < n; ++j) {
            double s = dinv(i) * a.entries(i, j) * dinv(j);
            double value = (i == j) ? (dinv(i) > 0.0 ? 1.0 - s : 0.0) : -s;
            l(i, j) = value;
            if (symmetric) l(j, i) = value;  // mirror so the result is bit-symmetric
        }
    }
    return {std::move(l), MatrixMode::normalized_laplacian};
}

}  // namespace lec
