#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lec/errors.hpp"

namespace lec {

/// One weighted edge, endpoints as node indices. For undirected graphs the
/// pair is stored once with u <= v and expanded symmetrically on matrix
/// build.
struct Edge {
    int u = 0;
    int v = 0;
    double weight = 1.0;
};

/**
 * Node-labeled weighted graph with optional per-node community labels and
 * coordinates. Node ids are opaque unique strings; edges reference nodes by
 * index. Parallel edges may be stored; they are summed when the adjacency
 * matrix is built.
 *
 * Immutable-after-construction by convention: analyses never mutate a Graph,
 * so a fully built instance is safe to share across threads.
 */
class Graph {
public:
    explicit Graph(bool directed = false) : directed_(directed) {}

    bool directed() const { return directed_; }
    int node_count() const { return static_cast<int>(ids_.size()); }
    const std::vector<std::string>& node_ids() const { return ids_; }
    const std::string& node_id(int i) const { return ids_.at(static_cast<std::size_t>(i)); }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Index of a node id, or -1 if absent.
    int index_of(const std::string& id) const {
        auto it = index_.find(id);
        return it == index_.end() ? -1 : it->second;
    }

    /// Adds a node; duplicate ids are an InputError.
    int add_node(std::string id) {
        if (index_.count(id)) throw InputError("duplicate node id: " + id);
        int idx = node_count();
        index_.emplace(id, idx);
        ids_.push_back(std::move(id));
        if (communities_) communities_->emplace_back();
        if (coords_) coords_->push_back({0.0, 0.0});
        return idx;
    }

    /// Returns the index of an existing node, adding it first if needed.
    int ensure_node(const std::string& id) {
        int idx = index_of(id);
        return idx >= 0 ? idx : add_node(id);
    }

    void add_edge(int u, int v, double weight = 1.0) {
        if (u < 0 || u >= node_count() || v < 0 || v >= node_count())
            throw InputError("edge endpoint out of range");
        if (!(weight >= 0.0) || !std::isfinite(weight))
            throw InputError("edge weight must be finite and >= 0");
        if (!directed_ && v < u) std::swap(u, v);
        edges_.push_back({u, v, weight});
    }

    void add_edge(const std::string& u, const std::string& v, double weight = 1.0) {
        int ui = ensure_node(u);
        int vi = ensure_node(v);
        add_edge(ui, vi, weight);
    }

    // -- communities -------------------------------------------------------

    bool has_communities() const { return communities_.has_value(); }

    /// Assigns a community label; empty string means unlabeled.
    void set_community(int node, std::string label) {
        if (node < 0 || node >= node_count()) throw InputError("node index out of range");
        if (!communities_) communities_.emplace(ids_.size());
        (*communities_)[static_cast<std::size_t>(node)] = std::move(label);
    }

    const std::string& community(int node) const {
        static const std::string empty;
        if (!communities_) return empty;
        return (*communities_)[static_cast<std::size_t>(node)];
    }

    /// Sorted unique non-empty labels.
    std::vector<std::string> community_labels() const {
        std::set<std::string> labels;
        if (communities_)
            for (const auto& c : *communities_)
                if (!c.empty()) labels.insert(c);
        return {labels.begin(), labels.end()};
    }

    // -- coordinates -------------------------------------------------------

    bool has_coords() const { return coords_.has_value(); }

    void set_coord(int node, double x, double y) {
        if (node < 0 || node >= node_count()) throw InputError("node index out of range");
        if (!coords_) coords_.emplace(ids_.size(), std::array<double, 2>{0.0, 0.0});
        (*coords_)[static_cast<std::size_t>(node)] = {x, y};
    }

    std::array<double, 2> coord(int node) const {
        if (!coords_) return {0.0, 0.0};
        return (*coords_)[static_cast<std::size_t>(node)];
    }

    double total_edge_weight() const {
        double s = 0.0;
        for (const auto& e : edges_) s += e.weight;
        return s;
    }

    /// Copy with nodes relabeled into lexicographic id order and the edge
    /// list sorted. Fixes all downstream output orderings, making loaders
    /// insensitive to input row permutations.
    Graph canonical_sorted() const {
        std::vector<int> order(ids_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return ids_[static_cast<std::size_t>(a)] < ids_[static_cast<std::size_t>(b)]; });

        Graph out(directed_);
        std::vector<int> remap(ids_.size());
        for (int newIdx = 0; newIdx < node_count(); ++newIdx) {
            int oldIdx = order[static_cast<std::size_t>(newIdx)];
            remap[static_cast<std::size_t>(oldIdx)] = newIdx;
            out.add_node(ids_[static_cast<std::size_t>(oldIdx)]);
        }
        for (const auto& e : edges_) out.add_edge(remap[static_cast<std::size_t>(e.u)], remap[static_cast<std::size_t>(e.v)], e.weight);
        std::sort(out.edges_.begin(), out.edges_.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.u, a.v, a.weight) < std::tie(b.u, b.v, b.weight);
        });
        if (communities_)
            for (int i = 0; i < node_count(); ++i)
                out.set_community(remap[static_cast<std::size_t>(i)], (*communities_)[static_cast<std::size_t>(i)]);
        if (coords_)
            for (int i = 0; i < node_count(); ++i) {
                auto c = (*coords_)[static_cast<std::size_t>(i)];
                out.set_coord(remap[static_cast<std::size_t>(i)], c[0], c[1]);
            }
        return out;
    }

private:
    bool directed_;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<Edge> edges_;
    std::optional<std::vector<std::string>> communities_;
    std::optional<std::vector<std::array<double, 2>>> coords_;
};

/// Subgraph on the nodes carrying @p label, keeping only internal edges.
/// Node ids, labels and coordinates are preserved.
inline Graph induced_subgraph(const Graph& g, const std::string& label) {
    if (!g.has_communities()) throw InputError("graph has no community labels");
    std::vector<int> keep;
    for (int i = 0; i < g.node_count(); ++i)
        if (g.community(i) == label && !label.empty()) keep.push_back(i);
    if (keep.empty()) throw InputError("unknown community label: " + label);

    Graph out(g.directed());
    std::vector<int> remap(static_cast<std::size_t>(g.node_count()), -1);
    for (int i : keep) {
        remap[static_cast<std::size_t>(i)] = out.add_node(g.node_id(i));
        out.set_community(remap[static_cast<std::size_t>(i)], label);
        if (g.has_coords()) {
            auto c = g.coord(i);
            out.set_coord(remap[static_cast<std::size_t>(i)], c[0], c[1]);
        }
    }
    for (const auto& e : g.edges()) {
        int u = remap[static_cast<std::size_t>(e.u)];
        int v = remap[static_cast<std::size_t>(e.v)];
        if (u >= 0 && v >= 0) out.add_edge(u, v, e.weight);
    }
    return out;
}

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits of the generator output.
/// Bit-identical across platforms, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/**
 * Undirected unit-weight random graph with @p c planted communities of
 * @p m nodes each. Within-community edges appear with probability p_in,
 * cross-community edges with p_out. Community labels are attached.
 * Deterministic for a fixed seed.
 */
inline Graph planted_partition(int c, int m, double p_in, double p_out, std::uint64_t seed) {
    if (c < 1 || m < 1) throw InputError("community count and size must be >= 1");
    if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0))
        throw InputError("require 0 <= p_out <= p_in <= 1");

    Graph g(false);
    const int n = c * m;
    for (int t = 0; t < n; ++t) {
        char id[16];
        std::snprintf(id, sizeof(id), "n%04d", t);
        int idx = g.add_node(id);
        g.set_community(idx, "c" + std::to_string(t / m + 1));
    }
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double p = (i / m == j / m) ? p_in : p_out;
            double u = detail::uniform01(rng);
            if (u < p) g.add_edge(i, j, 1.0);
        }
    }
    return g;
}

}  // namespace lec
