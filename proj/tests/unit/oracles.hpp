#pragma once

// Brute-force reference computations used by the unit tests. Each one is
// written from the definitions, independently of the library's indexes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hcont/hypergraph.hpp"

namespace oracle {

using hcont::Vertex;
using hcont::VertexSet;

inline std::uint32_t degree(const hcont::Hypergraph& G, const VertexSet& sigma) {
    std::uint32_t c = 0;
    for (const auto& e : G.edge_list())
        if (std::includes(e.begin(), e.end(), sigma.begin(), sigma.end())) ++c;
    return c;
}

// Every j-subset of `ground`, as sorted vectors.
inline std::vector<VertexSet> subsets_of_size(const VertexSet& ground, int j) {
    std::vector<VertexSet> out;
    const int n = static_cast<int>(ground.size());
    if (j < 0 || j > n) return out;
    std::vector<int> idx(static_cast<std::size_t>(j));
    for (int i = 0; i < j; ++i) idx[i] = i;
    while (true) {
        VertexSet s;
        for (int i : idx) s.push_back(ground[i]);
        out.push_back(s);
        int i = j - 1;
        while (i >= 0 && idx[i] == n - j + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < j; ++k) idx[k] = idx[k - 1] + 1;
    }
    return out;
}

inline std::vector<VertexSet> all_subsets(const VertexSet& ground) {
    std::vector<VertexSet> out;
    const std::size_t n = ground.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        VertexSet s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) s.push_back(ground[i]);
        out.push_back(s);
    }
    return out;
}

// d^{(j)}(σ): max d(σ') over j-sets σ' ⊇ σ drawn from the whole vertex set.
inline std::uint32_t max_superset_degree(const hcont::Hypergraph& G, const VertexSet& sigma, int j) {
    VertexSet rest;
    for (Vertex v : G.vertices())
        if (!std::binary_search(sigma.begin(), sigma.end(), v)) rest.push_back(v);
    std::uint32_t best = 0;
    for (const auto& add : subsets_of_size(rest, j - static_cast<int>(sigma.size()))) {
        VertexSet s = sigma;
        s.insert(s.end(), add.begin(), add.end());
        std::sort(s.begin(), s.end());
        best = std::max(best, degree(G, s));
    }
    return best;
}

inline bool independent(const hcont::Hypergraph& G, const VertexSet& I) {
    for (const auto& e : G.edge_list())
        if (std::includes(I.begin(), I.end(), e.begin(), e.end())) return false;
    return true;
}

inline std::size_t edges_within(const hcont::Hypergraph& G, const VertexSet& I) {
    std::size_t c = 0;
    for (const auto& e : G.edge_list())
        if (std::includes(I.begin(), I.end(), e.begin(), e.end())) ++c;
    return c;
}

// Degeneracy as max over non-empty S ⊆ I of the minimum degree of G[S].
inline std::uint32_t degeneracy(const hcont::Hypergraph& G, const VertexSet& I) {
    std::uint32_t best = 0;
    auto edges = G.edge_list();
    for (const auto& S : all_subsets(I)) {
        if (S.empty()) continue;
        std::uint32_t mn = UINT32_MAX;
        for (Vertex v : S) {
            std::uint32_t deg = 0;
            for (const auto& e : edges)
                if (std::binary_search(e.begin(), e.end(), v) && std::includes(S.begin(), S.end(), e.begin(), e.end()))
                    ++deg;
            mn = std::min(mn, deg);
        }
        best = std::max(best, mn);
    }
    return best;
}

// Co-degree function evaluated from its definition.
inline double codegree(const hcont::Hypergraph& G, double tau) {
    const int r = G.r();
    const double nd = static_cast<double>(r) * static_cast<double>(G.num_edges());
    double total = 0;
    for (int j = 2; j <= r; ++j) {
        double sum = 0;
        for (Vertex v : G.vertices()) sum += max_superset_degree(G, {v}, j);
        double dj = sum / (std::pow(tau, j - 1) * nd);
        total += std::pow(2.0, -(j - 1) * (j - 2) / 2) * dj;
    }
    return std::pow(2.0, r * (r - 1) / 2 - 1) * total;
}

}  // namespace oracle
