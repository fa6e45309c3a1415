#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "hcont/hypergraph.hpp"
#include "hcont/iterate.hpp"
#include "hcont/report.hpp"

namespace hcont {

/// The 4-graph on [n] whose edges are the 4-sets {w,x,y,z} with w+x = y+z,
/// built by grouping pairs by their sum.
Hypergraph build_sidon_graph(int n);

/// All pairwise sums a+b, a ≤ b, are distinct (so {1,2,3} fails).
bool is_sidon(std::span<const Vertex> S);
/// Sidon subsets of [n] (including ∅) by backtracking; n ≤ 30.
std::uint64_t count_sidon_brute(int n);
/// The same sets, listed in lexicographic order; n ≤ 24.
std::vector<VertexSet> enumerate_sidon(int n);

struct DifferenceCounts {
    std::size_t u = 0;
    std::vector<std::uint64_t> t;  // t[i] for i = 1..n-1; t[0] unused
    std::uint64_t pairs = 0;       // Σ t_i
    double formula = 0;            // ½ Σ C(t_i, 2)
    std::uint64_t three_aps = 0;   // Σ_i #{x : x, x+i, x+2i ∈ U}
    std::uint64_t edges = 0;       // e(G[U]) by enumeration
};
/// Difference counts of U ⊆ [n]; edges = ½(Σ C(t_i,2) - three_aps) exactly.
DifferenceCounts difference_counts(int n, std::span<const Vertex> U);

struct SidonConstants {
    double beta = 3e14;
    int k = 288;  // 12 r! for r = 4
};

struct SidonTau {
    double quadratic = 0;   // 24 k u² / m
    double cube_root = 0;   // (4 k u / m)^{1/3}
    double tau = 0;         // the larger
};
/// τ(U) from u = |U| and m = e(G[U]) > 0.
SidonTau sidon_tau(std::size_t u, std::size_t m, int k = 288);
/// β⁴ n / 20.
double sidon_default_e0(int n, double beta = 3e14);

struct SidonPipeline {
    int n = 0;
    std::size_t edges = 0;
    std::uint64_t exact = 0;  // Sidon subsets of [n]
    double default_e0 = 0;
    bool default_vacuous = false;  // β⁴n/20 ≥ e(G)
    std::size_t e0 = 0;          // value used
    ContainerCollection collection;
    std::size_t cap = 0;  // largest Sidon set in [n]
    double log2_exact = 0;
    double log2_bound = 0;  // log2 |C| + log2 Σ_{j ≤ cap} C(max |C|, j)
    std::size_t over_e0 = 0;  // containers with e(G[C]) > e0
    Report report;
};

/// Runs the τ(U) chain for every Sidon set of [n] and assembles the count
/// bound. Without `e0`, β⁴n/20 is used (clipped to e(G)).
SidonPipeline sidon_container_pipeline(int n, std::optional<std::size_t> e0 = std::nullopt,
                                       const SidonConstants& constants = {}, int jobs = 0);
/// One row per pipeline: n, e(G), exact count, bound, containers, max |C|.
void write_sidon_table(std::ostream& out, const std::vector<SidonPipeline>& rows);

}  // namespace hcont
