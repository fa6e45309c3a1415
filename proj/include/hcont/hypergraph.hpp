#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hcont/types.hpp"

namespace hcont {

/// Largest supported uniformity. Subsets of an edge are packed into one
/// 64-bit key, 64/r bits per vertex.
inline constexpr int kMaxUniformity = 8;

enum class EdgeError { VertexOutOfRange, RepeatedVertex, WrongCardinality, DuplicateEdge };

const char* to_string(EdgeError e);

struct InvalidEdge : ArgumentError {
    InvalidEdge(EdgeError kind, std::size_t edge_index, const std::string& what)
        : ArgumentError(what), kind(kind), edge_index(edge_index) {}
    EdgeError kind;
    std::size_t edge_index;
};

/// Packed sorted subset of local vertex indices. Slot i (bits [i*w, (i+1)*w))
/// holds the i-th smallest index plus one; empty slots are zero.
using SubsetKey = std::uint64_t;

/// Sorted table of every subset of every edge, with its degree d(sigma).
/// Positions are ordered by (size, key), so each size occupies a contiguous range.
class SubsetIndex {
public:
    static constexpr std::uint32_t npos = UINT32_MAX;

    int slot_bits() const { return bits_; }
    std::size_t size() const { return keys_.size(); }
    std::size_t level_begin(int j) const { return offsets_[j]; }
    std::size_t level_end(int j) const { return offsets_[j + 1]; }

    SubsetKey key(std::uint32_t pos) const { return keys_[pos]; }
    int subset_size(std::uint32_t pos) const { return sizes_[pos]; }
    std::uint32_t degree(std::uint32_t pos) const { return degrees_[pos]; }

    std::uint32_t find(SubsetKey key, int size) const;

    SubsetKey pack(std::span<const std::uint32_t> sorted_locals) const;
    std::vector<std::uint32_t> unpack(SubsetKey key) const;

private:
    friend class Hypergraph;
    int bits_ = 0;
    std::vector<SubsetKey> keys_;
    std::vector<std::uint8_t> sizes_;
    std::vector<std::uint32_t> degrees_;
    std::vector<std::size_t> offsets_;  // size r+2
};

/// Immutable r-uniform hypergraph on an ordered vertex set. Vertex order is
/// label order. Internally vertices carry dense local indices 0..n-1.
class Hypergraph {
public:
    Hypergraph();

    /// Hypergraph on [n] = {1..n}.
    static Hypergraph build(std::size_t n, int r, const std::vector<std::vector<Vertex>>& edges);

    /// Hypergraph on an explicit label set (used for induced subgraphs).
    static Hypergraph on_vertices(VertexSet vertices, int r, const std::vector<std::vector<Vertex>>& edges);

    /// G[U], keeping original labels and order.
    Hypergraph induced(std::span<const Vertex> U) const;

    std::size_t n() const { return vertices_.size(); }
    int r() const { return r_; }
    std::size_t num_edges() const { return num_edges_; }
    bool empty() const { return num_edges_ == 0; }

    const VertexSet& vertices() const { return vertices_; }
    Vertex label(std::uint32_t local) const { return vertices_[local]; }
    std::optional<std::uint32_t> local(Vertex label) const;
    bool has_vertex(Vertex label) const { return local(label).has_value(); }

    /// Local indices of edge `e`, ascending. Edges are sorted lexicographically.
    std::span<const std::uint32_t> edge(std::size_t e) const {
        return {edge_data_.data() + e * static_cast<std::size_t>(r_), static_cast<std::size_t>(r_)};
    }
    VertexSet edge_labels(std::size_t e) const;
    std::vector<VertexSet> edge_list() const;

    /// Σ_v d(v) = r·e(G) = n·d, exact.
    std::uint64_t degree_sum() const { return static_cast<std::uint64_t>(r_) * num_edges_; }
    /// Average degree d.
    double average_degree() const;
    std::uint32_t vertex_degree(std::uint32_t local) const { return vertex_degree_[local]; }

    /// d(σ) for a set of labels; 0 when σ lies in no edge. Requires 1 ≤ |σ| ≤ r.
    std::uint32_t degree(std::span<const Vertex> sigma) const;
    /// d^{(j)}(σ) = max d(σ') over j-sets σ' ⊇ σ. Requires 1 ≤ |σ| ≤ j ≤ r.
    std::uint32_t max_superset_degree(std::span<const Vertex> sigma, int j) const;
    /// Largest d(σ) over |σ| = j.
    std::uint32_t max_degree_of_size(int j) const { return max_degree_by_size_[j]; }

    const SubsetIndex& index() const { return index_; }

    /// d^{(j)} for the indexed subset at `pos`; 0 when j exceeds r.
    std::uint32_t superset_degree_at(std::uint32_t pos, int j) const;

    /// Edge ids whose position-`slot` vertex (0-based) is local vertex v.
    std::span<const std::uint32_t> edges_at(int slot, std::uint32_t v) const;
    /// Index position of the subset of edge e selected by bit mask over its slots.
    std::uint32_t subset_pos(std::size_t e, unsigned mask) const;

    SubsetKey pack_labels(std::span<const Vertex> sigma) const;
    VertexSet unpack_labels(SubsetKey key) const;

private:
    struct RunTables;
    struct SupersetTable;

    const RunTables& run_tables() const;
    const SupersetTable& superset_table() const;

    void finalize();

    int r_ = 1;
    VertexSet vertices_;
    std::vector<std::uint32_t> label_to_local_;
    std::size_t num_edges_ = 0;
    std::vector<std::uint32_t> edge_data_;
    std::vector<std::uint32_t> vertex_degree_;
    std::vector<std::uint32_t> max_degree_by_size_;
    SubsetIndex index_;

    struct LazyTables;
    std::shared_ptr<LazyTables> lazy_;
};

// ---------------------------------------------------------------------------
// Measures and co-degree quantities.

/// μ(S) = Σ_{u∈S} d(u) / (n d). Throws DegenerateInstance when e(G) = 0.
double mu(const Hypergraph& G, std::span<const Vertex> S);
/// Σ_{u∈S} d(u), exact.
std::uint64_t degree_mass(const Hypergraph& G, std::span<const Vertex> S);

struct CodegreeBreakdown {
    double tau = 0;
    std::vector<double> delta_j;  // indexed by j; entries 0 and 1 unused
    double delta = 0;
};

/// δ_j and the co-degree function δ(G, τ).
CodegreeBreakdown codegree_function(const Hypergraph& G, double tau);

/// Minimal τ in [tau_lo, 1] with δ(G,τ) ≤ ζ, to relative tolerance 1e-9.
/// Empty when even τ = 1 fails.
std::optional<double> find_tau(const Hypergraph& G, double zeta, double tau_lo = 1e-12);

/// Smallest δ with d(σ) ≤ δ·d·τ^{|σ|-1} for all |σ| ≥ 2.
double weak_delta(const Hypergraph& G, double tau);

struct SparsityRecord {
    bool is_independent = false;
    std::size_t edges_within = 0;
    std::uint32_t degeneracy = 0;
};

/// Edge count and degeneracy of G[I]; degeneracy by repeated removal of a
/// minimum-degree vertex (ties to the smallest label).
SparsityRecord independence_and_sparsity(const Hypergraph& G, std::span<const Vertex> I);

/// Random hypergraph on [n] with exactly `edges` distinct uniformly chosen r-sets.
Hypergraph random_hypergraph(std::size_t n, int r, std::size_t edges, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Text format: "n r" header, then one edge per line; '#' starts a comment line.

Hypergraph read_hypergraph(std::istream& in);
Hypergraph read_hypergraph_file(const std::string& path);
void write_hypergraph(std::ostream& out, const Hypergraph& G);

}  // namespace hcont
