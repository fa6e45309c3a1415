#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hcont/container.hpp"

namespace hcont {

/// One application of the container theorem inside a chain.
struct Stage {
    std::size_t vertices = 0;  // |V(G_j)|
    std::size_t edges = 0;     // e(G_j)
    double tau = 0;            // τ handed to the algorithm
    double zeta = 0;
    bool hypothesis = false;
    VertexSet T;  // fingerprint produced at this stage
    VertexSet C;  // container produced at this stage
};

struct ChainResult {
    VertexSet T;  // union of the stage fingerprints
    VertexSet C;  // final container
    std::size_t iterations = 0;
    std::vector<Stage> stages;
    /// e(G[C_j]) for j = 0..iterations; entry 0 is e(G).
    std::vector<std::size_t> stage_edges;
    Report report;
    bool hypotheses_held = true;
    bool stalled = false;  // a stage removed no vertex before the target was met
    bool aborted = false;
    std::string diagnostic;
};

/// Constants of the iterated weak theorem.
struct CorollaryConstants {
    double c_star = 0;  // weak container constant γ^r
    double ell = 0;     // ⌈log ε / log(1 - c*)⌉, kept in floating point
    double c = 0;       // ε ℓ^{-r} c*
    double stage_tau = 0;  // τ/ℓ
};
CorollaryConstants corollary_constants(int r, double tau, double eps);

/// Weak theorem applied to G, G[C_1], ... with τ/ℓ until e(G[C_k]) ≤ εe(G).
ChainResult iterate_corollary(const Hypergraph& G, double tau, double eps, std::span<const Vertex> I);

/// τ(U) computed from G[U].
using TauSchedule = std::function<double(const Hypergraph& GU)>;

enum class HypothesisPolicy { Abort, Proceed };

/// Strong theorem applied along the chain with τ = τ(U) until e(G[C]) ≤ e0.
/// Each step checks τ < 1/2 and δ(G[U],τ) ≤ 1/12r!; on failure the chain
/// stops (Abort) or continues with the failure recorded (Proceed).
ChainResult iterate_schedule(const Hypergraph& G, const TauSchedule& tau_of, std::size_t e0, double zeta,
                             std::span<const Vertex> I, HypothesisPolicy policy = HypothesisPolicy::Abort);

/// Rebuilds every stage of `chain` from the union fingerprint alone and
/// returns the final container; equals chain.C when the chain is consistent.
VertexSet rebuild_from_union(const Hypergraph& G, const ChainResult& chain, ThresholdKind kind);

// ---------------------------------------------------------------------------

struct ContainerRecord {
    VertexSet fingerprint;
    VertexSet container;
    std::vector<std::size_t> stage_edges;
    std::size_t members = 0;  // family members mapped here
};

struct ContainerCollection {
    std::vector<ContainerRecord> records;  // sorted by fingerprint
    std::size_t family_size = 0;
    std::size_t coverage_failures = 0;  // members not inside their container
    std::size_t conflicts = 0;          // equal fingerprints with different containers
    std::size_t aborted_chains = 0;

    std::size_t size() const { return records.size(); }
    std::size_t max_container_size() const;
    std::size_t max_fingerprint_size() const;
    const ContainerRecord* find(std::span<const Vertex> fingerprint) const;
    /// Some container includes `I`.
    bool covers(std::span<const Vertex> I) const;
    /// "T={..} C={..} stages=e0,e1,..", one record per line.
    void write(std::ostream& out) const;
};

using ChainRunner = std::function<ChainResult(std::span<const Vertex> I)>;

/// Runs the chain for every member (OpenMP over members, `jobs` threads,
/// 0 = runtime default) and merges results in family order.
ContainerCollection collect_containers(const std::vector<VertexSet>& family, const ChainRunner& runner, int jobs = 0);
/// Merges per-member chain results (results[i] belongs to family[i]) by fingerprint.
ContainerCollection merge_chains(const std::vector<VertexSet>& family, std::vector<ChainResult>& results);
/// Single-threaded reference for collect_containers.
ContainerCollection collect_containers_serial(const std::vector<VertexSet>& family, const ChainRunner& runner);

}  // namespace hcont
