#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcont/hypergraph.hpp"
#include "hcont/report.hpp"

namespace hcont {

enum class ThresholdKind { Strong, Weak };
enum class Mode { Prune, Build };
/// Lazy thresholds are memoized per run; precomputed ones are evaluated for
/// every indexed subset when the algorithm object is constructed.
enum class ThresholdEval { Lazy, Precomputed };

const char* to_string(ThresholdKind k);
const char* to_string(Mode m);
ThresholdKind parse_kind(const std::string& s);
Mode parse_mode(const std::string& s);

/// θ_s(σ) for a labelled subset, 1 ≤ |σ| ≤ s ≤ r. For the weak kind `delta`
/// defaults to weak_delta(G, τ).
double theta(const Hypergraph& G, double tau, ThresholdKind kind, int s, std::span<const Vertex> sigma,
             std::optional<double> delta = std::nullopt);

struct RunParams {
    double tau = 0;
    double zeta = 0;
    ThresholdKind kind = ThresholdKind::Weak;
    ThresholdEval eval = ThresholdEval::Lazy;
};

struct VertexDecision {
    Vertex v = 0;
    bool in_B = false;
    bool in_gamma1 = false;
    /// |F_{v,s}| for s = 1..r-1 (index s).
    std::array<std::uint32_t, kMaxUniformity> F{};
    /// Bit s set when |F_{v,s}| ≥ ζτ^{r-s-1}d(v).
    std::uint32_t large_F = 0;
    bool fired = false;
    /// v ∈ T once v was processed (prune: added; build: in the input).
    bool in_T = false;
};

struct GammaInsertion {
    Vertex at = 0;  // vertex being processed
    int s = 0;
    std::uint32_t pos = 0;  // subset index position
    std::uint32_t degree = 0;
    double theta = 0;
};

struct RunTrace {
    Mode mode = Mode::Prune;
    ThresholdKind kind = ThresholdKind::Weak;
    double tau = 0;
    double zeta = 0;
    /// Weak δ (weak kind) or δ(G,τ) (strong kind) at the run's τ; 0 when e(G) = 0.
    double delta = 0;

    VertexSet input;
    VertexSet T;
    VertexSet C;  // build mode only
    VertexSet B;
    VertexSet fired;
    VertexSet gamma1;  // vertices v with {v} ∈ Γ_1

    /// Per edge: smallest s with the length-s suffix of the edge in P_s.
    std::vector<std::uint8_t> level;
    /// d[s][pos] = d_s(σ) and gamma[s][pos] = [σ ∈ Γ_s] for 1 ≤ s ≤ r-1.
    std::vector<std::vector<std::uint32_t>> d;
    std::vector<std::vector<std::uint8_t>> gamma;
    /// |P_s| and e_s for s = 1..r.
    std::vector<std::uint64_t> P_size;
    std::vector<double> e;

    std::vector<VertexDecision> decisions;
    std::vector<GammaInsertion> insertions;

    /// Output set: T in prune mode, C in build mode.
    const VertexSet& output() const { return mode == Mode::Prune ? T : C; }
};

/// The container algorithm bound to one graph and parameter choice.
/// Runs are independent; a const object may be shared across threads.
class ContainerAlgorithm {
public:
    ContainerAlgorithm(const Hypergraph& G, RunParams params);

    const Hypergraph& graph() const { return *G_; }
    const RunParams& params() const { return params_; }
    /// Weak δ or δ(G,τ), depending on the kind.
    double delta() const { return delta_; }

    RunTrace run(Mode mode, std::span<const Vertex> input) const;
    VertexSet prune(std::span<const Vertex> I) const;
    VertexSet build(std::span<const Vertex> T) const;

    /// θ_s of the indexed subset at `pos`.
    double threshold(int s, std::uint32_t pos) const;

private:
    RunTrace run_impl(Mode mode, std::span<const Vertex> input, bool record) const;
    double compute_threshold(int s, std::uint32_t pos) const;

    const Hypergraph* G_;
    RunParams params_;
    double delta_ = 0;
    std::vector<double> table_;  // precomputed thresholds, (r) * index size
};

/// build(T) ∩ [w] = build(T ∩ [w]) ∩ [w].
bool online_equality(const ContainerAlgorithm& alg, std::span<const Vertex> T, Vertex w);

/// Γ_s members as labelled sets.
std::vector<VertexSet> gamma_sets(const Hypergraph& G, const RunTrace& trace, int s);

/// Line records: one per vertex decision, one per Γ insertion, then the result.
void write_trace(std::ostream& out, const Hypergraph& G, const RunTrace& trace);

// ---------------------------------------------------------------------------
// Invariants of a finished run.

/// Structural properties plus the degree lemmas applicable to the trace's
/// kind and mode. Random subsets U are drawn from `seed`.
Report check_invariants(const Hypergraph& G, ThresholdKind kind, const RunTrace& trace, std::uint64_t seed = 1,
                        int random_subsets = 50);

// ---------------------------------------------------------------------------
// Theorem wrappers.

/// γ = r^{-2r}2^{-r²}/25, c = γ^r, ζ = √(2rγ).
struct WeakConstants {
    double gamma = 0;
    double c = 0;
    double zeta = 0;
};
WeakConstants weak_constants(int r);

struct TheoremResult {
    VertexSet T;
    VertexSet C;
    RunTrace prune;
    RunTrace build;
    Report report;
    double tau_run = 0;  // τ handed to the algorithm
    double zeta = 0;
    bool hypothesis = false;  // (†) for weak, δ(G,τ) ≤ ζ for strong
    bool sparse = false;      // I independent or meeting a sparsity clause
    bool vacuous = false;     // container bound ≥ 1
};

/// The sparsity clause on G[I] under which the theorem bounds are asserted:
/// I independent, or small degeneracy, or few edges inside I. τ is the
/// caller's τ (before the weak rescaling); ζ is ignored for the weak kind.
bool theorem_sparse(const Hypergraph& G, ThresholdKind kind, double tau, double zeta, const SparsityRecord& rec);

/// Weak thresholds at τ* = γτ and ζ = √(2rγ); asserts T ⊆ I ⊆ C always and
/// the measure bounds whenever (†) holds and I is sparse.
TheoremResult run_theorem_weak(const Hypergraph& G, double tau, std::span<const Vertex> I,
                               ThresholdEval eval = ThresholdEval::Lazy);

/// Strong thresholds at (τ, ζ); bounds asserted when δ(G,τ) ≤ ζ and I is sparse.
TheoremResult run_theorem_strong(const Hypergraph& G, double tau, double zeta, std::span<const Vertex> I,
                                 ThresholdEval eval = ThresholdEval::Lazy);

/// 1/(12 r!).
double default_strong_zeta(int r);

}  // namespace hcont
