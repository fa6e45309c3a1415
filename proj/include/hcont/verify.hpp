#pragma once

#include <cstdint>
#include <vector>

#include "hcont/container.hpp"
#include "hcont/hypergraph.hpp"
#include "hcont/report.hpp"

namespace hcont {

/// Every independent set of G, ∅ included, in lexicographic order; n ≤ 20.
std::vector<VertexSet> enumerate_independent_sets(const Hypergraph& G);

struct HarnessOptions {
    double tau = 0.5;
    double zeta = 0;  // strong kind; 0 selects 1/(12 r!)
    ThresholdKind kind = ThresholdKind::Weak;
    std::uint64_t seed = 1;
    int non_independent = 50;  // sampled sparse sets that contain an edge
    int over_specified = 10;   // S per I with T ⊆ S ⊆ I
    int random_T = 20;         // arbitrary sets T for the online check
    int lemma_subsets = 50;    // random U per degree lemma
    bool lemmas = true;
    int jobs = 0;  // 0 = OpenMP default
};

struct HarnessResult {
    Report report;
    std::size_t independent_sets = 0;
    std::size_t sampled_sets = 0;  // non-independent sets meeting the sparsity clause
    std::size_t online_checks = 0;
    std::size_t over_spec_checks = 0;
    bool hypothesis = false;  // (†) or δ(G,τ) ≤ ζ
};

/// Runs prune and build on every independent set and on sampled sparse
/// non-independent sets. Checks coverage, the theorem bounds when their
/// hypotheses hold, the online property at every prefix, over-specification
/// and the trace invariants. Subjects are "I={..}"; record order does not
/// depend on `jobs`.
HarnessResult full_harness(const Hypergraph& G, const HarnessOptions& opts);
/// Single-threaded reference; produces the same report.
HarnessResult full_harness_serial(const Hypergraph& G, const HarnessOptions& opts);

struct CorpusInstance {
    std::uint64_t seed = 0;
    Hypergraph G;
};

/// Seeded random r-graphs with r cycling through {2,3,4} and n in [6, max_n].
std::vector<CorpusInstance> make_corpus(std::size_t count, std::uint64_t seed, std::size_t max_n = 14);

}  // namespace hcont
