#include "hcont/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <set>
#include <string>

namespace hcont {

std::vector<VertexSet> enumerate_independent_sets(const Hypergraph& G) {
    const std::size_t n = G.n();
    if (n > 20) throw ScaleGuard("enumerate_independent_sets: n > 20");
    const int r = G.r();
    // closing[v]: masks of the edges whose largest local vertex is v.
    std::vector<std::vector<std::uint32_t>> closing(n);
    for (std::size_t e = 0; e < G.num_edges(); ++e) {
        std::uint32_t mask = 0;
        for (auto v : G.edge(e)) mask |= 1u << v;
        closing[G.edge(e)[r - 1]].push_back(mask);
    }
    std::vector<VertexSet> out;
    VertexSet S;
    auto rec = [&](auto&& self, std::uint32_t from, std::uint32_t mask) -> void {
        out.push_back(S);
        for (std::uint32_t v = from; v < n; ++v) {
            const std::uint32_t next = mask | 1u << v;
            bool ok = true;
            for (auto m : closing[v])
                if ((m & next) == m) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            S.push_back(G.label(v));
            self(self, v + 1, next);
            S.pop_back();
        }
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct Setup {
    RunParams params;
    double zeta = 0;
};

Setup harness_setup(const Hypergraph& G, const HarnessOptions& opts) {
    if (!(opts.tau > 0)) throw ArgumentError("harness: tau must be positive");
    Setup s;
    if (opts.kind == ThresholdKind::Weak) {
        if (opts.tau > 1) throw ArgumentError("harness: weak kind needs tau <= 1");
        const auto k = weak_constants(G.r());
        s.params = {k.gamma * opts.tau, k.zeta, ThresholdKind::Weak, ThresholdEval::Lazy};
    } else {
        s.zeta = opts.zeta > 0 ? opts.zeta : default_strong_zeta(G.r());
        s.params = {opts.tau, s.zeta, ThresholdKind::Strong, ThresholdEval::Lazy};
    }
    return s;
}

VertexSet random_subset(Rng& rng, std::span<const Vertex> ground, double p) {
    VertexSet out;
    for (Vertex v : ground)
        if (rng.bernoulli(p)) out.push_back(v);
    return out;
}

std::vector<VertexSet> sample_sparse_sets(const Hypergraph& G, const HarnessOptions& opts, const Setup& setup) {
    std::vector<VertexSet> out;
    if (opts.non_independent <= 0 || G.empty()) return out;
    std::set<VertexSet> seen;
    Rng rng(derive_seed(opts.seed, 0x5a11));
    const std::size_t attempts = 200 * static_cast<std::size_t>(opts.non_independent);
    for (std::size_t a = 0; a < attempts && out.size() < static_cast<std::size_t>(opts.non_independent); ++a) {
        VertexSet I = random_subset(rng, G.vertices(), rng.unit());
        const auto rec = independence_and_sparsity(G, I);
        if (rec.is_independent || !theorem_sparse(G, opts.kind, opts.tau, setup.zeta, rec)) continue;
        if (seen.insert(I).second) out.push_back(I);
    }
    return out;
}

struct ItemResult {
    Report report;
    std::size_t online = 0;
    std::size_t over_spec = 0;
};

ItemResult check_set(const Hypergraph& G, const ContainerAlgorithm& alg, const HarnessOptions& opts,
                     const Setup& setup, const VertexSet& I, std::uint64_t seed) {
    ItemResult out;
    const TheoremResult res = opts.kind == ThresholdKind::Weak
                                  ? run_theorem_weak(G, opts.tau, I)
                                  : run_theorem_strong(G, opts.tau, setup.zeta, I);
    const std::string subj = "I=" + format_set(I);
    auto& rep = out.report;
    rep.append(res.report, subj);
    rep.check_true(subj, "prune agrees with wrapper", alg.prune(I) == res.T);

    const Vertex last = G.vertices().empty() ? 0 : G.vertices().back();
    std::size_t bad = 0;
    for (Vertex w = 0; w <= last; ++w, ++out.online) bad += !online_equality(alg, res.T, w);
    rep.check_le(subj, "online build(T) cap [w] for every w", static_cast<double>(bad), 0);

    Rng rng(seed);
    const VertexSet free = set_difference(I, res.T);
    bad = 0;
    for (int i = 0; i < opts.over_specified; ++i, ++out.over_spec) {
        const VertexSet S = set_union(res.T, random_subset(rng, free, 0.5));
        bad += alg.build(S) != res.C;
    }
    rep.check_le(subj, "build(S) = build(T) for T <= S <= I", static_cast<double>(bad), 0);

    if (opts.lemmas && !G.empty()) {
        rep.append(check_invariants(G, opts.kind, res.prune, derive_seed(seed, 1), opts.lemma_subsets), subj);
        rep.append(check_invariants(G, opts.kind, res.build, derive_seed(seed, 2), opts.lemma_subsets), subj);
    }
    return out;
}

HarnessResult run_harness(const Hypergraph& G, const HarnessOptions& opts, bool parallel) {
    const Setup setup = harness_setup(G, opts);
    const ContainerAlgorithm alg(G, setup.params);
    HarnessResult out;
    std::vector<VertexSet> items = enumerate_independent_sets(G);
    out.independent_sets = items.size();
    const auto sampled = sample_sparse_sets(G, opts, setup);
    out.sampled_sets = sampled.size();
    items.insert(items.end(), sampled.begin(), sampled.end());

    std::vector<ItemResult> results(items.size());
    const auto count = static_cast<std::int64_t>(items.size());
    if (parallel) {
        std::exception_ptr error;
        const int threads = opts.jobs > 0 ? opts.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (std::int64_t i = 0; i < count; ++i) {
            try {
                results[i] = check_set(G, alg, opts, setup, items[i], derive_seed(opts.seed, 0x1000 + i));
            } catch (...) {
#pragma omp critical
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    } else {
        for (std::int64_t i = 0; i < count; ++i)
            results[i] = check_set(G, alg, opts, setup, items[i], derive_seed(opts.seed, 0x1000 + i));
    }

    auto& rep = out.report;
    rep.info("harness", "seed", static_cast<double>(opts.seed), 0);
    rep.info("harness", "independent sets", static_cast<double>(out.independent_sets), 0);
    rep.info("harness", "sampled sparse non-independent sets", static_cast<double>(out.sampled_sets),
             opts.non_independent);
    if (!G.empty()) {
        if (opts.kind == ThresholdKind::Weak) {
            const double wd = weak_delta(G, opts.tau), c = weak_constants(G.r()).c;
            out.hypothesis = wd <= c;
        } else {
            out.hypothesis = alg.delta() <= setup.zeta;
        }
    }
    for (auto& r : results) {
        rep.append(r.report);
        out.online_checks += r.online;
        out.over_spec_checks += r.over_spec;
    }

    Rng rng(derive_seed(opts.seed, 0x7a));
    const Vertex last = G.vertices().empty() ? 0 : G.vertices().back();
    for (int i = 0; i < opts.random_T; ++i) {
        const VertexSet T = random_subset(rng, G.vertices(), rng.unit());
        std::size_t bad = 0;
        for (Vertex w = 0; w <= last; ++w, ++out.online_checks) bad += !online_equality(alg, T, w);
        rep.check_le("T=" + format_set(T), "online build(T) cap [w] for every w", static_cast<double>(bad), 0);
    }
    return out;
}

}  // namespace

HarnessResult full_harness(const Hypergraph& G, const HarnessOptions& opts) { return run_harness(G, opts, true); }

HarnessResult full_harness_serial(const Hypergraph& G, const HarnessOptions& opts) {
    return run_harness(G, opts, false);
}

std::vector<CorpusInstance> make_corpus(std::size_t count, std::uint64_t seed, std::size_t max_n) {
    if (max_n < 6 || max_n > 20) throw ArgumentError("make_corpus: max_n must lie in [6, 20]");
    std::vector<CorpusInstance> out;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t s = derive_seed(seed, i);
        Rng rng(s);
        const int r = 2 + static_cast<int>(i % 3);
        const std::size_t n = 6 + rng.below(max_n - 5);
        const std::uint64_t all = binomial(static_cast<int>(n), r);
        const std::size_t lo = n / 2, hi = std::min<std::uint64_t>(all, 3 * n);
        const std::size_t edges = lo + rng.below(hi - lo + 1);
        out.push_back({s, random_hypergraph(n, r, edges, s)});
    }
    return out;
}

}  // namespace hcont
