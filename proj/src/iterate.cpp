#include "hcont/iterate.hpp"

#include <cmath>
#include <exception>
#include <map>
#include <ostream>

#include <omp.h>

namespace hcont {

CorollaryConstants corollary_constants(int r, double tau, double eps) {
    if (!(eps > 0)) throw ArgumentError("epsilon must be positive");
    CorollaryConstants k;
    k.c_star = weak_constants(r).c;
    k.ell = eps >= 1 ? 0.0 : std::ceil(std::log(eps) / std::log1p(-k.c_star));
    k.c = eps >= 1 ? k.c_star : eps * ipow(k.ell, -r) * k.c_star;
    k.stage_tau = eps >= 1 ? tau : tau / k.ell;
    return k;
}

namespace {

VertexSet checked_input(const Hypergraph& G, std::span<const Vertex> I_in) {
    VertexSet I = make_set(std::vector<Vertex>(I_in.begin(), I_in.end()));
    for (Vertex v : I)
        if (!G.has_vertex(v)) throw ArgumentError("input vertex " + std::to_string(v) + " not in graph");
    return I;
}

void record_stage(ChainResult& out, const Hypergraph& cur, const TheoremResult& res, const VertexSet& I) {
    Stage st;
    st.vertices = cur.n();
    st.edges = cur.num_edges();
    st.tau = res.tau_run;
    st.zeta = res.zeta;
    st.hypothesis = res.hypothesis;
    st.T = res.T;
    st.C = res.C;
    out.T = set_union(out.T, res.T);
    const std::string subj = "stage " + std::to_string(out.stages.size() + 1);
    out.report.check_true(subj, "C_{j+1} subset of C_j", is_subset(res.C, cur.vertices()));
    out.report.check_true(subj, "I subset of C_{j+1}", is_subset(I, res.C));
    out.report.check_true(subj, "T_j subset of I", is_subset(res.T, I));
    out.stages.push_back(std::move(st));
}

}  // namespace

VertexSet rebuild_from_union(const Hypergraph& G, const ChainResult& chain, ThresholdKind kind) {
    Hypergraph cur = G;
    for (const auto& st : chain.stages) {
        ContainerAlgorithm alg(cur, {st.tau, st.zeta, kind});
        const VertexSet C = alg.build(set_intersection(chain.T, cur.vertices()));
        cur = cur.induced(C);
    }
    return cur.vertices();
}

ChainResult iterate_corollary(const Hypergraph& G, double tau, double eps, std::span<const Vertex> I_in) {
    if (!(tau > 0) || tau > 1) throw ArgumentError("iterate_corollary: need 0 < tau <= 1");
    if (!(eps > 0)) throw ArgumentError("iterate_corollary: need epsilon > 0");
    const VertexSet I = checked_input(G, I_in);
    ChainResult out;
    out.C = G.vertices();
    out.stage_edges.push_back(G.num_edges());
    if (eps >= 1 || G.empty()) {
        out.report.info("chain", "zero iterations", static_cast<double>(G.num_edges()),
                        eps * static_cast<double>(G.num_edges()));
        out.report.check_true("chain", "I subset of C", is_subset(I, out.C));
        return out;
    }

    const int r = G.r();
    const auto k = corollary_constants(r, tau, eps);
    const double wd = weak_delta(G, tau);
    const bool hyp = wd <= k.c;
    out.hypotheses_held = hyp;
    if (hyp)
        out.report.info("chain", "weak delta <= c(r,eps)", wd, k.c);
    else
        out.report.unmet("chain", "weak delta <= c(r,eps)", wd, k.c, "corollary bounds not asserted");

    const double target = eps * static_cast<double>(G.num_edges());
    const double cap = std::min(k.ell + 1, static_cast<double>(G.n()) + 1);
    Hypergraph cur = G;
    while (static_cast<double>(cur.num_edges()) > target) {
        if (static_cast<double>(out.iterations) >= cap) {
            out.aborted = true;
            out.diagnostic = "iteration cap reached with e=" + std::to_string(cur.num_edges());
            break;
        }
        auto res = run_theorem_weak(cur, k.stage_tau, I);
        out.report.append(res.report, "stage " + std::to_string(out.stages.size() + 1));
        record_stage(out, cur, res, I);
        Hypergraph next = cur.induced(res.C);
        ++out.iterations;
        out.stage_edges.push_back(next.num_edges());
        const std::string subj = "stage " + std::to_string(out.iterations);
        const double decay = (1 - k.c_star) * static_cast<double>(cur.num_edges());
        if (res.hypothesis)
            out.report.check_le(subj, "e(G[C_{j+1}]) <= (1-c*) e(G[C_j])", static_cast<double>(next.num_edges()), decay);
        else
            out.report.unmet(subj, "e(G[C_{j+1}]) <= (1-c*) e(G[C_j])", static_cast<double>(next.num_edges()), decay);
        const bool stuck = res.C.size() == cur.n();
        cur = std::move(next);
        if (stuck) {
            out.stalled = true;
            out.diagnostic = "stage " + std::to_string(out.iterations) + " removed no vertex; e=" +
                             std::to_string(cur.num_edges()) + " target " + fmt_double(target);
            break;
        }
    }
    out.C = cur.vertices();
    const double eC = static_cast<double>(cur.num_edges());
    if (out.stalled || out.aborted)
        out.report.unmet("chain", "e(G[C]) <= eps e(G)", eC, target, out.diagnostic);
    else
        out.report.check_le("chain", "e(G[C]) <= eps e(G)", eC, target);
    out.report.check_le("chain", "iterations <= ell", static_cast<double>(out.iterations), k.ell);
    const double bT = tau * static_cast<double>(G.n());
    if (hyp)
        out.report.check_le("chain", "|T| <= tau n", static_cast<double>(out.T.size()), bT);
    else
        out.report.unmet("chain", "|T| <= tau n", static_cast<double>(out.T.size()), bT);
    out.report.check_true("chain", "I subset of C", is_subset(I, out.C));
    out.report.check_true("chain", "union fingerprint rebuild", rebuild_from_union(G, out, ThresholdKind::Weak) == out.C);
    return out;
}

ChainResult iterate_schedule(const Hypergraph& G, const TauSchedule& tau_of, std::size_t e0, double zeta,
                             std::span<const Vertex> I_in, HypothesisPolicy policy) {
    const VertexSet I = checked_input(G, I_in);
    const int r = G.r();
    const double zeta_cap = default_strong_zeta(r);
    ChainResult out;
    out.stage_edges.push_back(G.num_edges());
    Hypergraph cur = G;
    while (cur.num_edges() > e0) {
        if (out.iterations > G.n()) {
            out.aborted = true;
            out.diagnostic = "iteration cap reached";
            break;
        }
        const double tau = tau_of(cur);
        if (!(tau > 0) || !std::isfinite(tau)) throw ArgumentError("schedule returned a non-positive tau");
        const double cd = codegree_function(cur, tau).delta;
        const bool hyp = tau < 0.5 && cd <= zeta_cap;
        const std::string subj = "stage " + std::to_string(out.iterations + 1);
        if (!hyp) {
            out.hypotheses_held = false;
            out.report.unmet(subj, "tau(U) < 1/2", tau, 0.5, "U=" + format_set(cur.vertices()));
            out.report.unmet(subj, "delta(G[U],tau) <= 1/12r!", cd, zeta_cap, "U=" + format_set(cur.vertices()));
            if (policy == HypothesisPolicy::Abort) {
                out.aborted = true;
                out.diagnostic = "hypothesis failed at U=" + format_set(cur.vertices()) + " tau=" + fmt_double(tau) +
                                 " delta=" + fmt_double(cd);
                break;
            }
        } else {
            out.report.info(subj, "tau(U) < 1/2", tau, 0.5);
            out.report.info(subj, "delta(G[U],tau) <= 1/12r!", cd, zeta_cap);
        }
        auto res = run_theorem_strong(cur, tau, zeta, I);
        out.report.append(res.report, subj);
        record_stage(out, cur, res, I);
        Hypergraph next = cur.induced(res.C);
        ++out.iterations;
        out.stage_edges.push_back(next.num_edges());
        const bool stuck = res.C.size() == cur.n();
        cur = std::move(next);
        if (stuck) {
            out.stalled = true;
            out.diagnostic = "stage " + std::to_string(out.iterations) + " removed no vertex; e=" +
                             std::to_string(cur.num_edges()) + " e0=" + std::to_string(e0);
            break;
        }
    }
    out.C = cur.vertices();
    const double eC = static_cast<double>(cur.num_edges());
    if (out.stalled || out.aborted)
        out.report.unmet("chain", "e(G[C]) <= e0", eC, static_cast<double>(e0), out.diagnostic);
    else
        out.report.check_le("chain", "e(G[C]) <= e0", eC, static_cast<double>(e0));
    if (G.num_edges() > e0) {
        const double kb = std::log(static_cast<double>(e0) / static_cast<double>(G.num_edges())) /
                          std::log1p(-0.5 / static_cast<double>(factorial(r)));
        if (out.hypotheses_held && !out.stalled && !out.aborted)
            out.report.check_le("chain", "k <= log(e0/e)/log(1-1/2r!)", static_cast<double>(out.iterations), kb);
        else
            out.report.unmet("chain", "k <= log(e0/e)/log(1-1/2r!)", static_cast<double>(out.iterations), kb);
    }
    out.report.check_true("chain", "I subset of C", is_subset(I, out.C));
    if (!out.aborted)
        out.report.check_true("chain", "union fingerprint rebuild",
                              rebuild_from_union(G, out, ThresholdKind::Strong) == out.C);
    return out;
}

// ---------------------------------------------------------------------------

std::size_t ContainerCollection::max_container_size() const {
    std::size_t m = 0;
    for (const auto& r : records) m = std::max(m, r.container.size());
    return m;
}

std::size_t ContainerCollection::max_fingerprint_size() const {
    std::size_t m = 0;
    for (const auto& r : records) m = std::max(m, r.fingerprint.size());
    return m;
}

const ContainerRecord* ContainerCollection::find(std::span<const Vertex> fingerprint) const {
    VertexSet key(fingerprint.begin(), fingerprint.end());
    auto it = std::lower_bound(records.begin(), records.end(), key,
                               [](const ContainerRecord& r, const VertexSet& k) { return r.fingerprint < k; });
    if (it == records.end() || it->fingerprint != key) return nullptr;
    return &*it;
}

bool ContainerCollection::covers(std::span<const Vertex> I) const {
    for (const auto& r : records)
        if (is_subset(I, r.container)) return true;
    return false;
}

void ContainerCollection::write(std::ostream& out) const {
    for (const auto& r : records) {
        out << "T=" << format_set(r.fingerprint) << " C=" << format_set(r.container) << " stages=";
        for (std::size_t i = 0; i < r.stage_edges.size(); ++i) out << (i ? "," : "") << r.stage_edges[i];
        out << " members=" << r.members << '\n';
    }
}

ContainerCollection merge_chains(const std::vector<VertexSet>& family, std::vector<ChainResult>& results) {
    ContainerCollection out;
    out.family_size = family.size();
    std::map<VertexSet, ContainerRecord> by_fp;
    for (std::size_t i = 0; i < family.size(); ++i) {
        auto& res = results[i];
        if (res.aborted) ++out.aborted_chains;
        if (!is_subset(family[i], res.C)) ++out.coverage_failures;
        auto it = by_fp.find(res.T);
        if (it == by_fp.end()) {
            ContainerRecord rec{res.T, std::move(res.C), std::move(res.stage_edges), 1};
            by_fp.emplace(rec.fingerprint, std::move(rec));
        } else {
            if (it->second.container != res.C) ++out.conflicts;
            ++it->second.members;
        }
    }
    for (auto& [fp, rec] : by_fp) out.records.push_back(std::move(rec));
    return out;
}

ContainerCollection collect_containers_serial(const std::vector<VertexSet>& family, const ChainRunner& runner) {
    std::vector<ChainResult> results(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) results[i] = runner(family[i]);
    return merge_chains(family, results);
}

ContainerCollection collect_containers(const std::vector<VertexSet>& family, const ChainRunner& runner, int jobs) {
    std::vector<ChainResult> results(family.size());
    std::exception_ptr error;
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
    const auto count = static_cast<std::ptrdiff_t>(family.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            results[i] = runner(family[i]);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return merge_chains(family, results);
}

}  // namespace hcont
