#include "hcont/sidon.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace hcont {

Hypergraph build_sidon_graph(int n) {
    if (n < 4) throw ArgumentError("build_sidon_graph: need n >= 4");
    if (n > 300) throw ScaleGuard("build_sidon_graph: n > 300");
    std::vector<std::vector<Vertex>> edges;
    for (int s = 3; s <= 2 * n - 1; ++s) {
        std::vector<std::pair<Vertex, Vertex>> pairs;
        for (int a = std::max(1, s - n); 2 * a < s; ++a)
            pairs.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(s - a));
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = i + 1; j < pairs.size(); ++j)
                edges.push_back({pairs[i].first, pairs[j].first, pairs[j].second, pairs[i].second});
    }
    for (auto& e : edges) std::sort(e.begin(), e.end());
    return Hypergraph::build(static_cast<std::size_t>(n), 4, edges);
}

bool is_sidon(std::span<const Vertex> S) {
    std::vector<std::uint64_t> sums;
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = i; j < S.size(); ++j) sums.push_back(std::uint64_t{S[i]} + S[j]);
    std::sort(sums.begin(), sums.end());
    return std::adjacent_find(sums.begin(), sums.end()) == sums.end();
}

namespace {

/// Visits every Sidon subset of [n]; sums are kept as a bitset over [2, 2n].
template <class Visit>
void for_each_sidon(int n, Visit&& visit) {
    std::vector<Vertex> S;
    std::vector<char> used(static_cast<std::size_t>(2 * n + 1), 0);
    auto rec = [&](auto&& self, Vertex from) -> void {
        visit(S);
        for (Vertex x = from; x <= static_cast<Vertex>(n); ++x) {
            bool ok = !used[2 * x];
            for (std::size_t i = 0; ok && i < S.size(); ++i) ok = !used[x + S[i]];
            if (!ok) continue;
            used[2 * x] = 1;
            for (Vertex s : S) used[x + s] = 1;
            S.push_back(x);
            self(self, x + 1);
            S.pop_back();
            used[2 * x] = 0;
            for (Vertex s : S) used[x + s] = 0;
        }
    };
    rec(rec, 1);
}

}  // namespace

std::uint64_t count_sidon_brute(int n) {
    if (n < 0) throw ArgumentError("count_sidon_brute: need n >= 0");
    if (n > 30) throw ScaleGuard("count_sidon_brute: n > 30");
    std::uint64_t c = 0;
    for_each_sidon(n, [&](const std::vector<Vertex>&) { ++c; });
    return c;
}

std::vector<VertexSet> enumerate_sidon(int n) {
    if (n < 0) throw ArgumentError("enumerate_sidon: need n >= 0");
    if (n > 24) throw ScaleGuard("enumerate_sidon: n > 24");
    std::vector<VertexSet> out;
    for_each_sidon(n, [&](const std::vector<Vertex>& S) { out.push_back(S); });
    std::sort(out.begin(), out.end());
    return out;
}

DifferenceCounts difference_counts(int n, std::span<const Vertex> U_in) {
    VertexSet U = make_set(std::vector<Vertex>(U_in.begin(), U_in.end()));
    for (Vertex v : U)
        if (v < 1 || v > static_cast<Vertex>(n)) throw ArgumentError("difference_counts: vertex outside [n]");
    DifferenceCounts dc;
    dc.u = U.size();
    dc.t.assign(static_cast<std::size_t>(std::max(n, 1)), 0);
    for (std::size_t i = 0; i < U.size(); ++i)
        for (std::size_t j = i + 1; j < U.size(); ++j) ++dc.t[U[j] - U[i]];
    double twice = 0;
    for (std::size_t i = 1; i < dc.t.size(); ++i) {
        dc.pairs += dc.t[i];
        const double t = static_cast<double>(dc.t[i]);
        twice += t * (t - 1) / 2;
    }
    dc.formula = twice / 2;
    std::vector<char> in(static_cast<std::size_t>(n) + 1, 0);
    for (Vertex v : U) in[v] = 1;
    for (Vertex x : U)
        for (Vertex i = 1; x + 2 * i <= static_cast<Vertex>(n); ++i) dc.three_aps += in[x + i] && in[x + 2 * i];
    dc.edges = n >= 4 ? build_sidon_graph(n).induced(U).num_edges() : 0;
    return dc;
}

SidonTau sidon_tau(std::size_t u, std::size_t m, int k) {
    if (m == 0) throw DegenerateInstance("sidon_tau: e(G[U]) = 0");
    SidonTau t;
    const double ud = static_cast<double>(u), md = static_cast<double>(m);
    t.quadratic = 24.0 * k * ud * ud / md;
    t.cube_root = std::cbrt(4.0 * k * ud / md);
    t.tau = std::max(t.quadratic, t.cube_root);
    return t;
}

double sidon_default_e0(int n, double beta) { return ipow(beta, 4) * n / 20; }

SidonPipeline sidon_container_pipeline(int n, std::optional<std::size_t> e0, const SidonConstants& constants,
                                       int jobs) {
    if (n < 4) throw ArgumentError("sidon pipeline: need n >= 4");
    if (n > 24) throw ScaleGuard("sidon pipeline: n > 24");
    SidonPipeline out;
    out.n = n;
    const auto G = build_sidon_graph(n);
    out.edges = G.num_edges();
    out.default_e0 = sidon_default_e0(n, constants.beta);
    out.default_vacuous = out.default_e0 >= static_cast<double>(out.edges);
    auto& rep = out.report;
    const std::string subj = "sidon n=" + std::to_string(n);
    if (out.default_vacuous)
        rep.unmet(subj, "beta^4 n/20 < e(G)", out.default_e0, static_cast<double>(out.edges), "constants vacuous");
    else
        rep.info(subj, "beta^4 n/20 < e(G)", out.default_e0, static_cast<double>(out.edges));
    if (e0) {
        out.e0 = *e0;
    } else {
        out.e0 = out.default_vacuous ? out.edges : static_cast<std::size_t>(out.default_e0);
    }
    if (out.e0 > out.edges) throw ArgumentError("sidon pipeline: e0 exceeds e(G)");
    const double u = n, flag = u * u * u * u / (20 * u);
    rep.info(subj, "e(G) >= u^4/20n at U=[n]", static_cast<double>(out.edges), flag,
             static_cast<double>(out.edges) >= flag ? "holds" : "fails at this size");

    const auto family = enumerate_sidon(n);
    for (const auto& S : family) out.cap = std::max(out.cap, S.size());
    out.exact = family.size();
    const int k = constants.k;
    ChainRunner runner = [&](std::span<const Vertex> I) {
        return iterate_schedule(
            G, [k](const Hypergraph& GU) { return sidon_tau(GU.n(), GU.num_edges(), k).tau; }, out.e0,
            default_strong_zeta(4), I, HypothesisPolicy::Proceed);
    };
    out.collection = collect_containers(family, runner, jobs);
    const auto& col = out.collection;
    std::size_t over = 0;
    for (const auto& rec : col.records)
        if (G.induced(rec.container).num_edges() > out.e0) ++over;
    out.over_e0 = over;
    rep.check_le(subj, "coverage failures", static_cast<double>(col.coverage_failures), 0);
    rep.check_le(subj, "fingerprint conflicts", static_cast<double>(col.conflicts), 0);
    if (over == 0)
        rep.check_le(subj, "containers with e(G[C]) > e0", 0, 0);
    else
        rep.unmet(subj, "containers with e(G[C]) > e0", static_cast<double>(over), 0, "chains stalled");
    for (const auto& S : family)
        if (!col.covers(S)) rep.check_true(subj, "Sidon set " + format_set(S) + " covered", false);
    const std::size_t maxC = col.max_container_size();
    double sum = 0;
    for (std::size_t j = 0; j <= std::min(out.cap, maxC); ++j)
        sum += static_cast<double>(binomial(static_cast<int>(maxC), static_cast<int>(j)));
    out.log2_exact = std::log2(static_cast<double>(out.exact));
    out.log2_bound = std::log2(static_cast<double>(col.size())) + std::log2(sum);
    rep.check_le(subj, "log2 exact <= container bound", out.log2_exact, out.log2_bound);
    rep.info(subj, "containers", static_cast<double>(col.size()), static_cast<double>(family.size()));
    rep.info(subj, "max |C|", static_cast<double>(maxC), static_cast<double>(n));
    return out;
}

void write_sidon_table(std::ostream& out, const std::vector<SidonPipeline>& rows) {
    out << "n\te(G)\te0\texact\tlog2_exact\tcontainers\tmax_C\tcap\tlog2_bound\tover_e0\n";
    for (const auto& r : rows)
        out << r.n << '\t' << r.edges << '\t' << r.e0 << '\t' << r.exact << '\t' << fmt_double(r.log2_exact) << '\t'
            << r.collection.size() << '\t' << r.collection.max_container_size() << '\t' << r.cap << '\t'
            << fmt_double(r.log2_bound) << '\t' << r.over_e0 << '\n';
}

}  // namespace hcont
