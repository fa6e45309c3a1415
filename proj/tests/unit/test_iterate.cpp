#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hcont/iterate.hpp"
#include "oracles.hpp"

using namespace hcont;

namespace {

std::vector<VertexSet> independent_sets(const Hypergraph& G) {
    std::vector<VertexSet> out;
    for (const auto& S : oracle::all_subsets(G.vertices()))
        if (oracle::independent(G, S)) out.push_back(S);
    return out;
}

void check_chain_shape(const Hypergraph& G, const ChainResult& ch, const VertexSet& I) {
    REQUIRE(ch.stage_edges.size() == ch.iterations + 1);
    REQUIRE(ch.stages.size() == ch.iterations);
    CHECK(ch.stage_edges[0] == G.num_edges());
    VertexSet prev = G.vertices();
    VertexSet Tu;
    for (std::size_t j = 0; j < ch.stages.size(); ++j) {
        const auto& st = ch.stages[j];
        CHECK(st.vertices == prev.size());
        CHECK(st.edges == oracle::edges_within(G, prev));
        CHECK(is_subset(st.C, prev));
        CHECK(is_subset(I, st.C));
        CHECK(is_subset(st.T, I));
        CHECK(ch.stage_edges[j + 1] == oracle::edges_within(G, st.C));
        CHECK(ch.stage_edges[j + 1] <= ch.stage_edges[j]);
        Tu = set_union(Tu, st.T);
        prev = st.C;
    }
    CHECK(ch.C == prev);
    CHECK(ch.T == Tu);
}

}  // namespace

TEST_CASE("corollary constants") {
    for (int r = 2; r <= 4; ++r) {
        const double cs = weak_constants(r).c;
        auto k = corollary_constants(r, 0.5, 0.25);
        CHECK(k.c_star == cs);
        // (1-c*)^ℓ ≤ ε < (1-c*)^{ℓ-1}, in logs since c* underflows 1 - c*
        const double per = -std::log1p(-cs);
        CHECK(k.ell * per >= std::log(4.0) * (1 - 1e-12));
        CHECK((k.ell - 1) * per < std::log(4.0) * (1 + 1e-12));
        CHECK(k.c == doctest::Approx(0.25 * std::pow(k.ell, -r) * cs).epsilon(1e-12));
        CHECK(k.stage_tau == 0.5 / k.ell);
        CHECK(corollary_constants(r, 0.5, 1.0).ell == 0);
    }
    CHECK_THROWS_AS(corollary_constants(3, 0.5, 0.0), ArgumentError);
}

TEST_CASE("corollary: epsilon >= 1 and empty graphs need no iterations") {
    auto G = random_hypergraph(9, 3, 20, 2);
    VertexSet I{1, 2};
    auto ch = iterate_corollary(G, 0.5, 1.0, I);
    CHECK(ch.iterations == 0);
    CHECK(ch.C == G.vertices());
    CHECK(ch.T.empty());
    CHECK(ch.report.ok());
    auto E = Hypergraph::build(5, 3, {});
    CHECK(iterate_corollary(E, 0.5, 0.1, VertexSet{1}).iterations == 0);
    CHECK_THROWS_AS(iterate_corollary(G, 0.0, 0.5, I), ArgumentError);
    CHECK_THROWS_AS(iterate_corollary(G, 1.5, 0.5, I), ArgumentError);
    CHECK_THROWS_AS(iterate_corollary(G, 0.5, -1.0, I), ArgumentError);
    CHECK_THROWS_AS(iterate_corollary(G, 0.5, 0.5, VertexSet{99}), ArgumentError);
}

TEST_CASE("corollary chains: nesting, coverage and rebuild") {
    Rng rng(7);
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const int r = 2 + static_cast<int>(seed % 3);
        const std::size_t n = 10;
        auto G = random_hypergraph(n, r, std::min<std::size_t>(25, binomial(n, r) / 2), seed);
        VertexSet I;
        for (Vertex v : G.vertices())
            if (rng.bernoulli(0.4)) I.push_back(v);
        for (double eps : {0.5, 0.1}) {
            auto ch = iterate_corollary(G, 0.6, eps, I);
            check_chain_shape(G, ch, I);
            CHECK(ch.report.ok());
            CHECK(rebuild_from_union(G, ch, ThresholdKind::Weak) == ch.C);
            if (!ch.stalled && !ch.aborted)
                CHECK(static_cast<double>(oracle::edges_within(G, ch.C)) <= eps * G.num_edges());
        }
    }
}

TEST_CASE("schedule: e0 >= e(G) gives k = 0") {
    auto G = random_hypergraph(8, 3, 12, 5);
    auto ch = iterate_schedule(G, [](const Hypergraph&) { return 0.3; }, G.num_edges(), 0.2, VertexSet{1, 2});
    CHECK(ch.iterations == 0);
    CHECK(ch.C == G.vertices());
    CHECK(ch.report.ok());
}

TEST_CASE("schedule: hypothesis policy") {
    auto G = random_hypergraph(9, 3, 30, 3);
    VertexSet I{2, 5};
    auto tau_of = [](const Hypergraph&) { return 0.4; };
    auto ab = iterate_schedule(G, tau_of, 0, default_strong_zeta(3), I, HypothesisPolicy::Abort);
    CHECK(ab.aborted);
    CHECK_FALSE(ab.hypotheses_held);
    CHECK(ab.iterations == 0);
    CHECK(ab.diagnostic.find("hypothesis failed") != std::string::npos);
    CHECK(ab.report.ok());
    CHECK(ab.report.count(Status::Unmet) > 0);

    auto pr = iterate_schedule(G, tau_of, 2, 0.05, I, HypothesisPolicy::Proceed);
    CHECK_FALSE(pr.aborted);
    CHECK(pr.iterations >= 1);
    check_chain_shape(G, pr, I);
    CHECK(pr.report.ok());
    if (!pr.stalled) CHECK(oracle::edges_within(G, pr.C) <= 2);
    CHECK(rebuild_from_union(G, pr, ThresholdKind::Strong) == pr.C);
}

TEST_CASE("schedule with tau from G[U]") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto G = random_hypergraph(10, 3, 40, seed);
        auto tau_of = [](const Hypergraph& GU) {
            return std::min(0.45, 2.0 / std::sqrt(static_cast<double>(GU.n())));
        };
        VertexSet I{1, 4, 7};
        auto ch = iterate_schedule(G, tau_of, 3, 0.1, I, HypothesisPolicy::Proceed);
        check_chain_shape(G, ch, I);
        CHECK(ch.report.ok());
        for (std::size_t j = 0; j < ch.stages.size(); ++j)
            CHECK(ch.stages[j].tau == tau_of(G.induced(j == 0 ? G.vertices() : ch.stages[j - 1].C)));
    }
}

TEST_CASE("collections over all independent sets") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto G = random_hypergraph(10, 3, 30, seed);
        auto family = independent_sets(G);
        ChainRunner runner = [&](std::span<const Vertex> I) {
            return iterate_schedule(G, [](const Hypergraph&) { return 0.35; }, 4, 0.1, I, HypothesisPolicy::Proceed);
        };
        auto par = collect_containers(family, runner, 3);
        auto ser = collect_containers_serial(family, runner);
        REQUIRE(par.size() == ser.size());
        for (std::size_t i = 0; i < par.size(); ++i) {
            CHECK(par.records[i].fingerprint == ser.records[i].fingerprint);
            CHECK(par.records[i].container == ser.records[i].container);
            CHECK(par.records[i].members == ser.records[i].members);
        }
        CHECK(par.family_size == family.size());
        CHECK(par.coverage_failures == 0);
        CHECK(par.conflicts == 0);
        std::size_t members = 0;
        for (const auto& rec : par.records) members += rec.members;
        CHECK(members == family.size());
        for (const auto& I : family) CHECK(par.covers(I));
        const std::size_t q = par.max_fingerprint_size();
        std::uint64_t bound = 0;
        for (std::size_t t = 0; t <= q; ++t) bound += binomial(G.n(), t);
        CHECK(par.size() <= bound);
        for (std::size_t i = 1; i < par.size(); ++i)
            CHECK(par.records[i - 1].fingerprint < par.records[i].fingerprint);
        auto hit = par.find(par.records.back().fingerprint);
        REQUIRE(hit != nullptr);
        CHECK(hit->container == par.records.back().container);
        CHECK(par.find(VertexSet{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}) == nullptr);
    }
}

TEST_CASE("collection serialization") {
    auto G = Hypergraph::build(4, 2, {{1, 2}, {3, 4}});
    std::vector<VertexSet> family{{1}, {1, 3}};
    ChainRunner runner = [&](std::span<const Vertex> I) {
        return iterate_schedule(G, [](const Hypergraph&) { return 0.4; }, 0, 1.0, I, HypothesisPolicy::Proceed);
    };
    auto col = collect_containers_serial(family, runner);
    std::ostringstream os;
    col.write(os);
    const std::string s = os.str();
    CHECK(s.find("T={") == 0);
    CHECK(s.find(" C={") != std::string::npos);
    CHECK(s.find(" stages=2") != std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(col.size()));
}

TEST_CASE("collection propagates runner errors") {
    std::vector<VertexSet> family{{1}, {2}, {3}};
    ChainRunner bad = [](std::span<const Vertex> I) -> ChainResult {
        if (I[0] == 2) throw ArgumentError("boom");
        return {};
    };
    CHECK_THROWS_AS(collect_containers(family, bad, 2), ArgumentError);
    CHECK_THROWS_AS(collect_containers_serial(family, bad), ArgumentError);
}
