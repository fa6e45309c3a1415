#include <sstream>

#include "doctest.h"
#include "hcont/container.hpp"
#include "oracles.hpp"
#include "reference_container.hpp"

using namespace hcont;

namespace {

Hypergraph single_edge() { return Hypergraph::build(3, 3, {{1, 2, 3}}); }

VertexSet random_subset(const VertexSet& ground, Rng& rng, double p) {
    VertexSet out;
    for (Vertex v : ground)
        if (rng.bernoulli(p)) out.push_back(v);
    return out;
}

bool has_gamma(const Hypergraph& G, const RunTrace& tr, int s, const VertexSet& sg) {
    auto all = gamma_sets(G, tr, s);
    return std::find(all.begin(), all.end(), sg) != all.end();
}

const CheckLine* find_line(const Report& rep, const std::string& check) {
    for (const auto& l : rep.lines())
        if (l.check == check) return &l;
    return nullptr;
}

}  // namespace

TEST_CASE("theta: hand values") {
    auto G = single_edge();
    CHECK(theta(G, 0.5, ThresholdKind::Weak, 1, VertexSet{3}) == 0.25);
    CHECK(theta(G, 0.5, ThresholdKind::Weak, 2, VertexSet{2, 3}, 4.0) == 1.0);
    CHECK(theta(G, 0.5, ThresholdKind::Weak, 2, VertexSet{2, 3}) == 1.0);
    auto H = random_hypergraph(9, 3, 16, 4);
    for (Vertex v : H.vertices())
        CHECK(theta(H, 0.3, ThresholdKind::Strong, 3, VertexSet{v}) == H.degree(VertexSet{v}));
    CHECK_THROWS_AS(theta(G, 0.5, ThresholdKind::Weak, 1, VertexSet{2, 3}), ArgumentError);
    CHECK_THROWS_AS(theta(G, 0.5, ThresholdKind::Weak, 4, VertexSet{2}), ArgumentError);
    CHECK_THROWS_AS(theta(G, 0.0, ThresholdKind::Weak, 1, VertexSet{2}), ArgumentError);
}

TEST_CASE("theta agrees with the reference definition") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const int r = 2 + static_cast<int>(seed % 3);
        auto G = random_hypergraph(8, r, 12, seed);
        for (auto kind : {ThresholdKind::Strong, ThresholdKind::Weak}) {
            oracle::ReferenceAlgorithm ref(G, 0.35, 0.2, kind);
            for (int s = 1; s <= r; ++s)
                for (int j = 1; j <= s; ++j)
                    for (const auto& sg : oracle::subsets_of_size(G.vertices(), j))
                        REQUIRE(theta(G, 0.35, kind, s, sg) == doctest::Approx(ref.theta(s, sg)).epsilon(1e-12));
        }
    }
}

TEST_CASE("hand trace on a single edge") {
    auto G = single_edge();
    ContainerAlgorithm alg(G, {0.5, 0.5, ThresholdKind::Weak});
    CHECK(alg.delta() == 4.0);
    auto tr = alg.run(Mode::Prune, VertexSet{1, 2});
    CHECK(tr.T == VertexSet{1, 2});
    CHECK(tr.B.empty());
    REQUIRE(tr.decisions.size() == 3);
    CHECK(tr.decisions[0].F[2] == 1);
    CHECK(tr.decisions[0].large_F == (1u << 2));
    CHECK(tr.decisions[0].fired);
    CHECK(tr.decisions[1].F[1] == 1);
    CHECK(tr.decisions[1].large_F == (1u << 1));
    CHECK(tr.decisions[2].in_gamma1);
    CHECK(tr.decisions[2].fired);
    CHECK_FALSE(tr.decisions[2].in_T);
    CHECK(has_gamma(G, tr, 2, {2, 3}));
    CHECK(has_gamma(G, tr, 1, {3}));
    CHECK(tr.gamma1 == VertexSet{3});
    CHECK(tr.P_size[2] == 1);
    CHECK(tr.P_size[1] == 1);
    CHECK(tr.e[3] == 1.0 / 3);
    CHECK(tr.e[2] == doctest::Approx(2.0 / 3));

    auto bt = alg.run(Mode::Build, VertexSet{1, 2});
    CHECK(bt.C == VertexSet{1, 2});
    CHECK(bt.fired == tr.fired);

    auto rep = check_invariants(G, ThresholdKind::Weak, tr);
    CHECK(rep.ok());
    const auto* l33 = find_line(rep, "weak vertex degree s=1");
    REQUIRE(l33);
    CHECK(l33->lhs == 1.0);
    CHECK(l33->rhs == 13.0 / 4);
    auto brep = check_invariants(G, ThresholdKind::Weak, bt);
    CHECK(brep.ok());
    const auto* l37 = find_line(brep, "e_2 bound");
    REQUIRE(l37);
    CHECK(l37->lhs == doctest::Approx(2.0 / 3));
    CHECK(l37->rhs == doctest::Approx(2.0 + 0.5 + 36.0));

    CHECK(online_equality(alg, VertexSet{1, 2}, 2));
    CHECK(online_equality(alg, VertexSet{1, 2}, 0));
    CHECK(online_equality(alg, VertexSet{1, 2}, 3));
}

TEST_CASE("empty hypergraph") {
    auto G = Hypergraph::build(5, 3, {});
    ContainerAlgorithm alg(G, {0.5, 0.5, ThresholdKind::Weak});
    CHECK(alg.prune(VertexSet{1, 2, 3}).empty());
    CHECK(alg.build(VertexSet{}) == G.vertices());
    auto tr = alg.run(Mode::Build, VertexSet{2});
    CHECK(tr.B.empty());
    CHECK(check_invariants(G, ThresholdKind::Weak, tr).ok());
    CHECK_THROWS_AS(theta(G, 0.5, ThresholdKind::Weak, 1, VertexSet{1}), DegenerateInstance);
}

TEST_CASE("parameter validation") {
    auto G = single_edge();
    CHECK_THROWS_AS(ContainerAlgorithm(G, {0.0, 0.5, ThresholdKind::Weak}), ArgumentError);
    CHECK_THROWS_AS(ContainerAlgorithm(G, {0.5, -1.0, ThresholdKind::Weak}), ArgumentError);
    ContainerAlgorithm alg(G, {0.5, 0.5, ThresholdKind::Weak});
    CHECK_THROWS_AS(alg.prune(VertexSet{4}), ArgumentError);
    auto tr = alg.run(Mode::Prune, VertexSet{1});
    CHECK_THROWS_AS(check_invariants(G, ThresholdKind::Strong, tr), ArgumentError);
    CHECK(parse_kind("strong") == ThresholdKind::Strong);
    CHECK(parse_mode("build") == Mode::Build);
    CHECK_THROWS_AS(parse_kind("medium"), ArgumentError);
}

TEST_CASE("implementation matches the literal reference algorithm") {
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const int r = 2 + static_cast<int>(seed % 3);
        const std::size_t n = 6 + seed % 4;
        auto G = random_hypergraph(n, r, 6 + seed % 9, seed);
        Rng rng(seed * 7);
        for (auto kind : {ThresholdKind::Strong, ThresholdKind::Weak}) {
            for (double tau : {0.25, 0.5, 0.7}) {
                const double zeta = kind == ThresholdKind::Strong ? 0.05 : 0.3;
                oracle::ReferenceAlgorithm ref(G, tau, zeta, kind);
                ContainerAlgorithm lazy(G, {tau, zeta, kind, ThresholdEval::Lazy});
                ContainerAlgorithm pre(G, {tau, zeta, kind, ThresholdEval::Precomputed});
                for (int t = 0; t < 4; ++t) {
                    VertexSet input = random_subset(G.vertices(), rng, 0.6);
                    for (auto mode : {Mode::Prune, Mode::Build}) {
                        auto a = lazy.run(mode, input);
                        auto b = pre.run(mode, input);
                        auto lit = ref.run(mode, input, true);
                        auto res = ref.run(mode, input, false);
                        REQUIRE(a.output() == (mode == Mode::Prune ? lit.T : lit.C));
                        REQUIRE(a.fired == lit.fired);
                        REQUIRE(res.fired == lit.fired);
                        REQUIRE(b.output() == a.output());
                        REQUIRE(b.d == a.d);
                        REQUIRE(b.gamma == a.gamma);
                        for (int s = 1; s < r; ++s) {
                            std::set<VertexSet> mine;
                            for (const auto& sg : gamma_sets(G, a, s)) mine.insert(sg);
                            std::set<VertexSet> lit_edges, restricted;
                            for (const auto& sg : lit.Gamma[s])
                                if (oracle::degree(G, sg) > 0) lit_edges.insert(sg);
                            REQUIRE(mine == lit_edges);
                            REQUIRE(mine == res.Gamma[s]);
                            std::uint64_t total = 0;
                            for (const auto& [f, m] : lit.P[s]) total += static_cast<std::uint64_t>(m);
                            REQUIRE(a.P_size[s] == total);
                        }
                        ++compared;
                    }
                }
            }
        }
    }
    CHECK(compared == 30 * 2 * 3 * 4 * 2);
}

TEST_CASE("coverage, online property, over-specification and mode agreement") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const int r = 2 + static_cast<int>(seed % 3);
        auto G = random_hypergraph(9, r, 8 + seed, seed);
        Rng rng(seed);
        for (auto kind : {ThresholdKind::Strong, ThresholdKind::Weak}) {
            ContainerAlgorithm alg(G, {0.4, kind == ThresholdKind::Strong ? 0.02 : 0.3, kind});
            for (const auto& I : oracle::all_subsets(G.vertices())) {
                auto pt = alg.run(Mode::Prune, I);
                REQUIRE(is_subset(pt.T, I));
                auto bt = alg.run(Mode::Build, pt.T);
                REQUIRE(is_subset(I, bt.C));
                REQUIRE(bt.fired == pt.fired);
                for (int k = 0; k < 2; ++k) {
                    VertexSet S = set_union(pt.T, random_subset(I, rng, 0.5));
                    REQUIRE(alg.build(S) == bt.C);
                }
            }
            for (int t = 0; t < 10; ++t) {
                VertexSet T = random_subset(G.vertices(), rng, 0.4);
                for (Vertex w = 0; w <= G.n(); ++w) REQUIRE(online_equality(alg, T, w));
            }
        }
    }
}

TEST_CASE("lemma invariants hold on random runs") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const int r = 2 + static_cast<int>(seed % 3);
        const std::size_t n = 8 + seed % 12;
        auto G = random_hypergraph(n, r, std::min<std::size_t>(5 + 2 * seed, binomial(static_cast<int>(n), r) / 2), seed);
        Rng rng(seed);
        for (auto kind : {ThresholdKind::Strong, ThresholdKind::Weak}) {
            for (double tau : {0.1, 0.4, 0.9}) {
                const double zeta = kind == ThresholdKind::Strong ? codegree_function(G, tau).delta : 0.25;
                ContainerAlgorithm alg(G, {tau, zeta, kind});
                for (int t = 0; t < 5; ++t) {
                    VertexSet I = random_subset(G.vertices(), rng, 0.5);
                    auto pt = alg.run(Mode::Prune, I);
                    auto bt = alg.run(Mode::Build, pt.T);
                    auto rp = check_invariants(G, kind, pt, seed);
                    auto rb = check_invariants(G, kind, bt, seed);
                    if (!rp.ok() || !rb.ok()) {
                        std::ostringstream os;
                        rp.write_summary(os);
                        rb.write_summary(os);
                        FAIL(os.str());
                    }
                }
            }
        }
    }
}

TEST_CASE("theorem wrappers") {
    auto G = random_hypergraph(10, 3, 15, 3);
    auto w = run_theorem_weak(G, 1.0, VertexSet{});
    CHECK(w.T.empty());
    CHECK(w.report.ok());
    CHECK_FALSE(w.hypothesis);
    CHECK(w.sparse);
    const auto k = weak_constants(3);
    CHECK(w.tau_run == k.gamma);
    CHECK(k.c == ipow(k.gamma, 3));
    CHECK(k.zeta == std::sqrt(6 * k.gamma));
    CHECK(k.c <= k.gamma);
    CHECK(k.gamma <= k.zeta / 6);
    CHECK(2 * 3 * k.zeta <= 1);
    CHECK_THROWS_AS(run_theorem_weak(G, 1.5, VertexSet{}), ArgumentError);

    auto full = run_theorem_strong(G, 0.5, 1.0, G.vertices());
    CHECK_FALSE(full.sparse);
    CHECK(full.report.ok());
    CHECK(full.report.count(Status::Unmet) >= 3);

    const double zeta = codegree_function(G, 1.0).delta;
    auto s = run_theorem_strong(G, 1.0, zeta, VertexSet{1, 2});
    CHECK(s.hypothesis);
    CHECK(s.vacuous);
    CHECK(s.report.ok());
    CHECK(default_strong_zeta(3) == 1.0 / 72);
}

TEST_CASE("strong theorem bounds on independent sets where the precondition holds") {
    int asserted = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int r = 2 + static_cast<int>(seed % 3);
        auto G = random_hypergraph(10, r, 10, seed);
        const double tau = 0.5;
        const double zeta = codegree_function(G, tau).delta;
        for (const auto& I : oracle::all_subsets(G.vertices())) {
            if (!oracle::independent(G, I)) continue;
            auto res = run_theorem_strong(G, tau, zeta, I);
            REQUIRE(res.report.ok());
            asserted += res.hypothesis && res.sparse;
        }
    }
    CHECK(asserted > 0);
}

TEST_CASE("trace serialization") {
    auto G = single_edge();
    ContainerAlgorithm alg(G, {0.5, 0.5, ThresholdKind::Weak});
    std::ostringstream a, b;
    write_trace(a, G, alg.run(Mode::Prune, VertexSet{1, 2}));
    write_trace(b, G, alg.run(Mode::Prune, VertexSet{1, 2}));
    CHECK(a.str() == b.str());
    const std::string s = a.str();
    CHECK(s.find("vertex v=1 B=0 gamma1=0 F=0,1 large=2 fired=1 inT=1") != std::string::npos);
    CHECK(s.find("gamma at=1 s=2 sigma={2,3} d=1 theta=1") != std::string::npos);
    CHECK(s.find("gamma at=2 s=1 sigma={3} d=1 theta=0.25") != std::string::npos);
    CHECK(s.find("result T={1,2}") != std::string::npos);
}
