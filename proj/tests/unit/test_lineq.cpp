#include <sstream>

#include "doctest.h"
#include "hcont/lineq.hpp"
#include "lineq_oracles.hpp"

using namespace hcont;

namespace {

using oracle::brute_m;
using oracle::random_matrix;

bool equals(const Rational& q, std::pair<Int, Int> f) { return q.num * f.second == q.den * f.first; }

}  // namespace

TEST_CASE("ground sets") {
    auto F = GroundSet::abelian_group({2, 3});
    CHECK(F.size() == 6);
    CHECK(F.exponent() == 6);
    CHECK(F.coords(5) == std::vector<Int>{1, 2});
    CHECK(F.format(4) == "1:1");
    CHECK(F.parse_element("1:1") == 4);
    CHECK(F.parse_element("-1:5") == 5);
    CHECK(F.spec() == "AB 2 3");
    auto N = GroundSet::integer_range(5);
    CHECK(N.coords(0) == std::vector<Int>{1});
    CHECK(N.parse_element("5") == 4);
    CHECK_THROWS_AS(N.parse_element("0"), ParseError);
    CHECK(GroundSet::prime_field(7).parse_element("-1") == 6);
    CHECK_THROWS_AS(GroundSet::prime_field(6), ArgumentError);
    CHECK_THROWS_AS(GroundSet::abelian_group({1, 4}), ArgumentError);
    CHECK_THROWS_AS(GroundSet::integer_range(0), ArgumentError);
    for (Int p : {2, 3, 5, 7, 11, 13, 97}) CHECK(is_prime(p));
    for (Int c : {0, 1, 4, 9, 15, 91}) CHECK_FALSE(is_prime(c));
}

TEST_CASE("rank and full rank: hand examples") {
    auto Q = GroundSet::integer_range(10);
    auto r1 = rank_and_fullrank({{1, 1, -2}}, Q);
    CHECK(r1.rank == 1);
    CHECK(r1.full_rank);
    auto empty = remove_columns({{1, 1}}, {0, 1});
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].empty());
    CHECK_FALSE(rank_and_fullrank(empty, Q).full_rank);
    CHECK_FALSE(rank_and_fullrank(empty, GroundSet::abelian_group({5})).full_rank);
    auto Z4 = GroundSet::abelian_group({4});
    auto r2 = rank_and_fullrank({{2}}, Z4);
    CHECK_FALSE(r2.rank.has_value());
    CHECK(r2.invariants == std::vector<Int>{2});
    CHECK_FALSE(r2.full_rank);
    CHECK_FALSE(oracle::surjective({{2}}, Z4));
    CHECK(rank_mod_p({{1, 2}, {2, 4}}, 7) == 1);
    CHECK(rank_mod_p({{1, 2}, {2, 5}}, 7) == 2);
    CHECK(rank_mod_p({{3, 0}, {0, 3}}, 3) == 0);
    CHECK(smith_invariants({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) == std::vector<Int>{2, 6, 12});
}

TEST_CASE("ranks agree with minors") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 1 + static_cast<int>(rng.below(3));
        const int r = 1 + static_cast<int>(rng.below(4));
        auto A = random_matrix(rng, k, r, -3, 3);
        CHECK(rank_rational(A) == oracle::rank_by_minors(A, 0));
        for (Int p : {2, 3, 5, 7}) CHECK(rank_mod_p(A, p) == oracle::rank_by_minors(A, p));
    }
}

TEST_CASE("Smith criterion agrees with brute-force surjectivity") {
    Rng rng(5);
    const std::vector<std::vector<Int>> groups{{2}, {3}, {4}, {6}, {2, 2}, {2, 3}, {8}, {9}};
    for (int trial = 0; trial < 150; ++trial) {
        const auto& f = groups[rng.below(groups.size())];
        auto F = GroundSet::abelian_group(f);
        const int k = 1 + static_cast<int>(rng.below(2));
        const int r = static_cast<int>(rng.below(3));
        Matrix A(static_cast<std::size_t>(k), std::vector<Int>(static_cast<std::size_t>(r)));
        for (auto& row : A)
            for (auto& x : row) x = static_cast<Int>(rng.below(9)) - 4;
        if (std::pow(static_cast<double>(F.size()), r) > 5000) continue;
        INFO("factors " << F.spec() << " k=" << k << " r=" << r);
        CHECK(rank_and_fullrank(A, F).full_rank == oracle::surjective(A, F));
    }
    CHECK(oracle::surjective({{1, 2}}, GroundSet::abelian_group({4})));
    CHECK(rank_and_fullrank({{1, 2}}, GroundSet::abelian_group({4})).full_rank);
}

TEST_CASE("abundance") {
    auto N = GroundSet::integer_range(20);
    CHECK(is_abundant({{1, 1, -1, -1}}, N));
    CHECK(is_abundant({{1, 1, -2}}, N));
    CHECK_FALSE(is_abundant({{1, 1}}, N));
    CHECK_FALSE(is_abundant({{1, 1}}, GroundSet::prime_field(5)));
    CHECK_FALSE(is_abundant({{1, 1, 0}}, N));
    CHECK(is_abundant(ap_matrix(4), N));
    CHECK_THROWS_AS(m_value({{1, 1}}, N), PreconditionError);
}

TEST_CASE("m values") {
    auto N = GroundSet::integer_range(30);
    for (int l = 3; l <= 5; ++l) CHECK(m_value(ap_matrix(l), N).value == Rational(l - 1));
    auto sid = m_value({{1, 1, -1, -1}}, N);
    CHECK(sid.value == Rational(3, 2));
    CHECK(sid.J == std::vector<int>{0, 1, 2, 3});
    CHECK(m_value({{1, 1, -2}}, GroundSet::prime_field(7)).value == Rational(2));
    auto grp = m_value({{1, 1, -2}}, GroundSet::abelian_group({7}));
    CHECK(grp.t == 2);
    CHECK(grp.value == Rational(2));
    CHECK(m_value({{1, 1, -1}}, N).value == Rational(2));
}

TEST_CASE("m values agree with the definition; group value dominates") {
    Rng rng(3);
    int checked = 0;
    for (int trial = 0; trial < 300 && checked < 60; ++trial) {
        const int k = 1 + static_cast<int>(rng.below(2));
        const int r = k + 2 + static_cast<int>(rng.below(3));
        auto A = random_matrix(rng, k, r, -3, 3);
        for (Int p : {5, 7}) {
            auto Fp = GroundSet::prime_field(p);
            if (!is_abundant(A, Fp)) continue;
            ++checked;
            CHECK(equals(m_value(A, Fp).value, brute_m(A, p)));
            auto G = GroundSet::abelian_group({p});
            REQUIRE(is_abundant(A, G));
            CHECK_FALSE(m_value(A, G).value < m_value(A, Fp).value);
        }
        if (is_abundant(A, GroundSet::integer_range(10)))
            CHECK(equals(m_value(A, GroundSet::integer_range(10)).value, brute_m(A, 0)));
    }
    CHECK(checked >= 30);
}

TEST_CASE("solutions and the solution hypergraph") {
    auto F5 = GroundSet::prime_field(5);
    auto sys = make_system(F5, {{1, 1, -2}});
    for (Int x = 0; x < 5; ++x) sys.Z.push_back({static_cast<std::size_t>(x), static_cast<std::size_t>(x), static_cast<std::size_t>(x)});
    auto G = build_solution_hypergraph(sys);
    CHECK(G.n() == 15);
    CHECK(G.num_edges() == 20);
    CHECK(solutions(sys) == oracle::brute_solutions(sys));
    CHECK(count_all_solutions(sys) == 25);
    auto nr = make_system(F5, {{1, 1, -2}}, ZRule::NoRepeat);
    CHECK(build_solution_hypergraph(nr).num_edges() == 20);
    // parts are disjoint blocks of |F| labels
    for (const auto& e : G.edge_list())
        for (int i = 0; i < 3; ++i) CHECK((e[i] - 1) / 5 == static_cast<Vertex>(i));
    // two vertices in one part share no edge; a cross-part pair has degree <= 1
    CHECK(G.degree(VertexSet{1, 2}) == 0);
    for (Vertex u = 1; u <= 5; ++u)
        for (Vertex v = 6; v <= 15; ++v) CHECK(G.degree(VertexSet{u, v}) <= 1);
}

TEST_CASE("full-rank systems have |F|^{r-k} solutions") {
    Rng rng(17);
    int fields = 0, groups = 0;
    const std::vector<std::vector<Int>> cyc{{4}, {6}, {8}, {9}, {10}, {12}, {2, 6}, {3, 3}};
    for (int trial = 0; trial < 400 && (fields < 20 || groups < 20); ++trial) {
        const int k = 1 + static_cast<int>(rng.below(2));
        const int r = k + 1 + static_cast<int>(rng.below(2));
        auto A = random_matrix(rng, k, r, -4, 4);
        const bool use_field = rng.bernoulli(0.5);
        GroundSet F = use_field ? GroundSet::prime_field(std::vector<Int>{2, 3, 5, 7, 11}[rng.below(5)])
                                : GroundSet::abelian_group(cyc[rng.below(cyc.size())]);
        if (!rank_and_fullrank(A, F).full_rank) continue;
        auto sys = make_system(F, A);
        const std::size_t m = F.coords(0).size();
        for (auto& bi : sys.b)
            for (std::size_t t = 0; t < m; ++t) bi[t] = static_cast<Int>(rng.below(13));
        const double expect = std::pow(static_cast<double>(F.size()), r - k);
        CHECK(static_cast<double>(oracle::brute_solutions(sys).size()) == expect);
        CHECK(static_cast<double>(count_all_solutions(sys)) == expect);
        (use_field ? fields : groups)++;
    }
    CHECK(fields >= 20);
    CHECK(groups >= 20);
}

TEST_CASE("degree bound") {
    auto sys = make_system(GroundSet::prime_field(11), {{1, 1, -2}}, ZRule::NoRepeat);
    auto rep = verify_degree_bound(sys, 0.5);
    CHECK(rep.ok());
    CHECK(rep.count(Status::Pass) == 2);
    auto grp = make_system(GroundSet::abelian_group({3, 3}), {{1, 1, -1, -1}}, ZRule::NoPairSwap);
    CHECK(verify_degree_bound(grp, 1.0).ok());
    auto ints = make_system(GroundSet::integer_range(12), {{1, 1, -2}}, ZRule::NoRepeat);
    auto ri = verify_degree_bound(ints, 0.5);
    CHECK(ri.count(Status::Pass) == 0);
    CHECK_THROWS_AS(verify_degree_bound(make_system(GroundSet::prime_field(5), {{1, 1}}), 0.5), PreconditionError);
    CHECK_THROWS_AS(verify_degree_bound(sys, 1.5), ArgumentError);
}

TEST_CASE("solution-free counting against brute force") {
    // x + y = z with x = y allowed over [4]: {}, four singletons, {1,3},{1,4},{2,3},{3,4}
    auto sf4 = make_system(GroundSet::integer_range(4), {{1, 1, -1}});
    CHECK(count_solution_free(sf4) == 9);
    auto sf4nr = make_system(GroundSet::integer_range(4), {{1, 1, -1}}, ZRule::NoRepeat);
    CHECK(count_solution_free(sf4nr) == 13);

    std::vector<LinearSystem> systems{
        make_system(GroundSet::integer_range(10), {{1, 1, -1}}),
        make_system(GroundSet::integer_range(11), {{1, 1, -2}}, ZRule::NoRepeat),
        make_system(GroundSet::integer_range(9), {{1, 1, -1, -1}}, ZRule::NoPairSwap),
        make_system(GroundSet::prime_field(7), {{1, 1, -2}}, ZRule::NoRepeat),
        make_system(GroundSet::abelian_group({2, 4}), {{1, 1, -1}}),
    };
    for (const auto& sys : systems) {
        const auto brute = oracle::brute_solution_free(sys);
        CHECK(enumerate_solution_free(sys) == brute);
        CHECK(count_solution_free(sys) == brute.size());
        std::size_t ex = 0;
        for (const auto& I : brute) ex = std::max(ex, I.size());
        CHECK(ex_value(sys) == ex);
        CHECK(std::pow(2.0, static_cast<double>(ex)) <= static_cast<double>(brute.size()));
        for (const auto& I : brute) CHECK(is_solution_free(sys, I));
    }
}

TEST_CASE("maximum solution-free subsets of random ground subsets") {
    auto sys = make_system(GroundSet::integer_range(16), {{1, 1, -2}}, ZRule::NoRepeat);
    const auto sups = solution_supports(sys);
    const auto sols = oracle::brute_solutions(sys);
    Rng rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        std::uint64_t X = rng.below(1u << 16);
        std::size_t best = 0;
        for (std::uint64_t S = X;; S = (S - 1) & X) {
            std::vector<std::size_t> I;
            for (std::size_t i = 0; i < 16; ++i)
                if (S >> i & 1u) I.push_back(i);
            if (I.size() > best && oracle::solution_free(sols, I)) best = I.size();
            if (S == 0) break;
        }
        CHECK(max_solution_free(sups, 16, X) == best);
    }
    CHECK(max_solution_free(sups, 16, 0) == 0);
}

TEST_CASE("solution-free containers") {
    std::vector<LinearSystem> systems{
        make_system(GroundSet::integer_range(10), {{1, 1, -1}}),
        make_system(GroundSet::integer_range(12), {{1, 1, -2}}, ZRule::NoRepeat),
        make_system(GroundSet::prime_field(7), {{1, 1, -2}}, ZRule::NoRepeat),
        make_system(GroundSet::integer_range(9), {{1, 1, -1, -1}}, ZRule::NoPairSwap),
    };
    for (const auto& sys : systems) {
        const double eps = 0.2;
        auto sc = solution_free_containers(sys, eps, 1);
        CHECK(sc.report.ok());
        CHECK(sc.constants.vacuous);
        CHECK(sc.constants.tau_run == 1.0);
        const auto family = oracle::brute_solution_free(sys);
        const auto sols = oracle::brute_solutions(sys);
        for (const auto& I : family) {
            VertexSet s(I.begin(), I.end());
            CHECK(sc.collection.covers(s));
        }
        for (const auto& rec : sc.collection.records) {
            CHECK(is_subset(rec.fingerprint, rec.container));
            std::size_t inside = 0;
            for (const auto& x : sols) {
                bool all = true;
                for (auto v : x) all = all && std::binary_search(rec.container.begin(), rec.container.end(), v);
                inside += all;
            }
            CHECK(static_cast<double>(inside) <= eps * static_cast<double>(sols.size()));
        }
        auto cc = compare_counts(sys, sc);
        CHECK(cc.exact == family.size());
        CHECK(cc.log2_bound >= cc.log2_exact);
        CHECK(cc.log2_exact >= static_cast<double>(cc.ex));
        auto par = solution_free_containers(sys, eps, 3);
        REQUIRE(par.collection.size() == sc.collection.size());
        for (std::size_t i = 0; i < par.collection.size(); ++i)
            CHECK(par.collection.records[i].container == sc.collection.records[i].container);
    }
    CHECK_THROWS_AS(solution_free_containers(make_system(GroundSet::integer_range(6), {{1, 1}}), 0.1),
                    PreconditionError);
}

TEST_CASE("large epsilon keeps a single container F") {
    auto sys = make_system(GroundSet::integer_range(8), {{1, 1, -1}});
    auto sc = solution_free_containers(sys, 1.0);
    REQUIRE(sc.collection.size() == 1);
    CHECK(sc.collection.records[0].container.size() == 8);
    CHECK(sc.collection.records[0].fingerprint.empty());
}

TEST_CASE("embedding into Z_p") {
    for (const Matrix& A : {Matrix{{1, 1, -2}}, Matrix{{1, 1, -1, -1}}, ap_matrix(4)}) {
        const Int N = 7;
        const Int p = embedding_prime(A, N);
        const int k = static_cast<int>(A.size());
        Int s = 0;
        for (const auto& row : A)
            for (Int a : row) s += std::abs(a);
        Int lo = 4 * static_cast<Int>(factorial(k)) * N;
        for (int i = 0; i < k; ++i) lo *= s;
        CHECK(is_prime(p));
        CHECK(p >= lo);
        CHECK(p <= 2 * lo);
        auto sys = make_system(GroundSet::integer_range(N), A);
        CHECK(embedding_sound(sys, p));
        CHECK(is_abundant(A, GroundSet::prime_field(p)));
    }
    // a tiny modulus does merge solutions
    CHECK_FALSE(embedding_sound(make_system(GroundSet::integer_range(7), {{1, 1, -2}}), 3));
}

TEST_CASE("sparse random experiment") {
    auto sys = make_system(GroundSet::integer_range(20), {{1, 1, -2}}, ZRule::NoRepeat);
    auto s = sparse_random_experiment(sys, {0.0, 0.3, 1.0}, 25, 42, 1);
    REQUIRE(s.points.size() == 3);
    CHECK(s.ex == ex_value(sys));
    CHECK(s.m == 2.0);
    for (auto v : s.points[0].max_sizes) CHECK(v == 0);
    for (auto v : s.points[2].max_sizes) CHECK(v == s.ex);
    auto t = sparse_random_experiment(sys, {0.0, 0.3, 1.0}, 25, 42, 3);
    CHECK(t.points[1].max_sizes == s.points[1].max_sizes);
    std::ostringstream a, b;
    write_sparse(a, s);
    write_sparse(b, t);
    CHECK(a.str() == b.str());
    auto u = sparse_random_experiment(sys, {0.3}, 25, 43, 1);
    CHECK(u.points[0].max_sizes != s.points[1].max_sizes);
    CHECK_THROWS_AS(sparse_random_experiment(sys, {1.5}, 3, 1), ArgumentError);
}

TEST_CASE("system files") {
    std::istringstream in(
        "# sidon\n"
        "1 4 ZN 12\n"
        "1 1 -1 -1\n"
        "0\n"
        "Z nopairswap\n");
    auto sys = read_system(in);
    CHECK(sys.k() == 1);
    CHECK(sys.r() == 4);
    CHECK(sys.F.size() == 12);
    CHECK(sys.z_rule == ZRule::NoPairSwap);
    std::ostringstream out;
    write_system(out, sys);
    std::istringstream again(out.str());
    auto sys2 = read_system(again);
    CHECK(sys2.A == sys.A);
    CHECK(sys2.b == sys.b);
    CHECK(sys2.z_rule == sys.z_rule);

    std::istringstream grp("1 3 AB 2 4\n1 1 -1\n1:2\nZ\n0:0 1:2 0:0\n1:1 0:1 0:0\n");
    auto g = read_system(grp);
    CHECK(g.b[0] == std::vector<Int>{1, 2});
    REQUIRE(g.Z.size() == 2);
    CHECK(g.discounted({0, 6, 0}));
    CHECK(g.satisfies({0, 6, 0}));

    for (const char* bad : {"", "1 3 Fq 5\n1 1 1\n0\n", "1 3 Fp 6\n1 1 1\n0\n", "1 3 Fp 5\n1 1\n0\n",
                            "1 3 Fp 5\n1 1 -2\n0 0\n", "1 3 Fp 5\n1 1 -2\n0\nZ nopairswap\n",
                            "1 3 AB 2 4\n1 1 -1\n1\n", "1 3 ZN 5\n1 1 -2\n0\nZ\n1 2 9\n"}) {
        std::istringstream b(bad);
        CHECK_THROWS_AS(read_system(b), ParseError);
    }
}
