#include "hcont/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "hcont/container.hpp"
#include "hcont/hypergraph.hpp"
#include "hcont/iterate.hpp"
#include "hcont/lineq.hpp"
#include "hcont/sidon.hpp"
#include "hcont/verify.hpp"

namespace hcont {

std::vector<unsigned> parse_vertex_list(const std::string& text) {
    std::string s = text;
    std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '{' || c == '}'; }, ' ');
    std::istringstream in(s);
    std::vector<unsigned> out;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw ParseError("bad vertex '" + tok + "'");
        }
        if (used != tok.size() || v < 1 || v > UINT32_MAX) throw ParseError("bad vertex '" + tok + "'");
        out.push_back(static_cast<unsigned>(v));
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw ParseError("bad number '" + tok + "'");
        }
        if (used != tok.size()) throw ParseError("bad number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

namespace {

struct Common {
    int jobs = 0;
    std::uint64_t seed = 1;
    std::string format = "text";
};

void emit_report(std::ostream& out, const Report& rep, const Common& c) {
    if (c.format == "records")
        rep.write_records(out);
    else
        rep.write_summary(out);
}

int status_of(const Report& rep) { return rep.ok() ? kExitOk : kExitCheckFailure; }

VertexSet input_set(const Hypergraph& G, const std::string& text) {
    auto raw = parse_vertex_list(text);
    VertexSet I = make_set(std::vector<Vertex>(raw.begin(), raw.end()));
    for (Vertex v : I)
        if (!G.has_vertex(v)) throw ArgumentError("input set: vertex " + std::to_string(v) + " not in G");
    return I;
}

double default_zeta(ThresholdKind kind, int r) {
    return kind == ThresholdKind::Strong ? default_strong_zeta(r) : weak_constants(r).zeta;
}

void write_chain(std::ostream& out, const ChainResult& ch) {
    out << "iterations " << ch.iterations << " stalled " << ch.stalled << " aborted " << ch.aborted << '\n';
    for (std::size_t j = 0; j < ch.stages.size(); ++j) {
        const auto& s = ch.stages[j];
        out << "stage " << j << " vertices=" << s.vertices << " edges=" << s.edges << " tau=" << fmt_double(s.tau)
            << " hypothesis=" << s.hypothesis << " T=" << format_set(s.T) << " C=" << format_set(s.C) << '\n';
    }
    out << "T=" << format_set(ch.T) << " C=" << format_set(ch.C) << '\n';
    if (!ch.diagnostic.empty()) out << "diagnostic " << ch.diagnostic << '\n';
}

std::string format_elements(const GroundSet& F, const VertexSet& S) {
    std::string s = "{";
    for (std::size_t i = 0; i < S.size(); ++i) s += (i ? "," : "") + F.format(S[i]);
    return s + "}";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hypergraph container toolkit"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub, bool seeded) {
        sub->add_option("--jobs", common.jobs, "OpenMP threads (0 = all cores)")->check(CLI::NonNegativeNumber);
        sub->add_option("--format", common.format, "text or records")->check(CLI::IsMember({"text", "records"}));
        if (seeded) sub->add_option("--seed", common.seed, "random seed");
    };

    // containers
    std::string graph_file, kind_text = "weak", mode_text = "prune", eval_text = "lazy", set_text;
    double tau = 0.5, zeta = 0;
    bool trace = false;
    auto* containers = app.add_subcommand("containers", "run prune or build on a hypergraph file");
    containers->add_option("graph", graph_file, "hypergraph file")->required();
    containers->add_option("--tau", tau, "threshold parameter tau");
    containers->add_option("--zeta", zeta, "zeta (0 = kind default)");
    containers->add_option("--kind", kind_text)->check(CLI::IsMember({"weak", "strong"}));
    containers->add_option("--mode", mode_text)->check(CLI::IsMember({"prune", "build"}));
    containers->add_option("--eval", eval_text)->check(CLI::IsMember({"lazy", "precomputed"}));
    containers->add_option("--input-set", set_text, "input vertex set, e.g. \"1,4,7\"");
    containers->add_flag("--trace", trace, "emit per-vertex decision records");
    add_common(containers, false);

    // iterate
    std::string chain_text = "corollary";
    double eps = 0.5;
    std::optional<std::size_t> e0;
    bool all_sets = false;
    auto* iterate = app.add_subcommand("iterate", "iterated container chains");
    iterate->add_option("graph", graph_file, "hypergraph file")->required();
    iterate->add_option("--chain", chain_text)->check(CLI::IsMember({"corollary", "schedule"}));
    iterate->add_option("--tau", tau, "tau (corollary) or constant tau(U) (schedule)");
    iterate->add_option("--epsilon", eps, "target fraction of edges (corollary)");
    iterate->add_option("--e0", e0, "target edge count (schedule)");
    iterate->add_option("--zeta", zeta, "schedule zeta (0 = 1/12r!)");
    iterate->add_option("--input-set", set_text);
    iterate->add_flag("--all", all_sets, "collect containers over every independent set");
    add_common(iterate, false);

    // lineq
    std::string system_file;
    bool no_containers = false;
    auto* lineq = app.add_subcommand("lineq", "linear system: abundance, m_F(A), containers, counts");
    lineq->add_option("system", system_file, "system file")->required();
    lineq->add_option("--epsilon", eps, "container target fraction");
    lineq->add_flag("--no-containers", no_containers, "stop after abundance and m_F(A)");
    add_common(lineq, false);

    // sidon
    std::string n_list = "8,12,16";
    std::size_t divisor = 0;
    auto* sidon = app.add_subcommand("sidon", "container bound for Sidon sets");
    sidon->add_option("--n", n_list, "comma-separated range sizes");
    sidon->add_option("--e0-divisor", divisor, "use e0 = e(G)/divisor (0 = constant default)");
    add_common(sidon, false);

    // sparse
    std::string p_grid = "0.05,0.1,0.2,0.4,0.7,1";
    int trials = 200, ap = 0;
    std::size_t range_n = 0;
    auto* sparse = app.add_subcommand("sparse", "random sparse subsets: largest solution-free subset");
    sparse->add_option("system", system_file, "system file");
    sparse->add_option("--ap", ap, "use the l-term AP system instead of a file")->check(CLI::Range(3, 8));
    sparse->add_option("--N", range_n, "ground set [N] for --ap");
    sparse->add_option("--p-grid", p_grid, "comma-separated probabilities");
    sparse->add_option("--trials", trials)->check(CLI::PositiveNumber);
    add_common(sparse, true);

    // verify
    std::size_t vn = 10, vedges = 15;
    int vr = 3, non_independent = 50, lemma_subsets = 50;
    auto* verify = app.add_subcommand("verify", "exhaustive harness over every independent set");
    verify->add_option("--graph", graph_file, "hypergraph file (default: random graph)");
    verify->add_option("--n", vn)->check(CLI::Range(1, 20));
    verify->add_option("--r", vr)->check(CLI::Range(2, 8));
    verify->add_option("--edges", vedges);
    verify->add_option("--kind", kind_text)->check(CLI::IsMember({"weak", "strong"}));
    verify->add_option("--tau", tau);
    verify->add_option("--zeta", zeta);
    verify->add_option("--non-independent", non_independent)->check(CLI::NonNegativeNumber);
    verify->add_option("--lemma-subsets", lemma_subsets)->check(CLI::NonNegativeNumber);
    add_common(verify, true);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (containers->parsed()) {
            const auto G = read_hypergraph_file(graph_file);
            const auto kind = parse_kind(kind_text);
            const auto mode = parse_mode(mode_text);
            RunParams p{tau, zeta > 0 ? zeta : default_zeta(kind, G.r()), kind,
                        eval_text == "lazy" ? ThresholdEval::Lazy : ThresholdEval::Precomputed};
            ContainerAlgorithm alg(G, p);
            const auto tr = alg.run(mode, input_set(G, set_text));
            if (trace) write_trace(out, G, tr);
            out << (mode == Mode::Prune ? "T=" : "C=") << format_set(tr.output()) << '\n';
            if (G.empty()) return kExitOk;
            const Report rep = check_invariants(G, kind, tr);
            emit_report(out, rep, common);
            return status_of(rep);
        }

        if (iterate->parsed()) {
            const auto G = read_hypergraph_file(graph_file);
            ChainRunner runner;
            if (chain_text == "corollary") {
                runner = [&](std::span<const Vertex> I) { return iterate_corollary(G, tau, eps, I); };
            } else {
                const std::size_t target = e0 ? *e0 : G.num_edges() / 2;
                const double z = zeta > 0 ? zeta : default_strong_zeta(G.r());
                runner = [&, target, z](std::span<const Vertex> I) {
                    return iterate_schedule(G, [&](const Hypergraph&) { return tau; }, target, z, I,
                                            HypothesisPolicy::Proceed);
                };
            }
            if (all_sets) {
                const auto family = enumerate_independent_sets(G);
                const auto col = collect_containers(family, runner, common.jobs);
                col.write(out);
                Report rep;
                rep.check_le("collection", "coverage failures", static_cast<double>(col.coverage_failures), 0);
                rep.check_le("collection", "fingerprint conflicts", static_cast<double>(col.conflicts), 0);
                rep.info("collection", "containers", static_cast<double>(col.size()),
                         static_cast<double>(col.family_size));
                emit_report(out, rep, common);
                return status_of(rep);
            }
            const auto ch = runner(input_set(G, set_text));
            write_chain(out, ch);
            emit_report(out, ch.report, common);
            return status_of(ch.report);
        }

        if (lineq->parsed()) {
            const auto sys = read_system_file(system_file);
            const auto rr = rank_and_fullrank(sys.A, sys.F);
            out << "ground " << sys.F.spec() << " k=" << sys.k() << " r=" << sys.r() << '\n';
            out << "full_rank " << rr.full_rank;
            if (rr.rank) out << " rank=" << *rr.rank;
            out << '\n';
            if (!is_abundant(sys.A, sys.F)) {
                out << "not abundant: some k x (r-2) submatrix is not of full rank\n";
                return kExitCheckFailure;
            }
            const auto m = m_value(sys.A, sys.F);
            out << "m " << to_string(m.value) << '\n';
            if (no_containers) return kExitOk;
            const auto sc = solution_free_containers(sys, eps, common.jobs);
            const auto cmp = compare_counts(sys, sc);
            out << "solutions " << sc.edges << " containers " << cmp.containers << " max_container "
                << cmp.max_container << '\n';
            out << "exact " << cmp.exact << " log2_exact " << fmt_double(cmp.log2_exact) << " ex " << cmp.ex
                << " log2_bound " << fmt_double(cmp.log2_bound) << '\n';
            if (common.format == "records")
                for (const auto& rec : sc.collection.records)
                    out << "T=" << format_elements(sys.F, rec.fingerprint) << " C="
                        << format_elements(sys.F, rec.container) << " members=" << rec.members << '\n';
            Report rep = sc.report;
            rep.check_le("counts", "log2 exact <= container bound", cmp.log2_exact, cmp.log2_bound);
            rep.check_le("counts", "ex <= log2 exact", static_cast<double>(cmp.ex), cmp.log2_exact);
            emit_report(out, rep, common);
            return status_of(rep);
        }

        if (sidon->parsed()) {
            std::vector<SidonPipeline> rows;
            Report rep;
            for (unsigned n : parse_vertex_list(n_list)) {
                const int ni = static_cast<int>(n);
                std::optional<std::size_t> target;
                if (divisor > 0) target = build_sidon_graph(ni).num_edges() / divisor;
                rows.push_back(sidon_container_pipeline(ni, target, {}, common.jobs));
                rep.append(rows.back().report);
                if (ni >= 4) {
                    const auto dc = difference_counts(ni, range_set(1, n));
                    rep.info("sidon n=" + std::to_string(n), "half sum C(t_i,2) vs e(G)", dc.formula,
                             static_cast<double>(dc.edges), "three-term APs " + std::to_string(dc.three_aps));
                }
            }
            write_sidon_table(out, rows);
            emit_report(out, rep, common);
            return status_of(rep);
        }

        if (sparse->parsed()) {
            LinearSystem sys;
            if (ap > 0) {
                if (range_n == 0) throw ArgumentError("sparse: --ap needs --N");
                sys = make_system(GroundSet::integer_range(static_cast<Int>(range_n)), ap_matrix(ap),
                                  ZRule::NoRepeat);
            } else if (!system_file.empty()) {
                sys = read_system_file(system_file);
            } else {
                throw ArgumentError("sparse: give a system file or --ap");
            }
            const auto summary = sparse_random_experiment(sys, parse_real_list(p_grid), trials, common.seed,
                                                          common.jobs);
            write_sparse(out, summary);
            return kExitOk;
        }

        if (verify->parsed()) {
            Hypergraph G = graph_file.empty() ? random_hypergraph(vn, vr, vedges, common.seed)
                                              : read_hypergraph_file(graph_file);
            HarnessOptions opts;
            opts.tau = tau;
            opts.zeta = zeta;
            opts.kind = parse_kind(kind_text);
            opts.seed = common.seed;
            opts.non_independent = non_independent;
            opts.lemma_subsets = lemma_subsets;
            opts.jobs = common.jobs;
            const auto res = full_harness(G, opts);
            out << "graph n=" << G.n() << " r=" << G.r() << " edges=" << G.num_edges() << " seed=" << common.seed
                << '\n';
            out << "independent " << res.independent_sets << " sampled " << res.sampled_sets << " online "
                << res.online_checks << " over_spec " << res.over_spec_checks << " hypothesis " << res.hypothesis
                << '\n';
            emit_report(out, res.report, common);
            return status_of(res.report);
        }
    } catch (const ScaleGuard& e) {
        err << "scale guard: " << e.what() << '\n';
        return kExitScaleGuard;
    } catch (const PreconditionError& e) {
        out << e.what() << '\n';
        return kExitCheckFailure;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DegenerateInstance& e) {
        err << "degenerate instance: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace hcont
