#include "hcont/container.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

namespace hcont {

const char* to_string(ThresholdKind k) { return k == ThresholdKind::Strong ? "strong" : "weak"; }
const char* to_string(Mode m) { return m == Mode::Prune ? "prune" : "build"; }

ThresholdKind parse_kind(const std::string& s) {
    if (s == "strong") return ThresholdKind::Strong;
    if (s == "weak") return ThresholdKind::Weak;
    throw ArgumentError("unknown threshold kind '" + s + "'");
}

Mode parse_mode(const std::string& s) {
    if (s == "prune") return Mode::Prune;
    if (s == "build") return Mode::Build;
    throw ArgumentError("unknown mode '" + s + "'");
}

namespace {

int choose2(int x) { return x * (x - 1) / 2; }

// dj(j) returns d^{(j)}(σ); dj(|σ|) is d(σ).
template <class DegreeOf>
double theta_formula(int r, double tau, ThresholdKind kind, int s, int size, double delta, double d_avg,
                     DegreeOf dj) {
    if (size == 1) return ipow(tau, r - s) * static_cast<double>(dj(1));
    if (kind == ThresholdKind::Weak) return delta * d_avg * ipow(tau, r - s + size - 1);
    double sum = 0;
    for (int l = 0; l <= r - s && size + l <= r; ++l)
        sum += std::ldexp(ipow(tau, r - s - l) * static_cast<double>(dj(size + l)), choose2(r) - choose2(s + l));
    return sum;
}

void require_positive(double x, const char* what) {
    if (!(x > 0) || !std::isfinite(x)) throw ArgumentError(std::string(what) + " must be positive and finite");
}

}  // namespace

double theta(const Hypergraph& G, double tau, ThresholdKind kind, int s, std::span<const Vertex> sigma,
             std::optional<double> delta) {
    require_positive(tau, "tau");
    VertexSet sg = make_set(std::vector<Vertex>(sigma.begin(), sigma.end()));
    const int size = static_cast<int>(sg.size());
    if (size != static_cast<int>(sigma.size()) || size < 1 || size > s || s > G.r())
        throw ArgumentError("theta: need 1 <= |sigma| <= s <= r");
    if (G.empty()) throw DegenerateInstance("thresholds undefined: hypergraph has no edges");
    const double dl = kind == ThresholdKind::Weak ? delta.value_or(weak_delta(G, tau)) : 0.0;
    return theta_formula(G.r(), tau, kind, s, size, dl, G.average_degree(), [&](int j) {
        return j == size ? G.degree(sg) : G.max_superset_degree(sg, j);
    });
}

// ---------------------------------------------------------------------------

ContainerAlgorithm::ContainerAlgorithm(const Hypergraph& G, RunParams params) : G_(&G), params_(params) {
    require_positive(params.tau, "tau");
    require_positive(params.zeta, "zeta");
    if (G.empty()) return;
    delta_ = params.kind == ThresholdKind::Weak ? weak_delta(G, params.tau) : codegree_function(G, params.tau).delta;
    if (params.eval == ThresholdEval::Precomputed) {
        const std::size_t m = G.index().size();
        table_.assign(static_cast<std::size_t>(G.r()) * m, 0.0);
        for (int s = 1; s < G.r(); ++s)
            for (std::size_t p = 0; p < m; ++p)
                if (G.index().subset_size(static_cast<std::uint32_t>(p)) <= s)
                    table_[static_cast<std::size_t>(s) * m + p] = compute_threshold(s, static_cast<std::uint32_t>(p));
    }
}

double ContainerAlgorithm::compute_threshold(int s, std::uint32_t pos) const {
    const auto& G = *G_;
    const auto& idx = G.index();
    const int size = idx.subset_size(pos);
    return theta_formula(G.r(), params_.tau, params_.kind, s, size, delta_, G.average_degree(), [&](int j) {
        return j == size ? idx.degree(pos) : G.superset_degree_at(pos, j);
    });
}

double ContainerAlgorithm::threshold(int s, std::uint32_t pos) const {
    if (s < 1 || s >= G_->r() || pos >= G_->index().size() || G_->index().subset_size(pos) > s)
        throw ArgumentError("threshold: position/level out of range");
    if (!table_.empty()) return table_[static_cast<std::size_t>(s) * G_->index().size() + pos];
    return compute_threshold(s, pos);
}

RunTrace ContainerAlgorithm::run(Mode mode, std::span<const Vertex> input) const { return run_impl(mode, input, true); }

VertexSet ContainerAlgorithm::prune(std::span<const Vertex> I) const { return run_impl(Mode::Prune, I, false).T; }

VertexSet ContainerAlgorithm::build(std::span<const Vertex> T) const { return run_impl(Mode::Build, T, false).C; }

RunTrace ContainerAlgorithm::run_impl(Mode mode, std::span<const Vertex> input, bool record) const {
    const Hypergraph& G = *G_;
    const int r = G.r();
    const std::size_t n = G.n();
    const auto& idx = G.index();

    RunTrace tr;
    tr.mode = mode;
    tr.kind = params_.kind;
    tr.tau = params_.tau;
    tr.zeta = params_.zeta;
    tr.delta = delta_;
    tr.input = make_set(std::vector<Vertex>(input.begin(), input.end()));

    std::vector<std::uint8_t> in_input(n, 0);
    for (Vertex v : tr.input) {
        auto l = G.local(v);
        if (!l) throw ArgumentError("input vertex " + std::to_string(v) + " not in graph");
        in_input[*l] = 1;
    }
    tr.level.assign(G.num_edges(), static_cast<std::uint8_t>(r));
    tr.P_size.assign(static_cast<std::size_t>(r) + 1, 0);
    tr.e.assign(static_cast<std::size_t>(r) + 1, 0.0);
    tr.d.assign(static_cast<std::size_t>(r), {});
    tr.gamma.assign(static_cast<std::size_t>(r), {});

    if (G.empty()) {
        if (mode == Mode::Build) {
            tr.T = tr.input;
            tr.C = G.vertices();
        }
        if (record)
            for (std::size_t v = 0; v < n; ++v) {
                VertexDecision dec;
                dec.v = G.label(static_cast<std::uint32_t>(v));
                dec.in_T = mode == Mode::Build && in_input[v];
                tr.decisions.push_back(dec);
            }
        return tr;
    }

    const std::size_t m = idx.size();
    for (int s = 1; s < r; ++s) {
        tr.d[s].assign(m, 0);
        tr.gamma[s].assign(m, 0);
    }
    std::vector<double> memo;
    if (table_.empty()) memo.assign(static_cast<std::size_t>(r) * m, std::numeric_limits<double>::quiet_NaN());
    auto theta_at = [&](int s, std::uint32_t pos) {
        const std::size_t k = static_cast<std::size_t>(s) * m + pos;
        if (!table_.empty()) return table_[k];
        if (std::isnan(memo[k])) memo[k] = compute_threshold(s, pos);
        return memo[k];
    };

    const double d_avg = G.average_degree();
    std::vector<double> rule_scale(static_cast<std::size_t>(r), 0.0);
    for (int s = 1; s < r; ++s) rule_scale[s] = params_.zeta * ipow(params_.tau, r - s - 1);

    std::vector<std::uint8_t> in_T(n, 0), in_C(n, 1);
    if (mode == Mode::Build) in_T = in_input;

    std::vector<std::vector<std::uint32_t>> F(static_cast<std::size_t>(r));
    std::vector<std::uint32_t> touched;
    std::vector<std::uint32_t> single(1);

    for (std::uint32_t v = 0; v < n; ++v) {
        const std::uint32_t dv = G.vertex_degree(v);
        const bool in_B = static_cast<double>(dv) < params_.zeta * d_avg;
        if (in_B) tr.B.push_back(G.label(v));

        VertexDecision dec;
        dec.v = G.label(v);
        dec.in_B = in_B;
        for (int s = 1; s < r; ++s) {
            F[s].clear();
            const unsigned suffix = ((1u << s) - 1u) << (r - s);
            for (auto e : G.edges_at(r - s - 1, v)) {
                if (tr.level[e] != s + 1) continue;
                bool blocked = false;
                for (unsigned sub = suffix; sub != 0 && !blocked; sub = (sub - 1) & suffix)
                    blocked = tr.gamma[s][G.subset_pos(e, sub)] != 0;
                if (!blocked) F[s].push_back(e);
            }
            dec.F[s] = static_cast<std::uint32_t>(F[s].size());
            if (static_cast<double>(F[s].size()) >= rule_scale[s] * static_cast<double>(dv)) dec.large_F |= 1u << s;
        }
        if (r >= 2 && dv > 0) {
            single[0] = v;
            const auto pos = idx.find(idx.pack(single), 1);
            dec.in_gamma1 = tr.gamma[1][pos] != 0;
        }
        dec.fired = !in_B && (dec.large_F != 0 || dec.in_gamma1);
        if (dec.fired) {
            tr.fired.push_back(G.label(v));
            if (mode == Mode::Prune && in_input[v]) in_T[v] = 1;
            if (mode == Mode::Build && !in_T[v]) in_C[v] = 0;
        }
        if (dec.fired && in_T[v]) {
            for (int s = 1; s < r; ++s) {
                if (F[s].empty()) continue;
                const unsigned suffix = ((1u << s) - 1u) << (r - s);
                touched.clear();
                for (auto e : F[s]) {
                    tr.level[e] = static_cast<std::uint8_t>(s);
                    for (unsigned sub = suffix; sub != 0; sub = (sub - 1) & suffix) {
                        const auto pos = G.subset_pos(e, sub);
                        ++tr.d[s][pos];
                        touched.push_back(pos);
                    }
                }
                for (auto pos : touched) {
                    if (tr.gamma[s][pos]) continue;
                    const double th = theta_at(s, pos);
                    if (static_cast<double>(tr.d[s][pos]) >= th) {
                        tr.gamma[s][pos] = 1;
                        if (record) tr.insertions.push_back({G.label(v), s, pos, tr.d[s][pos], th});
                    }
                }
            }
        }
        dec.in_T = in_T[v] != 0;
        if (record) tr.decisions.push_back(dec);
    }

    for (std::uint32_t v = 0; v < n; ++v) {
        if (mode == Mode::Prune && in_T[v]) tr.T.push_back(G.label(v));
        if (mode == Mode::Build && in_C[v]) tr.C.push_back(G.label(v));
    }
    if (mode == Mode::Build) tr.T = tr.input;
    if (r >= 2)
        for (std::size_t p = idx.level_begin(1); p < idx.level_end(1); ++p)
            if (tr.gamma[1][p]) tr.gamma1.push_back(G.unpack_labels(idx.key(static_cast<std::uint32_t>(p)))[0]);

    tr.P_size[r] = G.num_edges();
    for (auto lv : tr.level)
        for (int s = lv; s < r; ++s) ++tr.P_size[s];
    const double nd = static_cast<double>(G.degree_sum());
    for (int s = 1; s <= r; ++s)
        tr.e[s] = static_cast<double>(tr.P_size[s]) / (ipow(params_.tau, r - s) * nd);
    return tr;
}

bool online_equality(const ContainerAlgorithm& alg, std::span<const Vertex> T, Vertex w) {
    VertexSet t = make_set(std::vector<Vertex>(T.begin(), T.end()));
    const VertexSet full = alg.build(t);
    const VertexSet part = alg.build(prefix(t, w));
    return prefix(full, w) == prefix(part, w);
}

std::vector<VertexSet> gamma_sets(const Hypergraph& G, const RunTrace& trace, int s) {
    std::vector<VertexSet> out;
    if (s < 1 || s >= G.r() || static_cast<std::size_t>(s) >= trace.gamma.size()) return out;
    const auto& g = trace.gamma[s];
    for (std::size_t p = 0; p < g.size(); ++p)
        if (g[p]) out.push_back(G.unpack_labels(G.index().key(static_cast<std::uint32_t>(p))));
    return out;
}

void write_trace(std::ostream& out, const Hypergraph& G, const RunTrace& tr) {
    const int r = G.r();
    out << "run mode=" << to_string(tr.mode) << " kind=" << to_string(tr.kind) << " tau=" << fmt_double(tr.tau)
        << " zeta=" << fmt_double(tr.zeta) << " delta=" << fmt_double(tr.delta) << " input=" << format_set(tr.input)
        << '\n';
    std::size_t next = 0;
    for (const auto& dec : tr.decisions) {
        out << "vertex v=" << dec.v << " B=" << dec.in_B << " gamma1=" << dec.in_gamma1 << " F=";
        for (int s = 1; s < r; ++s) out << (s > 1 ? "," : "") << dec.F[s];
        out << " large=";
        bool any = false;
        for (int s = 1; s < r; ++s)
            if (dec.large_F >> s & 1u) {
                out << (any ? "," : "") << s;
                any = true;
            }
        if (!any) out << '-';
        out << " fired=" << dec.fired << " inT=" << dec.in_T << '\n';
        for (; next < tr.insertions.size() && tr.insertions[next].at == dec.v; ++next) {
            const auto& gi = tr.insertions[next];
            out << "gamma at=" << gi.at << " s=" << gi.s
                << " sigma=" << format_set(G.unpack_labels(G.index().key(gi.pos))) << " d=" << gi.degree
                << " theta=" << fmt_double(gi.theta) << '\n';
        }
    }
    if (tr.mode == Mode::Prune)
        out << "result T=" << format_set(tr.T) << '\n';
    else
        out << "result C=" << format_set(tr.C) << '\n';
}

// ---------------------------------------------------------------------------
// Invariants

namespace {

// Tracks the pair (lhs, rhs) with the largest lhs - rhs.
struct Worst {
    double lhs = 0, rhs = 0;
    std::string note;
    bool any = false;

    void see(double l, double r, const std::string& witness = {}) {
        if (!any || l - r > lhs - rhs) {
            lhs = l;
            rhs = r;
            note = witness;
            any = true;
        }
    }
    void emit(Report& rep, const std::string& subject, const std::string& check) const {
        rep.check_le(subject, check, lhs, rhs, any ? note : "no instances");
    }
};

std::vector<VertexSet> random_subsets(const Hypergraph& G, std::uint64_t seed, int count) {
    Rng rng(seed);
    std::vector<VertexSet> out;
    for (int i = 0; i < count; ++i) {
        VertexSet U;
        for (Vertex v : G.vertices())
            if (rng.bernoulli(0.5)) U.push_back(v);
        out.push_back(std::move(U));
    }
    return out;
}

}  // namespace

Report check_invariants(const Hypergraph& G, ThresholdKind kind, const RunTrace& tr, std::uint64_t seed,
                        int random_count) {
    if (tr.kind != kind) throw ArgumentError("check_invariants: trace kind does not match");
    Report rep;
    const std::string subj = to_string(tr.mode);
    const int r = G.r();
    const std::size_t n = G.n();

    if (tr.mode == Mode::Prune) {
        rep.check_true(subj, "T subset of input", is_subset(tr.T, tr.input));
    } else {
        rep.check_true(subj, "T subset of C", is_subset(tr.T, tr.C));
    }
    if (G.empty()) {
        rep.info(subj, "degenerate instance", 0, 0, "no edges");
        if (tr.mode == Mode::Build) rep.check_true(subj, "C = V(G)", tr.C == G.vertices());
        if (tr.mode == Mode::Prune) rep.check_true(subj, "T empty", tr.T.empty());
        return rep;
    }
    if (tr.level.size() != G.num_edges() || tr.d.size() != static_cast<std::size_t>(r))
        throw ArgumentError("check_invariants: trace does not belong to this graph");

    const auto& idx = G.index();
    const double nd = static_cast<double>(G.degree_sum());
    const double d_avg = G.average_degree();
    const double tau = tr.tau, zeta = tr.zeta, delta = tr.delta;

    // Structural properties.
    rep.check_true(subj, "e_r = 1/r", tr.e[r] == 1.0 / r);
    rep.check_true(subj, "T disjoint from B", set_intersection(tr.T, tr.B).empty());
    if (tr.mode == Mode::Prune)
        rep.check_true(subj, "T subset of fired", is_subset(tr.T, tr.fired));
    else
        rep.check_true(subj, "[n]-C subset of fired", is_subset(set_difference(G.vertices(), tr.C), tr.fired));

    {
        std::vector<std::uint8_t> inT(n, 0);
        for (Vertex v : tr.T) inT[*G.local(v)] = 1;
        std::size_t bad = 0;
        for (std::size_t e = 0; e < G.num_edges(); ++e) {
            auto ed = G.edge(e);
            for (int slot = 0; slot < r - tr.level[e]; ++slot) bad += inT[ed[slot]] == 0;
        }
        rep.check_le(subj, "P_s provenance: prefix of each lowered edge inside T", static_cast<double>(bad), 0);
    }
    {
        std::size_t bad = 0;
        for (int s = 1; s < r; ++s) {
            std::vector<std::uint32_t> recount(idx.size(), 0);
            const unsigned suffix = ((1u << s) - 1u) << (r - s);
            for (std::size_t e = 0; e < G.num_edges(); ++e) {
                if (tr.level[e] > s) continue;
                for (unsigned sub = suffix; sub != 0; sub = (sub - 1) & suffix) ++recount[G.subset_pos(e, sub)];
            }
            for (std::size_t p = 0; p < idx.size(); ++p) bad += recount[p] != tr.d[s][p];
        }
        rep.check_le(subj, "d_s matches P_s recount", static_cast<double>(bad), 0);
    }
    for (int s = 1; s < r; ++s) {
        Worst w;
        for (std::size_t p = 0; p < idx.size(); ++p) {
            if (!tr.gamma[s][p]) continue;
            VertexSet sg = G.unpack_labels(idx.key(static_cast<std::uint32_t>(p)));
            const double th = theta(G, tau, kind, s, sg, delta);
            w.see(th, static_cast<double>(tr.d[s][p]), format_set(sg));
        }
        w.emit(rep, subj, "Gamma_" + std::to_string(s) + " soundness theta_s <= d_s");
    }

    auto ds = [&](int s, std::uint32_t pos) -> double {
        return s == r ? static_cast<double>(idx.degree(pos)) : static_cast<double>(tr.d[s][pos]);
    };
    std::vector<std::uint32_t> vpos(n, SubsetIndex::npos);
    for (std::size_t p = idx.level_begin(1); p < idx.level_end(1); ++p)
        vpos[idx.unpack(idx.key(static_cast<std::uint32_t>(p)))[0]] = static_cast<std::uint32_t>(p);
    auto vertex_ds = [&](int s, std::uint32_t v) { return vpos[v] == SubsetIndex::npos ? 0.0 : ds(s, vpos[v]); };

    const auto subsets = random_subsets(G, seed, random_count);
    auto sum_check = [&](const std::string& name, auto slack_of_s) {
        for (int s = 1; s <= r; ++s) {
            const double scale = ipow(tau, r - s);
            auto one = [&](std::span<const Vertex> U, Worst& w) {
                double lhs = 0;
                for (Vertex v : U) lhs += vertex_ds(s, *G.local(v));
                const double mass = static_cast<double>(degree_mass(G, U));
                w.see(lhs, (mass + slack_of_s(s) * nd) * scale);
            };
            Worst all, rnd;
            one(G.vertices(), all);
            for (const auto& U : subsets) one(U, rnd);
            all.emit(rep, subj, name + " s=" + std::to_string(s) + " U=[n]");
            if (random_count > 0) rnd.emit(rep, subj, name + " s=" + std::to_string(s) + " random U");
        }
    };

    if (kind == ThresholdKind::Strong) {
        const int cr = choose2(r);
        for (int s = 2; s < r; ++s) {
            Worst w;
            for (std::size_t p = idx.level_begin(2); p < idx.level_end(std::min(s, r)); ++p) {
                const auto pos = static_cast<std::uint32_t>(p);
                const int j = idx.subset_size(pos);
                double bound = 0;
                for (int l = 0; l <= r - s && j + l <= r; ++l) {
                    const double D = l == 0 ? idx.degree(pos) : G.superset_degree_at(pos, j + l);
                    bound += std::ldexp(ipow(tau, r - s - l) * D, cr - choose2(s + l) + l);
                }
                w.see(ds(s, pos), bound);
            }
            w.emit(rep, subj, "sigma-degree upper bound s=" + std::to_string(s));
        }
        for (int s = 3; s <= r; ++s) {
            Worst w;
            for (std::size_t p = idx.level_begin(2); p < idx.level_end(s - 1); ++p) {
                const auto pos = static_cast<std::uint32_t>(p);
                if (!tr.gamma[s - 1][pos]) continue;
                w.see(std::ldexp(tau * ds(s, pos), s - 1), ds(s - 1, pos));
            }
            w.emit(rep, subj, "Gamma_{s-1} degree drop s=" + std::to_string(s));
        }
        sum_check("strong vertex-degree sum", [&](int s) { return std::ldexp(delta, 2 - 2 * s); });
        return rep;
    }

    // Weak thresholds.
    for (int s = 1; s < r; ++s) {
        Worst wv, ws;
        for (std::uint32_t v = 0; v < n; ++v)
            wv.see(vertex_ds(s, v), ipow(tau, r - s) * (G.vertex_degree(v) + r * delta * d_avg));
        for (std::size_t p = idx.level_begin(2); p < idx.level_end(std::max(1, s)); ++p) {
            const auto pos = static_cast<std::uint32_t>(p);
            const int j = idx.subset_size(pos);
            ws.see(ds(s, pos), r * delta * d_avg * ipow(tau, r - s + j - 1));
        }
        wv.emit(rep, subj, "weak vertex degree s=" + std::to_string(s));
        if (s >= 2) ws.emit(rep, subj, "weak sigma degree s=" + std::to_string(s));
    }
    sum_check("weak vertex-degree sum", [&](int) { return r * delta; });

    const double unit = (tau / zeta) * (1 + r * delta);
    if (tr.mode == Mode::Prune) {
        VertexSet not_g1 = set_difference(tr.T, tr.gamma1);
        for (int s = 1; s < r; ++s) {
            VertexSet Ts;
            for (const auto& dec : tr.decisions)
                if (dec.in_T && (dec.large_F >> s & 1u)) Ts.push_back(dec.v);
            rep.check_le(subj, "mu(T_s) s=" + std::to_string(s), mu(G, Ts), unit);
        }
        rep.check_le(subj, "mu(T - Gamma_1)", mu(G, not_g1), (r - 1) * unit);

        const auto rec = independence_and_sparsity(G, tr.input);
        const double degen_cap = std::floor((zeta / r) * ipow(tau, r - 1) * d_avg);
        const double edge_cap = (r / zeta) * ipow(tau, r) * static_cast<double>(G.num_edges());
        const bool hyp = rec.degeneracy <= degen_cap || static_cast<double>(rec.edges_within) <= edge_cap;
        const double lhs = mu(G, set_intersection(tr.T, tr.gamma1));
        if (hyp)
            rep.check_le(subj, "mu(T cap Gamma_1)", lhs, unit);
        else
            rep.unmet(subj, "mu(T cap Gamma_1)", lhs, unit, "G[I] sparsity hypothesis fails");
    } else {
        VertexSet D = set_union(set_union(set_difference(G.vertices(), tr.C), tr.T), tr.B);
        const double muD = mu(G, D);
        rep.check_true(subj, "Gamma_1 subset of D", is_subset(tr.gamma1, D));
        for (int s = 2; s <= r - 1; ++s)
            rep.check_le(subj, "e_{s+1} recursion s=" + std::to_string(s), tr.e[s + 1],
                         r * std::ldexp(tr.e[s], s) + muD + zeta + 2 * r * delta);
        if (r >= 2) rep.check_le(subj, "e_2 bound", tr.e[2], 2 * muD + zeta + 3 * r * delta);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Theorem wrappers

WeakConstants weak_constants(int r) {
    WeakConstants k;
    k.gamma = std::ldexp(1.0 / (25.0 * ipow(r, 2 * r)), -r * r);
    k.c = ipow(k.gamma, r);
    k.zeta = std::sqrt(2.0 * r * k.gamma);
    return k;
}

double default_strong_zeta(int r) { return 1.0 / (12.0 * static_cast<double>(factorial(r))); }

namespace {

void finish_coverage(TheoremResult& res, std::span<const Vertex> I) {
    res.report.check_true("theorem", "T subset of I", is_subset(res.T, I));
    res.report.check_true("theorem", "I subset of C", is_subset(I, res.C));
}

}  // namespace

bool theorem_sparse(const Hypergraph& G, ThresholdKind kind, double tau, double zeta, const SparsityRecord& rec) {
    if (rec.is_independent) return true;
    if (G.empty()) return false;
    const int r = G.r();
    const double e = static_cast<double>(G.num_edges()), n = static_cast<double>(G.n());
    const double within = static_cast<double>(rec.edges_within);
    if (kind == ThresholdKind::Weak) {
        const double c = weak_constants(r).c;
        return rec.degeneracy <= std::floor(c * ipow(tau, r - 1) * G.average_degree()) ||
               within <= c * ipow(tau, r) * e;
    }
    return rec.degeneracy <= std::floor(ipow(tau, r - 1) * zeta * e / n) || within <= 2 * r * ipow(tau, r) * e / zeta;
}

TheoremResult run_theorem_weak(const Hypergraph& G, double tau, std::span<const Vertex> I_in, ThresholdEval eval) {
    if (!(tau > 0) || tau > 1) throw ArgumentError("run_theorem_weak: need 0 < tau <= 1");
    const VertexSet I = make_set(std::vector<Vertex>(I_in.begin(), I_in.end()));
    const int r = G.r();
    const auto k = weak_constants(r);
    TheoremResult res;
    res.tau_run = k.gamma * tau;
    res.zeta = k.zeta;
    ContainerAlgorithm alg(G, {res.tau_run, res.zeta, ThresholdKind::Weak, eval});
    res.prune = alg.run(Mode::Prune, I);
    res.T = res.prune.T;
    res.build = alg.run(Mode::Build, res.T);
    res.C = res.build.C;
    finish_coverage(res, I);
    if (G.empty()) {
        res.report.info("theorem", "degenerate instance", 0, 0, "no edges");
        return res;
    }

    const double wd = weak_delta(G, tau);
    res.hypothesis = wd <= k.c;
    if (res.hypothesis)
        res.report.info("theorem", "(dagger) weak delta <= c", wd, k.c);
    else
        res.report.unmet("theorem", "(dagger) weak delta <= c", wd, k.c, "bounds not asserted");

    const auto rec = independence_and_sparsity(G, I);
    res.sparse = theorem_sparse(G, ThresholdKind::Weak, tau, k.zeta, rec);
    if (!res.sparse) res.report.unmet("theorem", "I sparse", static_cast<double>(rec.edges_within), 0);

    const double muT = mu(G, res.T), muC = mu(G, res.C);
    const double sizeT = static_cast<double>(res.T.size()), n = static_cast<double>(G.n());
    if (res.hypothesis && res.sparse) {
        res.report.check_le("theorem", "mu(T) <= tau", muT, tau);
        res.report.check_le("theorem", "|T| <= tau n", sizeT, tau * n);
        res.report.check_le("theorem", "mu(C) <= 1 - c", muC, 1 - k.c);
    } else {
        res.report.unmet("theorem", "mu(T) <= tau", muT, tau);
        res.report.unmet("theorem", "|T| <= tau n", sizeT, tau * n);
        res.report.unmet("theorem", "mu(C) <= 1 - c", muC, 1 - k.c);
    }
    return res;
}

TheoremResult run_theorem_strong(const Hypergraph& G, double tau, double zeta, std::span<const Vertex> I_in,
                                 ThresholdEval eval) {
    const VertexSet I = make_set(std::vector<Vertex>(I_in.begin(), I_in.end()));
    const int r = G.r();
    TheoremResult res;
    res.tau_run = tau;
    res.zeta = zeta;
    ContainerAlgorithm alg(G, {tau, zeta, ThresholdKind::Strong, eval});
    res.prune = alg.run(Mode::Prune, I);
    res.T = res.prune.T;
    res.build = alg.run(Mode::Build, res.T);
    res.C = res.build.C;
    finish_coverage(res, I);
    if (G.empty()) {
        res.report.info("theorem", "degenerate instance", 0, 0, "no edges");
        return res;
    }

    const double cd = alg.delta();
    res.hypothesis = cd <= zeta;
    if (res.hypothesis)
        res.report.info("theorem", "delta(G,tau) <= zeta", cd, zeta);
    else
        res.report.unmet("theorem", "delta(G,tau) <= zeta", cd, zeta, "bounds not asserted");

    const double n = static_cast<double>(G.n());
    const auto rec = independence_and_sparsity(G, I);
    res.sparse = theorem_sparse(G, ThresholdKind::Strong, tau, zeta, rec);
    if (!res.sparse) res.report.unmet("theorem", "I sparse", static_cast<double>(rec.edges_within), 0);

    const double bT = 2 * r * tau / zeta;
    const double bsize = 2 * r * tau * n / (zeta * zeta);
    const double bC = 1 - 1.0 / static_cast<double>(factorial(r)) + 4 * zeta + 2 * r * tau / zeta;
    res.vacuous = bC >= 1;
    if (res.vacuous) res.report.info("theorem", "container bound vacuous", bC, 1);

    const double muT = mu(G, res.T), muC = mu(G, res.C);
    const double sizeT = static_cast<double>(res.T.size());
    if (res.hypothesis && res.sparse) {
        res.report.check_le("theorem", "mu(T) <= 2r tau/zeta", muT, bT);
        res.report.check_le("theorem", "|T| <= 2r tau n/zeta^2", sizeT, bsize);
        res.report.check_le("theorem", "mu(C) <= 1 - 1/r! + 4zeta + 2r tau/zeta", muC, bC);
    } else {
        res.report.unmet("theorem", "mu(T) <= 2r tau/zeta", muT, bT);
        res.report.unmet("theorem", "|T| <= 2r tau n/zeta^2", sizeT, bsize);
        res.report.unmet("theorem", "mu(C) <= 1 - 1/r! + 4zeta + 2r tau/zeta", muC, bC);
    }
    return res;
}

}  // namespace hcont
