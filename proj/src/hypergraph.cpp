#include "hcont/hypergraph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace hcont {

std::string format_set(std::span<const Vertex> s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i]);
    }
    out += '}';
    return out;
}

const char* to_string(EdgeError e) {
    switch (e) {
        case EdgeError::VertexOutOfRange: return "vertex out of range";
        case EdgeError::RepeatedVertex: return "repeated vertex";
        case EdgeError::WrongCardinality: return "wrong cardinality";
        case EdgeError::DuplicateEdge: return "duplicate edge";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// SubsetIndex

std::uint32_t SubsetIndex::find(SubsetKey key, int size) const {
    if (size <= 0 || static_cast<std::size_t>(size + 1) >= offsets_.size()) return npos;
    auto first = keys_.begin() + static_cast<std::ptrdiff_t>(offsets_[size]);
    auto last = keys_.begin() + static_cast<std::ptrdiff_t>(offsets_[size + 1]);
    auto it = std::lower_bound(first, last, key);
    if (it == last || *it != key) return npos;
    return static_cast<std::uint32_t>(it - keys_.begin());
}

SubsetKey SubsetIndex::pack(std::span<const std::uint32_t> sorted_locals) const {
    SubsetKey key = 0;
    for (std::size_t i = 0; i < sorted_locals.size(); ++i)
        key |= static_cast<SubsetKey>(sorted_locals[i] + 1) << (bits_ * static_cast<int>(i));
    return key;
}

std::vector<std::uint32_t> SubsetIndex::unpack(SubsetKey key) const {
    std::vector<std::uint32_t> out;
    const SubsetKey mask = (SubsetKey{1} << bits_) - 1;
    while (key != 0) {
        out.push_back(static_cast<std::uint32_t>((key & mask) - 1));
        key >>= bits_;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lazily built tables. Built at most once per graph; copies share them.

struct Hypergraph::RunTables {
    std::vector<std::uint32_t> subset_pos;                 // e * 2^r
    std::vector<std::vector<std::uint32_t>> slot_offsets;  // per slot, n+1
    std::vector<std::vector<std::uint32_t>> slot_edges;    // per slot
};

struct Hypergraph::SupersetTable {
    std::vector<std::uint32_t> sup;  // index.size() * (r+1)
};

struct Hypergraph::LazyTables {
    std::once_flag run_once;
    std::once_flag sup_once;
    RunTables run;
    SupersetTable sup;
};

Hypergraph::Hypergraph() : lazy_(std::make_shared<LazyTables>()) { finalize(); }

Hypergraph Hypergraph::build(std::size_t n, int r, const std::vector<std::vector<Vertex>>& edges) {
    if (r < 1 || r > kMaxUniformity)
        throw ArgumentError("uniformity must be in [1, " + std::to_string(kMaxUniformity) + "]");
    if (static_cast<std::size_t>(r) > n) throw ArgumentError("uniformity exceeds vertex count");
    return on_vertices(range_set(1, static_cast<Vertex>(n)), r, edges);
}

Hypergraph Hypergraph::on_vertices(VertexSet vertices, int r, const std::vector<std::vector<Vertex>>& edges) {
    if (r < 1 || r > kMaxUniformity)
        throw ArgumentError("uniformity must be in [1, " + std::to_string(kMaxUniformity) + "]");
    if (!std::is_sorted(vertices.begin(), vertices.end()) ||
        std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end() ||
        (!vertices.empty() && vertices.front() == 0))
        throw ArgumentError("vertex labels must be sorted, distinct and positive");

    Hypergraph G;
    G.r_ = r;
    G.vertices_ = std::move(vertices);
    const int bits = std::min(32, 64 / r);
    if (G.vertices_.size() >= (std::uint64_t{1} << bits))
        throw ScaleGuard("too many vertices for uniformity " + std::to_string(r));
    G.index_.bits_ = bits;

    const Vertex max_label = G.vertices_.empty() ? 0 : G.vertices_.back();
    G.label_to_local_.assign(static_cast<std::size_t>(max_label) + 1, UINT32_MAX);
    for (std::uint32_t i = 0; i < G.vertices_.size(); ++i) G.label_to_local_[G.vertices_[i]] = i;

    std::vector<std::pair<std::vector<std::uint32_t>, std::size_t>> locals;
    locals.reserve(edges.size());
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        std::vector<std::uint32_t> e;
        e.reserve(edges[ei].size());
        for (Vertex v : edges[ei]) {
            auto l = G.local(v);
            if (!l)
                throw InvalidEdge(EdgeError::VertexOutOfRange, ei,
                                  "edge " + std::to_string(ei) + ": vertex " + std::to_string(v) + " out of range");
            e.push_back(*l);
        }
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            throw InvalidEdge(EdgeError::RepeatedVertex, ei, "edge " + std::to_string(ei) + ": repeated vertex");
        if (e.size() != static_cast<std::size_t>(r))
            throw InvalidEdge(EdgeError::WrongCardinality, ei,
                              "edge " + std::to_string(ei) + ": expected " + std::to_string(r) + " vertices, got " +
                                  std::to_string(e.size()));
        locals.emplace_back(std::move(e), ei);
    }
    std::sort(locals.begin(), locals.end());
    for (std::size_t i = 1; i < locals.size(); ++i)
        if (locals[i].first == locals[i - 1].first)
            throw InvalidEdge(EdgeError::DuplicateEdge, locals[i].second,
                              "edge " + std::to_string(locals[i].second) + ": duplicate edge");

    G.num_edges_ = locals.size();
    G.edge_data_.reserve(locals.size() * static_cast<std::size_t>(r));
    for (auto& [e, _] : locals) G.edge_data_.insert(G.edge_data_.end(), e.begin(), e.end());
    G.finalize();
    return G;
}

void Hypergraph::finalize() {
    lazy_ = std::make_shared<LazyTables>();
    const auto r = static_cast<std::size_t>(r_);
    vertex_degree_.assign(vertices_.size(), 0);
    for (auto v : edge_data_) ++vertex_degree_[v];

    index_.keys_.clear();
    index_.sizes_.clear();
    index_.degrees_.clear();
    index_.offsets_.assign(r + 2, 0);
    max_degree_by_size_.assign(r + 1, 0);
    if (index_.bits_ == 0) index_.bits_ = std::min(32, 64 / r_);

    std::vector<SubsetKey> scratch;
    for (int j = 1; j <= r_; ++j) {
        index_.offsets_[j] = index_.keys_.size();
        scratch.clear();
        scratch.reserve(num_edges_ * binomial(r_, j));
        for (std::size_t e = 0; e < num_edges_; ++e) {
            auto ed = edge(e);
            for (unsigned mask = 1; mask < (1u << r_); ++mask) {
                if (std::popcount(mask) != j) continue;
                SubsetKey key = 0;
                int slot = 0;
                for (int b = 0; b < r_; ++b)
                    if (mask >> b & 1u)
                        key |= static_cast<SubsetKey>(ed[b] + 1) << (index_.bits_ * slot++);
                scratch.push_back(key);
            }
        }
        std::sort(scratch.begin(), scratch.end());
        for (std::size_t i = 0; i < scratch.size();) {
            std::size_t k = i;
            while (k < scratch.size() && scratch[k] == scratch[i]) ++k;
            index_.keys_.push_back(scratch[i]);
            index_.sizes_.push_back(static_cast<std::uint8_t>(j));
            const auto deg = static_cast<std::uint32_t>(k - i);
            index_.degrees_.push_back(deg);
            max_degree_by_size_[j] = std::max(max_degree_by_size_[j], deg);
            i = k;
        }
    }
    index_.offsets_[r + 1] = index_.keys_.size();
}

Hypergraph Hypergraph::induced(std::span<const Vertex> U) const {
    VertexSet keep = make_set(std::vector<Vertex>(U.begin(), U.end()));
    std::vector<std::uint8_t> in(vertices_.size(), 0);
    for (Vertex v : keep) {
        auto l = local(v);
        if (!l) throw ArgumentError("induced: vertex " + std::to_string(v) + " not in graph");
        in[*l] = 1;
    }
    std::vector<std::vector<Vertex>> edges;
    for (std::size_t e = 0; e < num_edges_; ++e) {
        auto ed = edge(e);
        if (std::all_of(ed.begin(), ed.end(), [&](std::uint32_t v) { return in[v] != 0; }))
            edges.push_back(edge_labels(e));
    }
    return on_vertices(std::move(keep), r_, edges);
}

std::optional<std::uint32_t> Hypergraph::local(Vertex label) const {
    if (label >= label_to_local_.size()) return std::nullopt;
    auto l = label_to_local_[label];
    if (l == UINT32_MAX) return std::nullopt;
    return l;
}

VertexSet Hypergraph::edge_labels(std::size_t e) const {
    VertexSet out;
    for (auto v : edge(e)) out.push_back(vertices_[v]);
    return out;
}

std::vector<VertexSet> Hypergraph::edge_list() const {
    std::vector<VertexSet> out;
    out.reserve(num_edges_);
    for (std::size_t e = 0; e < num_edges_; ++e) out.push_back(edge_labels(e));
    return out;
}

double Hypergraph::average_degree() const {
    if (vertices_.empty()) return 0.0;
    return static_cast<double>(degree_sum()) / static_cast<double>(vertices_.size());
}

SubsetKey Hypergraph::pack_labels(std::span<const Vertex> sigma) const {
    std::vector<std::uint32_t> l;
    for (Vertex v : sigma) {
        auto x = local(v);
        if (!x) return 0;
        l.push_back(*x);
    }
    std::sort(l.begin(), l.end());
    return index_.pack(l);
}

VertexSet Hypergraph::unpack_labels(SubsetKey key) const {
    VertexSet out;
    for (auto l : index_.unpack(key)) out.push_back(vertices_[l]);
    return out;
}

std::uint32_t Hypergraph::degree(std::span<const Vertex> sigma) const {
    VertexSet s = make_set(std::vector<Vertex>(sigma.begin(), sigma.end()));
    if (s.size() != sigma.size()) throw ArgumentError("degree: repeated vertex in subset");
    if (s.empty() || s.size() > static_cast<std::size_t>(r_)) throw ArgumentError("degree: need 1 <= |sigma| <= r");
    for (Vertex v : s)
        if (!has_vertex(v)) return 0;
    auto pos = index_.find(pack_labels(s), static_cast<int>(s.size()));
    return pos == SubsetIndex::npos ? 0 : index_.degree(pos);
}

std::uint32_t Hypergraph::max_superset_degree(std::span<const Vertex> sigma, int j) const {
    VertexSet s = make_set(std::vector<Vertex>(sigma.begin(), sigma.end()));
    if (s.size() != sigma.size()) throw ArgumentError("max_superset_degree: repeated vertex in subset");
    if (s.empty() || j > r_ || static_cast<int>(s.size()) > j)
        throw ArgumentError("max_superset_degree: need 1 <= |sigma| <= j <= r");
    for (Vertex v : s)
        if (!has_vertex(v)) return 0;
    auto pos = index_.find(pack_labels(s), static_cast<int>(s.size()));
    return pos == SubsetIndex::npos ? 0 : superset_degree_at(pos, j);
}

const Hypergraph::RunTables& Hypergraph::run_tables() const {
    std::call_once(lazy_->run_once, [this] {
        auto& t = lazy_->run;
        const std::size_t masks = std::size_t{1} << r_;
        t.subset_pos.assign(num_edges_ * masks, SubsetIndex::npos);
        std::vector<std::uint32_t> sub;
        for (std::size_t e = 0; e < num_edges_; ++e) {
            auto ed = edge(e);
            for (unsigned mask = 1; mask < masks; ++mask) {
                sub.clear();
                for (int b = 0; b < r_; ++b)
                    if (mask >> b & 1u) sub.push_back(ed[b]);
                t.subset_pos[e * masks + mask] = index_.find(index_.pack(sub), static_cast<int>(sub.size()));
            }
        }
        const std::size_t n = vertices_.size();
        t.slot_offsets.assign(static_cast<std::size_t>(r_), std::vector<std::uint32_t>(n + 1, 0));
        t.slot_edges.assign(static_cast<std::size_t>(r_), std::vector<std::uint32_t>(num_edges_));
        for (int s = 0; s < r_; ++s) {
            auto& off = t.slot_offsets[s];
            for (std::size_t e = 0; e < num_edges_; ++e) ++off[edge(e)[s] + 1];
            std::partial_sum(off.begin(), off.end(), off.begin());
            std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
            for (std::size_t e = 0; e < num_edges_; ++e)
                t.slot_edges[s][fill[edge(e)[s]]++] = static_cast<std::uint32_t>(e);
        }
    });
    return lazy_->run;
}

const Hypergraph::SupersetTable& Hypergraph::superset_table() const {
    std::call_once(lazy_->sup_once, [this] {
        const auto& rt = run_tables();
        auto& sup = lazy_->sup.sup;
        const std::size_t stride = static_cast<std::size_t>(r_) + 1;
        sup.assign(index_.size() * stride, 0);
        const std::size_t masks = std::size_t{1} << r_;
        for (std::size_t e = 0; e < num_edges_; ++e) {
            const std::uint32_t* pos = rt.subset_pos.data() + e * masks;
            for (unsigned big = 1; big < masks; ++big) {
                const std::uint32_t dbig = index_.degree(pos[big]);
                const int jbig = std::popcount(big);
                // every non-empty submask of `big`
                for (unsigned small = big; small != 0; small = (small - 1) & big) {
                    auto& slot = sup[pos[small] * stride + static_cast<std::size_t>(jbig)];
                    slot = std::max(slot, dbig);
                }
            }
        }
    });
    return lazy_->sup;
}

std::uint32_t Hypergraph::superset_degree_at(std::uint32_t pos, int j) const {
    if (j > r_ || j < index_.subset_size(pos)) return 0;
    const auto& t = superset_table();
    return t.sup[static_cast<std::size_t>(pos) * (static_cast<std::size_t>(r_) + 1) + static_cast<std::size_t>(j)];
}

std::span<const std::uint32_t> Hypergraph::edges_at(int slot, std::uint32_t v) const {
    const auto& t = run_tables();
    const auto& off = t.slot_offsets[slot];
    return {t.slot_edges[slot].data() + off[v], off[v + 1] - off[v]};
}

std::uint32_t Hypergraph::subset_pos(std::size_t e, unsigned mask) const {
    return run_tables().subset_pos[(e << r_) + mask];
}

// ---------------------------------------------------------------------------
// Measures

std::uint64_t degree_mass(const Hypergraph& G, std::span<const Vertex> S) {
    std::uint64_t total = 0;
    for (Vertex v : S) {
        auto l = G.local(v);
        if (!l) throw ArgumentError("vertex " + std::to_string(v) + " not in graph");
        total += G.vertex_degree(*l);
    }
    return total;
}

double mu(const Hypergraph& G, std::span<const Vertex> S) {
    if (G.empty()) throw DegenerateInstance("degree measure undefined: hypergraph has no edges");
    return static_cast<double>(degree_mass(G, S)) / static_cast<double>(G.degree_sum());
}

CodegreeBreakdown codegree_function(const Hypergraph& G, double tau) {
    if (!(tau > 0)) throw ArgumentError("codegree_function: tau must be positive");
    if (G.empty()) throw DegenerateInstance("co-degree function undefined: hypergraph has no edges");
    const int r = G.r();
    CodegreeBreakdown out;
    out.tau = tau;
    out.delta_j.assign(static_cast<std::size_t>(r) + 1, 0.0);
    const auto nd = static_cast<double>(G.degree_sum());
    const auto& idx = G.index();
    for (int j = 2; j <= r; ++j) {
        std::uint64_t sum = 0;
        for (std::size_t p = idx.level_begin(1); p < idx.level_end(1); ++p)
            sum += G.superset_degree_at(static_cast<std::uint32_t>(p), j);
        out.delta_j[j] = static_cast<double>(sum) / (ipow(tau, j - 1) * nd);
    }
    double acc = 0;
    for (int j = 2; j <= r; ++j)
        acc += std::ldexp(out.delta_j[j], -static_cast<int>(binomial(j - 1, 2)));
    out.delta = std::ldexp(acc, static_cast<int>(binomial(r, 2)) - 1);
    return out;
}

std::optional<double> find_tau(const Hypergraph& G, double zeta, double tau_lo) {
    if (!(zeta > 0)) throw ArgumentError("find_tau: zeta must be positive");
    if (!(tau_lo > 0) || tau_lo > 1) throw ArgumentError("find_tau: tau_lo must lie in (0, 1]");
    auto delta = [&](double t) { return codegree_function(G, t).delta; };
    if (delta(1.0) > zeta) return std::nullopt;
    if (delta(tau_lo) <= zeta) return tau_lo;
    double lo = tau_lo, hi = 1.0;  // delta(lo) > zeta >= delta(hi)
    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (delta(mid) <= zeta)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double weak_delta(const Hypergraph& G, double tau) {
    if (!(tau > 0)) throw ArgumentError("weak_delta: tau must be positive");
    if (G.empty()) throw DegenerateInstance("weak delta undefined: hypergraph has no edges");
    const double d = G.average_degree();
    double best = 0;
    for (int j = 2; j <= G.r(); ++j) {
        const auto dj = G.max_degree_of_size(j);
        if (dj == 0) continue;
        best = std::max(best, static_cast<double>(dj) / (d * ipow(tau, j - 1)));
    }
    return best;
}

SparsityRecord independence_and_sparsity(const Hypergraph& G, std::span<const Vertex> I) {
    const std::size_t n = G.n();
    std::vector<std::uint8_t> in(n, 0);
    for (Vertex v : I) {
        auto l = G.local(v);
        if (!l) throw ArgumentError("vertex " + std::to_string(v) + " not in graph");
        in[*l] = 1;
    }
    std::vector<std::uint32_t> inside;
    for (std::size_t e = 0; e < G.num_edges(); ++e) {
        auto ed = G.edge(e);
        if (std::all_of(ed.begin(), ed.end(), [&](std::uint32_t v) { return in[v] != 0; }))
            inside.push_back(static_cast<std::uint32_t>(e));
    }
    SparsityRecord rec;
    rec.edges_within = inside.size();
    rec.is_independent = inside.empty();

    std::vector<std::vector<std::uint32_t>> incident(n);
    std::vector<std::uint32_t> deg(n, 0);
    for (auto e : inside)
        for (auto v : G.edge(e)) {
            incident[v].push_back(e);
            ++deg[v];
        }
    std::vector<std::uint8_t> edge_alive(G.num_edges(), 0);
    for (auto e : inside) edge_alive[e] = 1;
    std::vector<std::uint8_t> alive = in;
    std::size_t remaining = static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
    while (remaining > 0) {
        std::size_t best = n;
        for (std::size_t v = 0; v < n; ++v)  // local order = label order, so ties go to the smallest label
            if (alive[v] && (best == n || deg[v] < deg[best])) best = v;
        rec.degeneracy = std::max(rec.degeneracy, deg[best]);
        alive[best] = 0;
        --remaining;
        for (auto e : incident[best]) {
            if (!edge_alive[e]) continue;
            edge_alive[e] = 0;
            for (auto u : G.edge(e)) --deg[u];
        }
    }
    return rec;
}

Hypergraph random_hypergraph(std::size_t n, int r, std::size_t edges, std::uint64_t seed) {
    if (r < 1 || static_cast<std::size_t>(r) > n) throw ArgumentError("random_hypergraph: need 1 <= r <= n");
    if (edges > binomial(static_cast<int>(n), r)) throw ArgumentError("random_hypergraph: too many edges requested");
    Rng rng(seed);
    std::set<std::vector<Vertex>> chosen;
    std::vector<std::vector<Vertex>> out;
    while (out.size() < edges) {
        std::vector<Vertex> e;
        while (e.size() < static_cast<std::size_t>(r)) {
            auto v = static_cast<Vertex>(rng.below(n) + 1);
            if (std::find(e.begin(), e.end(), v) == e.end()) e.push_back(v);
        }
        std::sort(e.begin(), e.end());
        if (chosen.insert(e).second) out.push_back(std::move(e));
    }
    return Hypergraph::build(n, r, out);
}

// ---------------------------------------------------------------------------
// Text IO

Hypergraph read_hypergraph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::size_t n = 0;
    int r = 0;
    std::vector<std::vector<Vertex>> edges;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        if (!have_header) {
            long long nn = -1, rr = -1;
            if (!(ls >> nn >> rr) || nn < 0 || rr < 1)
                throw ParseError("line " + std::to_string(lineno) + ": expected header \"n r\"");
            std::string extra;
            if (ls >> extra) throw ParseError("line " + std::to_string(lineno) + ": trailing text after header");
            n = static_cast<std::size_t>(nn);
            r = static_cast<int>(rr);
            have_header = true;
            continue;
        }
        std::vector<Vertex> e;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || v == 0 || v > UINT32_MAX)
                throw ParseError("line " + std::to_string(lineno) + ": bad vertex label '" + tok + "'");
            e.push_back(static_cast<Vertex>(v));
        }
        edges.push_back(std::move(e));
    }
    if (!have_header) throw ParseError("missing \"n r\" header");
    return Hypergraph::build(n, r, edges);
}

Hypergraph read_hypergraph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    return read_hypergraph(f);
}

void write_hypergraph(std::ostream& out, const Hypergraph& G) {
    const Vertex n = G.vertices().empty() ? 0 : G.vertices().back();
    out << n << ' ' << G.r() << '\n';
    for (std::size_t e = 0; e < G.num_edges(); ++e) {
        auto lab = G.edge_labels(e);
        for (std::size_t i = 0; i < lab.size(); ++i) out << (i ? " " : "") << lab[i];
        out << '\n';
    }
}

}  // namespace hcont
