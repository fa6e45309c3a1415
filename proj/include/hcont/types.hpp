#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcont {

/// Vertex label. Labels are 1-based and keep their meaning across induced subgraphs.
using Vertex = std::uint32_t;

/// Sorted, duplicate-free list of vertex labels.
using VertexSet = std::vector<Vertex>;

// ---------------------------------------------------------------------------
// Error types. The CLI maps these onto exit codes.

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a measure or threshold is requested on a hypergraph without edges.
struct DegenerateInstance : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised when a brute-force routine would exceed its desk-scale limit.
struct ScaleGuard : std::length_error {
    using std::length_error::length_error;
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Vertex-set helpers. All inputs are assumed sorted and unique.

inline VertexSet make_set(std::vector<Vertex> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool contains(std::span<const Vertex> s, Vertex v) {
    return std::binary_search(s.begin(), s.end(), v);
}

inline bool is_subset(std::span<const Vertex> a, std::span<const Vertex> b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline VertexSet set_union(std::span<const Vertex> a, std::span<const Vertex> b) {
    VertexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_intersection(std::span<const Vertex> a, std::span<const Vertex> b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_difference(std::span<const Vertex> a, std::span<const Vertex> b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// Elements of `s` with label at most `w`.
inline VertexSet prefix(std::span<const Vertex> s, Vertex w) {
    return VertexSet(s.begin(), std::upper_bound(s.begin(), s.end(), w));
}

inline VertexSet range_set(Vertex first, Vertex last) {
    VertexSet out;
    for (Vertex v = first; v <= last && last != 0; ++v) out.push_back(v);
    return out;
}

std::string format_set(std::span<const Vertex> s);

// ---------------------------------------------------------------------------
// Seeded randomness. mt19937_64 output is fixed by the standard; the helpers
// below avoid the implementation-defined std distributions so that reports
// are byte-identical across standard libraries.

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw ArgumentError("Rng::below: empty range");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent per-task seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(seed ^ mix_seed(a)) ^ b);
}

/// x^k by repeated multiplication, so results do not depend on libm's pow.
inline double ipow(double x, int k) {
    if (k < 0) return 1.0 / ipow(x, -k);
    double result = 1.0;
    double base = x;
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t out = 1;
    for (int i = 1; i <= k; ++i) out = out * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return out;
}

inline std::uint64_t factorial(int n) {
    std::uint64_t out = 1;
    for (int i = 2; i <= n; ++i) out *= static_cast<std::uint64_t>(i);
    return out;
}

}  // namespace hcont
