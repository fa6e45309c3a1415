#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hcont/hypergraph.hpp"
#include "hcont/iterate.hpp"
#include "hcont/report.hpp"

namespace hcont {

using Int = std::int64_t;
using Matrix = std::vector<std::vector<Int>>;

/// Exact rational with positive denominator, always reduced.
struct Rational {
    Int num = 0;
    Int den = 1;
    Rational() = default;
    Rational(Int n, Int d = 1);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b);
};
std::string to_string(const Rational& q);

/// F_p, [N] or a product of cyclic groups Z_{n_1} x ... x Z_{n_m}.
/// Elements are addressed by an index in [0, size()); for [N] index i is the
/// integer i+1, for a group the index is the mixed-radix code with the first
/// factor most significant.
class GroundSet {
public:
    enum class Kind { PrimeField, IntegerRange, AbelianGroup };

    static GroundSet prime_field(Int p);
    static GroundSet integer_range(Int N);
    static GroundSet abelian_group(std::vector<Int> factors);

    Kind kind() const { return kind_; }
    /// p, N, or the cyclic factors.
    const std::vector<Int>& params() const { return params_; }
    std::size_t size() const { return size_; }
    /// lcm of the factors; p for a field; 0 for [N].
    Int exponent() const;

    /// Coordinates of element `idx`: {value} for fields and [N], one residue per factor for groups.
    std::vector<Int> coords(std::size_t idx) const;
    std::optional<std::size_t> index_of(const std::vector<Int>& coords) const;
    /// "3" for fields and [N], "1:0:2" for groups.
    std::string format(std::size_t idx) const;
    std::size_t parse_element(const std::string& token) const;
    /// "Fp 5", "ZN 10" or "AB 2 4".
    std::string spec() const;

private:
    Kind kind_ = Kind::PrimeField;
    std::vector<Int> params_;
    std::size_t size_ = 0;
};

const char* to_string(GroundSet::Kind k);
bool is_prime(Int n);

/// Discounted solutions: an explicit list or a named convention.
enum class ZRule {
    Explicit,
    NoRepeat,    // x with two equal coordinates
    NoPairSwap,  // r = 4 and {x_1,x_2} = {x_3,x_4} as multisets
};

struct LinearSystem {
    GroundSet F = GroundSet::prime_field(2);
    Matrix A;                            // k x r
    std::vector<std::vector<Int>> b;     // k entries, each in coordinate form
    ZRule z_rule = ZRule::Explicit;
    std::vector<std::vector<std::size_t>> Z;  // explicit vectors of element indices

    int k() const { return static_cast<int>(A.size()); }
    int r() const { return A.empty() ? 0 : static_cast<int>(A[0].size()); }
    /// x (element indices) lies in Z.
    bool discounted(const std::vector<std::size_t>& x) const;
    /// Ax = b evaluated in F; for [N] over the integers.
    bool satisfies(const std::vector<std::size_t>& x) const;
};

/// (F, A) with b = 0 and the given Z rule.
LinearSystem make_system(const GroundSet& F, const Matrix& A, ZRule z = ZRule::Explicit);
/// x_i - 2x_{i+1} + x_{i+2} = 0 for i = 1..l-2.
Matrix ap_matrix(int l);

/// "k r <field-spec>", k rows of A, b, then optional "Z <rule>" or "Z" and
/// explicit vectors. '#' starts a comment.
LinearSystem read_system(std::istream& in);
LinearSystem read_system_file(const std::string& path);
void write_system(std::ostream& out, const LinearSystem& sys);

// ---------------------------------------------------------------------------
// Rank machinery.

/// Gaussian rank modulo a prime.
int rank_mod_p(const Matrix& A, Int p);
/// Rank over the rationals by fraction-free elimination.
int rank_rational(const Matrix& A);
/// Smith normal form diagonal (non-zero invariant factors, in order).
std::vector<Int> smith_invariants(const Matrix& A);
/// A with columns in `removed` (0-based) deleted.
Matrix remove_columns(const Matrix& A, const std::vector<int>& removed);

struct RankRecord {
    std::optional<int> rank;  // absent for groups
    bool full_rank = false;
    std::vector<Int> invariants;  // groups only
};
/// Rows of A give k, so a k x 0 matrix is k empty rows.
RankRecord rank_and_fullrank(const Matrix& A, const GroundSet& F);

bool is_abundant(const Matrix& A, const GroundSet& F);

struct MRank {
    Rational value;
    std::vector<int> J;  // maximizing deleted columns (0-based), field and [N]
    int t = 0;           // group branch
};
/// Throws PreconditionError when A is not abundant.
MRank m_value(const Matrix& A, const GroundSet& F);

// ---------------------------------------------------------------------------
// Solutions.

/// Every x in F^r - Z with Ax = b, as element-index vectors in lexicographic order.
std::vector<std::vector<std::size_t>> solutions(const LinearSystem& sys, std::uint64_t guard = 50'000'000);
/// Number of x in F^r with Ax = b (Z ignored).
std::uint64_t count_all_solutions(const LinearSystem& sys, std::uint64_t guard = 50'000'000);

/// Vertex of element `idx` in part i (0-based): i|F| + idx + 1.
inline Vertex part_vertex(const LinearSystem& sys, int part, std::size_t idx) {
    return static_cast<Vertex>(static_cast<std::size_t>(part) * sys.F.size() + idx + 1);
}
Hypergraph build_solution_hypergraph(const LinearSystem& sys);

/// d(σ) ≤ 2γdτ^{|σ|-1} for 2 ≤ |σ| ≤ r with τ = |F|^{-1/m}/γ.
Report verify_degree_bound(const LinearSystem& sys, double gamma);

// ---------------------------------------------------------------------------
// Solution-free sets. Element sets are index sets inside [0, |F|).

using ElementSet = std::vector<std::size_t>;

/// Supports {x_1..x_r} of the counted solutions, deduplicated, as bitmasks.
std::vector<std::uint64_t> solution_supports(const LinearSystem& sys);
bool is_solution_free(const LinearSystem& sys, const ElementSet& I);
/// All solution-free subsets of F (|F| ≤ 22 for counting, ≤ 20 for listing).
std::uint64_t count_solution_free(const LinearSystem& sys);
std::vector<ElementSet> enumerate_solution_free(const LinearSystem& sys);
/// ex(F,A,b): maximum solution-free subset of `allowed` (|F| ≤ 64).
std::size_t max_solution_free(const std::vector<std::uint64_t>& supports, std::size_t size, std::uint64_t allowed);
std::size_t ex_value(const LinearSystem& sys);

struct ContainerConstants {
    double gamma = 0;
    double tau = 0;       // |F|^{-1/m}/γ, possibly > 1
    double tau_run = 0;   // min(τ, 1)
    double corollary_c = 0;
    bool vacuous = false;  // τ > 1
};
ContainerConstants solution_constants(const LinearSystem& sys, double eps);

struct SolutionContainers {
    ContainerConstants constants;
    MRank m;
    std::size_t edges = 0;      // e(G)
    double solution_cap = 0;    // ε e(G)
    ContainerCollection collection;  // fingerprints and containers in element indices
    Report report;
};

/// Containers for every solution-free I ⊆ F: I is lifted to all r parts,
/// the weak chain runs on G(F,A,b,Z), and C_D = π_1(D) ∩ ... ∩ π_r(D).
SolutionContainers solution_free_containers(const LinearSystem& sys, double eps, int jobs = 0);
/// Same, over an explicit family.
SolutionContainers solution_free_containers(const LinearSystem& sys, double eps, const std::vector<ElementSet>& family,
                                            int jobs = 0);

struct CountComparison {
    std::uint64_t exact = 0;
    double log2_exact = 0;
    std::size_t ex = 0;
    double log2_bound = 0;  // log2 |C| + max |C|
    std::size_t containers = 0;
    std::size_t max_container = 0;
};
CountComparison compare_counts(const LinearSystem& sys, const SolutionContainers& sc);

/// Smallest prime in [4k!|A|^k N, 8k!|A|^k N].
Int embedding_prime(const Matrix& A, Int N);
/// Every x in [N]^r with Ax = b (mod p) satisfies Ax = b.
bool embedding_sound(const LinearSystem& sys, Int p);

// ---------------------------------------------------------------------------

struct SparsePoint {
    double p = 0;
    std::vector<std::size_t> max_sizes;  // per trial
    double mean_normalized = 0;          // mean max/(p|F|)
    double min_normalized = 0;
    double max_normalized = 0;
};
struct SparseSummary {
    std::size_t ground = 0;
    std::size_t ex = 0;
    double m = 0;
    std::vector<SparsePoint> points;
};
/// Samples X ⊆ F with P(x ∈ X) = p and records the maximum solution-free
/// subset of X; trial t at grid point i uses derive_seed(seed, i, t).
SparseSummary sparse_random_experiment(const LinearSystem& sys, const std::vector<double>& p_grid, int trials,
                                       std::uint64_t seed, int jobs = 0);
void write_sparse(std::ostream& out, const SparseSummary& s);

}  // namespace hcont
