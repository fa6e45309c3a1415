#include "hcont/lineq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>

#include <omp.h>

namespace hcont {

namespace {

Int floor_mod(Int a, Int m) {
    const Int r = a % m;
    return r < 0 ? r + m : r;
}

Int mod_inverse(Int a, Int p) {
    Int t = 0, nt = 1, r = p, nr = floor_mod(a, p);
    while (nr != 0) {
        const Int q = r / nr;
        t = std::exchange(nt, t - q * nt);
        r = std::exchange(nr, r - q * nr);
    }
    return floor_mod(t, p);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

Int parse_int(const std::string& tok) {
    std::size_t pos = 0;
    Int v;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + tok + "'");
    }
    if (pos != tok.size()) throw ParseError("expected an integer, got '" + tok + "'");
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------

Rational::Rational(Int n, Int d) {
    if (d == 0) throw ArgumentError("rational with zero denominator");
    if (d < 0) n = -n, d = -d;
    const Int g = std::gcd(n, d);
    num = g ? n / g : n;
    den = g ? d / g : d;
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

std::string to_string(const Rational& q) {
    return q.den == 1 ? std::to_string(q.num) : std::to_string(q.num) + "/" + std::to_string(q.den);
}

bool is_prime(Int n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (Int i = 5; i * i <= n; i += 6)
        if (n % i == 0 || n % (i + 2) == 0) return false;
    return true;
}

constexpr std::size_t kMaxGround = 1'000'000;

GroundSet GroundSet::prime_field(Int p) {
    if (!is_prime(p)) throw ArgumentError("field size " + std::to_string(p) + " is not prime");
    if (static_cast<std::uint64_t>(p) > kMaxGround) throw ScaleGuard("field too large");
    GroundSet F;
    F.kind_ = Kind::PrimeField;
    F.params_ = {p};
    F.size_ = static_cast<std::size_t>(p);
    return F;
}

GroundSet GroundSet::integer_range(Int N) {
    if (N < 1) throw ArgumentError("[N] needs N >= 1");
    if (static_cast<std::uint64_t>(N) > kMaxGround) throw ScaleGuard("range too large");
    GroundSet F;
    F.kind_ = Kind::IntegerRange;
    F.params_ = {N};
    F.size_ = static_cast<std::size_t>(N);
    return F;
}

GroundSet GroundSet::abelian_group(std::vector<Int> factors) {
    if (factors.empty()) throw ArgumentError("group needs at least one cyclic factor");
    std::size_t size = 1;
    for (Int n : factors) {
        if (n < 2) throw ArgumentError("cyclic factors must be >= 2");
        size *= static_cast<std::size_t>(n);
        if (size > kMaxGround) throw ScaleGuard("group too large");
    }
    GroundSet F;
    F.kind_ = Kind::AbelianGroup;
    F.params_ = std::move(factors);
    F.size_ = size;
    return F;
}

Int GroundSet::exponent() const {
    if (kind_ == Kind::IntegerRange) return 0;
    Int e = 1;
    for (Int n : params_) e = std::lcm(e, n);
    return e;
}

std::vector<Int> GroundSet::coords(std::size_t idx) const {
    if (idx >= size_) throw ArgumentError("element index out of range");
    switch (kind_) {
        case Kind::PrimeField: return {static_cast<Int>(idx)};
        case Kind::IntegerRange: return {static_cast<Int>(idx) + 1};
        case Kind::AbelianGroup: break;
    }
    std::vector<Int> c(params_.size());
    for (std::size_t t = params_.size(); t-- > 0;) {
        c[t] = static_cast<Int>(idx % static_cast<std::size_t>(params_[t]));
        idx /= static_cast<std::size_t>(params_[t]);
    }
    return c;
}

std::optional<std::size_t> GroundSet::index_of(const std::vector<Int>& c) const {
    switch (kind_) {
        case Kind::PrimeField:
            if (c.size() != 1) return std::nullopt;
            return static_cast<std::size_t>(floor_mod(c[0], params_[0]));
        case Kind::IntegerRange:
            if (c.size() != 1 || c[0] < 1 || c[0] > params_[0]) return std::nullopt;
            return static_cast<std::size_t>(c[0] - 1);
        case Kind::AbelianGroup: break;
    }
    if (c.size() != params_.size()) return std::nullopt;
    std::size_t idx = 0;
    for (std::size_t t = 0; t < params_.size(); ++t)
        idx = idx * static_cast<std::size_t>(params_[t]) + static_cast<std::size_t>(floor_mod(c[t], params_[t]));
    return idx;
}

std::string GroundSet::format(std::size_t idx) const {
    const auto c = coords(idx);
    std::string s;
    for (std::size_t t = 0; t < c.size(); ++t) s += (t ? ":" : "") + std::to_string(c[t]);
    return s;
}

namespace {

std::vector<Int> parse_coords(const std::string& token) {
    std::vector<Int> c;
    std::size_t start = 0;
    while (true) {
        const auto colon = token.find(':', start);
        c.push_back(parse_int(token.substr(start, colon - start)));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    return c;
}

}  // namespace

std::size_t GroundSet::parse_element(const std::string& token) const {
    auto idx = index_of(parse_coords(token));
    if (!idx) throw ParseError("'" + token + "' is not an element of " + spec());
    return *idx;
}

std::string GroundSet::spec() const {
    std::string s = kind_ == Kind::PrimeField ? "Fp" : kind_ == Kind::IntegerRange ? "ZN" : "AB";
    for (Int n : params_) s += " " + std::to_string(n);
    return s;
}

const char* to_string(GroundSet::Kind k) {
    switch (k) {
        case GroundSet::Kind::PrimeField: return "field";
        case GroundSet::Kind::IntegerRange: return "integers";
        case GroundSet::Kind::AbelianGroup: return "group";
    }
    return "?";
}

// ---------------------------------------------------------------------------

bool LinearSystem::discounted(const std::vector<std::size_t>& x) const {
    switch (z_rule) {
        case ZRule::Explicit: return std::binary_search(Z.begin(), Z.end(), x);
        case ZRule::NoRepeat:
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::size_t j = i + 1; j < x.size(); ++j)
                    if (x[i] == x[j]) return true;
            return false;
        case ZRule::NoPairSwap:
            return x.size() == 4 && std::minmax(x[0], x[1]) == std::minmax(x[2], x[3]);
    }
    return false;
}

namespace {

/// Row sums of A x per coordinate, compared with b.
struct Evaluator {
    const LinearSystem& sys;
    std::vector<std::vector<Int>> elem;  // coordinates per element
    std::size_t m = 1;                   // coordinates per element

    explicit Evaluator(const LinearSystem& s) : sys(s) {
        elem.reserve(s.F.size());
        for (std::size_t i = 0; i < s.F.size(); ++i) elem.push_back(s.F.coords(i));
        m = elem.empty() ? 1 : elem[0].size();
    }

    Int modulus(std::size_t t) const {
        switch (sys.F.kind()) {
            case GroundSet::Kind::PrimeField: return sys.F.params()[0];
            case GroundSet::Kind::IntegerRange: return 0;
            case GroundSet::Kind::AbelianGroup: return sys.F.params()[t];
        }
        return 0;
    }

    bool equal(Int value, Int target, std::size_t t) const {
        const Int q = modulus(t);
        return q == 0 ? value == target : floor_mod(value - target, q) == 0;
    }
};

void check_shape(const LinearSystem& sys) {
    const int k = sys.k(), r = sys.r();
    if (k < 1) throw ArgumentError("system needs k >= 1");
    for (const auto& row : sys.A)
        if (static_cast<int>(row.size()) != r) throw ArgumentError("ragged matrix");
    if (static_cast<int>(sys.b.size()) != k) throw ArgumentError("b must have k entries");
    const std::size_t m = sys.F.kind() == GroundSet::Kind::AbelianGroup ? sys.F.params().size() : 1;
    for (const auto& bi : sys.b)
        if (bi.size() != m) throw ArgumentError("b entries must match the ground set's coordinates");
    if (sys.z_rule == ZRule::NoPairSwap && r != 4) throw ArgumentError("nopairswap needs r = 4");
}

}  // namespace

bool LinearSystem::satisfies(const std::vector<std::size_t>& x) const {
    Evaluator ev(*this);
    for (int i = 0; i < k(); ++i)
        for (std::size_t t = 0; t < ev.m; ++t) {
            Int s = 0;
            for (int j = 0; j < r(); ++j) s += A[i][j] * ev.elem[x[j]][t];
            if (!ev.equal(s, b[i][t], t)) return false;
        }
    return true;
}

LinearSystem make_system(const GroundSet& F, const Matrix& A, ZRule z) {
    LinearSystem sys;
    sys.F = F;
    sys.A = A;
    const std::size_t m = F.kind() == GroundSet::Kind::AbelianGroup ? F.params().size() : 1;
    sys.b.assign(A.size(), std::vector<Int>(m, 0));
    sys.z_rule = z;
    check_shape(sys);
    return sys;
}

Matrix ap_matrix(int l) {
    if (l < 3) throw ArgumentError("progressions need length >= 3");
    Matrix A(static_cast<std::size_t>(l - 2), std::vector<Int>(static_cast<std::size_t>(l), 0));
    for (int i = 0; i + 2 < l; ++i) A[i][i] = 1, A[i][i + 1] = -2, A[i][i + 2] = 1;
    return A;
}

LinearSystem read_system(std::istream& in) {
    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        auto toks = split_ws(line);
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    if (lines.empty()) throw ParseError("empty system file");
    const auto& head = lines[0];
    if (head.size() < 4) throw ParseError("header must be 'k r <field-spec>'");
    const Int k = parse_int(head[0]), r = parse_int(head[1]);
    if (k < 1 || r < 1) throw ParseError("k and r must be positive");
    LinearSystem sys;
    try {
        if (head[2] == "Fp" && head.size() == 4)
            sys.F = GroundSet::prime_field(parse_int(head[3]));
        else if (head[2] == "ZN" && head.size() == 4)
            sys.F = GroundSet::integer_range(parse_int(head[3]));
        else if (head[2] == "AB") {
            std::vector<Int> f;
            for (std::size_t i = 3; i < head.size(); ++i) f.push_back(parse_int(head[i]));
            sys.F = GroundSet::abelian_group(f);
        } else
            throw ParseError("unknown field spec '" + head[2] + "'");
    } catch (const ArgumentError& e) {
        throw ParseError(e.what());
    }
    if (lines.size() < static_cast<std::size_t>(k) + 2) throw ParseError("missing rows of A or b");
    for (Int i = 0; i < k; ++i) {
        const auto& row = lines[1 + i];
        if (static_cast<Int>(row.size()) != r) throw ParseError("row " + std::to_string(i + 1) + " of A needs r entries");
        std::vector<Int> a;
        for (const auto& t : row) a.push_back(parse_int(t));
        sys.A.push_back(std::move(a));
    }
    const auto& bl = lines[1 + k];
    if (static_cast<Int>(bl.size()) != k) throw ParseError("b needs k entries");
    const std::size_t m = sys.F.kind() == GroundSet::Kind::AbelianGroup ? sys.F.params().size() : 1;
    for (const auto& t : bl) {
        auto c = parse_coords(t);
        if (c.size() != m) throw ParseError("b entry '" + t + "' has the wrong number of coordinates");
        sys.b.push_back(std::move(c));
    }
    std::size_t at = static_cast<std::size_t>(k) + 2;
    if (at < lines.size()) {
        const auto& z = lines[at];
        if (z[0] != "Z") throw ParseError("expected 'Z' section, got '" + z[0] + "'");
        if (z.size() == 2 && z[1] == "norepeat") {
            sys.z_rule = ZRule::NoRepeat;
        } else if (z.size() == 2 && z[1] == "nopairswap") {
            if (r != 4) throw ParseError("nopairswap needs r = 4");
            sys.z_rule = ZRule::NoPairSwap;
        } else if (z.size() != 1) {
            throw ParseError("unknown Z convention");
        }
        for (++at; at < lines.size(); ++at) {
            if (sys.z_rule != ZRule::Explicit) throw ParseError("vectors after a named Z convention");
            if (static_cast<Int>(lines[at].size()) != r) throw ParseError("Z vectors need r entries");
            std::vector<std::size_t> x;
            for (const auto& t : lines[at]) x.push_back(sys.F.parse_element(t));
            sys.Z.push_back(std::move(x));
        }
        std::sort(sys.Z.begin(), sys.Z.end());
        sys.Z.erase(std::unique(sys.Z.begin(), sys.Z.end()), sys.Z.end());
    }
    return sys;
}

LinearSystem read_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_system(in);
}

void write_system(std::ostream& out, const LinearSystem& sys) {
    out << sys.k() << ' ' << sys.r() << ' ' << sys.F.spec() << '\n';
    for (const auto& row : sys.A) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
        out << '\n';
    }
    for (std::size_t i = 0; i < sys.b.size(); ++i) {
        out << (i ? " " : "");
        for (std::size_t t = 0; t < sys.b[i].size(); ++t) out << (t ? ":" : "") << sys.b[i][t];
    }
    out << '\n';
    if (sys.z_rule == ZRule::NoRepeat) out << "Z norepeat\n";
    if (sys.z_rule == ZRule::NoPairSwap) out << "Z nopairswap\n";
    if (sys.z_rule == ZRule::Explicit && !sys.Z.empty()) {
        out << "Z\n";
        for (const auto& x : sys.Z) {
            for (std::size_t j = 0; j < x.size(); ++j) out << (j ? " " : "") << sys.F.format(x[j]);
            out << '\n';
        }
    }
}

// ---------------------------------------------------------------------------

int rank_mod_p(const Matrix& A, Int p) {
    if (A.empty()) return 0;
    Matrix M = A;
    for (auto& row : M)
        for (auto& x : row) x = floor_mod(x, p);
    const std::size_t rows = M.size(), cols = M[0].size();
    int rank = 0;
    for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
        std::size_t piv = static_cast<std::size_t>(rank);
        while (piv < rows && M[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(M[piv], M[rank]);
        const Int inv = mod_inverse(M[rank][c], p);
        for (auto& x : M[rank]) x = x * inv % p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == static_cast<std::size_t>(rank) || M[i][c] == 0) continue;
            const Int f = M[i][c];
            for (std::size_t j = 0; j < cols; ++j) M[i][j] = floor_mod(M[i][j] - f * M[rank][j], p);
        }
        ++rank;
    }
    return rank;
}

int rank_rational(const Matrix& A) {
    if (A.empty()) return 0;
    Matrix M = A;
    const std::size_t rows = M.size(), cols = M[0].size();
    int rank = 0;
    for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
        std::size_t piv = static_cast<std::size_t>(rank);
        while (piv < rows && M[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(M[piv], M[rank]);
        for (std::size_t i = static_cast<std::size_t>(rank) + 1; i < rows; ++i) {
            if (M[i][c] == 0) continue;
            const Int a = M[rank][c], f = M[i][c];
            Int g = 0;
            for (std::size_t j = 0; j < cols; ++j) {
                const __int128 v = static_cast<__int128>(M[i][j]) * a - static_cast<__int128>(M[rank][j]) * f;
                if (v > INT64_MAX || v < -INT64_MAX) throw ScaleGuard("rank_rational: entry overflow");
                M[i][j] = static_cast<Int>(v);
                g = std::gcd(g, M[i][j]);
            }
            if (g > 1)
                for (auto& x : M[i]) x /= g;
        }
        ++rank;
    }
    return rank;
}

std::vector<Int> smith_invariants(const Matrix& A) {
    if (A.empty() || A[0].empty()) return {};
    Matrix M = A;
    const std::size_t rows = M.size(), cols = M[0].size();
    std::vector<Int> diag;
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        while (true) {
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (M[i][j] != 0 && (pi == rows || std::abs(M[i][j]) < std::abs(M[pi][pj]))) pi = i, pj = j;
            if (pi == rows) return diag;
            std::swap(M[t], M[pi]);
            for (auto& row : M) std::swap(row[t], row[pj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                const Int q = M[i][t] / M[t][t];
                for (std::size_t j = t; j < cols; ++j) M[i][j] -= q * M[t][j];
                if (M[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                const Int q = M[t][j] / M[t][t];
                for (std::size_t i = t; i < rows; ++i) M[i][j] -= q * M[i][t];
                if (M[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (M[i][j] % M[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == rows) break;
            for (std::size_t j = t; j < cols; ++j) M[t][j] += M[bad][j];
        }
        diag.push_back(std::abs(M[t][t]));
    }
    return diag;
}

Matrix remove_columns(const Matrix& A, const std::vector<int>& removed) {
    Matrix out;
    for (const auto& row : A) {
        std::vector<Int> kept;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (std::find(removed.begin(), removed.end(), static_cast<int>(j)) == removed.end()) kept.push_back(row[j]);
        out.push_back(std::move(kept));
    }
    return out;
}

RankRecord rank_and_fullrank(const Matrix& A, const GroundSet& F) {
    const int k = static_cast<int>(A.size());
    RankRecord rec;
    switch (F.kind()) {
        case GroundSet::Kind::PrimeField:
            rec.rank = rank_mod_p(A, F.params()[0]);
            rec.full_rank = *rec.rank == k;
            break;
        case GroundSet::Kind::IntegerRange:
            rec.rank = rank_rational(A);
            rec.full_rank = *rec.rank == k;
            break;
        case GroundSet::Kind::AbelianGroup: {
            rec.invariants = smith_invariants(A);
            rec.full_rank = static_cast<int>(rec.invariants.size()) == k;
            for (Int d : rec.invariants)
                if (std::gcd(d, F.exponent()) != 1) rec.full_rank = false;
            break;
        }
    }
    return rec;
}

namespace {

/// Every subset of {0..r-1} of size j, as column lists.
std::vector<std::vector<int>> column_subsets(int r, int j) {
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
        if (std::popcount(mask) != j) continue;
        std::vector<int> J;
        for (int c = 0; c < r; ++c)
            if (mask >> c & 1u) J.push_back(c);
        out.push_back(std::move(J));
    }
    return out;
}

}  // namespace

bool is_abundant(const Matrix& A, const GroundSet& F) {
    if (A.empty()) return false;
    const int r = static_cast<int>(A[0].size());
    if (r < 2 || r > 20) return false;
    if (!rank_and_fullrank(A, F).full_rank) return false;
    for (const auto& J : column_subsets(r, 2))
        if (!rank_and_fullrank(remove_columns(A, J), F).full_rank) return false;
    return true;
}

MRank m_value(const Matrix& A, const GroundSet& F) {
    if (!is_abundant(A, F)) throw PreconditionError("matrix is not abundant");
    const int k = static_cast<int>(A.size());
    const int r = static_cast<int>(A[0].size());
    MRank out;
    if (F.kind() == GroundSet::Kind::AbelianGroup) {
        int t = 2;
        for (int j = 3; j <= r; ++j) {
            bool all = true;
            for (const auto& J : column_subsets(r, j))
                if (!rank_and_fullrank(remove_columns(A, J), F).full_rank) {
                    all = false;
                    break;
                }
            if (!all) break;
            t = j;
        }
        out.t = t;
        out.value = Rational(k + t - 1, t - 1);
        return out;
    }
    bool first = true;
    for (int j = 2; j <= r; ++j)
        for (const auto& J : column_subsets(r, j)) {
            const int rk = *rank_and_fullrank(remove_columns(A, J), F).rank;
            const Int den = j - 1 + rk - k;
            if (den <= 0) throw PreconditionError("m_value: non-positive denominator");
            const Rational q(j - 1, den);
            if (first || out.value < q) {
                out.value = q;
                out.J = J;
                first = false;
            }
        }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Calls visit(x) for every x in F^r with Ax = b, in lexicographic order.
template <class Visit>
void for_each_solution(const LinearSystem& sys, std::uint64_t guard, Visit&& visit) {
    check_shape(sys);
    const int k = sys.k(), r = sys.r();
    const std::size_t n = sys.F.size();
    double space = std::pow(static_cast<double>(n), r);
    if (space > static_cast<double>(guard)) throw ScaleGuard("solution enumeration exceeds " + std::to_string(guard));
    Evaluator ev(sys);
    const std::size_t m = ev.m;
    // partial[j][i*m+t] = Σ_{l<j} A[i][l] x_l coordinate t
    std::vector<std::vector<Int>> partial(static_cast<std::size_t>(r) + 1,
                                          std::vector<Int>(static_cast<std::size_t>(k) * m, 0));
    std::vector<std::size_t> x(static_cast<std::size_t>(r), 0);
    auto rec = [&](auto&& self, int j) -> void {
        if (j == r) {
            for (int i = 0; i < k; ++i)
                for (std::size_t t = 0; t < m; ++t)
                    if (!ev.equal(partial[r][i * m + t], sys.b[i][t], t)) return;
            visit(x);
            return;
        }
        for (std::size_t v = 0; v < n; ++v) {
            x[j] = v;
            for (int i = 0; i < k; ++i)
                for (std::size_t t = 0; t < m; ++t) {
                    Int s = partial[j][i * m + t] + sys.A[i][j] * ev.elem[v][t];
                    const Int q = ev.modulus(t);
                    partial[j + 1][i * m + t] = q ? floor_mod(s, q) : s;
                }
            self(self, j + 1);
        }
    };
    rec(rec, 0);
}

}  // namespace

std::vector<std::vector<std::size_t>> solutions(const LinearSystem& sys, std::uint64_t guard) {
    std::vector<std::vector<std::size_t>> out;
    for_each_solution(sys, guard, [&](const std::vector<std::size_t>& x) {
        if (!sys.discounted(x)) out.push_back(x);
    });
    return out;
}

std::uint64_t count_all_solutions(const LinearSystem& sys, std::uint64_t guard) {
    std::uint64_t c = 0;
    for_each_solution(sys, guard, [&](const std::vector<std::size_t>&) { ++c; });
    return c;
}

Hypergraph build_solution_hypergraph(const LinearSystem& sys) {
    const int r = sys.r();
    std::vector<std::vector<Vertex>> edges;
    for (const auto& x : solutions(sys)) {
        std::vector<Vertex> e;
        for (int i = 0; i < r; ++i) e.push_back(part_vertex(sys, i, x[i]));
        edges.push_back(std::move(e));
    }
    return Hypergraph::build(static_cast<std::size_t>(r) * sys.F.size(), r, edges);
}

namespace {

void require_container_preconditions(const LinearSystem& sys) {
    check_shape(sys);
    if (!is_abundant(sys.A, sys.F)) throw PreconditionError("not abundant: some pair-deleted submatrix loses full rank");
    const std::uint64_t all = count_all_solutions(sys);
    const std::uint64_t kept = solutions(sys).size();
    const double half = 0.5 * std::pow(static_cast<double>(sys.F.size()), sys.r() - sys.k());
    if (static_cast<double>(all - kept) > half)
        throw PreconditionError("discounted solutions exceed |F|^{r-k}/2");
}

}  // namespace

Report verify_degree_bound(const LinearSystem& sys, double gamma) {
    if (!(gamma > 0) || gamma > 1) throw ArgumentError("verify_degree_bound: need 0 < gamma <= 1");
    require_container_preconditions(sys);
    const auto G = build_solution_hypergraph(sys);
    if (G.empty()) throw DegenerateInstance("solution hypergraph has no edges");
    const auto m = m_value(sys.A, sys.F);
    const double tau = std::pow(static_cast<double>(sys.F.size()), -1.0 / m.value.value()) / gamma;
    const double d = G.average_degree();
    const bool asserted = sys.F.kind() != GroundSet::Kind::IntegerRange;
    Report rep;
    rep.info("degree", "tau = |F|^{-1/m}/gamma", tau, 1.0, "m=" + to_string(m.value));
    double worst = 0;
    for (int j = 2; j <= sys.r(); ++j) {
        const double ratio = G.max_degree_of_size(j) / (d * ipow(tau, j - 1));
        worst = std::max(worst, ratio);
        const std::string check = "max d(sigma)/(d tau^{j-1}) <= 2 gamma j=" + std::to_string(j);
        if (asserted)
            rep.check_le("degree", check, ratio, 2 * gamma);
        else
            rep.info("degree", check, ratio, 2 * gamma, "reported only over [N]");
    }
    rep.info("degree", "max ratio", worst, 2 * gamma);
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxMaskGround = 64;

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

/// Supports grouped by element for the incremental forbidden-set update.
struct SupportIndex {
    std::size_t n = 0;
    std::vector<std::uint64_t> supports;
    std::vector<std::vector<std::uint64_t>> by_element;
    std::uint64_t singletons = 0;

    SupportIndex(const std::vector<std::uint64_t>& s, std::size_t size) : n(size), supports(s), by_element(size) {
        for (auto e : supports) {
            if (std::popcount(e) == 1) singletons |= e;
            for (std::uint64_t rest = e; rest; rest &= rest - 1)
                by_element[static_cast<std::size_t>(std::countr_zero(rest))].push_back(e);
        }
    }

    /// Elements that become forbidden once v joins S (S excludes v).
    std::uint64_t forbidden_after(std::uint64_t S, std::size_t v) const {
        std::uint64_t f = 0;
        const std::uint64_t with = S | bit(v);
        for (auto e : by_element[v]) {
            const std::uint64_t rest = e & ~with;
            if (std::popcount(rest) == 1) f |= rest;
        }
        return f;
    }
};

std::uint64_t low_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : bit(n) - 1; }

}  // namespace

std::vector<std::uint64_t> solution_supports(const LinearSystem& sys) {
    if (sys.F.size() > kMaxMaskGround) throw ScaleGuard("supports need |F| <= 64");
    std::vector<std::uint64_t> all;
    for (const auto& x : solutions(sys)) {
        std::uint64_t m = 0;
        for (auto v : x) m |= bit(v);
        all.push_back(m);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::stable_sort(all.begin(), all.end(), [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });
    std::vector<std::uint64_t> minimal;
    for (auto e : all) {
        bool dominated = false;
        for (auto f : minimal)
            if ((f & e) == f) {
                dominated = true;
                break;
            }
        if (!dominated) minimal.push_back(e);
    }
    std::sort(minimal.begin(), minimal.end());
    return minimal;
}

bool is_solution_free(const LinearSystem& sys, const ElementSet& I) {
    std::vector<char> in(sys.F.size(), 0);
    for (auto v : I) in.at(v) = 1;
    for (const auto& x : solutions(sys)) {
        bool all = true;
        for (auto v : x) all = all && in[v];
        if (all) return false;
    }
    return true;
}

namespace {

template <class Visit>
void for_each_solution_free(const SupportIndex& idx, Visit&& visit) {
    auto rec = [&](auto&& self, std::uint64_t S, std::uint64_t forb, std::size_t from) -> void {
        visit(S);
        for (std::size_t v = from; v < idx.n; ++v) {
            if (forb & bit(v)) continue;
            self(self, S | bit(v), forb | idx.forbidden_after(S, v), v + 1);
        }
    };
    rec(rec, 0, idx.singletons, 0);
}

}  // namespace

std::uint64_t count_solution_free(const LinearSystem& sys) {
    if (sys.F.size() > 22) throw ScaleGuard("exact counting needs |F| <= 22");
    SupportIndex idx(solution_supports(sys), sys.F.size());
    std::uint64_t c = 0;
    for_each_solution_free(idx, [&](std::uint64_t) { ++c; });
    return c;
}

std::vector<ElementSet> enumerate_solution_free(const LinearSystem& sys) {
    if (sys.F.size() > 20) throw ScaleGuard("listing needs |F| <= 20");
    SupportIndex idx(solution_supports(sys), sys.F.size());
    std::vector<ElementSet> out;
    for_each_solution_free(idx, [&](std::uint64_t S) {
        ElementSet I;
        for (std::uint64_t m = S; m; m &= m - 1) I.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        out.push_back(std::move(I));
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t max_solution_free(const std::vector<std::uint64_t>& supports, std::size_t size, std::uint64_t allowed) {
    if (size > kMaxMaskGround) throw ScaleGuard("max_solution_free needs |F| <= 64");
    SupportIndex idx(supports, size);
    allowed &= low_mask(size) & ~idx.singletons;
    // Russian-doll search: best[v] is the optimum inside allowed ∩ [v, size).
    std::vector<std::size_t> best(size + 1, 0);
    std::size_t target = 0;
    auto above = [&](std::size_t v) { return v + 1 >= 64 ? std::uint64_t{0} : ~low_mask(v + 1); };
    auto dfs = [&](auto&& self, std::uint64_t S, std::uint64_t cand, std::size_t have) -> bool {
        if (have >= target) return true;
        while (cand) {
            if (have + static_cast<std::size_t>(std::popcount(cand)) < target) return false;
            const auto v = static_cast<std::size_t>(std::countr_zero(cand));
            if (have + best[v] < target) return false;
            cand &= cand - 1;
            const std::uint64_t next = cand & ~idx.forbidden_after(S, v);
            if (self(self, S | bit(v), next, have + 1)) return true;
        }
        return false;
    };
    for (std::size_t v = size; v-- > 0;) {
        best[v] = best[v + 1];
        if (!(allowed & bit(v))) continue;
        target = best[v + 1] + 1;
        const std::uint64_t cand = allowed & above(v) & ~idx.forbidden_after(0, v);
        if (dfs(dfs, bit(v), cand, 1)) best[v] = target;
    }
    return best[0];
}

std::size_t ex_value(const LinearSystem& sys) {
    return max_solution_free(solution_supports(sys), sys.F.size(), low_mask(sys.F.size()));
}

// ---------------------------------------------------------------------------

ContainerConstants solution_constants(const LinearSystem& sys, double eps) {
    const auto m = m_value(sys.A, sys.F);
    ContainerConstants k;
    k.corollary_c = corollary_constants(sys.r(), 1.0, eps).c;
    k.gamma = std::min(1.0, k.corollary_c / 2) * 0.5;
    k.tau = std::pow(static_cast<double>(sys.F.size()), -1.0 / m.value.value()) / k.gamma;
    k.vacuous = k.tau > 1;
    k.tau_run = std::min(k.tau, 1.0);
    return k;
}

SolutionContainers solution_free_containers(const LinearSystem& sys, double eps, int jobs) {
    if (sys.F.size() > 20) throw ScaleGuard("solution-free family enumeration needs |F| <= 20");
    return solution_free_containers(sys, eps, enumerate_solution_free(sys), jobs);
}

SolutionContainers solution_free_containers(const LinearSystem& sys, double eps, const std::vector<ElementSet>& family,
                                            int jobs) {
    if (!(eps > 0)) throw ArgumentError("epsilon must be positive");
    require_container_preconditions(sys);
    const int r = sys.r();
    const std::size_t n = sys.F.size();
    const auto G = build_solution_hypergraph(sys);
    const auto sols = solutions(sys);

    SolutionContainers out;
    out.m = m_value(sys.A, sys.F);
    out.constants = solution_constants(sys, eps);
    out.edges = G.num_edges();
    out.solution_cap = eps * static_cast<double>(G.num_edges());
    auto& rep = out.report;
    rep.info("system", "m_F(A)", out.m.value.value(), 0, to_string(out.m.value));
    rep.info("system", "e(G)", static_cast<double>(out.edges), std::pow(static_cast<double>(n), r - sys.k()));
    if (out.constants.vacuous)
        rep.unmet("system", "tau = |F|^{-1/m}/gamma <= 1", out.constants.tau, 1.0, "constants vacuous; run at tau=1");
    else
        rep.info("system", "tau = |F|^{-1/m}/gamma <= 1", out.constants.tau, 1.0);

    auto lift = [&](const VertexSet& S) {
        VertexSet J;
        for (int i = 0; i < r; ++i)
            for (auto v : S) J.push_back(part_vertex(sys, i, v));
        return make_set(std::move(J));
    };
    auto project_union = [&](const VertexSet& D) {
        VertexSet P;
        for (auto u : D) P.push_back(static_cast<Vertex>((u - 1) % n));
        return make_set(std::move(P));
    };
    auto project_meet = [&](const VertexSet& D) {
        std::vector<int> hits(n, 0);
        for (auto u : D) ++hits[(u - 1) % n];
        VertexSet C;
        for (std::size_t v = 0; v < n; ++v)
            if (hits[v] == r) C.push_back(static_cast<Vertex>(v));
        return C;
    };

    std::vector<VertexSet> fam;
    for (const auto& I : family) {
        VertexSet s;
        for (auto v : I) {
            if (v >= n) throw ArgumentError("family element outside F");
            s.push_back(static_cast<Vertex>(v));
        }
        fam.push_back(make_set(std::move(s)));
    }

    std::vector<ChainResult> results(fam.size());
    std::vector<Report> member(fam.size());
    std::exception_ptr error;
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
    const auto count = static_cast<std::ptrdiff_t>(fam.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            const auto& I = fam[i];
            ChainResult ch = iterate_corollary(G, out.constants.tau_run, eps, lift(I));
            Report& mr = member[i];
            const std::string subj = "I=" + format_set(I);
            for (const auto& l : ch.report.lines())
                if (l.status == Status::Fail) mr.add({subj + " " + l.subject, l.check, l.status, l.lhs, l.rhs, l.note});
            const VertexSet T = project_union(ch.T);
            const VertexSet C = project_meet(ch.C);
            mr.check_true(subj, "T subset of I", is_subset(T, I));
            mr.check_true(subj, "I subset of C_D", is_subset(I, C));
            mr.check_le(subj, "|T| <= |T'|", static_cast<double>(T.size()), static_cast<double>(ch.T.size()));
            ChainResult lifted = ch;
            lifted.T = lift(T);
            mr.check_true(subj, "D(S') = D", rebuild_from_union(G, lifted, ThresholdKind::Weak) == ch.C);
            std::vector<char> inC(n, 0);
            for (auto v : C) inC[v] = 1;
            std::size_t inside = 0;
            for (const auto& x : sols) {
                bool all = true;
                for (auto v : x) all = all && inC[v];
                inside += all;
            }
            if (ch.stalled || ch.aborted)
                mr.unmet(subj, "solutions in C^r - Z <= eps e(G)", static_cast<double>(inside), out.solution_cap,
                         ch.diagnostic);
            else
                mr.check_le(subj, "solutions in C^r - Z <= eps e(G)", static_cast<double>(inside), out.solution_cap);
            ch.T = T;
            ch.C = C;
            results[i] = std::move(ch);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    std::size_t stalled = 0;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        stalled += results[i].stalled;
        for (const auto& l : member[i].lines())
            if (l.status != Status::Pass) rep.add(l);
    }
    std::size_t passes = 0;
    for (const auto& m : member) passes += m.count(Status::Pass);
    rep.info("family", "member checks passed", static_cast<double>(passes), 0);
    rep.info("family", "stalled chains", static_cast<double>(stalled), static_cast<double>(fam.size()));
    out.collection = merge_chains(fam, results);
    const auto& col = out.collection;
    rep.check_le("family", "coverage failures", static_cast<double>(col.coverage_failures), 0);
    rep.check_le("family", "fingerprint conflicts", static_cast<double>(col.conflicts), 0);
    rep.info("family", "containers", static_cast<double>(col.size()), static_cast<double>(fam.size()));
    return out;
}

CountComparison compare_counts(const LinearSystem& sys, const SolutionContainers& sc) {
    CountComparison c;
    c.exact = count_solution_free(sys);
    c.log2_exact = std::log2(static_cast<double>(c.exact));
    c.ex = ex_value(sys);
    c.containers = sc.collection.size();
    c.max_container = sc.collection.max_container_size();
    c.log2_bound = std::log2(static_cast<double>(c.containers)) + static_cast<double>(c.max_container);
    return c;
}

Int embedding_prime(const Matrix& A, Int N) {
    const int k = static_cast<int>(A.size());
    Int abs_sum = 0;
    for (const auto& row : A)
        for (Int a : row) abs_sum += std::abs(a);
    __int128 lo = 4 * static_cast<__int128>(factorial(k)) * N;
    for (int i = 0; i < k; ++i) lo *= abs_sum;
    if (lo > static_cast<__int128>(1) << 50) throw ScaleGuard("embedding prime too large");
    for (Int p = static_cast<Int>(lo); p <= 2 * static_cast<Int>(lo); ++p)
        if (is_prime(p)) return p;
    throw PreconditionError("no prime in range");
}

bool embedding_sound(const LinearSystem& sys, Int p) {
    if (sys.F.kind() != GroundSet::Kind::IntegerRange) throw ArgumentError("embedding applies to [N]");
    bool sound = true;
    const int k = sys.k(), r = sys.r();
    const std::size_t n = sys.F.size();
    if (std::pow(static_cast<double>(n), r) > 5e7) throw ScaleGuard("embedding check too large");
    std::vector<std::size_t> x(static_cast<std::size_t>(r), 0);
    while (true) {
        bool congruent = true, exact = true;
        for (int i = 0; i < k; ++i) {
            Int s = 0;
            for (int j = 0; j < r; ++j) s += sys.A[i][j] * static_cast<Int>(x[j] + 1);
            congruent = congruent && floor_mod(s - sys.b[i][0], p) == 0;
            exact = exact && s == sys.b[i][0];
        }
        if (congruent && !exact) sound = false;
        int j = r - 1;
        while (j >= 0 && ++x[j] == n) x[j--] = 0;
        if (j < 0) break;
    }
    return sound;
}

// ---------------------------------------------------------------------------

SparseSummary sparse_random_experiment(const LinearSystem& sys, const std::vector<double>& p_grid, int trials,
                                       std::uint64_t seed, int jobs) {
    if (trials < 1) throw ArgumentError("trials must be positive");
    for (double p : p_grid)
        if (!(p >= 0) || p > 1) throw ArgumentError("probabilities must lie in [0,1]");
    const std::size_t n = sys.F.size();
    const auto supports = solution_supports(sys);
    SparseSummary out;
    out.ground = n;
    out.ex = max_solution_free(supports, n, low_mask(n));
    try {
        out.m = m_value(sys.A, sys.F).value.value();
    } catch (const PreconditionError&) {
        out.m = 0;
    }
    const std::size_t points = p_grid.size();
    std::vector<std::size_t> sizes(points * static_cast<std::size_t>(trials));
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
    const auto total = static_cast<std::ptrdiff_t>(sizes.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t at = 0; at < total; ++at) {
        const std::size_t i = static_cast<std::size_t>(at) / static_cast<std::size_t>(trials);
        const std::size_t t = static_cast<std::size_t>(at) % static_cast<std::size_t>(trials);
        Rng rng(derive_seed(seed, i, t));
        std::uint64_t X = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (rng.bernoulli(p_grid[i])) X |= bit(v);
        sizes[at] = max_solution_free(supports, n, X);
    }
    for (std::size_t i = 0; i < points; ++i) {
        SparsePoint pt;
        pt.p = p_grid[i];
        pt.max_sizes.assign(sizes.begin() + static_cast<std::ptrdiff_t>(i * trials),
                            sizes.begin() + static_cast<std::ptrdiff_t>((i + 1) * trials));
        const double scale = pt.p * static_cast<double>(n);
        double sum = 0, lo = 0, hi = 0;
        for (std::size_t t = 0; t < pt.max_sizes.size(); ++t) {
            const double v = scale > 0 ? static_cast<double>(pt.max_sizes[t]) / scale : 0.0;
            sum += v;
            lo = t == 0 ? v : std::min(lo, v);
            hi = t == 0 ? v : std::max(hi, v);
        }
        pt.mean_normalized = sum / static_cast<double>(trials);
        pt.min_normalized = lo;
        pt.max_normalized = hi;
        out.points.push_back(std::move(pt));
    }
    return out;
}

void write_sparse(std::ostream& out, const SparseSummary& s) {
    out << "sparse ground=" << s.ground << " ex=" << s.ex << " m=" << fmt_double(s.m) << '\n';
    for (const auto& pt : s.points) {
        double mean_size = 0;
        for (auto v : pt.max_sizes) mean_size += static_cast<double>(v);
        mean_size /= static_cast<double>(pt.max_sizes.size());
        out << "p=" << fmt_double(pt.p) << " trials=" << pt.max_sizes.size() << " mean_max=" << fmt_double(mean_size)
            << " normalized_mean=" << fmt_double(pt.mean_normalized) << " normalized_min=" << fmt_double(pt.min_normalized)
            << " normalized_max=" << fmt_double(pt.max_normalized) << '\n';
    }
}

}  // namespace hcont
