#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "pit/expvec.hpp"
#include "pit/matrix.hpp"

namespace pit {

// ---- H_kappa(R): R^kappa with coordinatewise product ----

template <class T>
struct HadVec {
    std::vector<T> c;

    HadVec() = default;
    explicit HadVec(std::vector<T> coords) : c(std::move(coords)) {}

    static HadVec zero(std::size_t kappa, std::uint64_t p) {
        return HadVec(std::vector<T>(kappa, T::zero(p)));
    }
    static HadVec one(std::size_t kappa, std::uint64_t p) {
        return HadVec(std::vector<T>(kappa, T::one(p)));
    }

    std::size_t kappa() const { return c.size(); }
    bool is_zero() const {
        for (const auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
    bool is_unit() const {
        for (const auto& x : c)
            if (x.is_zero()) return false;
        return true;
    }

    friend bool operator==(const HadVec& a, const HadVec& b) { return a.c == b.c; }
    friend bool operator!=(const HadVec& a, const HadVec& b) { return a.c != b.c; }

    friend HadVec operator+(const HadVec& a, const HadVec& b) {
        if (a.kappa() != b.kappa()) throw DimensionMismatch("HadVec addition");
        HadVec r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
        return r;
    }
    friend HadVec operator-(const HadVec& a, const HadVec& b) {
        if (a.kappa() != b.kappa()) throw DimensionMismatch("HadVec subtraction");
        HadVec r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] - b.c[i];
        return r;
    }
    HadVec scaled(const T& s) const {
        HadVec r = *this;
        for (auto& x : r.c) x = x * s;
        return r;
    }
    HadVec project_out(std::size_t coord) const {
        HadVec r;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (i != coord) r.c.push_back(c[i]);
        return r;
    }
};

// u star v, coordinatewise
template <class T>
HadVec<T> had_mul(const HadVec<T>& u, const HadVec<T>& v) {
    if (u.kappa() != v.kappa()) throw DimensionMismatch("had_mul");
    HadVec<T> r = u;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] * v.c[i];
    return r;
}

// coordinatewise inverse; NotAUnit carries the offending coordinate
template <class T>
HadVec<T> had_inverse(const HadVec<T>& v) {
    HadVec<T> r = v;
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        if (r.c[i].is_zero()) throw NotAUnit(i);
        r.c[i] = r.c[i].inverse();
    }
    return r;
}

// ---- sparse polynomials over H_kappa ----

template <class T>
struct HadamardPoly {
    std::size_t n = 0;
    std::size_t kappa = 1;
    std::uint64_t p = kDefaultPrime;
    // canonical graded-lex order; no zero coefficient stored
    std::map<ExpVec, HadVec<T>, GradedLexLess> terms;

    HadamardPoly() = default;
    HadamardPoly(std::size_t n_, std::size_t kappa_, std::uint64_t p_) : n(n_), kappa(kappa_), p(p_) {}

    bool is_zero() const { return terms.empty(); }

    void add_term(const ExpVec& e, const HadVec<T>& v) {
        if (v.is_zero()) return;
        auto it = terms.find(e);
        if (it == terms.end()) {
            terms.emplace(e, v);
        } else {
            it->second = it->second + v;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    friend HadamardPoly operator+(const HadamardPoly& a, const HadamardPoly& b) {
        HadamardPoly r = a;
        for (const auto& [e, v] : b.terms) r.add_term(e, v);
        return r;
    }
    friend HadamardPoly operator-(const HadamardPoly& a, const HadamardPoly& b) {
        HadamardPoly r = a;
        for (const auto& [e, v] : b.terms) r.add_term(e, v.scaled(-T::one(a.p)));
        return r;
    }
    // product in H_kappa(R)[x]
    friend HadamardPoly operator*(const HadamardPoly& a, const HadamardPoly& b) {
        HadamardPoly r(a.n, a.kappa, a.p);
        for (const auto& [ea, va] : a.terms)
            for (const auto& [eb, vb] : b.terms) r.add_term(exp_add(ea, eb), had_mul(va, vb));
        return r;
    }
    friend bool operator==(const HadamardPoly& a, const HadamardPoly& b) {
        return a.n == b.n && a.kappa == b.kappa && a.terms == b.terms;
    }

    HadamardPoly scaled(const HadVec<T>& s) const {
        HadamardPoly r(n, kappa, p);
        for (const auto& [e, v] : terms) r.add_term(e, had_mul(v, s));
        return r;
    }

    HadVec<T> eval(const std::vector<T>& point) const {
        if (point.size() != n) throw DimensionMismatch("HadamardPoly::eval arity");
        HadVec<T> acc = HadVec<T>::zero(kappa, p);
        for (const auto& [e, v] : terms) {
            T m = T::one(p);
            for (std::size_t i = 0; i < n; ++i)
                for (std::uint32_t q = 0; q < e[i]; ++q) m = m * point[i];
            acc = acc + v.scaled(m);
        }
        return acc;
    }

    HadamardPoly project_out(std::size_t coord) const {
        HadamardPoly r(n, kappa - 1, p);
        for (const auto& [e, v] : terms) r.add_term(e, v.project_out(coord));
        return r;
    }
};

inline HadamardPoly<RatFunc> lift_to_ratfunc(const HadamardPoly<Fp>& f) {
    HadamardPoly<RatFunc> r(f.n, f.kappa, f.p);
    for (const auto& [e, v] : f.terms) {
        HadVec<RatFunc> w;
        for (const auto& x : v.c) w.c.push_back(RatFunc(x));
        r.terms.emplace(e, std::move(w));
    }
    return r;
}

// Coef(e)(f): stored coefficient or the zero vector
template <class T>
HadVec<T> coeff(const ExpVec& e, const HadamardPoly<T>& f) {
    auto it = f.terms.find(e);
    if (it != f.terms.end()) return it->second;
    return HadVec<T>::zero(f.kappa, f.p);
}

struct SupportStats {
    std::vector<ExpVec> support;  // S(f), graded-lex
    std::size_t sparsity = 0;     // s(f)
    std::size_t mu = 0;           // max support weight over S(f)
};

template <class T>
SupportStats support_stats(const HadamardPoly<T>& f) {
    SupportStats st;
    for (const auto& [e, v] : f.terms) {
        st.support.push_back(e);
        st.mu = std::max(st.mu, support_weight(e));
    }
    st.sparsity = st.support.size();
    if (st.sparsity == 0) throw EmptyPolynomial("mu of the zero polynomial");
    return st;
}

// cone S(f): downward closure of the support, graded-lex
template <class T>
std::vector<ExpVec> cone(const HadamardPoly<T>& f) {
    std::set<ExpVec, GradedLexLess> acc;
    for (const auto& [e, v] : f.terms)
        for (auto& b : box_below(e)) acc.insert(b);
    return {acc.begin(), acc.end()};
}

inline unsigned long long binom_u64(unsigned long long a, unsigned long long b) {
    if (b > a) return 0;
    if (b > a - b) b = a - b;
    unsigned __int128 r = 1;
    for (unsigned long long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return static_cast<unsigned long long>(r);
}

// cone size with the C(n+1, mu) * C(d+mu, mu) bound checked on the way out
template <class T>
std::size_t cone_size(const HadamardPoly<T>& f) {
    auto cn = cone(f);
    auto st = support_stats(f);
    std::uint64_t d = 0;
    for (const auto& e : st.support) d = std::max(d, total_degree(e));
    unsigned long long bound = binom_u64(f.n + 1, st.mu) * binom_u64(d + st.mu, st.mu);
    if (cn.size() > bound) throw PitError("cone bound violated");
    return cn.size();
}

// f(x + a) expanded via the binomial coefficient formula on each monomial
template <class T>
HadamardPoly<T> shift(const HadamardPoly<T>& f, const std::vector<T>& a) {
    if (a.size() != f.n) throw DimensionMismatch("shift arity");
    HadamardPoly<T> r(f.n, f.kappa, f.p);
    for (const auto& [v, z] : f.terms) {
        for (const auto& u : box_below(v)) {
            Fp cb = binomial_vec(v, u, f.p);
            if (cb.is_zero()) continue;
            T m = T::one(f.p) * T(cb);
            for (std::size_t i = 0; i < f.n; ++i)
                for (std::uint32_t q = u[i]; q < v[i]; ++q) m = m * a[i];
            r.add_term(u, z.scaled(m));
        }
    }
    return r;
}

// ---- partitions and block support ----

struct Partition {
    // disjoint variable index blocks (0-based); union may be a strict subset of [n]
    std::vector<std::vector<std::size_t>> blocks;

    // block id per variable, SIZE_MAX when uncovered
    std::vector<std::size_t> block_of(std::size_t n) const {
        std::vector<std::size_t> b(n, static_cast<std::size_t>(-1));
        for (std::size_t j = 0; j < blocks.size(); ++j)
            for (auto i : blocks[j]) {
                if (i >= n || b[i] != static_cast<std::size_t>(-1))
                    throw IndexOutsidePartition("overlapping or out-of-range block entry");
                b[i] = j;
            }
        return b;
    }
};

// bs(e): number of blocks meeting S(e)
inline std::size_t block_weight(const ExpVec& e, const Partition& part) {
    auto b = part.block_of(e.size());
    std::set<std::size_t> hit;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (b[i] == static_cast<std::size_t>(-1))
            throw IndexOutsidePartition("exponent supported outside the partition");
        hit.insert(b[i]);
    }
    return hit.size();
}

// ---- l-concentration ----

enum class ConcMode { Support, BlockSupport };

struct ConcentrationResult {
    bool concentrated = false;
    std::size_t rank_low = 0;
    std::size_t rank_full = 0;
};

namespace detail {

inline std::size_t column_rank(const Matrix<Fp>& m, std::size_t) { return rank(m); }

inline std::size_t column_rank(const Matrix<RatFunc>& m, std::size_t cols) {
    Matrix<UniPoly> cleared = clear_denominators(m);
    // both routes are exact; Bareiss is the authoritative small-matrix path
    if (cols <= 24) return bareiss_rank(cleared);
    return rank_eval_certified(cleared);
}

}  // namespace detail

// rank_low = dim span{Coef(e)(f) : weight(e) < l}; rank_full over all coefficients
template <class T>
ConcentrationResult is_l_concentrated(const HadamardPoly<T>& f, std::size_t l, ConcMode mode,
                                      const Partition* part = nullptr) {
    if (mode == ConcMode::BlockSupport && part == nullptr)
        throw PitError("block-support mode needs a partition");
    std::vector<const HadVec<T>*> low, all;
    for (const auto& [e, v] : f.terms) {
        std::size_t w =
            mode == ConcMode::Support ? support_weight(e) : block_weight(e, *part);
        all.push_back(&v);
        if (w < l) low.push_back(&v);
    }
    auto to_matrix = [&](const std::vector<const HadVec<T>*>& cols) {
        Matrix<T> m(f.kappa, cols.size(), T::zero(f.p));
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < f.kappa; ++i) m(i, j) = cols[j]->c[i];
        return m;
    };
    ConcentrationResult res;
    res.rank_low = low.empty() ? 0 : detail::column_rank(to_matrix(low), low.size());
    res.rank_full = all.empty() ? 0 : detail::column_rank(to_matrix(all), all.size());
    res.concentrated = res.rank_low == res.rank_full;
    return res;
}

}  // namespace pit
