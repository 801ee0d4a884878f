#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "pit/fp.hpp"

namespace pit {

// Exponent vector e in N^n. Fixed length per context.
using ExpVec = std::vector<std::uint32_t>;

inline ExpVec zero_exp(std::size_t n) { return ExpVec(n, 0); }

inline std::uint64_t total_degree(const ExpVec& e) {
    return std::accumulate(e.begin(), e.end(), std::uint64_t{0});
}

// S(e): indices of nonzero entries (0-based)
inline std::vector<std::size_t> support(const ExpVec& e) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) s.push_back(i);
    return s;
}

// s(e): support weight
inline std::size_t support_weight(const ExpVec& e) {
    std::size_t w = 0;
    for (auto x : e) w += x != 0;
    return w;
}

inline ExpVec exp_add(const ExpVec& a, const ExpVec& b) {
    ExpVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

// coordinatewise a <= b
inline bool exp_leq(const ExpVec& a, const ExpVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline std::uint64_t exp_dot(const std::vector<std::uint64_t>& w, const ExpVec& e) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) s += w[i] * e[i];
    return s;
}

// graded lexicographic: by total degree, then lex
struct GradedLexLess {
    bool operator()(const ExpVec& a, const ExpVec& b) const {
        auto da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

// a^e with entries of a in F_p
inline Fp exp_power(const std::vector<Fp>& a, const ExpVec& e) {
    Fp r = Fp::one(a.empty() ? kDefaultPrime : a[0].modulus());
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) r *= a[i].pow(e[i]);
    return r;
}

// ∏ C(v_i, u_i) mod p; 0 whenever some v_i < u_i
inline Fp binomial_vec(const ExpVec& v, const ExpVec& u, std::uint64_t p) {
    Fp r = Fp::one(p);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (u[i] > v[i]) return Fp::zero(p);
        if (u[i] != 0) r *= binomial(v[i], u[i], p);
    }
    return r;
}

// all e' <= e coordinatewise, in graded-lex order
inline std::vector<ExpVec> box_below(const ExpVec& e) {
    std::vector<ExpVec> out;
    ExpVec cur(e.size(), 0);
    while (true) {
        out.push_back(cur);
        std::size_t i = 0;
        while (i < e.size() && cur[i] == e[i]) cur[i++] = 0;
        if (i == e.size()) break;
        ++cur[i];
    }
    std::sort(out.begin(), out.end(), GradedLexLess{});
    return out;
}

}  // namespace pit
