#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "pit/hadamard.hpp"
#include "pit/rng.hpp"

namespace pit {

// ---- support index of a single factor ----

struct SupportIndex {
    std::vector<ExpVec> cone;       // S(f), graded-lex; cone[0] is the zero exponent
    std::vector<ExpVec> punctured;  // S* = S \ {0}
};

template <class T>
SupportIndex build_support_index(const HadamardPoly<T>& f) {
    SupportIndex idx;
    idx.cone = cone(f);
    if (idx.cone.empty() || total_degree(idx.cone[0]) != 0)
        throw PitError("cone of a nonzero polynomial must contain 0");
    idx.punctured.assign(idx.cone.begin() + 1, idx.cone.end());
    return idx;
}

// ---- transfer matrix T and its inverse ----

struct TransferMatrix {
    SupportIndex idx;
    Matrix<Fp> T;        // (v, u) entry C(v, u); unipotent lower-triangular in graded order
    Matrix<Fp> Tprime;   // T^{-1}
    Matrix<Fp> Tp_rows;  // T' restricted to the punctured rows: (|S|-1) x |S|
};

inline TransferMatrix build_transfer(const SupportIndex& idx, std::uint64_t p) {
    TransferMatrix tm;
    tm.idx = idx;
    std::size_t m = idx.cone.size();
    tm.T = Matrix<Fp>::zero(m, m, p);
    for (std::size_t v = 0; v < m; ++v)
        for (std::size_t u = 0; u < m; ++u) tm.T(v, u) = binomial_vec(idx.cone[v], idx.cone[u], p);
    tm.Tprime = inverse(tm.T);
    tm.Tp_rows = Matrix<Fp>::zero(m - 1, m, p);
    for (std::size_t v = 0; v + 1 < m; ++v)
        for (std::size_t u = 0; u < m; ++u) tm.Tp_rows(v, u) = tm.Tprime(v + 1, u);
    return tm;
}

// ---- weight vectors (the Kronecker-like map tau: t_i -> y^{w_i}) ----

using WeightVector = std::vector<std::uint64_t>;

// distinct <w, e> over the given monomial set
inline bool separates(const WeightVector& w, const std::vector<ExpVec>& monomials) {
    std::set<std::uint64_t> seen;
    for (const auto& e : monomials)
        if (!seen.insert(exp_dot(w, e)).second) return false;
    return true;
}

// smallest-first deterministic candidate search; entries strictly positive
inline WeightVector weight_vector_for(const std::vector<ExpVec>& monomials, std::size_t n,
                                      std::uint64_t seed = 17) {
    std::vector<WeightVector> fixed;
    fixed.push_back(WeightVector(n, 1));
    WeightVector ramp(n);
    for (std::size_t i = 0; i < n; ++i) ramp[i] = i + 1;
    fixed.push_back(ramp);
    // mixed-radix on per-variable maxima always separates a full box
    WeightVector radix(n, 1);
    {
        std::uint64_t acc = 1;
        for (std::size_t i = 0; i < n; ++i) {
            radix[i] = acc;
            std::uint64_t mx = 0;
            for (const auto& e : monomials) mx = std::max<std::uint64_t>(mx, e[i]);
            acc *= mx + 1;
        }
    }
    for (const auto& w : fixed)
        if (separates(w, monomials)) return w;
    Rng rng(seed);
    for (std::uint64_t bound = std::max<std::uint64_t>(8, monomials.size()); bound < (1ULL << 40);
         bound *= 2) {
        for (int tries = 0; tries < 64; ++tries) {
            WeightVector w(n);
            for (std::size_t i = 0; i < n; ++i) w[i] = rng.range(1, bound);
            if (separates(w, monomials)) return w;
        }
    }
    if (separates(radix, monomials)) return radix;
    throw SearchExhausted("no separating weight vector found");
}

// all sums e_1 + ... + e_l with e_i ranging over cone_i (deduplicated)
inline std::vector<ExpVec> product_monomials(const std::vector<std::vector<ExpVec>>& cones,
                                             std::size_t n) {
    std::set<ExpVec, GradedLexLess> acc;
    acc.insert(zero_exp(n));
    for (const auto& cn : cones) {
        std::set<ExpVec, GradedLexLess> next;
        for (const auto& partial : acc)
            for (const auto& e : cn) next.insert(exp_add(partial, e));
        acc = std::move(next);
    }
    return {acc.begin(), acc.end()};
}

inline WeightVector build_weight_vector(const std::vector<std::vector<ExpVec>>& cones,
                                        std::size_t n, std::uint64_t seed = 17) {
    return weight_vector_for(product_monomials(cones, n), n, seed);
}

// ---- shift-&-normalize of one factor ----

template <class T>
std::vector<T> monomial_point(const WeightVector& w, std::uint64_t p);

template <>
inline std::vector<RatFunc> monomial_point<RatFunc>(const WeightVector& w, std::uint64_t p) {
    std::vector<RatFunc> a;
    for (auto wi : w) a.push_back(RatFunc(UniPoly::monomial(Fp::one(p), wi)));
    return a;
}

struct ShiftNormalized {
    HadamardPoly<RatFunc> fprime;  // f(t)^{-1} * f(x + t) with t_i = y^{w_i}
    HadVec<RatFunc> f_at_t;        // f(t)
};

template <class T>
HadVec<RatFunc> eval_at_monomials(const HadamardPoly<T>& f, const WeightVector& w) {
    HadVec<RatFunc> acc = HadVec<RatFunc>::zero(f.kappa, f.p);
    for (const auto& [e, v] : f.terms) {
        RatFunc m(UniPoly::monomial(Fp::one(f.p), exp_dot(w, e)));
        for (std::size_t r = 0; r < f.kappa; ++r)
            acc.c[r] = acc.c[r] + RatFunc(v.c[r]) * m;
    }
    return acc;
}

inline ShiftNormalized shift_normalize(const HadamardPoly<Fp>& f, const WeightVector& w) {
    ShiftNormalized out;
    out.f_at_t = eval_at_monomials(f, w);
    HadVec<RatFunc> inv = had_inverse(out.f_at_t);  // NotAUnit propagates
    auto lifted = lift_to_ratfunc(f);
    auto shifted = shift(lifted, monomial_point<RatFunc>(w, f.p));
    out.fprime = shifted.scaled(inv);
    auto c0 = coeff(zero_exp(f.n), out.fprime);
    if (c0 != HadVec<RatFunc>::one(f.kappa, f.p))
        throw PitError("shift_normalize: constant coefficient is not 1");
    return out;
}

// ---- per-factor data shared by the verifiers (polynomial numerator form) ----
//
// z'_{i,u} = P_{i,u}(y) / f_i(t) coordinatewise, with
// P_{i,u,r}(y) = sum_{v in S(f_i), v >= u} z_{i,v,r} C(v,u) y^{<w, v-u>}.

struct FactorData {
    SupportIndex idx;
    TransferMatrix tm;
    std::vector<std::uint64_t> wt;        // <w, cone[j]>
    Matrix<Fp> Z;                         // kappa x |S|; column j = Coef(cone[j])(f)
    std::vector<UniPoly> f_at_t;          // kappa coordinates of f(t); all nonzero
    std::vector<std::vector<UniPoly>> P;  // |S| x kappa numerators of z'
};

// alpha scales the shift point: t_i = alpha_i y^{w_i}; all-ones when absent
inline FactorData prepare_factor(const HadamardPoly<Fp>& f, const WeightVector& w,
                                 const std::vector<Fp>* alpha = nullptr) {
    FactorData fd;
    fd.idx = build_support_index(f);
    fd.tm = build_transfer(fd.idx, f.p);
    std::size_t m = fd.idx.cone.size();
    fd.wt.resize(m);
    for (std::size_t j = 0; j < m; ++j) fd.wt[j] = exp_dot(w, fd.idx.cone[j]);
    fd.Z = Matrix<Fp>::zero(f.kappa, m, f.p);
    for (std::size_t j = 0; j < m; ++j) {
        auto z = coeff(fd.idx.cone[j], f);
        for (std::size_t r = 0; r < f.kappa; ++r) fd.Z(r, j) = z.c[r];
    }
    auto apow = [&](const ExpVec& hi, const ExpVec& lo) {
        Fp r = Fp::one(f.p);
        if (alpha)
            for (std::size_t i = 0; i < hi.size(); ++i)
                if (hi[i] > lo[i]) r *= (*alpha)[i].pow(hi[i] - lo[i]);
        return r;
    };
    fd.f_at_t.assign(f.kappa, UniPoly::zero(f.p));
    for (const auto& [e, v] : f.terms) {
        Fp ae = apow(e, zero_exp(f.n));
        for (std::size_t r = 0; r < f.kappa; ++r)
            fd.f_at_t[r].add_scaled_shifted(UniPoly::one(f.p), v.c[r] * ae, exp_dot(w, e));
    }
    for (std::size_t r = 0; r < f.kappa; ++r)
        if (fd.f_at_t[r].is_zero()) throw NotAUnit(r);
    fd.P.assign(m, std::vector<UniPoly>(f.kappa, UniPoly::zero(f.p)));
    for (std::size_t u = 0; u < m; ++u) {
        const ExpVec& eu = fd.idx.cone[u];
        for (const auto& [ev, zv] : f.terms) {
            Fp cb = binomial_vec(ev, eu, f.p);
            if (cb.is_zero()) continue;
            cb *= apow(ev, eu);
            std::uint64_t sh = exp_dot(w, ev) - fd.wt[u];
            for (std::size_t r = 0; r < f.kappa; ++r)
                fd.P[u][r].add_scaled_shifted(UniPoly::one(f.p), zv.c[r] * cb, sh);
        }
    }
    return fd;
}

// ---- Lemma transfer-primal: Z' = f(t)^{-1} * Z N_S T N_S^{-1} ----

inline bool verify_transfer_primal(const HadamardPoly<Fp>& f, const WeightVector& w) {
    auto sn = shift_normalize(f, w);
    auto idx = build_support_index(f);
    auto tm = build_transfer(idx, f.p);
    std::size_t m = idx.cone.size();
    // RHS column u, coordinate r: f_r(t)^{-1} * sum_v Z_{r,v} y^{<w,v>} T[v][u] y^{-<w,u>}
    for (std::size_t u = 0; u < m; ++u) {
        RatFunc yu_inv(UniPoly::one(f.p), UniPoly::monomial(Fp::one(f.p), exp_dot(w, idx.cone[u])));
        for (std::size_t r = 0; r < f.kappa; ++r) {
            RatFunc acc = RatFunc::zero(f.p);
            for (std::size_t v = 0; v < m; ++v) {
                Fp t = tm.T(v, u);
                if (t.is_zero()) continue;
                auto zc = coeff(idx.cone[v], f);
                if (zc.c[r].is_zero()) continue;
                acc += RatFunc(UniPoly::monomial(zc.c[r] * t, exp_dot(w, idx.cone[v])));
            }
            RatFunc rhs = acc * yu_inv / sn.f_at_t.c[r];
            if (rhs != coeff(idx.cone[u], sn.fprime).c[r]) return false;
        }
    }
    return true;
}

// ---- Lemma transfer-mod: f(t)^{-1} * Z == Z'_{S*} N_{S*} T'_{S*,S} N_S^{-1} (mod z'_0),
// and T'_{S*,S} is strongly full ----

inline bool verify_transfer_mod(const HadamardPoly<Fp>& f, const WeightVector& w) {
    auto sn = shift_normalize(f, w);
    auto idx = build_support_index(f);
    if (idx.punctured.empty()) throw PreconditionViolated("factor is a unit; drop it from D");
    auto tm = build_transfer(idx, f.p);
    if (!is_strongly_full(tm.Tp_rows)) return false;
    std::size_t m = idx.cone.size();
    HadVec<RatFunc> finv = had_inverse(sn.f_at_t);
    for (std::size_t u = 0; u < m; ++u) {
        RatFunc yu_inv(UniPoly::one(f.p), UniPoly::monomial(Fp::one(f.p), exp_dot(w, idx.cone[u])));
        // column of LHS - RHS must lie in span{z'_0} = span{all-ones}
        std::vector<RatFunc> delta(f.kappa, RatFunc::zero(f.p));
        for (std::size_t r = 0; r < f.kappa; ++r) {
            auto zc = coeff(idx.cone[u], f);
            RatFunc lhs = RatFunc(zc.c[r]) * finv.c[r];
            RatFunc acc = RatFunc::zero(f.p);
            for (std::size_t v = 0; v + 1 < m; ++v) {  // rows of T' restricted to S*
                Fp t = tm.Tp_rows(v, u);
                if (t.is_zero()) continue;
                const ExpVec& ev = idx.punctured[v];
                RatFunc zp = coeff(ev, sn.fprime).c[r];
                if (zp.is_zero()) continue;
                acc += zp * RatFunc(UniPoly::monomial(t, exp_dot(w, ev)));
            }
            delta[r] = lhs - acc * yu_inv;
        }
        for (std::size_t r = 1; r < f.kappa; ++r)
            if (delta[r] != delta[0]) return false;
    }
    return true;
}

// ---- the product setting: tuples over per-factor cones ----

struct ProductData {
    std::vector<FactorData> factors;
    std::size_t kappa = 1;
    std::uint64_t p = kDefaultPrime;
    std::size_t n = 0;

    std::size_t ell() const { return factors.size(); }

    // odometer over the full tuple space prod |S_i|
    template <class F>
    void for_each_tuple(F&& fn) const {
        std::vector<std::size_t> t(factors.size(), 0);
        while (true) {
            fn(const_cast<const std::vector<std::size_t>&>(t));
            std::size_t i = 0;
            while (i < t.size() && t[i] + 1 == factors[i].idx.cone.size()) t[i++] = 0;
            if (i == t.size()) break;
            ++t[i];
        }
    }

    std::size_t block_weight_of(const std::vector<std::size_t>& t) const {
        std::size_t b = 0;
        for (auto x : t) b += x != 0;
        return b;
    }
    std::uint64_t weight_of(const std::vector<std::size_t>& t) const {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < t.size(); ++i) s += factors[i].wt[t[i]];
        return s;
    }
    ExpVec exponent_of(const std::vector<std::size_t>& t) const {
        ExpVec e = zero_exp(n);
        for (std::size_t i = 0; i < t.size(); ++i) e = exp_add(e, factors[i].idx.cone[t[i]]);
        return e;
    }
    // z_u = star-product of per-factor coefficient columns (pure tensor)
    Fp z_entry(const std::vector<std::size_t>& t, std::size_t r) const {
        Fp v = Fp::one(p);
        for (std::size_t i = 0; i < t.size(); ++i) v *= factors[i].Z(r, t[i]);
        return v;
    }
    // numerator of Coef(e_t)(D') at coordinate r over the shared denominator D_r(t)
    UniPoly qnum(const std::vector<std::size_t>& t, std::size_t r) const {
        UniPoly q = UniPoly::one(p);
        for (std::size_t i = 0; i < t.size(); ++i) q = q * factors[i].P[t[i]][r];
        return q;
    }
    // entry of the tensored T' at (row = punctured tuple v, column = tuple u)
    Fp tprime_entry(const std::vector<std::size_t>& v, const std::vector<std::size_t>& u) const {
        Fp x = Fp::one(p);
        for (std::size_t i = 0; i < v.size(); ++i) x *= factors[i].tm.Tp_rows(v[i] - 1, u[i]);
        return x;
    }

    // tuples with all parts nonzero, i.e. S' (the punctured product)
    std::vector<std::vector<std::size_t>> punctured_tuples() const {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> t(factors.size(), 1);
        if (factors.empty()) return out;
        for (const auto& fd : factors)
            if (fd.idx.punctured.empty()) return out;
        while (true) {
            out.push_back(t);
            std::size_t i = 0;
            while (i < t.size() && t[i] == factors[i].idx.cone.size() - 1) t[i++] = 1;
            if (i == t.size()) break;
            ++t[i];
        }
        return out;
    }
};

inline ProductData prepare_product(const std::vector<HadamardPoly<Fp>>& factors,
                                   const WeightVector& w,
                                   const std::vector<Fp>* alpha = nullptr) {
    ProductData pd;
    if (factors.empty()) throw PreconditionViolated("empty product");
    pd.kappa = factors[0].kappa;
    pd.p = factors[0].p;
    pd.n = factors[0].n;
    for (const auto& f : factors) {
        if (f.kappa != pd.kappa || f.p != pd.p || f.n != pd.n)
            throw DimensionMismatch("factors over different algebras");
        pd.factors.push_back(prepare_factor(f, w, alpha));
    }
    return pd;
}

// incremental exact span of polynomial kappa-vectors over F_p(y); numeric probes
// pre-screen, symbolic Bareiss certifies whenever the screen is inconclusive
class PolySpan {
  public:
    PolySpan(std::size_t kappa, std::uint64_t p) : kappa_(kappa), p_(p) {
        for (std::uint64_t x = 1; x <= 3; ++x) probes_.push_back(Fp(x, p));
    }

    std::size_t dim() const { return basis_.size(); }
    bool full() const { return dim() == kappa_; }

    // true if v is already in the span
    bool contains(const std::vector<UniPoly>& v) const {
        if (full()) return true;
        if (all_zero(v)) return true;
        return !independent_exact(v);
    }

    // add v to the basis when independent; returns true if the span grew
    bool add(const std::vector<UniPoly>& v) {
        if (full() || all_zero(v)) return false;
        bool indep = false;
        for (const auto& pr : probes_) {
            if (numeric_independent(v, pr)) {
                indep = true;  // a nonzero minor at one point certifies independence
                break;
            }
        }
        if (!indep) indep = independent_exact(v);
        if (indep) basis_.push_back(v);
        return indep;
    }

  private:
    static bool all_zero(const std::vector<UniPoly>& v) {
        for (const auto& x : v)
            if (!x.is_zero()) return false;
        return true;
    }

    bool numeric_independent(const std::vector<UniPoly>& v, const Fp& pt) const {
        Matrix<Fp> m = Matrix<Fp>::zero(kappa_, basis_.size() + 1, p_);
        for (std::size_t j = 0; j < basis_.size(); ++j)
            for (std::size_t r = 0; r < kappa_; ++r) m(r, j) = basis_[j][r].eval(pt);
        for (std::size_t r = 0; r < kappa_; ++r) m(r, basis_.size()) = v[r].eval(pt);
        return rank(m) == basis_.size() + 1;
    }

    bool independent_exact(const std::vector<UniPoly>& v) const {
        Matrix<UniPoly> m(kappa_, basis_.size() + 1, UniPoly::zero(p_));
        for (std::size_t j = 0; j < basis_.size(); ++j)
            for (std::size_t r = 0; r < kappa_; ++r) m(r, j) = basis_[j][r];
        for (std::size_t r = 0; r < kappa_; ++r) m(r, basis_.size()) = v[r];
        return bareiss_rank(m) == basis_.size() + 1;
    }

    std::size_t kappa_;
    std::uint64_t p_;
    std::vector<Fp> probes_;
    std::vector<std::vector<UniPoly>> basis_;
};

// ---- Lemma transfer-depth3:
// D(t)^{-1} * Z == Z' N_{S'} T' N_S^{-1} (mod V_l(D')) with T' = tensor of T'_i ----

inline bool verify_transfer_depth3(const std::vector<HadamardPoly<Fp>>& factors,
                                   const WeightVector& w) {
    ProductData pd = prepare_product(factors, w);
    std::size_t ell = pd.ell();
    for (const auto& fd : pd.factors) {
        if (fd.idx.punctured.empty())
            throw PreconditionViolated("unit factor in product; drop it first");
        if (!is_strongly_full(fd.tm.Tp_rows)) return false;
    }
    // span of { Coef(e)(D') : bs(e) < ell }, in shared-denominator numerator form
    PolySpan span(pd.kappa, pd.p);
    pd.for_each_tuple([&](const std::vector<std::size_t>& t) {
        if (pd.block_weight_of(t) >= ell) return;
        std::vector<UniPoly> col;
        for (std::size_t r = 0; r < pd.kappa; ++r) col.push_back(pd.qnum(t, r));
        span.add(col);
    });
    auto sprime = pd.punctured_tuples();
    // cache Z' numerator columns
    std::vector<std::vector<UniPoly>> qn(sprime.size());
    for (std::size_t j = 0; j < sprime.size(); ++j)
        for (std::size_t r = 0; r < pd.kappa; ++r) qn[j].push_back(pd.qnum(sprime[j], r));
    bool ok = true;
    pd.for_each_tuple([&](const std::vector<std::size_t>& u) {
        if (!ok) return;
        std::uint64_t wu = pd.weight_of(u);
        // numerator of (LHS - RHS) column over denominator D_r(y) y^{<w,u>}
        std::vector<UniPoly> delta(pd.kappa, UniPoly::zero(pd.p));
        for (std::size_t r = 0; r < pd.kappa; ++r) {
            delta[r].add_scaled_shifted(UniPoly::one(pd.p), pd.z_entry(u, r), wu);
            for (std::size_t j = 0; j < sprime.size(); ++j) {
                Fp tval = pd.tprime_entry(sprime[j], u);
                if (tval.is_zero()) continue;
                delta[r].add_scaled_shifted(qn[j][r], -tval, pd.weight_of(sprime[j]));
            }
        }
        if (!span.contains(delta)) ok = false;
    });
    return ok;
}

// Theorem 3.1 conclusion on an instance: every block-weight >= ell coefficient of
// D' lies in the span of block-weight < ell coefficients (exact rank equality).
struct BlockConcentration {
    bool concentrated = false;
    std::size_t rank_low = 0;
    std::size_t rank_full = 0;
};

inline BlockConcentration block_concentration(const std::vector<HadamardPoly<Fp>>& factors,
                                              const WeightVector& w, std::size_t ell,
                                              const std::vector<Fp>* alpha = nullptr) {
    ProductData pd = prepare_product(factors, w, alpha);
    PolySpan low(pd.kappa, pd.p), full(pd.kappa, pd.p);
    pd.for_each_tuple([&](const std::vector<std::size_t>& t) {
        std::vector<UniPoly> col;
        for (std::size_t r = 0; r < pd.kappa; ++r) col.push_back(pd.qnum(t, r));
        if (pd.block_weight_of(t) < ell) low.add(col);
        full.add(col);
    });
    BlockConcentration out;
    out.rank_low = low.dim();
    out.rank_full = full.dim();
    out.concentrated = out.rank_low == out.rank_full;
    return out;
}

// D' itself as a polynomial over H_kappa(F_p(y)) (small instances; oracle route)
inline HadamardPoly<RatFunc> shift_normalized_product(const std::vector<HadamardPoly<Fp>>& factors,
                                                      const WeightVector& w) {
    HadamardPoly<RatFunc> acc(factors[0].n, factors[0].kappa, factors[0].p);
    acc.add_term(zero_exp(factors[0].n), HadVec<RatFunc>::one(factors[0].kappa, factors[0].p));
    for (const auto& f : factors) acc = acc * shift_normalize(f, w).fprime;
    return acc;
}

// ---- greedy basis from the largest column ----

// marked column indices of Z, processing columns by strictly decreasing w-weight
inline std::vector<std::size_t> greedy_basis_from_largest(const Matrix<Fp>& Z,
                                                          const std::vector<std::uint64_t>& colw) {
    if (Z.cols() != colw.size()) throw DimensionMismatch("column weights");
    std::vector<std::size_t> order(Z.cols());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return colw[a] > colw[b]; });
    std::vector<std::size_t> marked;
    std::uint64_t p = Z.rows() ? Z(0, 0).modulus() : kDefaultPrime;
    Matrix<Fp> basis = Matrix<Fp>::zero(Z.rows(), 0, p);
    auto with_col = [&](const Matrix<Fp>& b, std::size_t col) {
        Matrix<Fp> m = Matrix<Fp>::zero(Z.rows(), b.cols() + 1, p);
        for (std::size_t i = 0; i < Z.rows(); ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) = b(i, j);
            m(i, b.cols()) = Z(i, col);
        }
        return m;
    };
    for (auto c : order) {
        Matrix<Fp> cand = with_col(basis, c);
        if (rank(cand) == basis.cols() + 1) {
            basis = cand;
            marked.push_back(c);
        }
    }
    std::sort(marked.begin(), marked.end());
    return marked;
}

using Tuple = std::vector<std::size_t>;  // per-factor cone positions; 0 = zero exponent

// greedy marked basis of the tensored Z, columns identified with tuples
inline std::vector<Tuple> greedy_basis_tuples(const ProductData& pd) {
    std::vector<Tuple> tuples;
    std::vector<std::uint64_t> wts;
    pd.for_each_tuple([&](const Tuple& t) {
        tuples.push_back(t);
        wts.push_back(pd.weight_of(t));
    });
    Matrix<Fp> Z = Matrix<Fp>::zero(pd.kappa, tuples.size(), pd.p);
    for (std::size_t j = 0; j < tuples.size(); ++j)
        for (std::size_t r = 0; r < pd.kappa; ++r) Z(r, j) = pd.z_entry(tuples[j], r);
    auto marked = greedy_basis_from_largest(Z, wts);
    std::vector<Tuple> out;
    for (auto idx : marked) out.push_back(tuples[idx]);
    return out;
}

// ---- invertible minor selection (Theorem 3.5 / Claim C.1) ----

namespace detail {

// hierarchical (frequency desc, value asc) ordering of rows, coordinate by coordinate
inline void frequency_sort(std::vector<Tuple>& rows, std::size_t lo, std::size_t hi,
                           std::size_t coord) {
    if (hi - lo <= 1 || coord >= rows[0].size()) return;
    std::map<std::size_t, std::size_t> freq;
    for (std::size_t i = lo; i < hi; ++i) ++freq[rows[i][coord]];
    std::stable_sort(rows.begin() + lo, rows.begin() + hi, [&](const Tuple& a, const Tuple& b) {
        auto fa = freq[a[coord]], fb = freq[b[coord]];
        if (fa != fb) return fa > fb;
        return a[coord] < b[coord];
    });
    std::size_t start = lo;
    while (start < hi) {
        std::size_t end = start;
        while (end < hi && rows[end][coord] == rows[start][coord]) ++end;
        frequency_sort(rows, start, end, coord + 1);
        start = end;
    }
}

// least-position coordinate pattern I such that u_i(I) first appears at row i
inline std::vector<std::size_t> binary_search_pattern(const std::vector<Tuple>& rows,
                                                      std::size_t i) {
    std::vector<std::size_t> I;
    std::size_t lo = 0, hi = i + 1;
    std::size_t j = 0;
    std::size_t ell = rows[0].size();
    while (true) {
        while (j < ell) {
            bool all_same = true;
            for (std::size_t r = lo + 1; r < hi; ++r)
                if (rows[r][j] != rows[lo][j]) {
                    all_same = false;
                    break;
                }
            if (!all_same) break;
            ++j;
        }
        if (j == ell) break;  // rows identical on all coords; cannot happen for distinct tuples
        I.push_back(j);
        std::size_t cnt = 0;
        while (cnt < hi - lo && rows[hi - 1 - cnt][j] == rows[i][j]) ++cnt;
        lo = hi - cnt;
        if (cnt == 1) break;
        ++j;
    }
    return I;
}

}  // namespace detail

// A family of strongly-full per-factor matrices, each n_i x (n_i + 1) with
// column 0 playing the role of the zero exponent. T' of the product is their
// Kronecker tensor, indexed by tuples.
struct TPrimeFamily {
    std::vector<Matrix<Fp>> tp;
    std::uint64_t p = kDefaultPrime;

    std::size_t ell() const { return tp.size(); }
    std::size_t cols(std::size_t i) const { return tp[i].cols(); }

    Fp entry(const Tuple& v, const Tuple& u) const {
        Fp x = Fp::one(p);
        for (std::size_t i = 0; i < v.size(); ++i) x *= tp[i](v[i] - 1, u[i]);
        return x;
    }

    std::vector<Tuple> punctured_tuples() const {
        std::vector<Tuple> out;
        for (const auto& m : tp)
            if (m.rows() == 0) return out;
        Tuple t(tp.size(), 1);
        while (true) {
            out.push_back(t);
            std::size_t i = 0;
            while (i < t.size() && t[i] == cols(i) - 1) t[i++] = 1;
            if (i == t.size()) break;
            ++t[i];
        }
        return out;
    }
};

inline TPrimeFamily tprime_family(const ProductData& pd) {
    TPrimeFamily fam;
    fam.p = pd.p;
    for (const auto& fd : pd.factors) fam.tp.push_back(fd.tm.Tp_rows);
    return fam;
}

struct MinorSelection {
    std::vector<Tuple> columns;  // C, |C| = |S'|
    Fp det_value;                // det(T'_{S',C}), verified nonzero
};

// Appendix C: normalize each T'_i by row operations to identity-plus-zero-free-
// column form, take unmarked identity columns, then the frequency-ordered
// binary-search selection for the remaining marked rows.
inline MinorSelection select_invertible_minor(const TPrimeFamily& fam,
                                              const std::set<Tuple>& marked, std::size_t kappa) {
    std::size_t ell = fam.ell();
    std::size_t lg = 0;
    while ((1ULL << lg) < kappa) ++lg;  // ceil(log2 kappa)
    if (ell < lg || ((1ULL << (ell - lg)) <= kappa))
        throw PreconditionViolated("counting bound 2^(l - ceil(lg k)) - k > 0 fails");
    if (marked.size() > kappa) throw PreconditionViolated("|M| exceeds kappa");

    // per-factor normalized form: E_i T'_i with identity on the punctured columns
    for (std::size_t i = 0; i < fam.tp.size(); ++i) {
        const auto& tp = fam.tp[i];
        std::size_t ni = tp.rows();
        if (ni == 0) throw PreconditionViolated("unit factor in family");
        std::vector<std::size_t> rows_all(ni), cols_punct(ni);
        for (std::size_t j = 0; j < ni; ++j) rows_all[j] = j, cols_punct[j] = j + 1;
        Matrix<Fp> E = inverse(tp.submatrix(rows_all, cols_punct));
        Matrix<Fp> G = E * tp;
        for (std::size_t r = 0; r < ni; ++r)
            if (G(r, 0).is_zero())
                throw PitError("normalized T' has a zero in its 0-column; not strongly full");
    }

    auto in_U = [&](const Tuple& t) {
        for (auto x : t)
            if (x == 0) return false;
        return true;
    };
    (void)in_U;

    std::vector<Tuple> C, M1;
    for (const auto& u : fam.punctured_tuples()) {
        if (marked.count(u))
            M1.push_back(u);
        else
            C.push_back(u);
    }

    if (!M1.empty()) {
        detail::frequency_sort(M1, 0, M1.size(), 0);
        std::set<Tuple> picked;
        for (std::size_t i = 0; i < M1.size(); ++i) {
            auto I = detail::binary_search_pattern(M1, i);
            std::vector<std::size_t> freepos;
            for (std::size_t r = 0; r < ell; ++r)
                if (std::find(I.begin(), I.end(), r) == I.end()) freepos.push_back(r);
            bool found = false;
            for (std::uint64_t mask = 0; mask < (1ULL << freepos.size()) && !found; ++mask) {
                if (mask + 1 == (1ULL << freepos.size())) continue;  // S must be a proper subset
                Tuple wcol(ell, 0);
                for (auto r : I) wcol[r] = M1[i][r];
                for (std::size_t b = 0; b < freepos.size(); ++b)
                    if (mask & (1ULL << b)) wcol[freepos[b]] = M1[i][freepos[b]];
                if (marked.count(wcol) || picked.count(wcol)) continue;
                picked.insert(wcol);
                found = true;
            }
            if (!found) throw PreconditionViolated("column pool exhausted; counting bound broken");
        }
        for (const auto& t : picked) C.push_back(t);
    }

    // exact determinant of T'_{S',C} on the original (un-normalized) factors
    auto sprime = fam.punctured_tuples();
    if (C.size() != sprime.size()) throw PitError("|C| != |S'|");
    Matrix<Fp> minor = Matrix<Fp>::zero(sprime.size(), C.size(), fam.p);
    for (std::size_t r = 0; r < sprime.size(); ++r)
        for (std::size_t c = 0; c < C.size(); ++c) minor(r, c) = fam.entry(sprime[r], C[c]);
    MinorSelection out;
    out.columns = std::move(C);
    out.det_value = sprime.empty() ? Fp::one(fam.p) : det(minor);
    if (out.det_value.is_zero()) throw PitError("selected minor is singular");
    for (const auto& c : out.columns)
        if (marked.count(c)) throw PitError("selected a marked column");
    return out;
}

inline MinorSelection select_invertible_minor(const ProductData& pd,
                                              const std::set<Tuple>& marked, std::size_t kappa) {
    return select_invertible_minor(tprime_family(pd), marked, kappa);
}

// ---- nullspace matrix A and Lemma tna-det ----

struct NullspaceCols {
    std::vector<Tuple> col_index;  // C, ordered by increasing w-weight
    std::vector<Tuple> row_index;  // S tuples, odometer order
    Matrix<Fp> A;                  // |S| x |C|, Z A = 0
};

inline NullspaceCols build_nullspace_A(const ProductData& pd, const std::vector<Tuple>& marked,
                                       const std::vector<Tuple>& C) {
    NullspaceCols out;
    out.col_index = C;
    std::sort(out.col_index.begin(), out.col_index.end(),
              [&](const Tuple& a, const Tuple& b) { return pd.weight_of(a) < pd.weight_of(b); });
    std::map<Tuple, std::size_t> row_pos;
    pd.for_each_tuple([&](const Tuple& t) {
        row_pos.emplace(t, out.row_index.size());
        out.row_index.push_back(t);
    });
    out.A = Matrix<Fp>::zero(out.row_index.size(), out.col_index.size(), pd.p);
    for (std::size_t j = 0; j < out.col_index.size(); ++j) {
        const Tuple& v = out.col_index[j];
        std::uint64_t wv = pd.weight_of(v);
        std::vector<Tuple> larger;
        for (const auto& m : marked)
            if (pd.weight_of(m) > wv) larger.push_back(m);
        // solve z_v = sum gamma_m z_m over the strictly larger marked columns
        Matrix<Fp> sys = Matrix<Fp>::zero(pd.kappa, larger.size() + 1, pd.p);
        for (std::size_t r = 0; r < pd.kappa; ++r) {
            for (std::size_t c = 0; c < larger.size(); ++c) sys(r, c) = pd.z_entry(larger[c], r);
            sys(r, larger.size()) = pd.z_entry(v, r);
        }
        auto ns = nullspace_basis(sys);
        std::vector<Fp> gamma;
        bool solved = false;
        for (const auto& vec : ns) {
            if (vec.back().is_zero()) continue;
            Fp scale = vec.back().inverse();
            gamma.clear();
            for (std::size_t c = 0; c < larger.size(); ++c) gamma.push_back(-(vec[c] * scale));
            solved = true;
            break;
        }
        if (!solved) throw PitError("greedy basis property violated: column not spanned");
        out.A(row_pos.at(v), j) = Fp::one(pd.p);
        for (std::size_t c = 0; c < larger.size(); ++c)
            out.A(row_pos.at(larger[c]), j) = -gamma[c];
    }
    // Z A = 0, verified exactly
    for (std::size_t j = 0; j < out.col_index.size(); ++j)
        for (std::size_t r = 0; r < pd.kappa; ++r) {
            Fp acc = Fp::zero(pd.p);
            for (std::size_t i = 0; i < out.row_index.size(); ++i) {
                if (out.A(i, j).is_zero()) continue;
                acc += pd.z_entry(out.row_index[i], r) * out.A(i, j);
            }
            if (!acc.is_zero()) throw PitError("Z * A != 0");
        }
    return out;
}

// |T' N_S^{-1} A| != 0 with leading inverse-monomial coefficient det(T'_{S',C}).
// Structural certificate always; full symbolic determinant when the minor is small.
inline bool verify_tna_det(const ProductData& pd, const std::vector<Tuple>& marked,
                           const NullspaceCols& nsc, const Fp& minor_det,
                           std::size_t symbolic_limit = 10) {
    if (minor_det.is_zero()) return false;
    std::set<Tuple> marked_set(marked.begin(), marked.end());
    std::map<Tuple, std::size_t> row_pos;
    for (std::size_t i = 0; i < nsc.row_index.size(); ++i) row_pos.emplace(nsc.row_index[i], i);
    // weights pairwise distinct over S
    {
        std::set<std::uint64_t> seen;
        for (const auto& t : nsc.row_index)
            if (!seen.insert(pd.weight_of(t)).second) return false;
    }
    // column v: entry 1 at row v (the least nonzero row in the w-order),
    // all other nonzero rows marked and strictly w-larger
    for (std::size_t j = 0; j < nsc.col_index.size(); ++j) {
        const Tuple& v = nsc.col_index[j];
        std::uint64_t wv = pd.weight_of(v);
        if (nsc.A(row_pos.at(v), j) != Fp::one(pd.p)) return false;
        for (std::size_t i = 0; i < nsc.row_index.size(); ++i) {
            if (nsc.A(i, j).is_zero() || nsc.row_index[i] == v) continue;
            if (!marked_set.count(nsc.row_index[i])) return false;
            if (pd.weight_of(nsc.row_index[i]) <= wv) return false;
        }
    }
    auto sprime = pd.punctured_tuples();
    if (sprime.size() != nsc.col_index.size()) return false;
    if (sprime.size() > symbolic_limit) return true;  // structural + minor_det certify the claim
    // small case: expand B = T' N_S^{-1} A over F_p[u], u = 1/y, and inspect the
    // lowest-order coefficient directly
    Matrix<UniPoly> B(sprime.size(), nsc.col_index.size(), UniPoly::zero(pd.p));
    for (std::size_t r = 0; r < sprime.size(); ++r)
        for (std::size_t j = 0; j < nsc.col_index.size(); ++j) {
            UniPoly acc = UniPoly::zero(pd.p);
            for (std::size_t i = 0; i < nsc.row_index.size(); ++i) {
                if (nsc.A(i, j).is_zero()) continue;
                Fp tv = pd.tprime_entry(sprime[r], nsc.row_index[i]);
                if (tv.is_zero()) continue;
                acc.add_scaled_shifted(UniPoly::one(pd.p), tv * nsc.A(i, j),
                                       pd.weight_of(nsc.row_index[i]));
            }
            B(r, j) = acc;
        }
    UniPoly dd = bareiss_det(B);
    if (dd.is_zero()) return false;
    std::uint64_t m0 = 0;
    for (const auto& v : nsc.col_index) m0 += pd.weight_of(v);
    for (std::uint64_t i = 0; i < m0; ++i)
        if (!dd.coeff(i).is_zero()) return false;
    return dd.coeff(m0) == minor_det;
}

}  // namespace pit
