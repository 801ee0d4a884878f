#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pit/formula.hpp"
#include "pit/transfer.hpp"

namespace pit {

// Brute-force ground truth at desk scale. Everything here is a second,
// independent route used to cross-validate the engine.

inline constexpr std::size_t kOracleTermLimit = 1'000'000;

template <class T>
void check_size(const HadamardPoly<T>& f) {
    if (f.terms.size() > kOracleTermLimit) throw TooLarge("oracle expansion too large");
}

inline HadamardPoly<Fp> expand(const SetDepthFormula& f) {
    auto out = expand_node(f.root, f.params.n, f.p);
    check_size(out);
    return out;
}

inline HadamardPoly<Fp> expand(const DiagonalCircuit& c) {
    auto dh = diagonal_to_hadamard(c);
    HadamardPoly<Fp> acc = scalar_poly(c.n, c.p);
    for (std::size_t i = 0; i < c.k; ++i) {
        HadamardPoly<Fp> form = scalar_poly(c.n, c.p);
        for (const auto& [e, v] : dh.F.terms)
            form.add_term(e, HadVec<Fp>({std::vector<Fp>{v.c[i]}}));
        HadamardPoly<Fp> pw = constant_poly(c.n, c.weights[i]);
        for (std::uint64_t q = 0; q < c.d; ++q) {
            pw = pw * form;
            check_size(pw);
        }
        acc = acc + pw;
    }
    check_size(acc);
    return acc;
}

inline HadamardPoly<Fp> expand(const DualRepresentation& d) {
    HadamardPoly<Fp> acc = scalar_poly(d.n, d.p);
    for (std::size_t i = 0; i < d.kprime; ++i) {
        HadamardPoly<Fp> prod = constant_poly(d.n, Fp::one(d.p));
        for (std::size_t j = 0; j < d.n; ++j) {
            HadamardPoly<Fp> gj = scalar_poly(d.n, d.p);
            for (std::size_t q = 0; q < d.g[i][j].coeffs().size(); ++q) {
                Fp cq = d.g[i][j].coeff(q);
                if (cq.is_zero()) continue;
                ExpVec e = zero_exp(d.n);
                e[j] = static_cast<std::uint32_t>(q);
                gj.add_term(e, HadVec<Fp>({std::vector<Fp>{cq}}));
            }
            prod = prod * gj;
            check_size(prod);
        }
        acc = acc + prod;
    }
    check_size(acc);
    return acc;
}

inline HadamardPoly<Fp> expand_circuit(const Circuit& c) {
    return std::visit([](const auto& f) { return expand(f); }, c);
}

// D_h of the top layer: the stacked product vector over H_k
inline HadamardPoly<Fp> expand_top_stack(const SetDepthFormula& f) {
    auto norm = normalize_fanin(f);
    if (norm.params.sigma_levels() == 0) return expand(norm);  // Delta = 2: a sparse polynomial
    auto hp = to_hadamard_product(stack_of(norm));
    HadamardPoly<Fp> acc(f.params.n, hp.c.kappa(), f.p);
    acc.add_term(zero_exp(f.params.n), HadVec<Fp>::one(hp.c.kappa(), f.p));
    for (const auto& fac : hp.factors) {
        acc = acc * expand(fac);
        check_size(acc);
    }
    return acc;
}

// dense interpolation of a blackbox over the tensor grid {0..deg}^n
inline HadamardPoly<Fp> expand_blackbox(const std::function<Fp(const std::vector<Fp>&)>& bb,
                                        std::size_t n, std::uint64_t deg, std::uint64_t p) {
    std::size_t m = deg + 1;
    unsigned __int128 total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= m;
        if (total > kOracleTermLimit) throw TooLarge("interpolation grid too large");
    }
    std::size_t cells = static_cast<std::size_t>(total);
    // values on the grid, row-major with axis 0 fastest
    std::vector<Fp> tensor(cells, Fp::zero(p));
    std::vector<Fp> pt(n, Fp::zero(p));
    for (std::size_t idx = 0; idx < cells; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = 0; i < n; ++i) {
            pt[i] = Fp(rest % m, p);
            rest /= m;
        }
        tensor[idx] = bb(pt);
    }
    // inverse Vandermonde on nodes 0..deg, applied along every axis
    Matrix<Fp> V = Matrix<Fp>::zero(m, m, p);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) V(i, j) = Fp(i, p).pow(j);
    Matrix<Fp> Vinv = inverse(V);
    std::vector<Fp> line(m, Fp::zero(p)), out(m, Fp::zero(p));
    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < n; ++axis) {
        std::size_t block = stride * m;
        for (std::size_t base = 0; base < cells; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::size_t i = 0; i < m; ++i) line[i] = tensor[base + off + i * stride];
                for (std::size_t i = 0; i < m; ++i) {
                    Fp acc = Fp::zero(p);
                    for (std::size_t j = 0; j < m; ++j) acc += Vinv(i, j) * line[j];
                    out[i] = acc;
                }
                for (std::size_t i = 0; i < m; ++i) tensor[base + off + i * stride] = out[i];
            }
        }
        stride *= m;
    }
    HadamardPoly<Fp> f = scalar_poly(n, p);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        if (tensor[idx].is_zero()) continue;
        ExpVec e = zero_exp(n);
        std::size_t rest = idx;
        for (std::size_t i = 0; i < n; ++i) {
            e[i] = static_cast<std::uint32_t>(rest % m);
            rest /= m;
        }
        f.add_term(e, HadVec<Fp>({std::vector<Fp>{tensor[idx]}}));
    }
    return f;
}

inline bool is_zero_bruteforce(const Circuit& c) { return expand_circuit(c).is_zero(); }

// independent concentration check: full expansion, plain Gaussian elimination
// over the coefficient field (never the incremental or fraction-free route)
template <class T>
ConcentrationResult concentration_oracle(const HadamardPoly<T>& f, std::size_t l, ConcMode mode,
                                         const Partition* part = nullptr) {
    check_size(f);
    std::vector<const HadVec<T>*> low, all;
    for (const auto& [e, v] : f.terms) {
        std::size_t w = mode == ConcMode::Support ? support_weight(e) : block_weight(e, *part);
        all.push_back(&v);
        if (w < l) low.push_back(&v);
    }
    auto build = [&](const std::vector<const HadVec<T>*>& cols) {
        Matrix<T> m(f.kappa, cols.size(), T::zero(f.p));
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < f.kappa; ++i) m(i, j) = cols[j]->c[i];
        return m;
    };
    ConcentrationResult res;
    res.rank_low = low.empty() ? 0 : rank<T>(build(low));
    res.rank_full = all.empty() ? 0 : rank<T>(build(all));
    res.concentrated = res.rank_low == res.rank_full;
    return res;
}

// ---- empirical probe of the rank-concentration conjecture ----
// EXPERIMENTAL: never a correctness dependency of the generators.

struct ProbeRow {
    std::size_t trial = 0;
    std::string shape;
    std::size_t ell = 0;
    std::size_t rank_low = 0;
    std::size_t rank_full = 0;
    bool pass = false;
};

// Random products over H_kappa with overlapping variable sets (general formulas,
// not set-depth), shifted by t_i = y^{w_i}; reports whether shifted instances are
// ell-concentrated. The unshifted monomial counterexample is trial 0.
inline std::vector<ProbeRow> conjecture_probe(std::size_t n, std::size_t kappa,
                                              std::uint64_t deg, std::size_t factors,
                                              std::size_t trials, std::size_t ell,
                                              std::uint64_t seed, std::uint64_t p) {
    std::vector<ProbeRow> rows;
    Rng rng(seed);
    // trial 0: unshifted x_1 ... x_n, the counterexample to the unshifted form
    {
        HadamardPoly<Fp> mono(n, 1, p);
        ExpVec e(n, 1);
        mono.add_term(e, HadVec<Fp>::one(1, p));
        auto res = concentration_oracle(mono, std::min<std::size_t>(ell, n), ConcMode::Support);
        rows.push_back({0, "unshifted-monomial", std::min<std::size_t>(ell, n), res.rank_low,
                        res.rank_full, res.concentrated});
    }
    for (std::size_t t = 1; t <= trials; ++t) {
        std::vector<HadamardPoly<Fp>> fs;
        for (std::size_t j = 0; j < factors; ++j) {
            HadamardPoly<Fp> f(n, kappa, p);
            std::size_t terms = 1 + rng.below(3);
            for (std::size_t q = 0; q < terms; ++q) {
                ExpVec e = zero_exp(n);
                for (std::size_t i = 0; i < n; ++i) e[i] = static_cast<std::uint32_t>(rng.below(deg + 1));
                HadVec<Fp> v = HadVec<Fp>::zero(kappa, p);
                for (std::size_t r = 0; r < kappa; ++r) v.c[r] = Fp::random(rng, p);
                f.add_term(e, v);
            }
            if (f.is_zero()) f.add_term(zero_exp(n), HadVec<Fp>::one(kappa, p));
            fs.push_back(std::move(f));
        }
        HadamardPoly<Fp> prod(n, kappa, p);
        prod.add_term(zero_exp(n), HadVec<Fp>::one(kappa, p));
        for (const auto& f : fs) prod = prod * f;
        if (prod.is_zero()) continue;
        // shift by distinct powers of y and test over F_p(y)
        std::vector<ExpVec> monos;
        for (const auto& [e, v] : prod.terms)
            for (const auto& b : box_below(e)) monos.push_back(b);
        WeightVector w;
        try {
            w = weight_vector_for(monos, n, seed + t);
        } catch (const SearchExhausted&) {
            continue;
        }
        auto shifted = shift(lift_to_ratfunc(prod), monomial_point<RatFunc>(w, p));
        auto res = concentration_oracle(shifted, ell, ConcMode::Support);
        rows.push_back({t, "shifted-general-product", ell, res.rank_low, res.rank_full,
                        res.concentrated});
    }
    return rows;
}

}  // namespace pit
