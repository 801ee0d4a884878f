#pragma once

#include <cstdint>
#include <vector>

#include "pit/formula.hpp"
#include "pit/rng.hpp"

namespace pit {

// Seeded generators for test corpora. Zero instances are built to cancel
// structurally (telescoping / distributivity), never by evaluating.

inline Partition random_partition(std::size_t n, std::size_t d, Rng& rng) {
    Partition part;
    part.blocks.assign(d, {});
    // every block nonempty when n >= d, remainder scattered
    std::vector<std::size_t> vars(n);
    for (std::size_t i = 0; i < n; ++i) vars[i] = i;
    for (std::size_t i = n; i-- > 1;) std::swap(vars[i], vars[rng.below(i + 1)]);
    for (std::size_t i = 0; i < n; ++i)
        part.blocks[i < d ? i : rng.below(d)].push_back(vars[i]);
    for (auto& b : part.blocks) std::sort(b.begin(), b.end());
    return part;
}

// random affine-linear leaf on the given variables
inline FNode random_linear_leaf(std::size_t n, const std::vector<std::size_t>& vars, Rng& rng,
                                std::uint64_t p, bool allow_constant = true) {
    auto f = scalar_poly(n, p);
    if (allow_constant && rng.below(2) == 0)
        f.add_term(zero_exp(n), HadVec<Fp>({std::vector<Fp>{Fp::random(rng, p)}}));
    bool any = false;
    for (auto v : vars) {
        if (rng.below(3) == 0 && vars.size() > 1) continue;
        ExpVec e = zero_exp(n);
        e[v] = 1;
        Fp c = Fp::random(rng, p);
        if (c.is_zero()) c = Fp::one(p);
        f.add_term(e, HadVec<Fp>({std::vector<Fp>{c}}));
        any = true;
    }
    if (!any && !vars.empty()) {
        ExpVec e = zero_exp(n);
        e[vars[0]] = 1;
        f.add_term(e, HadVec<Fp>({std::vector<Fp>{Fp::one(p)}}));
    }
    if (f.is_zero()) f.add_term(zero_exp(n), HadVec<Fp>({std::vector<Fp>{Fp::one(p)}}));
    return make_leaf(f);
}

// random lambda-sparse leaf on the given variables
inline FNode random_sparse_leaf(std::size_t n, const std::vector<std::size_t>& vars,
                                std::size_t lambda, std::uint64_t pervar_deg,
                                std::uint64_t total_deg, Rng& rng, std::uint64_t p) {
    auto f = scalar_poly(n, p);
    std::size_t terms = 1 + rng.below(lambda);
    for (std::size_t t = 0; t < terms; ++t) {
        ExpVec e = zero_exp(n);
        std::uint64_t budget = total_deg;
        for (auto v : vars) {
            std::uint64_t dg = rng.below(std::min<std::uint64_t>(pervar_deg, budget) + 1);
            e[v] = static_cast<std::uint32_t>(dg);
            budget -= dg;
        }
        f.add_term(e, HadVec<Fp>({std::vector<Fp>{Fp::random(rng, p)}}));
    }
    if (f.is_zero()) f.add_term(zero_exp(n), HadVec<Fp>({std::vector<Fp>{Fp::one(p)}}));
    return make_leaf(f);
}

// ---- set-multilinear depth-3 (H = 1, Delta = 3) ----

inline SetDepthFormula random_setml3(std::size_t n, std::size_t k, std::size_t d,
                                     std::uint64_t seed, std::uint64_t p = kDefaultPrime) {
    Rng rng(seed);
    SetDepthFormula f;
    f.p = p;
    f.params = ClassParams{n, k, d, n + 1, 1, 3, 4 * n * k * d + 8, 1, 1};
    f.partitions.push_back(random_partition(n, d, rng));
    for (std::size_t i = 0; i < k; ++i) {
        FTerm term;
        term.weight = Fp::random(rng, p);
        if (term.weight.is_zero()) term.weight = Fp::one(p);
        for (std::size_t j = 0; j < d; ++j)
            term.factors.push_back(random_linear_leaf(n, f.partitions[0].blocks[j], rng, p));
        f.root.terms.push_back(std::move(term));
    }
    validate_partitions(f);
    return f;
}

// telescoping zero: A - A with one copy rescaled across factors, plus a
// distributivity rewrite; cancels identically without being syntactically zero
inline SetDepthFormula zero_setml3(std::size_t n, std::size_t k, std::size_t d,
                                   std::uint64_t seed, std::uint64_t p = kDefaultPrime) {
    Rng rng(seed);
    SetDepthFormula f;
    f.p = p;
    std::size_t half = std::max<std::size_t>(1, k / 2);
    f.params = ClassParams{n, 2 * half, d, n + 1, 1, 3, 8 * n * k * d + 8, 1, 1};
    f.partitions.push_back(random_partition(n, d, rng));
    for (std::size_t i = 0; i < half; ++i) {
        FTerm pos;
        pos.weight = Fp::random(rng, p);
        if (pos.weight.is_zero()) pos.weight = Fp::one(p);
        for (std::size_t j = 0; j < d; ++j)
            pos.factors.push_back(random_linear_leaf(n, f.partitions[0].blocks[j], rng, p));
        // negated copy with the scalar pushed through two factors: r f_1, r^{-1} f_2
        FTerm neg;
        neg.weight = -pos.weight;
        Fp r = Fp::random(rng, p);
        if (r.is_zero()) r = Fp(2, p);
        for (std::size_t j = 0; j < d; ++j) {
            auto leaf = *pos.factors[j].leaf;
            Fp scale = j == 0 ? r : (j == 1 ? r.inverse() : Fp::one(p));
            if (d == 1) scale = Fp::one(p);
            neg.factors.push_back(make_leaf(leaf.scaled(HadVec<Fp>({std::vector<Fp>{scale}}))));
        }
        f.root.terms.push_back(std::move(pos));
        f.root.terms.push_back(std::move(neg));
    }
    validate_partitions(f);
    return f;
}

// ---- set-depth-4 (H = 2, Delta = 4): sparse leaves under one checked layer ----

inline SetDepthFormula random_setdepth4(std::size_t n, std::size_t k, std::size_t d,
                                        std::size_t lambda, std::uint64_t pervar_deg,
                                        std::uint64_t seed, std::uint64_t p = kDefaultPrime) {
    Rng rng(seed);
    SetDepthFormula f;
    f.p = p;
    std::uint64_t total = pervar_deg * std::max<std::size_t>(1, n / d);
    f.params = ClassParams{n, k, d, lambda, 2, 4, 16 * n * k * d * lambda + 16, total, pervar_deg};
    f.partitions.push_back(random_partition(n, d, rng));
    for (std::size_t i = 0; i < k; ++i) {
        FTerm term;
        term.weight = Fp::random(rng, p);
        if (term.weight.is_zero()) term.weight = Fp::one(p);
        for (std::size_t j = 0; j < d; ++j)
            term.factors.push_back(random_sparse_leaf(n, f.partitions[0].blocks[j], lambda,
                                                      pervar_deg, total, rng, p));
        f.root.terms.push_back(std::move(term));
    }
    validate_partitions(f);
    return f;
}

inline SetDepthFormula zero_setdepth4(std::size_t n, std::size_t k, std::size_t d,
                                      std::size_t lambda, std::uint64_t pervar_deg,
                                      std::uint64_t seed, std::uint64_t p = kDefaultPrime) {
    Rng rng(seed);
    auto f = random_setdepth4(n, std::max<std::size_t>(1, k / 2), d, lambda, pervar_deg,
                              seed * 3 + 1, p);
    std::vector<FTerm> negs;
    for (const auto& term : f.root.terms) {
        FTerm neg;
        neg.weight = -term.weight;
        Fp r = Fp(1 + rng.below(f.p - 1), f.p);
        for (std::size_t j = 0; j < term.factors.size(); ++j) {
            auto leaf = *term.factors[j].leaf;
            Fp scale = j == 0 ? r : (j == 1 ? r.inverse() : Fp::one(f.p));
            if (term.factors.size() == 1) scale = Fp::one(f.p);
            neg.factors.push_back(make_leaf(leaf.scaled(HadVec<Fp>({std::vector<Fp>{scale}}))));
        }
        negs.push_back(std::move(neg));
    }
    for (auto& t : negs) f.root.terms.push_back(std::move(t));
    f.params.k = f.root.terms.size();
    f.params.s *= 2;
    validate_partitions(f);
    return f;
}

// ---- diagonal circuits ----

inline DiagonalCircuit random_diagonal(std::size_t n, std::size_t k, std::uint64_t d,
                                       std::uint64_t seed, std::uint64_t p = kDefaultPrime) {
    Rng rng(seed);
    DiagonalCircuit c;
    c.n = n;
    c.k = k;
    c.d = d;
    c.p = p;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Fp> form;
        for (std::size_t j = 0; j <= n; ++j) form.push_back(Fp::random(rng, p));
        c.forms.push_back(std::move(form));
        Fp w = Fp::random(rng, p);
        c.weights.push_back(w.is_zero() ? Fp::one(p) : w);
    }
    return c;
}

// pairs (f, -f) with matched forms: identically zero diagonal circuit
inline DiagonalCircuit zero_diagonal(std::size_t n, std::size_t k, std::uint64_t d,
                                     std::uint64_t seed, std::uint64_t p = kDefaultPrime) {
    Rng rng(seed);
    DiagonalCircuit c;
    c.n = n;
    c.k = 2 * std::max<std::size_t>(1, k / 2);
    c.d = d;
    c.p = p;
    for (std::size_t i = 0; i < c.k / 2; ++i) {
        std::vector<Fp> form;
        for (std::size_t j = 0; j <= n; ++j) form.push_back(Fp::random(rng, p));
        Fp w = Fp::random(rng, p);
        if (w.is_zero()) w = Fp::one(p);
        c.forms.push_back(form);
        c.weights.push_back(w);
        c.forms.push_back(form);
        c.weights.push_back(-w);
    }
    return c;
}

// ---- dual representations ----

inline DualRepresentation random_dual(std::size_t n, std::size_t kprime, std::uint64_t deg,
                                      std::uint64_t seed, std::uint64_t p = kDefaultPrime) {
    Rng rng(seed);
    DualRepresentation out;
    out.n = n;
    out.kprime = kprime;
    out.p = p;
    for (std::size_t i = 0; i < kprime; ++i) {
        std::vector<UniPoly> row;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::uint64_t> cs(deg + 1, 0);
            for (auto& x : cs) x = rng.below(p);
            UniPoly g(std::move(cs), p);
            if (g.is_zero()) g = UniPoly::one(p);
            row.push_back(std::move(g));
        }
        out.g.push_back(std::move(row));
    }
    return out;
}

inline DualRepresentation zero_dual(std::size_t n, std::size_t kprime, std::uint64_t deg,
                                    std::uint64_t seed, std::uint64_t p = kDefaultPrime) {
    auto a = random_dual(n, std::max<std::size_t>(1, kprime / 2), deg, seed, p);
    DualRepresentation out;
    out.n = n;
    out.p = p;
    for (std::size_t i = 0; i < a.kprime; ++i) {
        auto pos = a.g[i];
        auto neg = a.g[i];
        neg[0] = -neg[0];  // flip one factor: the two products cancel
        out.g.push_back(pos);
        out.g.push_back(neg);
    }
    out.kprime = out.g.size();
    return out;
}

}  // namespace pit
