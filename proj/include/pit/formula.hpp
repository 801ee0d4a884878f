#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pit/hadamard.hpp"

namespace pit {

// ---- class parameters (k, d, lambda, H, Delta, n, s) ----

struct ClassParams {
    std::size_t n = 0;       // variable count
    std::size_t k = 1;       // Sigma-fanin
    std::size_t d = 1;       // Pi-fanin
    std::size_t lambda = 1;  // sparsity parameter of the bottom Sigma-layer
    std::size_t H = 1;       // height (product-depth)
    std::size_t Delta = 3;   // depth, 2H or 2H+1
    std::size_t s = 1;       // size bound
    // leaf degree bounds; forced to 1 for odd Delta (linear leaves)
    std::uint64_t leaf_total_deg = 1;
    std::uint64_t leaf_pervar_deg = 1;

    bool delta_even() const { return Delta == 2 * H; }
    // Sigma-levels carrying product terms in the IR (leaves sit below them)
    std::size_t sigma_levels() const { return delta_even() ? H - 1 : H; }
    std::size_t partition_layers() const { return sigma_levels(); }

    std::uint64_t total_degree_bound() const {
        std::uint64_t deg = leaf_total_deg;
        for (std::size_t i = 0; i < sigma_levels(); ++i) deg *= d;
        return deg;
    }
    std::uint64_t pervar_degree_bound() const { return delta_even() ? leaf_pervar_deg : 1; }

    void validate() const {
        if (Delta != 2 * H && Delta != 2 * H + 1) throw PitError("Delta must be 2H or 2H+1");
        if (k > s || d > s || lambda > s) throw PitError("k, d, lambda must be <= s");
        if (!delta_even() && (leaf_total_deg != 1 || leaf_pervar_deg != 1))
            throw PitError("odd Delta forces linear leaves");
        if (H < 1 || k < 1 || d < 1 || lambda < 1) throw PitError("degenerate class parameters");
    }
};

// ---- formula IR ----
//
// A scalar formula is either a leaf (sparse polynomial over F_p, the bottom
// Sigma-layer together with its monomials) or a Sigma-node: a weighted sum of
// products. Nesting level j products form the (j+1)-th Pi-layer.

struct FNode;

struct FTerm {
    Fp weight;
    std::vector<FNode> factors;
};

struct FNode {
    std::optional<HadamardPoly<Fp>> leaf;  // kappa = 1
    std::vector<FTerm> terms;

    bool is_leaf() const { return leaf.has_value(); }
};

inline FNode make_leaf(HadamardPoly<Fp> poly) {
    FNode node;
    node.leaf = std::move(poly);
    return node;
}

inline HadamardPoly<Fp> scalar_poly(std::size_t n, std::uint64_t p) {
    return HadamardPoly<Fp>(n, 1, p);
}

inline HadamardPoly<Fp> constant_poly(std::size_t n, const Fp& c) {
    auto f = scalar_poly(n, c.modulus());
    f.add_term(zero_exp(n), HadVec<Fp>(std::vector<Fp>{c}));
    return f;
}

struct SetDepthFormula {
    ClassParams params;
    std::uint64_t p = kDefaultPrime;
    std::vector<Partition> partitions;  // one per checked Pi-layer (sigma_levels many)
    FNode root;
};

// ---- evaluation ----

inline Fp evaluate(const FNode& node, const std::vector<Fp>& point, std::uint64_t p) {
    if (node.is_leaf()) return node.leaf->eval(point).c[0];
    Fp acc = Fp::zero(p);
    for (const auto& term : node.terms) {
        if (term.weight.is_zero()) continue;
        Fp prod = term.weight;
        for (const auto& f : term.factors) prod *= evaluate(f, point, p);
        acc += prod;
    }
    return acc;
}

inline Fp evaluate(const SetDepthFormula& f, const std::vector<Fp>& point) {
    if (point.size() != f.params.n) throw DimensionMismatch("evaluate arity");
    return evaluate(f.root, point, f.p);
}

// ---- structural validation ----

namespace detail {

inline void collect_vars(const FNode& node, std::vector<bool>& used) {
    if (node.is_leaf()) {
        for (const auto& [e, v] : node.leaf->terms)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) used[i] = true;
        return;
    }
    for (const auto& t : node.terms)
        for (const auto& f : t.factors) collect_vars(f, used);
}

inline void validate_node(const FNode& node, std::size_t level, const std::vector<bool>& allowed,
                          const SetDepthFormula& formula) {
    const auto& params = formula.params;
    std::size_t L = params.sigma_levels();
    if (level == L) {
        if (!node.is_leaf()) throw PartitionViolation("expected a leaf below the last Pi-layer");
        if (node.leaf->terms.size() > params.lambda)
            throw PartitionViolation("leaf sparsity exceeds lambda");
        for (const auto& [e, v] : node.leaf->terms) {
            if (!params.delta_even() && total_degree(e) > 1)
                throw PartitionViolation("odd Delta requires linear leaves");
            if (params.delta_even()) {
                if (total_degree(e) > params.leaf_total_deg)
                    throw PartitionViolation("leaf monomial exceeds total degree bound");
                for (auto x : e)
                    if (x > params.leaf_pervar_deg)
                        throw PartitionViolation("leaf monomial exceeds per-variable degree bound");
            }
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0 && !allowed[i])
                    throw PartitionViolation("leaf uses a variable outside its block");
        }
        return;
    }
    if (node.is_leaf()) throw PartitionViolation("leaf above the bottom Sigma-layer");
    if (node.terms.size() > params.k) throw PartitionViolation("Sigma-fanin exceeds k");
    const Partition& part = formula.partitions[level];
    auto block_id = part.block_of(params.n);
    for (const auto& term : node.terms) {
        if (term.factors.size() > params.d) throw PartitionViolation("Pi-fanin exceeds d");
        // every factor must fit inside one block; distinct factors in distinct blocks
        std::vector<bool> taken(part.blocks.size(), false);
        for (const auto& f : term.factors) {
            std::vector<bool> used(params.n, false);
            collect_vars(f, used);
            std::size_t home = static_cast<std::size_t>(-1);
            for (std::size_t i = 0; i < params.n; ++i) {
                if (!used[i]) continue;
                if (!allowed[i]) throw PartitionViolation("factor escapes the enclosing block");
                std::size_t b = block_id[i];
                if (b == static_cast<std::size_t>(-1))
                    throw PartitionViolation("variable not covered by the layer partition");
                if (home == static_cast<std::size_t>(-1)) home = b;
                if (home != b) throw PartitionViolation("factor straddles two blocks");
            }
            if (home != static_cast<std::size_t>(-1)) {
                if (taken[home]) throw PartitionViolation("two factors share a block");
                taken[home] = true;
                std::vector<bool> sub = allowed;
                std::vector<bool> in_block(params.n, false);
                for (auto i : part.blocks[home]) in_block[i] = true;
                for (std::size_t i = 0; i < params.n; ++i) sub[i] = sub[i] && in_block[i];
                validate_node(f, level + 1, sub, formula);
            } else {
                validate_node(f, level + 1, allowed, formula);  // constant factor, any block
            }
        }
    }
}

}  // namespace detail

inline void validate_partitions(const SetDepthFormula& f) {
    f.params.validate();
    if (f.partitions.size() != f.params.partition_layers())
        throw PartitionViolation("wrong number of layer partitions");
    std::vector<bool> all(f.params.n, true);
    detail::validate_node(f.root, 0, all, f);
}

// ---- fanin normalization (dummy gates) ----

namespace detail {

inline FNode make_dummy(std::size_t level, const ClassParams& params, std::uint64_t p) {
    if (level == params.sigma_levels()) return make_leaf(constant_poly(params.n, Fp::one(p)));
    FNode node;
    FTerm live;
    live.weight = Fp::one(p);
    for (std::size_t j = 0; j < params.d; ++j) live.factors.push_back(make_dummy(level + 1, params, p));
    node.terms.push_back(std::move(live));
    while (node.terms.size() < params.k) {
        FTerm dead;
        dead.weight = Fp::zero(p);
        for (std::size_t j = 0; j < params.d; ++j)
            dead.factors.push_back(make_dummy(level + 1, params, p));
        node.terms.push_back(std::move(dead));
    }
    return node;
}

inline FNode normalize_node(const FNode& node, std::size_t level, const ClassParams& params,
                            std::uint64_t p) {
    if (level == params.sigma_levels()) return node;
    FNode out;
    for (const auto& term : node.terms) {
        FTerm t;
        t.weight = term.weight;
        for (const auto& f : term.factors) t.factors.push_back(normalize_node(f, level + 1, params, p));
        while (t.factors.size() < params.d) t.factors.push_back(make_dummy(level + 1, params, p));
        out.terms.push_back(std::move(t));
    }
    while (out.terms.size() < params.k) {
        FTerm dead;
        dead.weight = Fp::zero(p);
        for (std::size_t j = 0; j < params.d; ++j)
            dead.factors.push_back(make_dummy(level + 1, params, p));
        out.terms.push_back(std::move(dead));
    }
    return out;
}

}  // namespace detail

// every Sigma-gate above the bottom layer gets fanin exactly k, every Pi-gate
// fanin exactly d; the computed polynomial is unchanged
inline SetDepthFormula normalize_fanin(const SetDepthFormula& f) {
    SetDepthFormula out = f;
    out.root = detail::normalize_node(f.root, 0, f.params, f.p);
    return out;
}

// ---- scalar expansion (shared with the oracle) ----

inline HadamardPoly<Fp> expand_node(const FNode& node, std::size_t n, std::uint64_t p) {
    if (node.is_leaf()) return *node.leaf;
    HadamardPoly<Fp> acc = scalar_poly(n, p);
    for (const auto& term : node.terms) {
        if (term.weight.is_zero()) continue;
        HadamardPoly<Fp> prod = constant_poly(n, term.weight);
        for (const auto& f : term.factors) prod = prod * expand_node(f, n, p);
        acc = acc + prod;
    }
    return acc;
}

// ---- stacked (vector-valued) formulas and Eq. C_h = c^T . D_h ----

struct StackedFormula {
    std::size_t n = 0;
    std::size_t kappa = 1;
    std::uint64_t p = kDefaultPrime;
    std::size_t levels = 0;        // Sigma-product levels remaining below
    std::vector<FNode> coords;     // kappa coordinate formulas
};

inline StackedFormula stack_of(const SetDepthFormula& f) {
    StackedFormula s;
    s.n = f.params.n;
    s.kappa = 1;
    s.p = f.p;
    s.levels = f.params.sigma_levels();
    s.coords = {f.root};
    return s;
}

inline HadVec<Fp> evaluate(const StackedFormula& s, const std::vector<Fp>& point) {
    HadVec<Fp> out;
    for (const auto& c : s.coords) out.c.push_back(evaluate(c, point, s.p));
    return out;
}

inline HadamardPoly<Fp> expand(const StackedFormula& s) {
    HadamardPoly<Fp> out(s.n, s.kappa, s.p);
    for (std::size_t r = 0; r < s.coords.size(); ++r) {
        auto fr = expand_node(s.coords[r], s.n, s.p);
        for (const auto& [e, v] : fr.terms) {
            auto it = out.terms.find(e);
            if (it == out.terms.end()) {
                auto z = HadVec<Fp>::zero(s.kappa, s.p);
                z.c[r] = v.c[0];
                out.terms.emplace(e, std::move(z));
            } else {
                it->second.c[r] = v.c[0];
            }
        }
    }
    // drop all-zero rows that can appear from cancellation-free assembly
    for (auto it = out.terms.begin(); it != out.terms.end();)
        it = it->second.is_zero() ? out.terms.erase(it) : std::next(it);
    return out;
}

struct HadamardProductForm {
    HadVec<Fp> c;                        // flattened weights, kappa' = k * kappa
    std::vector<StackedFormula> factors; // d stacked factors over H_{kappa'}
    std::size_t k = 0;
    std::size_t inner_kappa = 0;
};

// Eq. C_h = (c_1, ..., c_k) . D_h: stack the j-th factors of all k products.
// Requires a fanin-normalized node (uniform k and d across coordinates).
inline HadamardProductForm to_hadamard_product(const StackedFormula& s) {
    if (s.levels == 0) throw NotNormalized("no Pi-layer left to peel");
    for (const auto& c : s.coords)
        if (c.is_leaf()) throw NotNormalized("leaf coordinate above the bottom layer");
    std::size_t k = s.coords[0].terms.size();
    std::size_t d = s.coords[0].terms[0].factors.size();
    for (const auto& c : s.coords) {
        if (c.terms.size() != k) throw NotNormalized("non-uniform Sigma-fanin");
        for (const auto& t : c.terms)
            if (t.factors.size() != d) throw NotNormalized("non-uniform Pi-fanin");
    }
    HadamardProductForm out;
    out.k = k;
    out.inner_kappa = s.kappa;
    std::size_t kp = k * s.kappa;
    out.c = HadVec<Fp>::zero(kp, s.p);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t r = 0; r < s.kappa; ++r) out.c.c[i * s.kappa + r] = s.coords[r].terms[i].weight;
    for (std::size_t j = 0; j < d; ++j) {
        StackedFormula fac;
        fac.n = s.n;
        fac.kappa = kp;
        fac.p = s.p;
        fac.levels = s.levels - 1;
        fac.coords.resize(kp);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t r = 0; r < s.kappa; ++r)
                fac.coords[i * s.kappa + r] = s.coords[r].terms[i].factors[j];
        out.factors.push_back(std::move(fac));
    }
    return out;
}

// result_r = sum_i c[(i, r)] * D[(i, r)] for r in [kappa]: the c^T . D_h contraction
inline HadVec<Fp> contract(const HadVec<Fp>& c, const HadVec<Fp>& dval, std::size_t k,
                           std::size_t kappa, std::uint64_t p) {
    if (c.kappa() != k * kappa || dval.kappa() != k * kappa)
        throw DimensionMismatch("contract shape");
    HadVec<Fp> out = HadVec<Fp>::zero(kappa, p);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t r = 0; r < kappa; ++r)
            out.c[r] += c.c[i * kappa + r] * dval.c[i * kappa + r];
    return out;
}

// ---- diagonal circuits (sum of d-th powers of linear forms) ----

struct DiagonalCircuit {
    std::size_t n = 0;
    std::size_t k = 1;
    std::uint64_t d = 1;
    std::uint64_t p = kDefaultPrime;
    std::vector<std::vector<Fp>> forms;  // k rows of (n+1): z_{i,0} + sum_j z_{i,j} x_j
    std::vector<Fp> weights;             // k

    Fp eval_form(std::size_t i, const std::vector<Fp>& point) const {
        Fp acc = forms[i][0];
        for (std::size_t j = 0; j < n; ++j) acc += forms[i][j + 1] * point[j];
        return acc;
    }
    Fp evaluate(const std::vector<Fp>& point) const {
        if (point.size() != n) throw DimensionMismatch("evaluate arity");
        Fp acc = Fp::zero(p);
        for (std::size_t i = 0; i < k; ++i) acc += weights[i] * eval_form(i, point).pow(d);
        return acc;
    }
};

struct DiagonalHadamard {
    HadVec<Fp> weights;
    HadamardPoly<Fp> F;  // linear, kappa = k; i-th coordinate is f_i
    std::uint64_t d = 1;
};

// D(x) = F^d over H_k(F); weights^T . F^d reproduces the circuit
inline DiagonalHadamard diagonal_to_hadamard(const DiagonalCircuit& c) {
    DiagonalHadamard out;
    out.weights = HadVec<Fp>(c.weights);
    out.d = c.d;
    out.F = HadamardPoly<Fp>(c.n, c.k, c.p);
    HadVec<Fp> z0(std::vector<Fp>{});
    for (std::size_t i = 0; i < c.k; ++i) z0.c.push_back(c.forms[i][0]);
    out.F.add_term(zero_exp(c.n), z0);
    for (std::size_t j = 0; j < c.n; ++j) {
        HadVec<Fp> zj(std::vector<Fp>{});
        for (std::size_t i = 0; i < c.k; ++i) zj.c.push_back(c.forms[i][j + 1]);
        ExpVec e = zero_exp(c.n);
        e[j] = 1;
        out.F.add_term(e, zj);
    }
    return out;
}

// ---- dual representation (sum of products of univariates) ----

struct DualRepresentation {
    std::size_t n = 0;
    std::size_t kprime = 1;
    std::uint64_t p = kDefaultPrime;
    std::vector<std::vector<UniPoly>> g;  // kprime x n, g_{i,j}(x_j)

    Fp evaluate(const std::vector<Fp>& point) const {
        if (point.size() != n) throw DimensionMismatch("evaluate arity");
        Fp acc = Fp::zero(p);
        for (std::size_t i = 0; i < kprime; ++i) {
            Fp prod = Fp::one(p);
            for (std::size_t j = 0; j < n; ++j) prod *= g[i][j].eval(point[j]);
            acc += prod;
        }
        return acc;
    }
};

// ---- blackbox access (only ClassParams visible to the generator) ----

struct Blackbox {
    ClassParams params;
    std::uint64_t p = kDefaultPrime;
    std::function<Fp(const std::vector<Fp>&)> eval;
};

using Circuit = std::variant<SetDepthFormula, DiagonalCircuit, DualRepresentation>;

inline Fp evaluate(const Circuit& c, const std::vector<Fp>& point) {
    return std::visit(
        [&](const auto& f) {
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, SetDepthFormula>)
                return evaluate(f, point);
            else
                return f.evaluate(point);
        },
        c);
}

inline std::uint64_t circuit_prime(const Circuit& c) {
    return std::visit([](const auto& f) { return f.p; }, c);
}

inline std::size_t circuit_arity(const Circuit& c) {
    return std::visit(
        [](const auto& f) {
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, SetDepthFormula>)
                return f.params.n;
            else
                return f.n;
        },
        c);
}

}  // namespace pit
