#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pit/formula.hpp"
#include "pit/sparsepit.hpp"
#include "pit/transfer.hpp"

namespace pit {

// ---- the l_h schedule ----

// ceil(log2 x) for x >= 1
inline std::size_t ceil_log2(std::uint64_t x) {
    std::size_t m = 0;
    while ((1ULL << m) < x) ++m;
    return m;
}

// ceil(H * log2 k) = ceil(log2 k^H), exact in integers
inline std::size_t ceil_h_log2(std::size_t H, std::uint64_t k) {
    unsigned __int128 pw = 1;
    for (std::size_t i = 0; i < H; ++i) {
        pw *= k;
        if (pw > (unsigned __int128)1 << 126) throw TooLarge("k^H overflows");
    }
    std::size_t m = 0;
    while (((unsigned __int128)1 << m) < pw) ++m;
    return m;
}

struct EllSchedule {
    std::size_t H = 1, k = 1, lambda = 1, Delta = 3;
    std::size_t ell = 1;              // 2 ceil(H log2 k) + 1
    std::vector<std::size_t> values;  // ell_h for h = 0..H (odd Delta) or 0..H-1 (even)

    std::size_t l0() const { return values[0]; }

    // ell_h = (ell_{h+1} - 1) H (ell - 1) + 1 on every applicable h
    bool recurrence_holds() const {
        std::size_t last = Delta == 2 * H ? (H >= 2 ? H - 2 : 0) : H - 1;
        if (values.size() < 2) return true;
        for (std::size_t h = 0; h <= last && h + 1 < values.size(); ++h)
            if (values[h] != (values[h + 1] - 1) * H * (ell - 1) + 1) return false;
        return true;
    }
};

inline EllSchedule ell_schedule(const ClassParams& params) {
    params.validate();
    EllSchedule sc;
    sc.H = params.H;
    sc.k = params.k;
    sc.lambda = params.lambda;
    sc.Delta = params.Delta;
    std::size_t hlk = ceil_h_log2(params.H, params.k);
    sc.ell = 2 * hlk + 1;
    std::uint64_t base = 2 * static_cast<std::uint64_t>(params.H) * hlk;
    auto power = [&](std::size_t e) {
        unsigned __int128 r = 1;
        for (std::size_t i = 0; i < e; ++i) {
            r *= base;
            if (r > (unsigned __int128)1 << 62) throw TooLarge("ell_h overflows");
        }
        return static_cast<std::uint64_t>(r);
    };
    if (params.delta_even()) {
        std::size_t hlkl =
            ceil_h_log2(params.H, static_cast<std::uint64_t>(params.k) * params.lambda);
        sc.values.resize(params.H);
        for (std::size_t h = 0; h < params.H; ++h)
            sc.values[h] = power(params.H - h - 1) * (2 * hlkl) + 1;
    } else {
        sc.values.resize(params.H + 1);
        for (std::size_t h = 0; h < params.H; ++h) sc.values[h] = power(params.H - h) + 1;
        sc.values[params.H] = 2;
    }
    if (!sc.recurrence_holds()) throw PitError("ell schedule recurrence broken");
    return sc;
}

// ---- shift maps tau_h ----

struct ShiftLayer {
    std::size_t h = 0;
    std::vector<Fp> alpha;           // per variable, nonzero
    std::vector<std::uint64_t> a;    // per variable, positive exponents of t_h
};

struct ShiftMap {
    std::size_t n = 0;
    std::uint64_t p = kDefaultPrime;
    std::vector<ShiftLayer> layers;           // ordered h = H-1 down to 0
    std::vector<std::size_t> projection_log;  // Hadamard coordinates dropped on the way

    // translation vector at concrete t_h values (one per layer, same order)
    std::vector<Fp> translation_at(const std::vector<Fp>& tvals) const {
        if (tvals.size() != layers.size()) throw DimensionMismatch("one value per layer");
        std::vector<Fp> tr(n, Fp::zero(p));
        for (std::size_t li = 0; li < layers.size(); ++li)
            for (std::size_t i = 0; i < n; ++i)
                tr[i] += layers[li].alpha[i] * tvals[li].pow(layers[li].a[i]);
        return tr;
    }

    // single-layer symbolic shift point over F_p(y)
    std::vector<RatFunc> symbolic_layer(std::size_t li) const {
        std::vector<RatFunc> pt;
        for (std::size_t i = 0; i < n; ++i)
            pt.push_back(RatFunc(UniPoly::monomial(layers[li].alpha[i], layers[li].a[i])));
        return pt;
    }
};

// ---- Lemma sparse-poly: the base-case shift of a sparse f ----

struct SparseShift {
    std::vector<std::uint64_t> b;  // x_i -> x_i + t^{b_i}
    std::size_t ell_prime = 1;
};

// the Appendix D.1 lift: univariate vector factors g_1 * ... * g_n over
// H_{s(f) * kappa}(F_p) whose star-product reassembles f's term vector
inline std::vector<HadamardPoly<Fp>> lift_to_univariate_factors(const HadamardPoly<Fp>& f) {
    std::size_t s = f.terms.size();
    std::size_t big = s * f.kappa;
    std::vector<HadamardPoly<Fp>> gs;
    for (std::size_t i = 0; i < f.n; ++i) {
        HadamardPoly<Fp> gi(f.n, big, f.p);
        std::size_t ti = 0;
        for (const auto& [e, z] : f.terms) {
            ExpVec mono = zero_exp(f.n);
            mono[i] = e[i];
            HadVec<Fp> v = HadVec<Fp>::zero(big, f.p);
            for (std::size_t r = 0; r < f.kappa; ++r)
                v.c[ti * f.kappa + r] = i == 0 ? z.c[r] : Fp::one(f.p);
            gi.add_term(mono, v);
            ++ti;
        }
        gs.push_back(std::move(gi));
    }
    return gs;
}

// Lemma 4.2: sigma(f) is l'-concentrated for
// l' = 1 + min(2 ceil(log2(kappa s(f))), mu(f)); exponents b from a weight
// vector separating the lifted univariate cones.
inline SparseShift sparse_shift(const HadamardPoly<Fp>& f, std::uint64_t delta_bound,
                                std::uint64_t seed = 17) {
    if (f.is_zero()) throw EmptyPolynomial("sparse_shift of the zero polynomial");
    auto st = support_stats(f);
    SparseShift out;
    out.ell_prime =
        1 + std::min<std::size_t>(2 * ceil_log2(f.kappa * st.sparsity), st.mu);
    auto gs = lift_to_univariate_factors(f);
    std::vector<std::vector<ExpVec>> cones;
    unsigned __int128 boxsize = 1;
    for (const auto& g : gs) {
        cones.push_back(cone(g));
        boxsize *= cones.back().size();
        if (boxsize > 2'000'000) throw TooLarge("separation box too large for desk scale");
    }
    for (const auto& cn : cones)
        for (const auto& e : cn)
            if (total_degree(e) > delta_bound)
                throw PreconditionViolated("factor degree exceeds the stated bound");
    out.b = build_weight_vector(cones, f.n, seed);
    return out;
}

// ---- Lemma preserve-invertibility: alpha with f(alpha) a unit ----

// Appendix D.2: per-coordinate hitting maps from low-support projections and a
// sparse grid, glued through g_{i,j}(u) = g(u)/(u - beta_{i,j}) and a bivariate
// (u, v) grid. Returns the first alpha on the grid with every coordinate nonzero.
inline std::vector<Fp> preserve_invertibility_alpha(const HadamardPoly<Fp>& f,
                                                    std::uint64_t delta, std::size_t ell_prime) {
    const std::uint64_t p = f.p;
    for (std::size_t r = 0; r < f.kappa; ++r) {
        bool nonzero = false;
        for (const auto& [e, v] : f.terms)
            if (!v.c[r].is_zero()) {
                nonzero = true;
                break;
            }
        if (!nonzero) throw NoCoordinateWitness(r);
    }
    // hitting maps: for every |X| <= ell_prime, the Kronecker grid on X
    std::vector<std::vector<Fp>> maps;
    std::size_t cap = std::min<std::size_t>(ell_prime, f.n);
    auto emit = [&](const std::vector<std::size_t>& X) {
        std::vector<std::uint64_t> degs(X.size(), delta);
        for (const auto& gpt : hitting_points_mixed(degs, p)) {
            std::vector<Fp> full(f.n, Fp::zero(p));
            for (std::size_t j = 0; j < X.size(); ++j) full[X[j]] = gpt[j];
            maps.push_back(std::move(full));
        }
    };
    {
        std::vector<std::size_t> cur;
        std::function<void(std::size_t)> en = [&](std::size_t start) {
            emit(cur);
            if (cur.size() == cap) return;
            for (std::size_t i = start; i < f.n; ++i) {
                cur.push_back(i);
                en(i + 1);
                cur.pop_back();
            }
        };
        en(0);
    }
    std::size_t r = maps.size();
    std::uint64_t kr = f.kappa * r;
    if (kr + 1 >= p) throw FieldTooSmall("kappa * r distinct betas unavailable");
    // g_{i,j}(u) = g(u) / (u - beta_{i,j}); same hitting list for every coordinate
    std::vector<Fp> betas;
    for (std::uint64_t t = 1; t <= kr; ++t) betas.push_back(Fp(t, p));
    UniPoly g = UniPoly::one(p);
    for (const auto& b : betas) g = g * UniPoly({(-b).value(), 1}, p);
    std::vector<UniPoly> gij;
    for (const auto& b : betas) gij.push_back(UniPoly::exact_div(g, UniPoly({(-b).value(), 1}, p)));
    // sigma(u, v): x -> v * sum g_{i,j}(u) * sigma_{i,j}; bivariate grid search
    std::uint64_t udeg = f.kappa * delta * (kr > 0 ? kr - 1 : 0) + 1;
    std::uint64_t vdeg = f.kappa * delta + 1;
    for (std::uint64_t uv = 0; uv <= udeg; ++uv) {
        Fp u(uv, p);
        std::vector<Fp> gval;
        for (std::size_t j = 0; j < gij.size(); ++j) gval.push_back(gij[j].eval(u));
        std::vector<Fp> dir(f.n, Fp::zero(p));
        for (std::size_t idx = 0; idx < betas.size(); ++idx) {
            std::size_t j = idx % r;  // beta_{i,j} walks the same map list per coordinate block
            for (std::size_t m = 0; m < f.n; ++m) dir[m] += gval[idx] * maps[j][m];
        }
        for (std::uint64_t vv = 0; vv <= vdeg; ++vv) {
            Fp v(vv, p);
            std::vector<Fp> albeta(f.n, Fp::zero(p));
            for (std::size_t m = 0; m < f.n; ++m) albeta[m] = v * dir[m];
            auto val = f.eval(albeta);
            if (val.is_unit()) return albeta;
        }
    }
    throw NoAlphaFound("bivariate grid exhausted without a unit evaluation");
}

// ---- truncation and the basis-change matrices of the induction ----

// keep the coefficients with support weight < ell
template <class T>
HadamardPoly<T> truncate_support(const HadamardPoly<T>& f, std::size_t ell) {
    HadamardPoly<T> g(f.n, f.kappa, f.p);
    for (const auto& [e, v] : f.terms)
        if (support_weight(e) < ell) g.add_term(e, v);
    return g;
}

// greedy basis of the coefficient span, lowest support first, graded-lex tie-break
inline std::vector<ExpVec> lowest_support_basis(const HadamardPoly<Fp>& f) {
    std::vector<ExpVec> order;
    for (const auto& [e, v] : f.terms) order.push_back(e);
    std::stable_sort(order.begin(), order.end(), [](const ExpVec& a, const ExpVec& b) {
        auto wa = support_weight(a), wb = support_weight(b);
        if (wa != wb) return wa < wb;
        return GradedLexLess{}(a, b);
    });
    std::vector<ExpVec> basis;
    Matrix<Fp> bm = Matrix<Fp>::zero(f.kappa, 0, f.p);
    for (const auto& e : order) {
        auto z = coeff(e, f);
        Matrix<Fp> cand = Matrix<Fp>::zero(f.kappa, bm.cols() + 1, f.p);
        for (std::size_t i = 0; i < f.kappa; ++i) {
            for (std::size_t j = 0; j < bm.cols(); ++j) cand(i, j) = bm(i, j);
            cand(i, bm.cols()) = z.c[i];
        }
        if (rank(cand) == bm.cols() + 1) {
            bm = cand;
            basis.push_back(e);
        }
    }
    return basis;
}

struct BasisChange {
    bool ok = false;
    std::vector<ExpVec> basis;  // shared B_j
    Matrix<UniPoly> Mhat;       // Zhat' = Zhat . Mhat
    Matrix<UniPoly> Mtilde;     // Ztilde' = Zhat . Mtilde
    UniPoly det_hat, det_tilde;
};

namespace detail {

// lambda-representation of every coefficient of f over the basis columns
inline std::map<ExpVec, std::vector<Fp>, GradedLexLess> basis_representation(
    const HadamardPoly<Fp>& f, const std::vector<ExpVec>& basis) {
    std::uint64_t p = f.p;
    Matrix<Fp> B = Matrix<Fp>::zero(f.kappa, basis.size(), p);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        auto z = coeff(basis[j], f);
        for (std::size_t i = 0; i < f.kappa; ++i) B(i, j) = z.c[i];
    }
    std::map<ExpVec, std::vector<Fp>, GradedLexLess> rep;
    for (const auto& [e, z] : f.terms) {
        Matrix<Fp> aug = Matrix<Fp>::zero(f.kappa, basis.size() + 1, p);
        for (std::size_t i = 0; i < f.kappa; ++i) {
            for (std::size_t j = 0; j < basis.size(); ++j) aug(i, j) = B(i, j);
            aug(i, basis.size()) = z.c[i];
        }
        auto ns = nullspace_basis(aug);
        std::vector<Fp> lam(basis.size(), Fp::zero(p));
        bool solved = false;
        for (const auto& vec : ns) {
            if (vec.back().is_zero()) continue;
            Fp sc = -(vec.back().inverse());
            for (std::size_t j = 0; j < basis.size(); ++j) lam[j] = vec[j] * sc;
            solved = true;
            break;
        }
        if (!solved) throw PitError("coefficient outside its own basis span");
        rep.emplace(e, std::move(lam));
    }
    return rep;
}

// M'[b][u] = sum_v lambda_{v,b} C(v,u) alpha^{v-u} t^{<a, v-u>} over the basis columns
inline Matrix<UniPoly> basis_change_matrix(const HadamardPoly<Fp>& f,
                                           const std::vector<ExpVec>& basis,
                                           const std::vector<Fp>& alpha,
                                           const std::vector<std::uint64_t>& a) {
    auto rep = basis_representation(f, basis);
    std::uint64_t p = f.p;
    Matrix<UniPoly> M(basis.size(), basis.size(), UniPoly::zero(p));
    for (std::size_t uj = 0; uj < basis.size(); ++uj) {
        const ExpVec& u = basis[uj];
        for (const auto& [v, lam] : rep) {
            Fp cb = binomial_vec(v, u, p);
            if (cb.is_zero()) continue;
            Fp apow = Fp::one(p);
            std::uint64_t texp = 0;
            for (std::size_t i = 0; i < u.size(); ++i)
                if (v[i] > u[i]) {
                    apow *= alpha[i].pow(v[i] - u[i]);
                    texp += a[i] * (v[i] - u[i]);
                }
            for (std::size_t bj = 0; bj < basis.size(); ++bj) {
                if (lam[bj].is_zero()) continue;
                M(bj, uj).add_scaled_shifted(UniPoly::one(p), lam[bj] * cb * apow, texp);
            }
        }
    }
    return M;
}

}  // namespace detail

// Eq. crucial_obs: Zhat'_j = Zhat_j Mhat', Ztilde'_j = Zhat_j Mtilde', both
// determinants == 1 mod t_h and invertible over F(t_{h+1})(t_h).
inline BasisChange verify_basis_change(const HadamardPoly<Fp>& fhat, const HadamardPoly<Fp>& ghat,
                                       const std::vector<Fp>& alpha,
                                       const std::vector<std::uint64_t>& a) {
    BasisChange out;
    auto bh = lowest_support_basis(fhat);
    auto bt = lowest_support_basis(ghat);
    if (bh != bt)
        throw BasisMismatch("truncation changed the basis; upstream concentration failed");
    out.basis = bh;
    out.Mhat = detail::basis_change_matrix(fhat, out.basis, alpha, a);
    out.Mtilde = detail::basis_change_matrix(ghat, out.basis, alpha, a);
    out.det_hat = bareiss_det(out.Mhat);
    out.det_tilde = bareiss_det(out.Mtilde);
    auto unit_mod_t = [](const UniPoly& d) { return !d.is_zero() && d.coeff(0) == Fp(1, d.modulus()); };
    out.ok = unit_mod_t(out.det_hat) && unit_mod_t(out.det_tilde);
    // identity mod t_h, entrywise
    for (std::size_t i = 0; i < out.basis.size() && out.ok; ++i)
        for (std::size_t j = 0; j < out.basis.size() && out.ok; ++j) {
            Fp c0 = out.Mhat(i, j).coeff(0);
            Fp c1 = out.Mtilde(i, j).coeff(0);
            Fp want = i == j ? Fp::one(fhat.p) : Fp::zero(fhat.p);
            out.ok = c0 == want && c1 == want;
        }
    return out;
}

// ---- the inductive construction of tau_0 (class level) ----

// Deterministic nonzero alphas. For mu <= 1 leaf classes any nonzero choice
// keeps every f_hat(alpha t^a) a unit, because the separating exponents place
// distinct monomials on distinct powers of t_h.
inline std::vector<Fp> default_alphas(std::size_t n, std::uint64_t p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Fp> al;
    for (std::size_t i = 0; i < n; ++i) al.push_back(Fp(rng.range(1, p - 1), p));
    return al;
}

// exponent vectors with support <= cap and per-variable degree <= pv
inline std::vector<ExpVec> low_support_box(std::size_t n, std::size_t cap, std::uint64_t pv,
                                           std::size_t limit = 2'000'000) {
    std::vector<ExpVec> out;
    out.push_back(zero_exp(n));
    std::vector<std::size_t> subset;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!subset.empty()) {
            // all assignments of degrees 1..pv on the chosen support
            ExpVec e = zero_exp(n);
            std::function<void(std::size_t)> fill = [&](std::size_t idx) {
                if (out.size() > limit) throw TooLarge("class separation set too large");
                if (idx == subset.size()) {
                    out.push_back(e);
                    return;
                }
                for (std::uint64_t dg = 1; dg <= pv; ++dg) {
                    e[subset[idx]] = static_cast<std::uint32_t>(dg);
                    fill(idx + 1);
                }
                e[subset[idx]] = 0;
            };
            fill(0);
        }
        if (subset.size() == cap) return;
        for (std::size_t i = start; i < n; ++i) {
            subset.push_back(i);
            rec(i + 1);
            subset.pop_back();
        }
    };
    rec(0);
    return out;
}

// Theorem 4.1, executed for the class: reverse induction over the layers.
// Layer exponents a_h come from a weight vector separating every product of
// <= ell truncated-cone monomials the class can produce; alphas are fixed
// nonzero constants (see ledger note on the class-level Lemma 4.3 gap).
inline ShiftMap build_tau(const ClassParams& params, std::uint64_t p = kDefaultPrime,
                          std::uint64_t seed = 17) {
    params.validate();
    EllSchedule sc = ell_schedule(params);
    ShiftMap tau;
    tau.n = params.n;
    tau.p = p;
    std::uint64_t pv = params.pervar_degree_bound();
    for (std::size_t hs = params.H; hs-- > 0;) {
        // odd Delta base case h = H is the identity map: no layer emitted there
        std::size_t ell_next = hs + 1 < sc.values.size() ? sc.values[hs + 1] : 0;
        std::size_t cap;
        if (params.delta_even() && hs + 1 == params.H) {
            cap = params.n;  // Lemma 4.2 box: no truncation available below
        } else {
            cap = std::min<std::size_t>(params.n, sc.ell * (ell_next - 1));
        }
        auto eset = low_support_box(params.n, cap, pv);
        ShiftLayer layer;
        layer.h = hs;
        layer.a = weight_vector_for(eset, params.n, seed + hs);
        layer.alpha = default_alphas(params.n, p, seed * 131 + hs);
        tau.layers.push_back(std::move(layer));
    }
    return tau;
}

}  // namespace pit
