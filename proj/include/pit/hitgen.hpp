#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "pit/concentrate.hpp"
#include "pit/formula.hpp"
#include "pit/sparsepit.hpp"

namespace pit {

namespace detail {

inline unsigned long long checked_mul(unsigned long long a, unsigned long long b) {
    unsigned __int128 r = (unsigned __int128)a * b;
    if (r > ~0ULL) throw TooLarge("size bound overflow");
    return static_cast<unsigned long long>(r);
}
inline unsigned long long checked_add(unsigned long long a, unsigned long long b) {
    if (a > ~0ULL - b) throw TooLarge("size bound overflow");
    return a + b;
}

inline bool point_less(const std::vector<Fp>& a, const std::vector<Fp>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].value() != b[i].value()) return a[i].value() < b[i].value();
    }
    return false;
}

inline void canonicalize(std::vector<std::vector<Fp>>& pts) {
    std::sort(pts.begin(), pts.end(), point_less);
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) {
                              for (std::size_t i = 0; i < a.size(); ++i)
                                  if (a[i].value() != b[i].value()) return false;
                              return true;
                          }),
              pts.end());
}

// all subsets of [n] of size <= cap, smallest first, lexicographic within a size
inline std::vector<std::vector<std::size_t>> subsets_up_to(std::size_t n, std::size_t cap) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        out.push_back(cur);
        if (cur.size() == cap) return;
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

}  // namespace detail

struct HittingSet {
    std::size_t n = 0;
    std::uint64_t p = kDefaultPrime;
    std::uint64_t seed = 0;
    std::string family;  // set_depth | diagonal | dual
    std::vector<std::vector<Fp>> points;
    unsigned long long size_bound = 0;  // closed-form bound; |points| <= size_bound
    bool fast_path = false;
    std::size_t ell0 = 0;
    ShiftMap tau;                       // empty on the fast path
    std::size_t subsets_used = 0;
};

struct Verdict {
    bool nonzero = false;
    std::vector<Fp> witness;  // nonempty iff nonzero
};

// ---- Theorem 1.1 generator for set-height-H classes ----
//
// tau_0 from the inductive construction, sigma_X projections over all supports
// of size < l_0, and the sparse grid over the surviving x-variables plus the H
// layer variables. Blackbox discipline: only ClassParams is read.
inline HittingSet hitting_set(const ClassParams& params, std::uint64_t p = kDefaultPrime,
                              std::uint64_t seed = 17) {
    params.validate();
    EllSchedule sc = ell_schedule(params);
    HittingSet hs;
    hs.n = params.n;
    hs.p = p;
    hs.seed = seed;
    hs.family = "set_depth";
    hs.ell0 = sc.l0();
    std::uint64_t pv = params.pervar_degree_bound();
    std::uint64_t total_deg = params.total_degree_bound();
    if (pv + 1 > p || total_deg + 1 > p) throw FieldTooSmall("degree bounds exceed the field");

    if (hs.ell0 >= params.n + 1) {
        // concentration is vacuous: the full grid on all n variables already hits
        hs.fast_path = true;
        std::vector<std::uint64_t> degs(params.n, pv);
        hs.points = hitting_points_mixed(degs, p);
        hs.size_bound = 1;
        for (auto d : degs) hs.size_bound = detail::checked_mul(hs.size_bound, d + 1);
        hs.subsets_used = 1;
        detail::canonicalize(hs.points);
        return hs;
    }

    hs.tau = build_tau(params, p, seed);
    std::size_t layers = hs.tau.layers.size();
    std::vector<std::uint64_t> tdeg(layers, 0);
    for (std::size_t li = 0; li < layers; ++li) {
        std::uint64_t amax = 0;
        for (auto a : hs.tau.layers[li].a) amax = std::max(amax, a);
        tdeg[li] = detail::checked_mul(total_deg, amax);
    }
    auto subsets = detail::subsets_up_to(params.n, hs.ell0 - 1);
    hs.subsets_used = subsets.size();
    unsigned long long bound = 0;
    for (const auto& X : subsets) {
        std::vector<std::uint64_t> degs;
        for (std::size_t j = 0; j < X.size(); ++j) degs.push_back(pv);
        for (auto td : tdeg) degs.push_back(td);
        unsigned long long g = 1;
        for (auto dg : degs) g = detail::checked_mul(g, dg + 1);
        bound = detail::checked_add(bound, g);
        for (const auto& gpt : hitting_points_mixed(degs, p)) {
            std::vector<Fp> tvals(gpt.begin() + X.size(), gpt.end());
            std::vector<Fp> tr = hs.tau.translation_at(tvals);
            std::vector<Fp> pt(params.n, Fp::zero(p));
            for (std::size_t i = 0; i < params.n; ++i) pt[i] = tr[i];
            for (std::size_t j = 0; j < X.size(); ++j) pt[X[j]] += gpt[j];
            hs.points.push_back(std::move(pt));
        }
    }
    hs.size_bound = bound;
    detail::canonicalize(hs.points);
    if (hs.points.size() > hs.size_bound) throw PitError("hitting set exceeds its bound");
    return hs;
}

// ---- blackbox verdict over a point set ----

inline Verdict test_blackbox(const Blackbox& bb, const HittingSet& hs, std::size_t threads = 1) {
    if (bb.params.n != hs.n) throw DimensionMismatch("blackbox arity vs hitting set");
    Verdict v;
    if (threads <= 1) {
        for (const auto& pt : hs.points) {
            if (!bb.eval(pt).is_zero()) {
                v.nonzero = true;
                v.witness = pt;
                return v;
            }
        }
        return v;
    }
    std::size_t total = hs.points.size();
    std::vector<std::size_t> first_hit(threads, total);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < total; i += threads) {
                if (!bb.eval(hs.points[i]).is_zero()) {
                    first_hit[t] = i;
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    std::size_t best = total;
    for (auto h : first_hit) best = std::min(best, h);
    if (best < total) {
        v.nonzero = true;
        v.witness = hs.points[best];  // minimal index keeps the verdict deterministic
    }
    return v;
}

inline Blackbox blackbox_of(const Circuit& c, const ClassParams& params) {
    Blackbox bb;
    bb.params = params;
    bb.p = circuit_prime(c);
    bb.eval = [c](const std::vector<Fp>& pt) { return evaluate(c, pt); };
    return bb;
}

// ---- Appendix A: diagonal circuits ----

struct DiagonalParams {
    std::size_t n = 1;
    std::size_t k = 1;
    std::uint64_t d = 1;
    std::uint64_t p = kDefaultPrime;
};

// whitebox helper: alpha among kn+1 candidates with no f_i(alpha, ..., alpha^n) = 0
inline Fp find_diagonal_alpha(const DiagonalCircuit& c) {
    if (c.p <= static_cast<std::uint64_t>(c.k) * c.n + 1 || c.p <= c.d)
        throw FieldTooSmall("need p > kn+1 and p > d");
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < c.k; ++i) {
        bool zero_form = true;
        for (const auto& z : c.forms[i])
            if (!z.is_zero()) zero_form = false;
        if (!zero_form && !c.weights[i].is_zero()) live.push_back(i);
    }
    for (std::uint64_t cand = 1; cand <= static_cast<std::uint64_t>(c.k) * c.n + 1; ++cand) {
        Fp alpha(cand, c.p);
        std::vector<Fp> powers(c.n, Fp::zero(c.p));
        Fp acc = Fp::one(c.p);
        for (std::size_t j = 0; j < c.n; ++j) {
            acc *= alpha;
            powers[j] = acc;
        }
        bool ok = true;
        for (auto i : live)
            if (c.eval_form(i, powers).is_zero()) {
                ok = false;
                break;
            }
        if (ok) return alpha;
    }
    throw NoAlphaFound("kn+1 candidates exhausted");
}

// class-level generator: union over the kn+1 candidate alphas of shifted
// projection grids with |X| <= ceil(log2 k)
inline HittingSet hitting_set_diagonal(const DiagonalParams& dp) {
    if (dp.p <= static_cast<std::uint64_t>(dp.k) * dp.n + 1 || dp.p <= dp.d)
        throw FieldTooSmall("need p > kn+1 and p > d");
    HittingSet hs;
    hs.n = dp.n;
    hs.p = dp.p;
    hs.family = "diagonal";
    std::size_t lproj = ceil_log2(dp.k);
    hs.ell0 = lproj + 1;
    auto subsets = detail::subsets_up_to(dp.n, lproj);
    hs.subsets_used = subsets.size();
    unsigned long long bound = 0;
    for (std::uint64_t cand = 1; cand <= static_cast<std::uint64_t>(dp.k) * dp.n + 1; ++cand) {
        Fp alpha(cand, dp.p);
        std::vector<Fp> tr(dp.n, Fp::zero(dp.p));
        Fp acc = Fp::one(dp.p);
        for (std::size_t j = 0; j < dp.n; ++j) {
            acc *= alpha;
            tr[j] = acc;
        }
        for (const auto& X : subsets) {
            std::vector<std::uint64_t> degs(X.size(), dp.d);
            unsigned long long g = 1;
            for (auto dg : degs) g = detail::checked_mul(g, dg + 1);
            bound = detail::checked_add(bound, g);
            for (const auto& gpt : hitting_points_mixed(degs, dp.p)) {
                std::vector<Fp> pt = tr;
                for (std::size_t j = 0; j < X.size(); ++j) pt[X[j]] += gpt[j];
                hs.points.push_back(std::move(pt));
            }
        }
    }
    hs.size_bound = bound;
    detail::canonicalize(hs.points);
    return hs;
}

// ---- Corollaries 1.2 / 1.3: dual representations ----

struct DualShape {
    std::size_t n = 1;
    std::size_t kprime = 1;
    std::vector<std::uint64_t> pervar_deg;  // max_i deg g_{i,j} per variable
    std::uint64_t p = kDefaultPrime;
};

inline DualShape shape_of(const DualRepresentation& d) {
    if (d.kprime == 0 || d.g.size() != d.kprime) throw NotADualForm("empty dual representation");
    DualShape sh;
    sh.n = d.n;
    sh.kprime = d.kprime;
    sh.p = d.p;
    sh.pervar_deg.assign(d.n, 0);
    for (const auto& row : d.g) {
        if (row.size() != d.n) throw NotADualForm("each product must cover all n variables");
        for (std::size_t j = 0; j < d.n; ++j)
            sh.pervar_deg[j] = std::max<std::uint64_t>(
                sh.pervar_deg[j], row[j].is_zero() ? 0 : static_cast<std::uint64_t>(row[j].degree()));
    }
    return sh;
}

// D = G_1(x_1) * ... * G_n(x_n) over H_{k'}: mu(G_j) <= 1 per factor, so the
// base bound l' = 2 needs no truncation; the product is 2 ceil(log2 k') + 1
// concentrated after the shift x_j -> x_j + t^{b_j}.
inline HittingSet hitting_set_dual(const DualShape& sh, std::uint64_t seed = 17) {
    HittingSet hs;
    hs.n = sh.n;
    hs.p = sh.p;
    hs.seed = seed;
    hs.family = "dual";
    std::size_t ld = std::min<std::size_t>(2 * ceil_log2(sh.kprime) + 1, sh.n + 1);
    hs.ell0 = ld;
    if (ld >= sh.n + 1) {
        hs.fast_path = true;
        hs.points = hitting_points_mixed(sh.pervar_deg, sh.p);
        hs.size_bound = 1;
        for (auto d : sh.pervar_deg) hs.size_bound = detail::checked_mul(hs.size_bound, d + 1);
        hs.subsets_used = 1;
        detail::canonicalize(hs.points);
        return hs;
    }
    // separating exponents for the per-variable cones (the full degree box)
    std::vector<std::vector<ExpVec>> cones;
    for (std::size_t j = 0; j < sh.n; ++j) {
        std::vector<ExpVec> cn;
        for (std::uint64_t dg = 0; dg <= sh.pervar_deg[j]; ++dg) {
            ExpVec e = zero_exp(sh.n);
            e[j] = static_cast<std::uint32_t>(dg);
            cn.push_back(e);
        }
        cones.push_back(cn);
    }
    auto b = build_weight_vector(cones, sh.n, seed);
    ShiftLayer layer;
    layer.h = 0;
    layer.a = b;
    layer.alpha.assign(sh.n, Fp::one(sh.p));
    hs.tau.n = sh.n;
    hs.tau.p = sh.p;
    hs.tau.layers.push_back(layer);
    std::uint64_t t_total = 0;
    for (std::size_t j = 0; j < sh.n; ++j)
        t_total = detail::checked_add(t_total, detail::checked_mul(sh.pervar_deg[j], b[j]));
    auto subsets = detail::subsets_up_to(sh.n, ld - 1);
    hs.subsets_used = subsets.size();
    unsigned long long bound = 0;
    for (const auto& X : subsets) {
        std::vector<std::uint64_t> degs;
        for (auto j : X) degs.push_back(sh.pervar_deg[j]);
        degs.push_back(t_total);
        unsigned long long g = 1;
        for (auto dg : degs) g = detail::checked_mul(g, dg + 1);
        bound = detail::checked_add(bound, g);
        for (const auto& gpt : hitting_points_mixed(degs, sh.p)) {
            Fp tv = gpt.back();
            std::vector<Fp> pt(sh.n, Fp::zero(sh.p));
            for (std::size_t j = 0; j < sh.n; ++j) pt[j] = tv.pow(b[j]);
            for (std::size_t j = 0; j < X.size(); ++j) pt[X[j]] += gpt[j];
            hs.points.push_back(std::move(pt));
        }
    }
    hs.size_bound = bound;
    detail::canonicalize(hs.points);
    return hs;
}

inline HittingSet hitting_set_dual(const DualRepresentation& d, std::uint64_t seed = 17) {
    return hitting_set_dual(shape_of(d), seed);
}

}  // namespace pit
