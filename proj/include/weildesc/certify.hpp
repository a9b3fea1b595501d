/*
   Copyright 2026 The weildesc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file certify.hpp
 * @brief Hypothesis certificates: degree prime to p, square-freeness,
 *        non-singularity of split forms, and the Deligne condition.
 *
 * The additive split form sum_j f^{sigma^j}(x_j) has the special shape that
 * every partial derivative involves a single variable, so its affine
 * singular locus is exactly the set of tuples of critical points of the
 * twisted polynomials.  The check therefore finds, in the smallest
 * extension K of k_r where f' splits (conjugate twists split together),
 * all roots of f' and tests every tuple of critical values for a zero sum.
 * Nothing needs to be checked at infinity: the top form is diagonal of
 * degree prime to p.
 *
 * Every failing certificate carries a witness that is re-verified by direct
 * evaluation before the certificate is returned.
 */

#ifndef WEILDESC_CERTIFY_HPP
#define WEILDESC_CERTIFY_HPP

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "descent.hpp"

namespace weildesc {

struct Certificate {
    enum class Verdict { pass, fail, inapplicable };

    struct Witness {
        std::string kind;                   // "critical-tuple" | "singular-point" | "repeated-factor" | "arithmetic"
        std::vector<std::string> elements;  // serialized coordinates, when geometric
        std::string detail;
    };

    std::string check;
    Verdict verdict = Verdict::inapplicable;
    std::optional<Witness> witness;
    std::uint32_t work_degree = 1;  // relative degree of the work field used
    bool bounded_search = false;
    std::string note;

    bool passed() const { return verdict == Verdict::pass; }
    bool failed() const { return verdict == Verdict::fail; }
};

inline const char* to_string(Certificate::Verdict v) {
    switch (v) {
        case Certificate::Verdict::pass: return "pass";
        case Certificate::Verdict::fail: return "fail";
        case Certificate::Verdict::inapplicable: return "inapplicable";
    }
    return "?";
}

/// gcd(deg f, p) == 1.
inline Certificate check_degree_prime_to_p(const UniPoly& f) {
    if (f.degree() < 1) throw std::invalid_argument("degree check needs deg f >= 1");
    const std::uint64_t p = f.field()->characteristic();
    const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(f.degree()), p);
    Certificate c;
    c.check = "degree-prime-to-p";
    if (g == 1) {
        c.verdict = Certificate::Verdict::pass;
    } else {
        c.verdict = Certificate::Verdict::fail;
        c.witness = Certificate::Witness{"arithmetic", {}, "gcd(d, p) = " + std::to_string(g)};
    }
    return c;
}

namespace detail {

/// Smallest relative extension K of `base` in which f splits completely,
/// scanning degrees 1..max_rel and counting roots with multiplicity.
/// Returns (K, roots in K); throws budget_error when the next extension to
/// try does not fit the budget.
inline std::pair<FieldPtr, std::map<std::uint64_t, std::uint32_t>> splitting_scan(
    const UniPoly& f, const FieldPtr& base, std::uint32_t max_rel, std::uint64_t budget) {
    const auto target = static_cast<std::uint32_t>(f.degree());
    for (std::uint32_t s = 1; s <= max_rel; ++s) {
        FieldPtr K = s == 1 ? base : FieldLevel::extension(base, s, budget);
        auto roots = roots_in(f, K, budget);
        if (root_count_with_multiplicity(roots) == target) return {K, std::move(roots)};
    }
    throw std::logic_error("polynomial did not split within the expected degree bound");
}

}  // namespace detail

/// Non-singularity of the affine hypersurface f^sigma(x_1)+...+f^{sigma^r}(x_r) = 0.
/// Inapplicable unless gcd(d, p) = 1; passes iff no tuple of critical values of
/// the twists sums to zero.
inline Certificate split_form_nonsingular(const UniPoly& f, const FieldTower& t,
                                          std::uint64_t budget = default_enumeration_budget) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("split_form_nonsingular: f must be over k_r");
    if (f.degree() < 1) throw std::invalid_argument("split_form_nonsingular: deg f >= 1 required");
    Certificate c;
    c.check = "split-form-nonsingular";
    const std::uint64_t p = t.kr->characteristic();
    const auto d = static_cast<std::uint32_t>(f.degree());
    if (std::gcd(static_cast<std::uint64_t>(d), p) != 1) {
        c.verdict = Certificate::Verdict::inapplicable;
        c.note = "degree not prime to p";
        return c;
    }
    if (d == 1) {
        c.verdict = Certificate::Verdict::pass;
        c.note = "linear polynomial; no critical points";
        return c;
    }
    UniPoly fp = f.derivative();
    auto [K, root_map] = detail::splitting_scan(fp, t.kr, (d - 1) * t.r, budget);
    c.work_degree = K->abs_degree() / t.kr->abs_degree();
    std::vector<FieldElement> roots;
    roots.reserve(root_map.size());
    for (const auto& [idx, mult] : root_map) roots.push_back(K->element(idx));
    const std::size_t R = roots.size();
    const std::uint64_t q = t.q();

    // critical values of f and their Galois twists; twisted roots for witnesses
    std::vector<std::vector<FieldElement>> tw_val(t.r), tw_root(t.r);
    for (std::uint32_t j = 1; j <= t.r; ++j) {
        for (std::size_t i = 0; i < R; ++i) {
            tw_val[j - 1].push_back(frobenius_q(f.eval(roots[i]), q, j));
            tw_root[j - 1].push_back(frobenius_q(roots[i], q, j));
        }
    }

    std::vector<std::size_t> sel(t.r, 0);
    while (true) {
        FieldElement sum = K->zero();
        for (std::uint32_t j = 0; j < t.r; ++j) sum = sum + tw_val[j][sel[j]];
        if (sum.is_zero()) {
            std::vector<FieldElement> pt;
            std::vector<std::string> coords;
            for (std::uint32_t j = 0; j < t.r; ++j) {
                pt.push_back(tw_root[j][sel[j]]);
                coords.push_back(pt.back().str());
            }
            // re-verify: all partials and the form vanish at the witness
            FieldElement form = K->zero();
            for (std::uint32_t j = 1; j <= t.r; ++j) {
                UniPoly fj = frobenius_twist(t, f, j);
                if (!fj.derivative().eval(pt[j - 1]).is_zero())
                    throw std::logic_error("witness re-verification failed (partial nonzero)");
                form = form + fj.eval(pt[j - 1]);
            }
            if (!form.is_zero()) throw std::logic_error("witness re-verification failed (form nonzero)");
            c.verdict = Certificate::Verdict::fail;
            c.witness = Certificate::Witness{"critical-tuple", std::move(coords),
                                             "split form and all partials vanish; work field " + K->spec_string()};
            return c;
        }
        std::uint32_t j = t.r;
        bool more = false;
        while (j-- > 0) {
            if (++sel[j] < R) {
                more = true;
                break;
            }
            sel[j] = 0;
        }
        if (!more) break;
    }
    c.verdict = Certificate::Verdict::pass;
    return c;
}

/// Deligne condition: degree prime to p and smooth projective top form.
/// n = 1 passes automatically once the degree condition holds (the curve
/// convention; recorded in the note).  n = 2 is decided exactly through the
/// square-freeness of the binary top form.  n >= 3 searches for a projective
/// singular point over extensions of degree 1..max_ext and flags a pass as
/// "bounded search".
inline Certificate is_deligne(const MultiPoly& f, std::uint32_t max_ext = 4,
                              std::uint64_t budget = default_enumeration_budget) {
    Certificate c;
    c.check = "deligne";
    const FieldPtr& K0 = f.field();
    const std::uint64_t p = K0->characteristic();
    const int dtot = f.total_degree();
    if (dtot < 1) {
        c.verdict = Certificate::Verdict::fail;
        c.witness = Certificate::Witness{"arithmetic", {}, "degree " + std::to_string(dtot) + " < 1"};
        return c;
    }
    if (std::gcd(static_cast<std::uint64_t>(dtot), p) != 1) {
        c.verdict = Certificate::Verdict::fail;
        c.witness = Certificate::Witness{
            "arithmetic", {}, "gcd(d, p) = " + std::to_string(std::gcd(static_cast<std::uint64_t>(dtot), p))};
        return c;
    }
    const std::uint32_t n = f.nvars();
    if (n == 1) {
        c.verdict = Certificate::Verdict::pass;
        c.note = "curve convention: top-form smoothness vacuous for n=1";
        return c;
    }
    MultiPoly top = f.top_form();
    if (n == 2) {
        // binary form: smooth iff square-free; x2-multiplicity and the
        // dehomogenization at x2=1 together see every factor
        std::uint32_t m2 = UINT32_MAX;
        for (const auto& [e, coeff] : top.terms()) m2 = std::min(m2, e[1]);
        if (m2 >= 2) {
            c.verdict = Certificate::Verdict::fail;
            c.witness = Certificate::Witness{"repeated-factor", {}, "x2^" + std::to_string(m2) + " divides the top form"};
            return c;
        }
        UniPoly g = top.substitute(1, K0->one()).to_unipoly(0);
        bool sf;
        try {
            sf = g.degree() < 1 ? true : is_square_free(g);
        } catch (const inseparable_error&) {
            sf = false;  // a polynomial in x^p over a perfect field is a p-th power
        }
        if (!sf) {
            UniPoly rep = g.derivative().is_zero() ? g : gcd(g, g.derivative());
            c.verdict = Certificate::Verdict::fail;
            c.witness = Certificate::Witness{"repeated-factor", {}, rep.to_string()};
            return c;
        }
        c.verdict = Certificate::Verdict::pass;
        return c;
    }
    // n >= 3: bounded projective search for a common zero of all partials
    std::vector<MultiPoly> parts;
    for (std::uint32_t i = 0; i < n; ++i) parts.push_back(top.partial(i));
    std::uint32_t searched = 0;
    for (std::uint32_t s = 1; s <= max_ext; ++s) {
        FieldPtr K = s == 1 ? K0 : FieldLevel::extension(K0, s, budget);
        BigInt pts = BigInt(n) * big_pow(BigInt(K->card()), n - 1);
        if (pts > BigInt(budget)) break;
        searched = s;
        std::optional<std::vector<FieldElement>> hit;
        for (std::uint32_t chart = 0; chart < n && !hit; ++chart) {
            for_each_tuple(*K, n - 1 - chart, budget, [&](std::span<const std::uint64_t> free) {
                if (hit) return;
                std::vector<FieldElement> pt;
                pt.reserve(n);
                for (std::uint32_t i = 0; i < chart; ++i) pt.push_back(K->zero());
                pt.push_back(K->one());
                for (auto v : free) pt.push_back(K->element(v));
                for (const auto& dp : parts)
                    if (!dp.eval(pt).is_zero()) return;
                if (!top.eval(pt).is_zero()) return;  // cannot happen for gcd(d,p)=1 (Euler), checked anyway
                hit = pt;
            });
        }
        if (hit) {
            std::vector<std::string> coords;
            for (const auto& x : *hit) coords.push_back(x.str());
            for (const auto& dp : parts)
                if (!dp.eval(*hit).is_zero()) throw std::logic_error("witness re-verification failed");
            c.verdict = Certificate::Verdict::fail;
            c.work_degree = s;
            c.witness = Certificate::Witness{"singular-point", std::move(coords),
                                             "projective singular point of the top form over " + K->spec_string()};
            return c;
        }
    }
    if (searched == 0) throw budget_error("deligne check: no extension degree fits the enumeration budget");
    c.verdict = Certificate::Verdict::pass;
    c.bounded_search = true;
    c.work_degree = searched;
    c.note = "no singular point over extensions of degree <= " + std::to_string(searched);
    return c;
}

/// Hypotheses of the Kummer-curve bound: f square-free, deg f prime to p, e | q-1.
inline Certificate kummer_hypotheses(const UniPoly& f, std::uint32_t e, const FieldTower& t) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("kummer_hypotheses: f must be over k_r");
    Certificate c;
    c.check = "kummer-hypotheses";
    if (e < 1 || (t.q() - 1) % e != 0) {
        c.verdict = Certificate::Verdict::fail;
        c.witness = Certificate::Witness{"arithmetic", {}, std::to_string(e) + " does not divide q-1 = " +
                                                                std::to_string(t.q() - 1)};
        return c;
    }
    if (f.degree() < 1) {
        c.verdict = Certificate::Verdict::fail;
        c.witness = Certificate::Witness{"arithmetic", {}, "deg f < 1"};
        return c;
    }
    Certificate degc = check_degree_prime_to_p(f);
    if (!degc.passed()) {
        c.verdict = Certificate::Verdict::fail;
        c.witness = degc.witness;
        return c;
    }
    if (!is_square_free(f)) {  // safe: gcd(d,p)=1 implies f' != 0
        UniPoly rep = gcd(f, f.derivative());
        Certificate::Witness w{"repeated-factor", {}, rep.to_string()};
        // surface a repeated root when one is rational over k_r
        auto rs = roots_in(rep, t.kr);
        if (!rs.empty()) w.elements.push_back(t.kr->element(rs.begin()->first).str());
        c.verdict = Certificate::Verdict::fail;
        c.witness = std::move(w);
        return c;
    }
    c.verdict = Certificate::Verdict::pass;
    return c;
}

/// Non-singularity of the nr-variable split form of a multivariate f.
/// The partials separate into per-block critical systems, so the check scans
/// extensions of k_r for critical points of f and tests tuples of critical
/// values.  Exact for d = 2 (linear critical systems split over k_r); a pass
/// for d >= 3 is a bounded search and says so.
inline Certificate split_form_nonsingular_multivar(const MultiPoly& f, const FieldTower& t,
                                                   std::uint32_t max_ext = 4,
                                                   std::uint64_t budget = default_enumeration_budget) {
    if (f.field().get() != t.kr.get())
        throw std::invalid_argument("split_form_nonsingular_multivar: f must be over k_r");
    Certificate c;
    c.check = "split-form-nonsingular-multivar";
    const std::uint64_t p = t.kr->characteristic();
    const int dtot = f.total_degree();
    if (dtot < 1 || std::gcd(static_cast<std::uint64_t>(dtot), p) != 1) {
        c.verdict = Certificate::Verdict::inapplicable;
        c.note = "degree not prime to p";
        return c;
    }
    const std::uint32_t n = f.nvars();
    std::vector<MultiPoly> parts;
    for (std::uint32_t i = 0; i < n; ++i) parts.push_back(f.partial(i));
    const std::uint64_t q = t.q();
    const bool complete = dtot == 2;

    std::uint32_t searched = 0;
    for (std::uint32_t s = 1; s <= (complete ? 1u : max_ext); ++s) {
        FieldPtr K = s == 1 ? t.kr : FieldLevel::extension(t.kr, s, budget);
        if (big_pow(BigInt(K->card()), n) > BigInt(budget)) break;
        searched = s;
        // critical points of f over K and their values
        std::vector<std::vector<FieldElement>> crit;
        std::vector<FieldElement> vals;
        for_each_tuple(*K, n, budget, [&](std::span<const std::uint64_t> idxs) {
            std::vector<FieldElement> pt;
            pt.reserve(n);
            for (auto v : idxs) pt.push_back(K->element(v));
            for (const auto& dp : parts)
                if (!dp.eval(pt).is_zero()) return;
            crit.push_back(pt);
            vals.push_back(f.eval(pt));
        });
        if (crit.empty()) continue;
        const std::size_t R = crit.size();
        std::vector<std::vector<FieldElement>> tw_val(t.r);
        for (std::uint32_t j = 1; j <= t.r; ++j)
            for (std::size_t i = 0; i < R; ++i) tw_val[j - 1].push_back(frobenius_q(vals[i], q, j));
        std::vector<std::size_t> sel(t.r, 0);
        while (true) {
            FieldElement sum = K->zero();
            for (std::uint32_t j = 0; j < t.r; ++j) sum = sum + tw_val[j][sel[j]];
            if (sum.is_zero()) {
                // witness: block j holds sigma^j applied to the chosen critical point
                std::vector<std::string> coords(static_cast<std::size_t>(n) * t.r);
                std::vector<std::vector<FieldElement>> blocks;
                for (std::uint32_t j = 1; j <= t.r; ++j) {
                    std::vector<FieldElement> b;
                    for (std::uint32_t i = 0; i < n; ++i) {
                        FieldElement x = frobenius_q(crit[sel[j - 1]][i], q, j);
                        b.push_back(x);
                        coords[static_cast<std::size_t>(i) * t.r + (j - 1)] = x.str();
                    }
                    blocks.push_back(std::move(b));
                }
                // re-verify against the twisted blocks directly
                FieldElement form = K->zero();
                for (std::uint32_t j = 1; j <= t.r; ++j) {
                    MultiPoly fj = frobenius_twist(t, f, j);
                    for (std::uint32_t i = 0; i < n; ++i)
                        if (!fj.partial(i).eval(blocks[j - 1]).is_zero())
                            throw std::logic_error("witness re-verification failed (partial nonzero)");
                    form = form + fj.eval(blocks[j - 1]);
                }
                if (!form.is_zero()) throw std::logic_error("witness re-verification failed (form nonzero)");
                c.verdict = Certificate::Verdict::fail;
                c.work_degree = s;
                c.witness = Certificate::Witness{"critical-tuple", std::move(coords),
                                                 "split form and all partials vanish; work field " + K->spec_string()};
                return c;
            }
            std::uint32_t j = t.r;
            bool more = false;
            while (j-- > 0) {
                if (++sel[j] < R) {
                    more = true;
                    break;
                }
                sel[j] = 0;
            }
            if (!more) break;
        }
    }
    c.verdict = Certificate::Verdict::pass;
    c.work_degree = searched;
    if (!complete) {
        c.bounded_search = true;
        c.note = "no critical tuple over extensions of degree <= " + std::to_string(searched);
    }
    return c;
}

/// The non-singularity condition is generic in shifts of f by constants:
/// scan lambda over k_r in enumeration order until f - lambda certifies.
inline std::optional<FieldElement> find_nonsingular_shift(const UniPoly& f, const FieldTower& t,
                                                          std::uint64_t budget = default_enumeration_budget) {
    for (auto lambda : enumerate(t.kr, budget)) {
        UniPoly shifted = f - UniPoly::constant(lambda);
        if (split_form_nonsingular(shifted, t, budget).passed()) return lambda;
    }
    return std::nullopt;
}

}  // namespace weildesc

#endif  // WEILDESC_CERTIFY_HPP
