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
 * @file descent.hpp
 * @brief Weil-descent polynomials over a tower k < k_r.
 *
 * Given f over k_r, a k-basis B = {a_1,...,a_r} of k_r and the Frobenius
 * sigma of Gal(k_r/k), this module expands
 *
 *   S(x_1,...,x_r) = sum_j  f^{sigma^j}(sigma^j(a_1) x_1 + ... + sigma^j(a_r) x_r)
 *   T(x_1,...,x_r) = prod_j f^{sigma^j}(sigma^j(a_1) x_1 + ... + sigma^j(a_r) x_r)
 *
 * (j = 1..r) into sparse multivariate form once.  The coefficients are
 * computed in k_r, each one is checked to be sigma-fixed, and only then is
 * the form re-typed over k; a failure here is an arithmetic bug, never
 * legal input.  Evaluating the result at coords(x, B) gives Tr(f(x)) resp.
 * N(f(x)) for every x in k_r, which is what the point-count identities
 * consume.
 */

#ifndef WEILDESC_DESCENT_HPP
#define WEILDESC_DESCENT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace weildesc {

enum class DescentKind { additive, multiplicative, additive_multivar };

inline const char* to_string(DescentKind k) {
    switch (k) {
        case DescentKind::additive: return "additive-S";
        case DescentKind::multiplicative: return "multiplicative-T";
        case DescentKind::additive_multivar: return "additive-S-multivar";
    }
    return "?";
}

struct DescentForm {
    DescentKind kind;
    MultiPoly form;                       // over k, in r (or n*r) variables
    FieldTower tower;
    Basis basis;
    std::uint32_t r;
    std::uint32_t n;                      // 1 for the curve cases
    std::optional<UniPoly> source;        // curve cases
    std::optional<MultiPoly> source_multi;  // hypersurface case
    /// conj_rows[j-1][i] = sigma^j(a_i); the linear change of variables that
    /// identifies the descent form with the split form over k_r.
    std::vector<std::vector<FieldElement>> conj_rows;

    std::string source_string() const {
        return source ? source->to_string() : source_multi->to_string();
    }

    /// Provenance header plus the polynomial in text form.
    std::string to_string() const {
        std::string s;
        s += std::string("# kind: ") + weildesc::to_string(kind) + "\n";
        s += "# field: " + tower.k->spec_string() + "\n";
        s += "# ext: " + std::to_string(r) + " (defining: " + tower.kr->defining_string() + ")\n";
        s += "# f: " + source_string() + "\n";
        s += "# basis: " + basis.str() + "\n";
        s += form.to_string() + "\n";
        return s;
    }
};

namespace detail {

/// Re-type a k_r-coefficient polynomial whose coefficients are sigma-fixed
/// into a polynomial over k.
inline MultiPoly descend_rationalize(const FieldTower& t, const MultiPoly& over_kr) {
    MultiPoly out(t.k, over_kr.nvars());
    for (const auto& [e, c] : over_kr.terms()) {
        if (frobenius(t, c, 1) != c)
            throw std::logic_error("descent produced a coefficient not fixed by Frobenius (arithmetic bug)");
        out.add_term(e, retract(c, t.k));
    }
    return out;
}

inline std::vector<std::vector<FieldElement>> conjugate_rows(const FieldTower& t, const Basis& B) {
    std::vector<std::vector<FieldElement>> rows;
    rows.reserve(t.r);
    for (std::uint32_t j = 1; j <= t.r; ++j) {
        std::vector<FieldElement> row;
        row.reserve(t.r);
        for (const auto& a : B.alphas()) row.push_back(frobenius(t, a, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

/// The additive descent polynomial S of f; eval(S, coords(x,B)) = Tr(f(x)).
inline DescentForm as_descent(const UniPoly& f, const FieldTower& t, const Basis& B) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("as_descent: f must be over k_r");
    if (f.degree() < 1) throw std::invalid_argument("as_descent: deg f >= 1 required");
    auto rows = detail::conjugate_rows(t, B);
    MultiPoly acc(t.kr, t.r);
    for (std::uint32_t j = 1; j <= t.r; ++j)
        acc = acc + compose_linear(frobenius_twist(t, f, j), rows[j - 1]);
    return DescentForm{DescentKind::additive, detail::descend_rationalize(t, acc), t, B, t.r, 1, f,
                       std::nullopt,          std::move(rows)};
}

/// The multiplicative descent polynomial T of f; eval(T, coords(x,B)) = N(f(x)).
inline DescentForm kummer_descent(const UniPoly& f, const FieldTower& t, const Basis& B) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("kummer_descent: f must be over k_r");
    if (f.degree() < 1) throw std::invalid_argument("kummer_descent: deg f >= 1 required");
    auto rows = detail::conjugate_rows(t, B);
    MultiPoly acc = MultiPoly::constant(t.kr, t.r, t.kr->one());
    for (std::uint32_t j = 1; j <= t.r; ++j)
        acc = acc * compose_linear(frobenius_twist(t, f, j), rows[j - 1]);
    return DescentForm{DescentKind::multiplicative, detail::descend_rationalize(t, acc), t, B, t.r, 1, f,
                       std::nullopt,                std::move(rows)};
}

/// Descent of an n-variable f over k_r into n*r variables over k; variable
/// x_{i,l} (i-th source variable, l-th coordinate) is flattened to index
/// (i-1)*r + l.  For every (y_1,...,y_n) in k_r^n, evaluating at the
/// concatenated coordinate vectors gives Tr(f(y_1,...,y_n)).
inline DescentForm as_descent_multivar(const MultiPoly& f, const FieldTower& t, const Basis& B) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("as_descent_multivar: f must be over k_r");
    const std::uint32_t n = f.nvars();
    const std::uint32_t r = t.r;
    auto rows = detail::conjugate_rows(t, B);
    MultiPoly acc(t.kr, n * r);
    for (std::uint32_t j = 1; j <= r; ++j) {
        // substitute variable i by sum_l sigma^j(a_l) x_{i,l}
        std::vector<MultiPoly> subs;
        subs.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            MultiPoly lin(t.kr, n * r);
            for (std::uint32_t l = 0; l < r; ++l) {
                MultiPoly::ExpVec e(n * r, 0);
                e[i * r + l] = 1;
                lin.add_term(e, rows[j - 1][l]);
            }
            subs.push_back(std::move(lin));
        }
        acc = acc + frobenius_twist(t, f, j).compose(subs);
    }
    return DescentForm{DescentKind::additive_multivar, detail::descend_rationalize(t, acc), t, B, r, n,
                       std::nullopt, f, std::move(rows)};
}

/// The diagonal split form over k_r: sum_j f^{sigma^j}(x_j) (additive) or
/// prod_j f^{sigma^j}(x_j) (multiplicative), j = 1..r.
inline MultiPoly split_form(const UniPoly& f, const FieldTower& t, DescentKind kind) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("split_form: f must be over k_r");
    const bool product = kind == DescentKind::multiplicative;
    MultiPoly acc = product ? MultiPoly::constant(t.kr, t.r, t.kr->one()) : MultiPoly(t.kr, t.r);
    for (std::uint32_t j = 1; j <= t.r; ++j) {
        MultiPoly term = frobenius_twist(t, f, j).as_multi(t.r, j - 1);
        acc = product ? acc * term : acc + term;
    }
    return acc;
}

/// Split form of a multivariate f: sum_j f^{sigma^j}(x_{1,j},...,x_{n,j}) in
/// n*r variables over k_r, block j holding variables x_{i,j} at flat index
/// (i-1)*r + (j-1).
inline MultiPoly split_form_multivar(const MultiPoly& f, const FieldTower& t) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("split_form_multivar: f must be over k_r");
    const std::uint32_t n = f.nvars(), r = t.r;
    MultiPoly acc(t.kr, n * r);
    for (std::uint32_t j = 1; j <= r; ++j) {
        std::vector<MultiPoly> subs;
        subs.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) subs.push_back(MultiPoly::variable(t.kr, n * r, i * r + (j - 1)));
        acc = acc + frobenius_twist(t, f, j).compose(subs);
    }
    return acc;
}

/// The descent polynomials depend on the basis, the point counts do not.
/// True iff #{S=0} and the full fiber histogram of T agree across all bases.
inline bool descent_count_invariance_check(const UniPoly& f, const FieldTower& t, std::span<const Basis> bases,
                                           std::uint64_t budget = default_enumeration_budget) {
    if (bases.empty()) throw std::invalid_argument("invariance check needs at least one basis");
    std::optional<std::uint64_t> s_count;
    std::optional<std::vector<std::uint64_t>> t_hist;
    for (const auto& B : bases) {
        MultiPoly S = as_descent(f, t, B).form;
        MultiPoly T = kummer_descent(f, t, B).form;
        std::uint64_t zeros = 0;
        std::vector<std::uint64_t> hist(t.q(), 0);
        for_each_tuple(*t.k, t.r, budget, [&](std::span<const std::uint64_t> pt) {
            std::vector<FieldElement> xs;
            xs.reserve(pt.size());
            for (auto i : pt) xs.emplace_back(t.k, i);
            if (S.eval(xs).is_zero()) ++zeros;
            hist[T.eval(xs).index()] += 1;
        });
        if (!s_count) {
            s_count = zeros;
            t_hist = hist;
        } else if (*s_count != zeros || *t_hist != hist) {
            return false;
        }
    }
    return true;
}

}  // namespace weildesc

#endif  // WEILDESC_DESCENT_HPP
