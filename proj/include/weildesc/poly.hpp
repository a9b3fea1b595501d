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
 * @file poly.hpp
 * @brief Univariate and multivariate polynomials over tower levels.
 *
 * UniPoly is dense (coefficients lowest degree first, no trailing zeros,
 * degree() == -1 for the zero polynomial).  MultiPoly is sparse: a map from
 * exponent vectors to nonzero coefficients, iterated in lexicographic
 * exponent order so printing and hashing are deterministic.
 *
 * Root finding is exhaustive scan over the requested field, budget-gated;
 * multiplicities are extracted by repeated synthetic division.  Square-free
 * testing is gcd(f, f'); the f' == 0 case raises inseparable_error instead
 * of answering.
 */

#ifndef WEILDESC_POLY_HPP
#define WEILDESC_POLY_HPP

#include <algorithm>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gf.hpp"

namespace weildesc {

class MultiPoly;

class UniPoly {
   public:
    explicit UniPoly(FieldPtr field) : field_(std::move(field)) {}
    UniPoly(FieldPtr field, std::vector<FieldElement> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
        for (const auto& c : c_)
            if (c.level().get() != field_.get()) throw std::invalid_argument("coefficient level mismatch");
        normalize();
    }

    /// Convenience: coefficients given as canonical element indices, lowest degree first.
    static UniPoly from_indices(const FieldPtr& field, std::initializer_list<std::uint64_t> idx) {
        std::vector<FieldElement> c;
        c.reserve(idx.size());
        for (auto i : idx) c.push_back(field->element(i));
        return UniPoly(field, std::move(c));
    }

    static UniPoly x(const FieldPtr& field) { return UniPoly(field, {field->zero(), field->one()}); }
    static UniPoly constant(const FieldElement& c) { return UniPoly(c.level(), {c}); }

    const FieldPtr& field() const { return field_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    FieldElement coeff(std::size_t i) const { return i < c_.size() ? c_[i] : field_->zero(); }
    const FieldElement& leading() const {
        if (c_.empty()) throw std::invalid_argument("zero polynomial has no leading coefficient");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back() == field_->one(); }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        a.same_field(b);
        std::vector<FieldElement> out(std::max(a.c_.size(), b.c_.size()), a.field_->zero());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
        return UniPoly(a.field_, std::move(out));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
        a.same_field(b);
        std::vector<FieldElement> out(std::max(a.c_.size(), b.c_.size()), a.field_->zero());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
        return UniPoly(a.field_, std::move(out));
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        a.same_field(b);
        if (a.is_zero() || b.is_zero()) return UniPoly(a.field_);
        std::vector<FieldElement> out(a.c_.size() + b.c_.size() - 1, a.field_->zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
        }
        return UniPoly(a.field_, std::move(out));
    }
    friend UniPoly operator*(const FieldElement& s, const UniPoly& a) {
        std::vector<FieldElement> out = a.c_;
        for (auto& c : out) c = s * c;
        return UniPoly(a.field_, std::move(out));
    }
    friend bool operator==(const UniPoly& a, const UniPoly& b) {
        return a.field_.get() == b.field_.get() && a.c_ == b.c_;
    }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    /// Quotient and remainder; the divisor's leading coefficient is inverted.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& den) const {
        same_field(den);
        if (den.is_zero()) throw std::invalid_argument("division by the zero polynomial");
        std::vector<FieldElement> rem = c_;
        const int dd = den.degree();
        if (degree() < dd) return {UniPoly(field_), *this};
        std::vector<FieldElement> quot(c_.size() - dd, field_->zero());
        FieldElement linv = den.leading().inv();
        for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
            FieldElement f = rem[i] * linv;
            if (f.is_zero()) continue;
            quot[i - dd] = f;
            for (int j = 0; j <= dd; ++j) rem[i - dd + j] = rem[i - dd + j] - f * den.c_[j];
        }
        return {UniPoly(field_, std::move(quot)), UniPoly(field_, std::move(rem))};
    }

    UniPoly monic() const {
        if (is_zero()) return *this;
        return leading().inv() * *this;
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly(field_);
        std::vector<FieldElement> out(c_.size() - 1, field_->zero());
        for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = field_->from_int(static_cast<std::int64_t>(i)) * c_[i];
        return UniPoly(field_, std::move(out));
    }

    /// Horner evaluation.  The point may live in this field or any level whose
    /// tower chain contains it (coefficients are injected); use lift() for
    /// cross-tower evaluation.
    FieldElement eval(const FieldElement& x) const {
        const FieldLevel* xl = x.level().get();
        if (xl == field_.get()) {
            std::uint64_t acc = 0;
            for (std::size_t i = c_.size(); i-- > 0;) acc = xl->add_i(xl->mul_i(acc, x.index()), c_[i].index());
            return {x.level(), acc};
        }
        if (chain_contains(xl, field_.get())) {
            std::uint64_t acc = 0;
            for (std::size_t i = c_.size(); i-- > 0;)
                acc = xl->add_i(xl->mul_i(acc, x.index()), inject_i(*field_, *xl, c_[i].index()));
            return {x.level(), acc};
        }
        throw std::invalid_argument("eval: point field is not an extension of the coefficient field; lift first");
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += " + ";
            s += c_[i].str();
            if (i == 1)
                s += "*x";
            else if (i > 1)
                s += "*x^" + std::to_string(i);
        }
        return s;
    }

    static UniPoly parse(const FieldPtr& field, const std::string& text);

    MultiPoly as_multi(std::uint32_t nvars = 1, std::uint32_t var = 0) const;

   private:
    void same_field(const UniPoly& o) const {
        if (field_.get() != o.field_.get()) throw std::invalid_argument("polynomial field mismatch");
    }
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    FieldPtr field_;
    std::vector<FieldElement> c_;
};

class MultiPoly {
   public:
    using ExpVec = std::vector<std::uint32_t>;

    MultiPoly(FieldPtr field, std::uint32_t nvars) : field_(std::move(field)), nvars_(nvars) {
        if (nvars_ < 1) throw std::invalid_argument("multivariate polynomial needs at least one variable");
    }

    static MultiPoly constant(const FieldPtr& field, std::uint32_t nvars, const FieldElement& c) {
        MultiPoly p(field, nvars);
        p.add_term(ExpVec(nvars, 0), c);
        return p;
    }
    static MultiPoly variable(const FieldPtr& field, std::uint32_t nvars, std::uint32_t i) {
        if (i >= nvars) throw std::invalid_argument("variable index out of range");
        MultiPoly p(field, nvars);
        ExpVec e(nvars, 0);
        e[i] = 1;
        p.add_term(e, field->one());
        return p;
    }

    const FieldPtr& field() const { return field_; }
    std::uint32_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<ExpVec, FieldElement>& terms() const { return terms_; }

    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int t = 0;
            for (auto x : e) t += static_cast<int>(x);
            d = std::max(d, t);
        }
        return d;
    }

    void add_term(const ExpVec& e, const FieldElement& c) {
        if (e.size() != nvars_) throw std::invalid_argument("exponent vector arity mismatch");
        if (c.level().get() != field_.get()) throw std::invalid_argument("coefficient level mismatch");
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        a.compat(b);
        MultiPoly out = a;
        for (const auto& [e, c] : b.terms_) out.add_term(e, c);
        return out;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        a.compat(b);
        MultiPoly out = a;
        for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
        return out;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.compat(b);
        MultiPoly out(a.field_, a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                ExpVec e(a.nvars_);
                for (std::uint32_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }
    friend MultiPoly operator*(const FieldElement& s, const MultiPoly& a) {
        MultiPoly out(a.field_, a.nvars_);
        for (const auto& [e, c] : a.terms_) out.add_term(e, s * c);
        return out;
    }
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.field_.get() == b.field_.get() && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    FieldElement eval(std::span<const FieldElement> pt) const {
        if (pt.size() != nvars_) throw std::invalid_argument("evaluation arity mismatch");
        const FieldLevel* xl = pt.empty() ? field_.get() : pt[0].level().get();
        for (const auto& p : pt)
            if (p.level().get() != xl) throw std::invalid_argument("evaluation point levels differ");
        bool same = xl == field_.get();
        if (!same && !chain_contains(xl, field_.get()))
            throw std::invalid_argument("eval: point field is not an extension of the coefficient field; lift first");
        std::uint64_t acc = 0;
        for (const auto& [e, c] : terms_) {
            std::uint64_t t = same ? c.index() : inject_i(*field_, *xl, c.index());
            for (std::uint32_t i = 0; i < nvars_; ++i)
                if (e[i]) t = xl->mul_i(t, xl->pow_i(pt[i].index(), static_cast<std::uint64_t>(e[i])));
            acc = xl->add_i(acc, t);
        }
        return {pt.empty() ? field_ : pt[0].level(), acc};
    }

    FieldElement eval(const std::vector<FieldElement>& pt) const {
        return eval(std::span<const FieldElement>(pt));
    }

    MultiPoly partial(std::uint32_t var) const {
        if (var >= nvars_) throw std::invalid_argument("variable index out of range");
        MultiPoly out(field_, nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            ExpVec d = e;
            d[var] -= 1;
            out.add_term(d, field_->from_int(static_cast<std::int64_t>(e[var])) * c);
        }
        return out;
    }

    /// Sum of the terms of maximal total degree.
    MultiPoly top_form() const {
        if (is_zero()) throw std::invalid_argument("top form of the zero polynomial");
        int d = total_degree();
        MultiPoly out(field_, nvars_);
        for (const auto& [e, c] : terms_) {
            int t = 0;
            for (auto x : e) t += static_cast<int>(x);
            if (t == d) out.add_term(e, c);
        }
        return out;
    }

    bool is_homogeneous() const {
        if (is_zero()) return true;
        return *this == top_form();
    }

    /// Substitute each variable by the corresponding polynomial (all in the
    /// same target ring); exact sparse expansion.
    MultiPoly compose(std::span<const MultiPoly> subs) const {
        if (subs.size() != nvars_) throw std::invalid_argument("compose arity mismatch");
        for (const auto& s : subs)
            if (s.field().get() != field_.get()) throw std::invalid_argument("compose field mismatch");
        const std::uint32_t out_vars = subs.empty() ? nvars_ : subs[0].nvars();
        // memoized powers of each substitute
        std::vector<std::vector<MultiPoly>> pows(nvars_);
        for (std::uint32_t i = 0; i < nvars_; ++i) pows[i].push_back(constant(field_, out_vars, field_->one()));
        MultiPoly acc(field_, out_vars);
        for (const auto& [e, c] : terms_) {
            MultiPoly term = constant(field_, out_vars, c);
            for (std::uint32_t i = 0; i < nvars_; ++i) {
                while (pows[i].size() <= e[i]) pows[i].push_back(pows[i].back() * subs[i]);
                if (e[i]) term = term * pows[i][e[i]];
            }
            acc = acc + term;
        }
        return acc;
    }

    /// Substitute variable `var` by a constant, collapsing into the remaining
    /// variables (arity is preserved; the variable simply disappears).
    MultiPoly substitute(std::uint32_t var, const FieldElement& value) const {
        if (var >= nvars_) throw std::invalid_argument("variable index out of range");
        MultiPoly out(field_, nvars_);
        for (const auto& [e, c] : terms_) {
            ExpVec d = e;
            d[var] = 0;
            out.add_term(d, c * value.pow(static_cast<std::uint64_t>(e[var])));
        }
        return out;
    }

    /// The polynomial as univariate in variable `var`; every other variable
    /// must not occur.
    UniPoly to_unipoly(std::uint32_t var = 0) const {
        std::vector<FieldElement> c;
        for (const auto& [e, coeff] : terms_) {
            for (std::uint32_t i = 0; i < nvars_; ++i)
                if (i != var && e[i] != 0) throw std::invalid_argument("polynomial is not univariate in that variable");
            if (c.size() <= e[var]) c.resize(e[var] + 1, field_->zero());
            c[e[var]] = coeff;
        }
        return UniPoly(field_, std::move(c));
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) s += " + ";
            first = false;
            s += c.str();
            for (std::uint32_t i = 0; i < nvars_; ++i) {
                if (e[i] == 0) continue;
                s += "*x" + std::to_string(i + 1);
                if (e[i] > 1) s += "^" + std::to_string(e[i]);
            }
        }
        return s;
    }

    static MultiPoly parse(const FieldPtr& field, std::uint32_t nvars, const std::string& text);

   private:
    void compat(const MultiPoly& o) const {
        if (field_.get() != o.field_.get() || nvars_ != o.nvars_)
            throw std::invalid_argument("multivariate polynomial ring mismatch");
    }

    FieldPtr field_;
    std::uint32_t nvars_;
    std::map<ExpVec, FieldElement> terms_;
};

inline MultiPoly UniPoly::as_multi(std::uint32_t nvars, std::uint32_t var) const {
    MultiPoly out(field_, nvars);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        MultiPoly::ExpVec e(nvars, 0);
        e[var] = static_cast<std::uint32_t>(i);
        out.add_term(e, c_[i]);
    }
    return out;
}

// ----- parsing -------------------------------------------------------------------

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_terms(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        // '+' separates terms; '-' inside a digit list belongs to the number
        if (text[i] == '+') {
            out.push_back(strip(cur));
            cur.clear();
        } else {
            cur += text[i];
        }
    }
    out.push_back(strip(cur));
    return out;
}

struct ParsedTerm {
    std::string coeff;                                     // element text; "1" implied when empty
    std::vector<std::pair<std::uint32_t, std::uint32_t>> powers;  // (variable 1-based, exponent)
};

inline ParsedTerm parse_term(const std::string& term) {
    ParsedTerm out;
    std::stringstream ss(term);
    std::string factor;
    bool first = true;
    while (std::getline(ss, factor, '*')) {
        factor = strip(factor);
        if (factor.empty()) throw std::invalid_argument("empty factor in term '" + term + "'");
        if (factor[0] == 'x') {
            std::uint32_t var = 1, exp = 1;
            std::size_t caret = factor.find('^');
            std::string vpart = caret == std::string::npos ? factor : factor.substr(0, caret);
            if (vpart.size() > 1) var = static_cast<std::uint32_t>(std::stoul(vpart.substr(1)));
            if (caret != std::string::npos) exp = static_cast<std::uint32_t>(std::stoul(factor.substr(caret + 1)));
            out.powers.emplace_back(var, exp);
        } else {
            if (!first || !out.coeff.empty()) throw std::invalid_argument("misplaced coefficient in term '" + term + "'");
            out.coeff = factor;
        }
        first = false;
    }
    return out;
}

}  // namespace detail

inline UniPoly UniPoly::parse(const FieldPtr& field, const std::string& text) {
    std::vector<FieldElement> c;
    for (const auto& t : detail::split_terms(text)) {
        if (t == "0" || t.empty()) continue;
        auto pt = detail::parse_term(t);
        std::uint32_t exp = 0;
        for (auto [var, e] : pt.powers) {
            if (var != 1) throw std::invalid_argument("univariate polynomial mentions x" + std::to_string(var));
            exp += e;
        }
        FieldElement coeff = pt.coeff.empty() ? field->one() : field->from_string(pt.coeff);
        if (c.size() <= exp) c.resize(exp + 1, field->zero());
        c[exp] = c[exp] + coeff;
    }
    return UniPoly(field, std::move(c));
}

inline MultiPoly MultiPoly::parse(const FieldPtr& field, std::uint32_t nvars, const std::string& text) {
    MultiPoly out(field, nvars);
    for (const auto& t : detail::split_terms(text)) {
        if (t == "0" || t.empty()) continue;
        auto pt = detail::parse_term(t);
        ExpVec e(nvars, 0);
        for (auto [var, ex] : pt.powers) {
            if (var < 1 || var > nvars) throw std::invalid_argument("variable x" + std::to_string(var) + " out of range");
            e[var - 1] += ex;
        }
        out.add_term(e, pt.coeff.empty() ? field->one() : field->from_string(pt.coeff));
    }
    return out;
}

// ----- lifting -------------------------------------------------------------------

inline UniPoly lift(const UniPoly& f, const Embedding& e) {
    std::vector<FieldElement> c;
    c.reserve(static_cast<std::size_t>(f.degree() + 1));
    for (int i = 0; i <= f.degree(); ++i) c.push_back(e(f.coeff(static_cast<std::size_t>(i))));
    return UniPoly(e.target(), std::move(c));
}

inline UniPoly lift_chain(const UniPoly& f, const FieldPtr& up) {
    std::vector<FieldElement> c;
    c.reserve(static_cast<std::size_t>(f.degree() + 1));
    for (int i = 0; i <= f.degree(); ++i) c.push_back(inject(f.coeff(static_cast<std::size_t>(i)), up));
    return UniPoly(up, std::move(c));
}

inline MultiPoly lift(const MultiPoly& f, const Embedding& e) {
    MultiPoly out(e.target(), f.nvars());
    for (const auto& [ex, c] : f.terms()) out.add_term(ex, e(c));
    return out;
}

inline MultiPoly lift_chain(const MultiPoly& f, const FieldPtr& up) {
    MultiPoly out(up, f.nvars());
    for (const auto& [ex, c] : f.terms()) out.add_term(ex, inject(c, up));
    return out;
}

// ----- Galois-twisting and linear substitution ------------------------------------

/// f^{sigma^j}: apply the tower Frobenius to every coefficient.  The degree is
/// preserved and twisting by r is the identity.
inline UniPoly frobenius_twist(const FieldTower& t, const UniPoly& f, std::uint32_t j) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("frobenius_twist: polynomial not over k_r");
    std::vector<FieldElement> c;
    c.reserve(static_cast<std::size_t>(f.degree() + 1));
    for (int i = 0; i <= f.degree(); ++i)
        c.push_back(frobenius(t, f.coeff(static_cast<std::size_t>(i)), static_cast<std::int64_t>(j)));
    return UniPoly(f.field(), std::move(c));
}

inline MultiPoly frobenius_twist(const FieldTower& t, const MultiPoly& f, std::uint32_t j) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("frobenius_twist: polynomial not over k_r");
    MultiPoly out(f.field(), f.nvars());
    for (const auto& [e, c] : f.terms()) out.add_term(e, frobenius(t, c, static_cast<std::int64_t>(j)));
    return out;
}

/// Exact expansion of f(beta_1 x_1 + ... + beta_v x_v) as a v-variable
/// polynomial over f's field.
inline MultiPoly compose_linear(const UniPoly& f, std::span<const FieldElement> betas) {
    if (betas.empty()) throw std::invalid_argument("compose_linear needs at least one variable");
    const auto v = static_cast<std::uint32_t>(betas.size());
    const FieldPtr& K = f.field();
    MultiPoly form(K, v);
    for (std::uint32_t i = 0; i < v; ++i) {
        if (betas[i].level().get() != K.get()) throw std::invalid_argument("compose_linear coefficient level mismatch");
        MultiPoly::ExpVec e(v, 0);
        e[i] = 1;
        form.add_term(e, betas[i]);
    }
    // Horner in the multivariate ring
    MultiPoly acc = MultiPoly::constant(K, v, f.coeff(static_cast<std::size_t>(std::max(f.degree(), 0))));
    if (f.is_zero()) return MultiPoly(K, v);
    for (int i = f.degree() - 1; i >= 0; --i)
        acc = acc * form + MultiPoly::constant(K, v, f.coeff(static_cast<std::size_t>(i)));
    return acc;
}

inline MultiPoly compose_linear(const UniPoly& f, const std::vector<FieldElement>& betas) {
    return compose_linear(f, std::span<const FieldElement>(betas));
}

// ----- gcd, square-freeness, roots ------------------------------------------------

inline UniPoly gcd(UniPoly a, UniPoly b) {
    if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd of two zero polynomials");
    while (!b.is_zero()) {
        UniPoly r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// True iff gcd(f, f') is constant.  Raises inseparable_error when f' == 0,
/// i.e. f is a polynomial in x^p; the criterion is inapplicable there and
/// the hypotheses of every theorem that needs it (d prime to p) exclude it.
inline bool is_square_free(const UniPoly& f) {
    if (f.degree() < 1) throw std::invalid_argument("square-free test needs degree >= 1");
    UniPoly d = f.derivative();
    if (d.is_zero())
        throw inseparable_error("derivative vanishes identically (polynomial in x^p); square-free criterion inapplicable");
    return gcd(f, d).degree() == 0;
}

/// All roots of f in K with multiplicities, found by exhaustive scan and
/// repeated synthetic division.  K must be the coefficient field or a level
/// whose chain contains it; use lift() with an Embedding to cross towers.
inline std::map<std::uint64_t, std::uint32_t> roots_in(const UniPoly& f, const FieldPtr& K,
                                                       std::uint64_t budget = default_enumeration_budget) {
    if (f.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
    ensure_budget(K->cardinality(), budget, "root scan");
    UniPoly g = K.get() == f.field().get() ? f : lift_chain(f, K);
    std::map<std::uint64_t, std::uint32_t> out;
    for (std::uint64_t x = 0; x < K->card() && g.degree() > 0; ++x) {
        FieldElement xe = K->element(x);
        if (!g.eval(xe).is_zero()) continue;
        UniPoly lin(K, {-xe, K->one()});
        std::uint32_t mult = 0;
        while (true) {
            auto [q, rem] = g.divmod(lin);
            if (!rem.is_zero()) break;
            g = q;
            ++mult;
        }
        out[x] = mult;
    }
    return out;
}

inline std::uint32_t root_count_with_multiplicity(const std::map<std::uint64_t, std::uint32_t>& roots) {
    std::uint32_t n = 0;
    for (const auto& [x, m] : roots) n += m;
    return n;
}

}  // namespace weildesc

#endif  // WEILDESC_POLY_HPP
