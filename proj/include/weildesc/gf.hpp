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
 * @file gf.hpp
 * @brief Exact arithmetic in finite-field towers.
 *
 * A FieldLevel is either a prime field F_p or a relative extension of
 * another level by a monic irreducible polynomial.  Towers of any depth
 * are supported (e.g. F_3 < F_9 < F_729 < ...).  Every element of a level
 * has a canonical index in [0, card): the lexicographic rank of its
 * coefficient vector over the level below, lowest degree first, with
 * 0 < 1 < ... < p-1 on prime digits.  Enumeration, serialization and
 * "first root" determinism are all phrased in terms of this order.
 *
 * Levels are immutable after construction and hold shared ownership of
 * the levels below them; elements are (level pointer, index) pairs.
 * Small levels (card <= FieldLevel::table_limit) precompute full
 * add/mul/inverse/Frobenius tables at construction, so all later
 * arithmetic on them is table lookups.
 */

#ifndef WEILDESC_GF_HPP
#define WEILDESC_GF_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace weildesc {

class FieldLevel;
class FieldElement;
using FieldPtr = std::shared_ptr<const FieldLevel>;

class FieldLevel : public std::enable_shared_from_this<FieldLevel> {
   public:
    /// Full arithmetic tables are precomputed for levels of at most this many elements.
    static constexpr std::uint64_t table_limit = 1024;

    /// F_p with the defining polynomial x.
    static FieldPtr prime(std::uint64_t p, std::uint64_t budget = default_enumeration_budget) {
        ensure_budget(BigInt(p), budget, "prime field construction");
        if (p < 2 || !is_prime_u64(p)) throw std::invalid_argument("characteristic must be prime, got " + std::to_string(p));
        return FieldPtr(new FieldLevel(p));
    }

    /// Degree-`degree` extension of `base` with the lexicographically
    /// smallest monic irreducible defining polynomial.
    static FieldPtr extension(const FieldPtr& base, std::uint32_t degree,
                              std::uint64_t budget = default_enumeration_budget) {
        check_ext_args(base, degree, budget);
        std::vector<std::uint64_t> low = find_smallest_irreducible(*base, degree);
        return FieldPtr(new FieldLevel(base, degree, std::move(low)));
    }

    /// Extension with an explicit monic defining polynomial, given as base-level
    /// indices c_0,...,c_{degree-1},1 (lowest degree first, leading 1 included).
    static FieldPtr extension_with(const FieldPtr& base, const std::vector<std::uint64_t>& monic_coeffs,
                                   std::uint64_t budget = default_enumeration_budget) {
        if (monic_coeffs.size() < 2) throw std::invalid_argument("defining polynomial must have degree >= 1");
        auto degree = static_cast<std::uint32_t>(monic_coeffs.size() - 1);
        check_ext_args(base, degree, budget);
        if (monic_coeffs.back() != base->one_i()) throw std::invalid_argument("defining polynomial must be monic");
        std::vector<std::uint64_t> low(monic_coeffs.begin(), monic_coeffs.end() - 1);
        for (std::uint64_t c : low)
            if (c >= base->card()) throw std::invalid_argument("defining polynomial coefficient out of range");
        if (!is_irreducible(*base, low)) throw std::invalid_argument("defining polynomial is reducible");
        return FieldPtr(new FieldLevel(base, degree, std::move(low)));
    }

    /// Parse a textual field spec: either "p^n" or "p;n;c0,c1,...,1" with
    /// prime-field digits c_i giving the defining polynomial over F_p.
    static FieldPtr parse_spec(const std::string& spec, std::uint64_t budget = default_enumeration_budget);

    std::uint64_t characteristic() const { return p_; }
    std::uint32_t abs_degree() const { return abs_degree_; }
    std::uint32_t rel_degree() const { return rel_degree_; }
    const FieldPtr& base() const { return base_; }
    bool is_prime_field() const { return base_ == nullptr; }
    std::uint64_t card() const { return card_; }
    const BigInt& cardinality() const { return cardinality_; }
    /// Low coefficients c_0..c_{s-1} of the monic defining polynomial, as base indices.
    const std::vector<std::uint64_t>& defining() const { return def_; }

    std::string spec_string() const { return std::to_string(p_) + "^" + std::to_string(abs_degree_); }

    /// Defining polynomial as text over the level below, e.g. "x^2 + x + 1".
    std::string defining_string() const;

    // ----- index arithmetic -------------------------------------------------

    std::uint64_t zero_i() const { return 0; }
    std::uint64_t one_i() const { return one_; }
    /// Index of the class of x (the relative generator of this level).
    std::uint64_t gen_i() const { return gen_; }

    std::uint64_t add_i(std::uint64_t a, std::uint64_t b) const {
        return tabs_ ? tabs_->add[a * card_ + b] : raw_add(a, b);
    }
    std::uint64_t neg_i(std::uint64_t a) const { return tabs_ ? tabs_->neg[a] : raw_neg(a); }
    std::uint64_t sub_i(std::uint64_t a, std::uint64_t b) const { return add_i(a, neg_i(b)); }
    std::uint64_t mul_i(std::uint64_t a, std::uint64_t b) const {
        return tabs_ ? tabs_->mul[a * card_ + b] : raw_mul(a, b);
    }
    std::uint64_t inv_i(std::uint64_t a) const {
        if (a == 0) throw std::invalid_argument("inversion of zero");
        return tabs_ ? tabs_->inv[a] : pow_i(a, card_ - 2);
    }
    std::uint64_t div_i(std::uint64_t a, std::uint64_t b) const { return mul_i(a, inv_i(b)); }

    std::uint64_t pow_i(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t acc = one_, b = a;
        while (e) {
            if (e & 1) acc = mul_i(acc, b);
            b = mul_i(b, b);
            e >>= 1;
        }
        return acc;
    }

    /// a^e for big-integer e; exponents of nonzero elements reduce mod card-1.
    std::uint64_t pow_i(std::uint64_t a, const BigInt& e) const {
        if (e == 0) return one_;
        if (a == 0) {
            if (e < 0) throw std::invalid_argument("inversion of zero");
            return 0;
        }
        BigInt m = e % BigInt(card_ - 1);
        if (m < 0) m += card_ - 1;
        return pow_i(a, m.convert_to<std::uint64_t>());
    }

    /// Absolute Frobenius x -> x^p.
    std::uint64_t frob_i(std::uint64_t a) const { return tabs_ ? tabs_->frob[a] : pow_i(a, p_); }

    // ----- representation ---------------------------------------------------

    /// Coefficient vector over the level below (base indices), lowest degree first.
    std::vector<std::uint64_t> decode(std::uint64_t idx) const {
        std::vector<std::uint64_t> out(rel_degree_);
        std::uint64_t b = base_ ? base_->card() : p_;
        for (std::uint32_t j = rel_degree_; j-- > 0;) {
            out[j] = idx % b;
            idx /= b;
        }
        return out;
    }

    std::uint64_t encode(std::span<const std::uint64_t> chunks) const {
        std::uint64_t b = base_ ? base_->card() : p_, idx = 0;
        for (std::uint32_t j = 0; j < rel_degree_; ++j) idx = idx * b + chunks[j];
        return idx;
    }

    /// Flattened F_p digits, lowest degree first with respect to the tower basis.
    std::vector<std::uint32_t> to_flat_digits(std::uint64_t idx) const {
        std::vector<std::uint32_t> out;
        out.reserve(abs_degree_);
        flat_digits_into(idx, out);
        return out;
    }

    std::uint64_t from_flat_digits(std::span<const std::uint32_t> digits) const {
        if (digits.size() != abs_degree_) throw std::invalid_argument("digit vector length mismatch");
        std::size_t pos = 0;
        return from_digits_rec(digits, pos);
    }

    /// n * 1 for an integer n (reduced mod p).
    std::uint64_t from_int_i(std::int64_t n) const {
        std::int64_t m = n % static_cast<std::int64_t>(p_);
        if (m < 0) m += static_cast<std::int64_t>(p_);
        if (is_prime_field()) return static_cast<std::uint64_t>(m);
        return base_->from_int_i(m) * pow_base(rel_degree_ - 1);
    }

    /// Serialization: comma-separated base-p digits, lowest degree first.
    std::string element_str(std::uint64_t idx) const {
        auto d = to_flat_digits(idx);
        std::string s;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(d[i]);
        }
        return s;
    }

    std::uint64_t parse_element(const std::string& text) const;

    // ----- element factories ------------------------------------------------

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement gen() const;
    FieldElement element(std::uint64_t idx) const;
    FieldElement from_int(std::int64_t n) const;
    FieldElement from_string(const std::string& text) const;

   private:
    explicit FieldLevel(std::uint64_t p)
        : p_(p), abs_degree_(1), rel_degree_(1), card_(p), cardinality_(p), def_{0} {
        one_ = 1 % p_;
        gen_ = 0;  // class of x = -c_0 = 0 in the degree-1 picture F_p = F_p[x]/(x)
        maybe_build_tables();
    }

    FieldLevel(FieldPtr base, std::uint32_t degree, std::vector<std::uint64_t> def_low)
        : p_(base->characteristic()),
          abs_degree_(base->abs_degree() * degree),
          rel_degree_(degree),
          base_(std::move(base)),
          def_(std::move(def_low)) {
        cardinality_ = big_pow(BigInt(base_->card()), degree);
        card_ = cardinality_.convert_to<std::uint64_t>();
        one_ = base_->one_i() * pow_base(degree - 1);
        if (degree >= 2) {
            gen_ = base_->one_i() * pow_base(degree - 2);
        } else {
            gen_ = base_->neg_i(def_[0]);  // x = -c_0 when the extension has degree 1
        }
        maybe_build_tables();
    }

    static void check_ext_args(const FieldPtr& base, std::uint32_t degree, std::uint64_t budget) {
        if (!base) throw std::invalid_argument("null base field");
        if (degree < 1) throw std::invalid_argument("extension degree must be >= 1");
        ensure_budget(big_pow(BigInt(base->card()), degree), budget, "extension construction");
    }

    static bool is_prime_u64(std::uint64_t n) {
        if (n < 2) return false;
        if (n % 2 == 0) return n == 2;
        for (std::uint64_t d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }

    std::uint64_t pow_base(std::uint32_t e) const {
        std::uint64_t b = base_ ? base_->card() : p_, acc = 1;
        while (e--) acc *= b;
        return acc;
    }

    // raw (table-free) arithmetic -------------------------------------------

    std::uint64_t raw_add(std::uint64_t a, std::uint64_t b) const {
        if (is_prime_field()) return (a + b) % p_;
        auto A = decode(a), B = decode(b);
        for (std::uint32_t j = 0; j < rel_degree_; ++j) A[j] = base_->add_i(A[j], B[j]);
        return encode(A);
    }

    std::uint64_t raw_neg(std::uint64_t a) const {
        if (is_prime_field()) return a ? p_ - a : 0;
        auto A = decode(a);
        for (auto& c : A) c = base_->neg_i(c);
        return encode(A);
    }

    std::uint64_t raw_mul(std::uint64_t a, std::uint64_t b) const {
        if (is_prime_field()) return (a * b) % p_;
        auto A = decode(a), B = decode(b);
        const std::uint32_t s = rel_degree_;
        std::vector<std::uint64_t> prod(2 * s - 1, 0);
        for (std::uint32_t i = 0; i < s; ++i) {
            if (A[i] == 0) continue;
            for (std::uint32_t j = 0; j < s; ++j)
                prod[i + j] = base_->add_i(prod[i + j], base_->mul_i(A[i], B[j]));
        }
        for (std::uint32_t i = 2 * s - 2; i >= s && i < prod.size(); --i) {
            std::uint64_t c = prod[i];
            if (c == 0) continue;
            prod[i] = 0;
            for (std::uint32_t j = 0; j < s; ++j)
                prod[i - s + j] = base_->sub_i(prod[i - s + j], base_->mul_i(c, def_[j]));
        }
        prod.resize(s);
        return encode(prod);
    }

    void flat_digits_into(std::uint64_t idx, std::vector<std::uint32_t>& out) const {
        if (is_prime_field()) {
            out.push_back(static_cast<std::uint32_t>(idx));
            return;
        }
        for (std::uint64_t c : decode(idx)) base_->flat_digits_into(c, out);
    }

    std::uint64_t from_digits_rec(std::span<const std::uint32_t> digits, std::size_t& pos) const {
        if (is_prime_field()) {
            std::uint32_t d = digits[pos++];
            if (d >= p_) throw std::invalid_argument("digit out of range for characteristic " + std::to_string(p_));
            return d;
        }
        std::vector<std::uint64_t> chunks(rel_degree_);
        for (auto& c : chunks) c = base_->from_digits_rec(digits, pos);
        return encode(chunks);
    }

    // polynomial helpers over a level, dense low-first index-coefficient vectors

    static void poly_normalize(std::vector<std::uint64_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    }

    /// Remainder of num by the monic polynomial with low coefficients `den_low` (degree = den_low.size()).
    static std::vector<std::uint64_t> poly_mod_monic(std::vector<std::uint64_t> num,
                                                     std::span<const std::uint64_t> den_low, const FieldLevel& B) {
        const std::size_t dd = den_low.size();
        poly_normalize(num);
        while (num.size() > dd) {
            std::uint64_t c = num.back();
            std::size_t shift = num.size() - 1 - dd;
            if (c != 0)
                for (std::size_t j = 0; j < dd; ++j)
                    num[shift + j] = B.sub_i(num[shift + j], B.mul_i(c, den_low[j]));
            num.pop_back();
            poly_normalize(num);
        }
        return num;
    }

    /// Irreducibility over B of the monic polynomial with low coefficients `low`
    /// (trial division; a reducible polynomial has a monic factor of degree <= n/2).
    static bool is_irreducible(const FieldLevel& B, const std::vector<std::uint64_t>& low) {
        const std::size_t n = low.size();
        if (n == 1) return true;
        std::vector<std::uint64_t> num(low.begin(), low.end());
        num.push_back(B.one_i());
        for (std::size_t t = 1; 2 * t <= n; ++t) {
            std::vector<std::uint64_t> cand(t, 0);
            bool more = true;
            while (more) {
                if (poly_mod_monic(num, cand, B).empty()) return false;
                std::size_t j = t;
                more = false;
                while (j-- > 0) {
                    if (++cand[j] < B.card()) {
                        more = true;
                        break;
                    }
                    cand[j] = 0;
                }
            }
        }
        return true;
    }

    /// Coefficient tuples (c_0,...,c_{n-1}) are scanned in lexicographic order,
    /// c_0 major, and the first irreducible candidate wins.
    static std::vector<std::uint64_t> find_smallest_irreducible(const FieldLevel& B, std::uint32_t n) {
        std::vector<std::uint64_t> cand(n, 0);
        while (true) {
            if (is_irreducible(B, cand)) return cand;
            std::uint32_t j = n;
            while (j-- > 0) {
                if (++cand[j] < B.card()) break;
                cand[j] = 0;
                if (j == 0) throw std::logic_error("no irreducible polynomial found (impossible)");
            }
        }
    }

    void maybe_build_tables() {
        if (card_ > table_limit) return;
        auto t = std::make_unique<Tables>();
        const std::size_t c = card_;
        t->add.resize(c * c);
        t->mul.resize(c * c);
        t->neg.resize(c);
        t->inv.resize(c);
        t->frob.resize(c);
        for (std::size_t a = 0; a < c; ++a) {
            t->neg[a] = static_cast<std::uint16_t>(raw_neg(a));
            for (std::size_t b = 0; b < c; ++b) {
                t->add[a * c + b] = static_cast<std::uint16_t>(raw_add(a, b));
                t->mul[a * c + b] = static_cast<std::uint16_t>(raw_mul(a, b));
            }
        }
        t->inv[0] = 0;
        for (std::size_t a = 1; a < c; ++a) {
            std::uint64_t acc = one_, b = a, e = card_ - 2;
            while (e) {
                if (e & 1) acc = t->mul[acc * c + b];
                b = t->mul[b * c + b];
                e >>= 1;
            }
            t->inv[a] = static_cast<std::uint16_t>(acc);
        }
        for (std::size_t a = 0; a < c; ++a) {
            std::uint64_t acc = one_, b = a, e = p_;
            while (e) {
                if (e & 1) acc = t->mul[acc * c + b];
                b = t->mul[b * c + b];
                e >>= 1;
            }
            t->frob[a] = static_cast<std::uint16_t>(acc);
        }
        tabs_ = std::move(t);
    }

    struct Tables {
        std::vector<std::uint16_t> add, mul, neg, inv, frob;
    };

    std::uint64_t p_;
    std::uint32_t abs_degree_;
    std::uint32_t rel_degree_;
    FieldPtr base_;
    std::vector<std::uint64_t> def_;
    std::uint64_t card_ = 0;
    BigInt cardinality_;
    std::uint64_t one_ = 0, gen_ = 0;
    std::unique_ptr<Tables> tabs_;
};

class FieldElement {
   public:
    FieldElement() = default;
    FieldElement(FieldPtr level, std::uint64_t idx) : level_(std::move(level)), idx_(idx) {}

    const FieldPtr& level() const { return level_; }
    std::uint64_t index() const { return idx_; }
    bool is_zero() const { return idx_ == 0; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        a.same_level(b);
        return {a.level_, a.level_->add_i(a.idx_, b.idx_)};
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        a.same_level(b);
        return {a.level_, a.level_->sub_i(a.idx_, b.idx_)};
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        a.same_level(b);
        return {a.level_, a.level_->mul_i(a.idx_, b.idx_)};
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        a.same_level(b);
        return {a.level_, a.level_->div_i(a.idx_, b.idx_)};
    }
    FieldElement operator-() const { return {level_, level_->neg_i(idx_)}; }
    FieldElement inv() const { return {level_, level_->inv_i(idx_)}; }
    FieldElement pow(const BigInt& e) const { return {level_, level_->pow_i(idx_, e)}; }
    FieldElement pow(std::uint64_t e) const { return {level_, level_->pow_i(idx_, e)}; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.level_.get() == b.level_.get() && a.idx_ == b.idx_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    std::string str() const { return level_->element_str(idx_); }

   private:
    void same_level(const FieldElement& o) const {
        if (level_.get() != o.level_.get()) throw std::invalid_argument("field level mismatch");
    }

    FieldPtr level_;
    std::uint64_t idx_ = 0;
};

inline FieldElement FieldLevel::zero() const { return {shared_from_this(), 0}; }
inline FieldElement FieldLevel::one() const { return {shared_from_this(), one_}; }
inline FieldElement FieldLevel::gen() const { return {shared_from_this(), gen_}; }
inline FieldElement FieldLevel::element(std::uint64_t idx) const {
    if (idx >= card_) throw std::invalid_argument("element index out of range");
    return {shared_from_this(), idx};
}
inline FieldElement FieldLevel::from_int(std::int64_t n) const { return {shared_from_this(), from_int_i(n)}; }
inline FieldElement FieldLevel::from_string(const std::string& text) const {
    return {shared_from_this(), parse_element(text)};
}

inline std::uint64_t FieldLevel::parse_element(const std::string& text) const {
    std::vector<std::uint32_t> digits;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t b = tok.find_first_not_of(" \t");
        std::size_t e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) throw std::invalid_argument("empty digit in element '" + text + "'");
        long long v = std::stoll(tok.substr(b, e - b + 1));
        long long m = v % static_cast<long long>(p_);
        if (m < 0) m += static_cast<long long>(p_);
        digits.push_back(static_cast<std::uint32_t>(m));
    }
    if (digits.size() != abs_degree_)
        throw std::invalid_argument("element '" + text + "' has " + std::to_string(digits.size()) +
                                    " digits, expected " + std::to_string(abs_degree_));
    return from_flat_digits(digits);
}

inline FieldPtr FieldLevel::parse_spec(const std::string& spec, std::uint64_t budget) {
    if (spec.find(';') != std::string::npos) {
        std::stringstream ss(spec);
        std::string ps, ns, cs;
        if (!std::getline(ss, ps, ';') || !std::getline(ss, ns, ';') || !std::getline(ss, cs))
            throw std::invalid_argument("bad field spec '" + spec + "'");
        std::uint64_t p = std::stoull(ps);
        std::uint32_t n = static_cast<std::uint32_t>(std::stoul(ns));
        FieldPtr fp = prime(p, budget);
        std::vector<std::uint64_t> coeffs;
        std::stringstream cc(cs);
        std::string tok;
        while (std::getline(cc, tok, ',')) coeffs.push_back(std::stoull(tok));
        if (coeffs.size() != static_cast<std::size_t>(n) + 1)
            throw std::invalid_argument("field spec '" + spec + "': expected " + std::to_string(n + 1) +
                                        " defining coefficients");
        return extension_with(fp, coeffs, budget);
    }
    std::size_t caret = spec.find('^');
    std::uint64_t p = std::stoull(caret == std::string::npos ? spec : spec.substr(0, caret));
    std::uint32_t n = caret == std::string::npos ? 1 : static_cast<std::uint32_t>(std::stoul(spec.substr(caret + 1)));
    FieldPtr fp = prime(p, budget);
    return n == 1 ? fp : extension(fp, n, budget);
}

inline std::string FieldLevel::defining_string() const {
    if (is_prime_field()) return "x";
    std::string s = "x^" + std::to_string(rel_degree_);
    for (std::uint32_t j = rel_degree_; j-- > 0;) {
        if (def_[j] == 0) continue;
        s += " + " + base_->element_str(def_[j]);
        if (j == 1)
            s += "*x";
        else if (j > 1)
            s += "*x^" + std::to_string(j);
    }
    return s;
}

// ----- canonical inclusion along a tower chain --------------------------------

/// True when `anc` appears in the chain of levels below (or equal to) `lvl`.
inline bool chain_contains(const FieldLevel* lvl, const FieldLevel* anc) {
    for (const FieldLevel* c = lvl; c; c = c->base().get())
        if (c == anc) return true;
    return false;
}

/// Canonical inclusion of an element of an ancestor level into `up` (constant
/// coefficient vectors all the way); requires `up`'s chain to contain x's level.
inline std::uint64_t inject_i(const FieldLevel& from, const FieldLevel& up, std::uint64_t idx) {
    if (&up == &from) return idx;
    if (!up.base() || !chain_contains(up.base().get(), &from))
        throw std::invalid_argument("inject: level is not in the tower chain");
    std::uint64_t below = inject_i(from, *up.base(), idx);
    std::uint64_t b = up.base()->card(), acc = below;
    for (std::uint32_t j = 1; j < up.rel_degree(); ++j) acc *= b;
    return acc;
}

inline FieldElement inject(const FieldElement& x, const FieldPtr& up) {
    return {up, inject_i(*x.level(), *up, x.index())};
}

/// Partial inverse of inject: an element of `lvl` that actually lies in the
/// ancestor `down` is re-typed there; throws if it does not.
inline std::uint64_t retract_i(const FieldLevel& lvl, const FieldLevel& down, std::uint64_t idx) {
    if (&lvl == &down) return idx;
    if (!lvl.base()) throw std::invalid_argument("retract: level is not above the target");
    auto chunks = lvl.decode(idx);
    for (std::size_t j = 1; j < chunks.size(); ++j)
        if (chunks[j] != 0) throw std::invalid_argument("retract: element does not lie in the subfield");
    return retract_i(*lvl.base(), down, chunks[0]);
}

inline FieldElement retract(const FieldElement& x, const FieldPtr& down) {
    return {down, retract_i(*x.level(), *down, x.index())};
}

// ----- towers ------------------------------------------------------------------

/// The chain k = F_q inside k_r = F_{q^r}; every Galois-theoretic operation
/// (Frobenius, trace, norm, descent) is relative to this pair.
struct FieldTower {
    FieldPtr k;
    FieldPtr kr;
    std::uint32_t r = 1;

    std::uint64_t q() const { return k->card(); }
    BigInt q_pow(std::uint32_t e) const { return big_pow(BigInt(q()), e); }
};

/// k_r as a relative degree-r extension of k, with the lexicographically
/// smallest defining polynomial.
inline FieldTower build_extension(const FieldPtr& base, std::uint32_t r,
                                  std::uint64_t budget = default_enumeration_budget) {
    return FieldTower{base, FieldLevel::extension(base, r, budget), r};
}

/// x^{q^j} for an element of any level whose chain contains k; j is reduced
/// mod the relative degree by the exponent arithmetic itself.
inline FieldElement frobenius_q(const FieldElement& x, std::uint64_t q, std::uint32_t j) {
    return x.pow(big_pow(BigInt(q), j));
}

inline FieldElement frobenius(const FieldTower& t, const FieldElement& x, std::int64_t j) {
    if (x.level().get() != t.kr.get()) throw std::invalid_argument("frobenius: element not in k_r");
    std::int64_t m = j % static_cast<std::int64_t>(t.r);
    if (m < 0) m += t.r;
    return frobenius_q(x, t.q(), static_cast<std::uint32_t>(m));
}

inline FieldElement trace_to_base(const FieldTower& t, const FieldElement& x) {
    if (x.level().get() != t.kr.get()) throw std::invalid_argument("trace: element not in k_r");
    FieldElement acc = x, y = x;
    for (std::uint32_t j = 1; j < t.r; ++j) {
        y = y.pow(t.q());
        acc = acc + y;
    }
    return retract(acc, t.k);
}

inline FieldElement norm_to_base(const FieldTower& t, const FieldElement& x) {
    if (x.level().get() != t.kr.get()) throw std::invalid_argument("norm: element not in k_r");
    FieldElement acc = x, y = x;
    for (std::uint32_t j = 1; j < t.r; ++j) {
        y = y.pow(t.q());
        acc = acc * y;
    }
    return retract(acc, t.k);
}

// ----- bases -------------------------------------------------------------------

/// A k-basis of k_r.  Construction verifies linear independence by inverting
/// the r x r coordinate matrix over k; coords/from_coords are then matrix
/// products against the power-basis coordinates.
class Basis {
   public:
    Basis(FieldTower tower, std::vector<FieldElement> alphas, bool power = false)
        : t_(std::move(tower)), alphas_(std::move(alphas)), power_(power) {
        const std::uint32_t r = t_.r;
        if (alphas_.size() != r) throw std::invalid_argument("basis must have r elements");
        for (const auto& a : alphas_)
            if (a.level().get() != t_.kr.get()) throw std::invalid_argument("basis element not in k_r");
        // mat[i][j] = power-basis coordinate i of alpha_j
        mat_.assign(static_cast<std::size_t>(r) * r, 0);
        for (std::uint32_t jcol = 0; jcol < r; ++jcol) {
            auto chunks = t_.kr->decode(alphas_[jcol].index());
            for (std::uint32_t i = 0; i < r; ++i) mat_[i * r + jcol] = chunks[i];
        }
        inv_ = invert(mat_, r, *t_.k);
    }

    static Basis power(const FieldTower& t) {
        std::vector<FieldElement> a;
        a.reserve(t.r);
        FieldElement u = t.kr->gen(), x = t.kr->one();
        for (std::uint32_t i = 0; i < t.r; ++i) {
            a.push_back(x);
            x = x * u;
        }
        return Basis(t, std::move(a), true);
    }

    const FieldTower& tower() const { return t_; }
    const std::vector<FieldElement>& alphas() const { return alphas_; }
    bool is_power() const { return power_; }

    /// Coordinates of x over k with respect to this basis.
    std::vector<FieldElement> coords(const FieldElement& x) const {
        if (x.level().get() != t_.kr.get()) throw std::invalid_argument("coords: element not in k_r");
        auto chunks = t_.kr->decode(x.index());
        const std::uint32_t r = t_.r;
        std::vector<FieldElement> out;
        out.reserve(r);
        for (std::uint32_t i = 0; i < r; ++i) {
            std::uint64_t acc = 0;
            for (std::uint32_t j = 0; j < r; ++j) acc = t_.k->add_i(acc, t_.k->mul_i(inv_[i * r + j], chunks[j]));
            out.emplace_back(t_.k, acc);
        }
        return out;
    }

    FieldElement from_coords(std::span<const FieldElement> c) const {
        if (c.size() != t_.r) throw std::invalid_argument("coordinate vector length mismatch");
        FieldElement acc = t_.kr->zero();
        for (std::uint32_t i = 0; i < t_.r; ++i) acc = acc + inject(c[i], t_.kr) * alphas_[i];
        return acc;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            if (i) s += ';';
            s += alphas_[i].str();
        }
        return s;
    }

   private:
    static std::vector<std::uint64_t> invert(const std::vector<std::uint64_t>& m, std::uint32_t r,
                                             const FieldLevel& K) {
        std::vector<std::uint64_t> a = m, inv(static_cast<std::size_t>(r) * r, 0);
        for (std::uint32_t i = 0; i < r; ++i) inv[i * r + i] = K.one_i();
        for (std::uint32_t col = 0; col < r; ++col) {
            std::uint32_t piv = col;
            while (piv < r && a[piv * r + col] == 0) ++piv;
            if (piv == r) throw std::invalid_argument("singular basis matrix");
            if (piv != col)
                for (std::uint32_t j = 0; j < r; ++j) {
                    std::swap(a[piv * r + j], a[col * r + j]);
                    std::swap(inv[piv * r + j], inv[col * r + j]);
                }
            std::uint64_t s = K.inv_i(a[col * r + col]);
            for (std::uint32_t j = 0; j < r; ++j) {
                a[col * r + j] = K.mul_i(a[col * r + j], s);
                inv[col * r + j] = K.mul_i(inv[col * r + j], s);
            }
            for (std::uint32_t i = 0; i < r; ++i) {
                if (i == col || a[i * r + col] == 0) continue;
                std::uint64_t f = a[i * r + col];
                for (std::uint32_t j = 0; j < r; ++j) {
                    a[i * r + j] = K.sub_i(a[i * r + j], K.mul_i(f, a[col * r + j]));
                    inv[i * r + j] = K.sub_i(inv[i * r + j], K.mul_i(f, inv[col * r + j]));
                }
            }
        }
        return inv;
    }

    FieldTower t_;
    std::vector<FieldElement> alphas_;
    bool power_;
    std::vector<std::uint64_t> mat_, inv_;
};

// ----- enumeration ---------------------------------------------------------------

/// All elements of a level in canonical (lexicographic) order.
class ElementRange {
   public:
    explicit ElementRange(FieldPtr level, std::uint64_t budget = default_enumeration_budget)
        : level_(std::move(level)) {
        ensure_budget(level_->cardinality(), budget, "field enumeration");
    }

    class iterator {
       public:
        iterator(const FieldPtr& l, std::uint64_t i) : l_(&l), i_(i) {}
        FieldElement operator*() const { return {*l_, i_}; }
        iterator& operator++() {
            ++i_;
            return *this;
        }
        bool operator!=(const iterator& o) const { return i_ != o.i_; }

       private:
        const FieldPtr* l_;
        std::uint64_t i_;
    };

    iterator begin() const { return {level_, 0}; }
    iterator end() const { return {level_, level_->card()}; }

   private:
    FieldPtr level_;
};

inline ElementRange enumerate(const FieldPtr& level, std::uint64_t budget = default_enumeration_budget) {
    return ElementRange(level, budget);
}

/// Visit every tuple in K^v in lexicographic order; fn(point) with point a
/// span of element indices.  Budget-gated.
template <class Fn>
void for_each_tuple(const FieldLevel& K, std::uint32_t v, std::uint64_t budget, Fn&& fn) {
    ensure_budget(big_pow(BigInt(K.card()), v), budget, "tuple enumeration");
    std::vector<std::uint64_t> pt(v, 0);
    const std::uint64_t c = K.card();
    if (v == 0) {
        fn(std::span<const std::uint64_t>(pt));
        return;
    }
    while (true) {
        fn(std::span<const std::uint64_t>(pt));
        std::uint32_t j = v;
        while (j-- > 0) {
            if (++pt[j] < c) break;
            pt[j] = 0;
            if (j == 0) return;
        }
    }
}

// ----- embeddings ----------------------------------------------------------------

/// A field homomorphism source -> target fixing the prime field.  The image of
/// the source's relative generator is the first root of its (recursively
/// embedded) defining polynomial in the target's enumeration order, so the
/// map is deterministic across runs.
class Embedding {
   public:
    Embedding(FieldPtr source, FieldPtr target) : src_(std::move(source)), dst_(std::move(target)) {
        if (src_->characteristic() != dst_->characteristic())
            throw std::invalid_argument("embed: characteristic mismatch");
        if (dst_->abs_degree() % src_->abs_degree() != 0)
            throw std::invalid_argument("embed: source degree does not divide target degree");
        if (!src_->is_prime_field()) {
            base_ = std::make_unique<Embedding>(src_->base(), dst_);
            // lift the defining polynomial and find its first root in the target
            const auto& low = src_->defining();
            std::vector<std::uint64_t> lifted(low.size() + 1);
            for (std::size_t j = 0; j < low.size(); ++j) lifted[j] = base_->map_i(low[j]);
            lifted.back() = dst_->one_i();
            bool found = false;
            for (std::uint64_t x = 0; x < dst_->card(); ++x) {
                std::uint64_t acc = 0;
                for (std::size_t j = lifted.size(); j-- > 0;) acc = dst_->add_i(dst_->mul_i(acc, x), lifted[j]);
                if (acc == 0) {
                    gen_image_ = x;
                    found = true;
                    break;
                }
            }
            if (!found) throw std::logic_error("embed: no root of defining polynomial found (construction bug)");
        }
    }

    const FieldPtr& source() const { return src_; }
    const FieldPtr& target() const { return dst_; }

    std::uint64_t map_i(std::uint64_t idx) const {
        if (src_->is_prime_field()) return dst_->from_int_i(static_cast<std::int64_t>(idx));
        auto chunks = src_->decode(idx);
        std::uint64_t acc = 0;
        for (std::size_t j = chunks.size(); j-- > 0;)
            acc = dst_->add_i(dst_->mul_i(acc, gen_image_), base_->map_i(chunks[j]));
        return acc;
    }

    FieldElement operator()(const FieldElement& x) const {
        if (x.level().get() != src_.get()) throw std::invalid_argument("embed: element not in the source field");
        return {dst_, map_i(x.index())};
    }

   private:
    FieldPtr src_, dst_;
    std::unique_ptr<Embedding> base_;
    std::uint64_t gen_image_ = 0;
};

/// One-shot convenience wrapper around Embedding.
inline FieldElement embed(const FieldElement& x, const FieldPtr& target) {
    return Embedding(x.level(), target)(x);
}

}  // namespace weildesc

#endif  // WEILDESC_GF_HPP
