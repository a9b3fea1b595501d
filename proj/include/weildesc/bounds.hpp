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
 * @file bounds.hpp
 * @brief The point-count bounds, evaluated exactly.
 *
 * Every bound here is a sum of at most two terms (A_i/den_i) * q^{t_i/2}
 * with rational coefficients and half-integer exponents.  Comparisons
 * against integer deviations never go through floating point: split the
 * bound into its rational part R and its sqrt(q) part C*sqrt(q), move R to
 * the left and square.  This keeps equality-attaining instances exact,
 * which the acceptance tests rely on.
 */

#ifndef WEILDESC_BOUNDS_HPP
#define WEILDESC_BOUNDS_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace weildesc {

/// One exact term coeff * q^{half_exp / 2}.
struct BoundTerm {
    BigRat coeff;
    std::uint32_t half_exp;  // exponent numerator; the denominator is always 2
};

struct BoundSpec {
    std::string name;
    std::uint64_t q = 0;
    std::vector<BoundTerm> terms;

    /// Split into the rational part and the sqrt(q) coefficient:
    /// value = first + second * sqrt(q), both exact.
    std::pair<BigRat, BigRat> split() const {
        BigRat rational = 0, root = 0;
        for (const auto& t : terms) {
            if (t.half_exp % 2 == 0)
                rational += t.coeff * BigRat(big_pow(BigInt(q), t.half_exp / 2));
            else
                root += t.coeff * BigRat(big_pow(BigInt(q), (t.half_exp - 1) / 2));
        }
        return {rational, root};
    }

    double approx() const {
        auto [a, b] = split();
        return a.convert_to<double>() + b.convert_to<double>() * std::sqrt(static_cast<double>(q));
    }

    /// "3/2 * q^(5/2) + 2 * q^2" style exact rendering.
    std::string exact_string() const {
        if (terms.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (i) s += " + ";
            const auto& t = terms[i];
            s += rat_str(t.coeff);
            if (t.half_exp > 0) {
                s += " * q^";
                if (t.half_exp % 2 == 0)
                    s += std::to_string(t.half_exp / 2);
                else
                    s += "(" + std::to_string(t.half_exp) + "/2)";
            }
        }
        return s;
    }

    static std::string rat_str(const BigRat& r) {
        std::string s = boost::multiprecision::numerator(r).str();
        if (boost::multiprecision::denominator(r) != 1) s += "/" + boost::multiprecision::denominator(r).str();
        return s;
    }
};

/// |dev| <= bound, decided exactly.  With L = |dev| - R (R the rational part)
/// and C the sqrt(q) coefficient: true iff L <= 0 or L^2 <= C^2 * q.
inline bool check_within(const BigInt& dev, const BoundSpec& b) {
    auto [rational, root] = b.split();
    BigRat lhs = BigRat(abs(dev)) - rational;
    if (lhs <= 0) return true;
    return lhs * lhs <= root * root * BigRat(b.q);
}

/// Exact sign of a - b for two bounds over the same q: -1, 0 or +1.
inline int compare_bound_values(const BoundSpec& a, const BoundSpec& b) {
    if (a.q != b.q) throw std::invalid_argument("comparing bounds over different q");
    auto [ra, ca] = a.split();
    auto [rb, cb] = b.split();
    BigRat dr = ra - rb, dc = ca - cb;  // sign of dr + dc*sqrt(q)
    if (dr == 0 && dc == 0) return 0;
    if (dr >= 0 && dc >= 0) return 1;
    if (dr <= 0 && dc <= 0) return -1;
    BigRat lhs = dr * dr, rhs = dc * dc * BigRat(a.q);
    if (dr > 0) return lhs > rhs ? 1 : lhs == rhs ? 0 : -1;  // dr > 0, dc < 0
    return rhs > lhs ? 1 : lhs == rhs ? 0 : -1;              // dr < 0, dc > 0
}

struct CurveBounds {
    BoundSpec two_term;
    BoundSpec simple;
};

namespace detail {

inline BigInt signed_pow(std::int64_t base, std::uint32_t e) { return big_pow(BigInt(base), e); }

inline CurveBounds as_bounds_for_exponent(std::uint32_t d, std::uint64_t q, std::uint32_t m, const char* tag) {
    if (d < 2) throw std::invalid_argument("bounds need d >= 2");
    // ((d-1)^{m+1} - (-1)^m (d-1)) / d * q^{(m+1)/2}  +  ((d-1)^m - (-1)^{m-1}(d-1)) / d * q^{m/2}
    BigInt dm1 = BigInt(d - 1);
    BigInt sgn_m = m % 2 == 0 ? BigInt(1) : BigInt(-1);
    BigRat c1((big_pow(dm1, m + 1) - sgn_m * dm1), BigInt(d));
    BigRat c2((big_pow(dm1, m) + sgn_m * dm1), BigInt(d));  // -(-1)^{m-1} = +(-1)^m
    BoundSpec two{std::string(tag) + "-two-term", q, {{c1, m + 1}, {c2, m}}};
    BoundSpec simple{std::string(tag) + "-simple", q, {{BigRat(big_pow(dm1, m)), m + 1}}};
    return {std::move(two), std::move(simple)};
}

}  // namespace detail

/// Bounds on |N_f - q^r| for the Artin-Schreier curve y^q - y = f(x).
inline CurveBounds bound_as_curve(std::uint32_t d, std::uint64_t q, std::uint32_t r) {
    return detail::as_bounds_for_exponent(d, q, r, "as");
}

/// Bounds on |N_f - q^{nr}| for the Artin-Schreier hypersurface in n variables.
inline CurveBounds bound_as_hypersurface(std::uint32_t d, std::uint32_t n, std::uint64_t q, std::uint32_t r) {
    return detail::as_bounds_for_exponent(d, q, n * r, "as-hyper");
}

/// r (d-1)^r (q-1) q^{(r-1)/2}, bounding |N_f - q^r - delta + 1| for Kummer curves.
inline BoundSpec bound_kummer(std::uint32_t d, std::uint64_t q, std::uint32_t r) {
    if (d < 2) throw std::invalid_argument("bounds need d >= 2");
    BigRat c(BigInt(r) * big_pow(BigInt(d - 1), r) * BigInt(q - 1));
    return {"kummer", q, {{c, r - 1}}};
}

/// r (d-1)^r q^{(r-1)/2}, bounding |#W_lambda(k) - (1 + q + ... + q^{r-1})| per fiber.
inline BoundSpec bound_w_lambda(std::uint32_t d, std::uint64_t q, std::uint32_t r) {
    if (d < 2) throw std::invalid_argument("bounds need d >= 2");
    BigRat c(BigInt(r) * big_pow(BigInt(d - 1), r));
    return {"w-lambda", q, {{c, r - 1}}};
}

struct GenusWeil {
    std::optional<BigRat> as_genus;                       // (d-1)(q-1)/2
    std::optional<std::pair<BigRat, BigRat>> kummer_genus;  // [((q-1)/e - 1)(d-2)/2, ((q-1)/e - 1)(d-1)/2]
    BoundSpec weil;                                       // 2 g q^{r/2} with the given/upper genus
};

/// Genus data and the Weil bound for comparison.  Without e: the
/// Artin-Schreier singular-model genus.  With e: the Kummer genus interval,
/// reported as exact rationals without clamping; the Weil bound uses the
/// interval's upper end.
inline GenusWeil genus_and_weil(std::uint32_t d, std::uint64_t q, std::uint32_t r,
                                std::optional<std::uint32_t> e = std::nullopt) {
    GenusWeil out;
    BigRat g;
    if (e) {
        if (*e < 1 || (q - 1) % *e != 0) throw std::invalid_argument("e must divide q-1");
        BigRat m = BigRat(BigInt(q - 1), BigInt(*e)) - 1;
        BigRat lo = m * BigRat(BigInt(d) - 2, BigInt(2));
        BigRat hi = m * BigRat(BigInt(d) - 1, BigInt(2));
        out.kummer_genus = {lo, hi};
        g = hi;
    } else {
        g = BigRat(BigInt(d - 1) * BigInt(q - 1), BigInt(2));
        out.as_genus = g;
    }
    out.weil = BoundSpec{"weil", q, {{2 * g, r}}};
    return out;
}

/// Fixed-width decimal rendering used in reports (deterministic across runs).
inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace weildesc

#endif  // WEILDESC_BOUNDS_HPP
