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
 * @file counter.hpp
 * @brief Exact point counts by exhaustive enumeration.
 *
 * Every count that has two computation paths (direct pair enumeration vs.
 * the trace/norm identity through the descent form) reconciles them as a
 * hard integer equality, never a tolerance.  Counting loops work on element
 * indices with the level's table arithmetic; enumeration is partitioned by
 * leading coordinate into blocks, summed in block order, so results are
 * identical for any worker count.
 */

#ifndef WEILDESC_COUNTER_HPP
#define WEILDESC_COUNTER_HPP

#include <numeric>
#include <thread>
#include <utility>
#include <vector>

#include "bounds.hpp"
#include "certify.hpp"
#include "descent.hpp"

namespace weildesc {

struct CountOptions {
    std::uint64_t budget = default_enumeration_budget;
    std::uint32_t workers = 1;
};

namespace detail {

/// Sum fn(begin, end) over [0, total) split at block boundaries (block =
/// one leading coordinate's worth of points).  Partial sums are combined
/// in block order; addition is associative so any worker count gives the
/// same total.
template <class Fn>
std::uint64_t blocked_sum(std::uint64_t total, std::uint64_t block, std::uint32_t workers, Fn&& fn) {
    if (total == 0) return 0;
    const std::uint64_t nblocks = block == 0 ? 1 : total / block;
    std::uint32_t w = workers == 0 ? 1 : workers;
    if (nblocks < w) w = static_cast<std::uint32_t>(nblocks);
    if (w <= 1) return fn(std::uint64_t{0}, total);
    std::vector<std::uint64_t> partial(w, 0);
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::uint32_t i = 0; i < w; ++i) {
        std::uint64_t b0 = nblocks * i / w, b1 = nblocks * (i + 1) / w;
        pool.emplace_back([&, i, b0, b1] { partial[i] = fn(b0 * block, b1 * block); });
    }
    for (auto& th : pool) th.join();
    std::uint64_t acc = 0;
    for (std::uint64_t p : partial) acc += p;
    return acc;
}

/// Sparse multivariate evaluator on element indices (hot path of the counting loops).
class MultiEvalIdx {
   public:
    explicit MultiEvalIdx(const MultiPoly& F) : L_(F.field().get()), v_(F.nvars()) {
        for (const auto& [e, c] : F.terms()) {
            terms_.push_back({c.index(), std::vector<std::uint32_t>(e.begin(), e.end())});
            for (auto x : e) max_exp_ = std::max(max_exp_, x);
        }
    }

    std::uint32_t nvars() const { return v_; }
    std::size_t workspace_size() const { return static_cast<std::size_t>(v_) * (max_exp_ + 1); }

    std::uint64_t eval(std::span<const std::uint64_t> pt, std::vector<std::uint64_t>& pw) const {
        const std::uint32_t m = max_exp_ + 1;
        for (std::uint32_t i = 0; i < v_; ++i) {
            pw[static_cast<std::size_t>(i) * m] = L_->one_i();
            for (std::uint32_t e = 1; e < m; ++e)
                pw[static_cast<std::size_t>(i) * m + e] = L_->mul_i(pw[static_cast<std::size_t>(i) * m + e - 1], pt[i]);
        }
        std::uint64_t acc = 0;
        for (const auto& t : terms_) {
            std::uint64_t v = t.coeff;
            for (std::uint32_t i = 0; i < v_; ++i)
                if (t.exps[i]) v = L_->mul_i(v, pw[static_cast<std::size_t>(i) * m + t.exps[i]]);
            acc = L_->add_i(acc, v);
        }
        return acc;
    }

   private:
    struct Term {
        std::uint64_t coeff;
        std::vector<std::uint32_t> exps;
    };
    const FieldLevel* L_;
    std::uint32_t v_;
    std::uint32_t max_exp_ = 0;
    std::vector<Term> terms_;
};

/// Iterate points of K^v for flat indices [begin, end); point order matches
/// for_each_tuple (last coordinate fastest).
template <class Fn>
void iterate_points(const FieldLevel& K, std::uint32_t v, std::uint64_t begin, std::uint64_t end, Fn&& fn) {
    const std::uint64_t c = K.card();
    std::vector<std::uint64_t> pt(v, 0);
    std::uint64_t idx = begin;
    for (std::uint32_t j = v; j-- > 0;) {
        pt[j] = idx % c;
        idx /= c;
    }
    for (std::uint64_t i = begin; i < end; ++i) {
        fn(std::span<const std::uint64_t>(pt));
        std::uint32_t j = v;
        while (j-- > 0) {
            if (++pt[j] < c) break;
            pt[j] = 0;
        }
    }
}

/// x -> x^q as a permutation table over k_r (q the tower base cardinality).
inline std::vector<std::uint64_t> frobenius_table(const FieldTower& t) {
    const FieldLevel& K = *t.kr;
    std::vector<std::uint64_t> out(K.card());
    for (std::uint64_t x = 0; x < K.card(); ++x) out[x] = K.pow_i(x, t.q());
    return out;
}

/// Trace to k as a table of k-indices over k_r.
inline std::vector<std::uint64_t> trace_table(const FieldTower& t) {
    const FieldLevel& K = *t.kr;
    auto frob = frobenius_table(t);
    std::vector<std::uint64_t> out(K.card());
    for (std::uint64_t x = 0; x < K.card(); ++x) {
        std::uint64_t acc = x, y = x;
        for (std::uint32_t j = 1; j < t.r; ++j) {
            y = frob[y];
            acc = K.add_i(acc, y);
        }
        out[x] = retract_i(K, *t.k, acc);
    }
    return out;
}

/// Norm to k as a table of k-indices over k_r.
inline std::vector<std::uint64_t> norm_table(const FieldTower& t) {
    const FieldLevel& K = *t.kr;
    auto frob = frobenius_table(t);
    std::vector<std::uint64_t> out(K.card());
    for (std::uint64_t x = 0; x < K.card(); ++x) {
        std::uint64_t acc = x, y = x;
        for (std::uint32_t j = 1; j < t.r; ++j) {
            y = frob[y];
            acc = K.mul_i(acc, y);
        }
        out[x] = retract_i(K, *t.k, acc);
    }
    return out;
}

/// f(x) for every x in k_r, as an index table.
inline std::vector<std::uint64_t> value_table(const UniPoly& f, const FieldTower& t) {
    const FieldLevel& K = *t.kr;
    std::vector<std::uint64_t> coeff;
    for (int i = 0; i <= f.degree(); ++i) coeff.push_back(f.coeff(static_cast<std::size_t>(i)).index());
    std::vector<std::uint64_t> out(K.card());
    for (std::uint64_t x = 0; x < K.card(); ++x) {
        std::uint64_t acc = 0;
        for (std::size_t i = coeff.size(); i-- > 0;) acc = K.add_i(K.mul_i(acc, x), coeff[i]);
        out[x] = acc;
    }
    return out;
}

}  // namespace detail

/// #{(x,y) in k_r^2 : y^q - y = f(x)} by pair enumeration (the oracle route).
inline BigInt count_as_direct(const UniPoly& f, const FieldTower& t, const CountOptions& opt = {}) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("count_as_direct: f must be over k_r");
    ensure_budget(t.q_pow(2 * t.r), opt.budget, "count_as_direct");
    const FieldLevel& K = *t.kr;
    auto fv = detail::value_table(f, t);
    std::vector<std::uint64_t> as(K.card());
    for (std::uint64_t y = 0; y < K.card(); ++y) as[y] = K.sub_i(K.pow_i(y, t.q()), y);
    const std::uint64_t n = K.card();
    std::uint64_t total = detail::blocked_sum(n * n, n, opt.workers, [&](std::uint64_t b, std::uint64_t e) {
        std::uint64_t cnt = 0;
        for (std::uint64_t i = b; i < e; ++i) cnt += as[i % n] == fv[i / n];
        return cnt;
    });
    return BigInt(total);
}

/// q * #{x in k_r : Tr(f(x)) = 0}; equals count_as_direct by Artin-Schreier theory.
inline BigInt count_as_trace(const UniPoly& f, const FieldTower& t, const CountOptions& opt = {}) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("count_as_trace: f must be over k_r");
    ensure_budget(t.q_pow(t.r), opt.budget, "count_as_trace");
    auto fv = detail::value_table(f, t);
    auto tr = detail::trace_table(t);
    std::uint64_t cnt = 0;
    for (std::uint64_t x = 0; x < t.kr->card(); ++x) cnt += tr[fv[x]] == 0;
    return BigInt(t.q()) * cnt;
}

/// #{x in K^v : F(x) = lambda}, parallel-partitioned by leading coordinate.
inline BigInt count_hypersurface(const MultiPoly& F, const FieldElement& lambda, const CountOptions& opt = {}) {
    if (lambda.level().get() != F.field().get()) throw std::invalid_argument("count_hypersurface: level mismatch");
    const FieldLevel& K = *F.field();
    const std::uint32_t v = F.nvars();
    ensure_budget(big_pow(BigInt(K.card()), v), opt.budget, "count_hypersurface");
    detail::MultiEvalIdx ev(F);
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < v; ++i) total *= K.card();
    const std::uint64_t want = lambda.index();
    std::uint64_t cnt =
        detail::blocked_sum(total, total / K.card(), opt.workers, [&](std::uint64_t b, std::uint64_t e) {
            std::vector<std::uint64_t> ws(ev.workspace_size());
            std::uint64_t c = 0;
            detail::iterate_points(K, v, b, e, [&](std::span<const std::uint64_t> pt) { c += ev.eval(pt, ws) == want; });
            return c;
        });
    return BigInt(cnt);
}

/// #{(x,y) in k_r^2 : y^{(q-1)/e} = f(x)} by pair enumeration.
inline BigInt count_kummer_direct(const UniPoly& f, const FieldTower& t, std::uint32_t e,
                                  const CountOptions& opt = {}) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("count_kummer_direct: f must be over k_r");
    if (e < 1 || (t.q() - 1) % e != 0) throw std::invalid_argument("count_kummer_direct: e must divide q-1");
    ensure_budget(t.q_pow(2 * t.r), opt.budget, "count_kummer_direct");
    const FieldLevel& K = *t.kr;
    auto fv = detail::value_table(f, t);
    const std::uint64_t exp = (t.q() - 1) / e;
    std::vector<std::uint64_t> pw(K.card());
    for (std::uint64_t y = 0; y < K.card(); ++y) pw[y] = K.pow_i(y, exp);
    const std::uint64_t n = K.card();
    std::uint64_t total = detail::blocked_sum(n * n, n, opt.workers, [&](std::uint64_t b, std::uint64_t ed) {
        std::uint64_t cnt = 0;
        for (std::uint64_t i = b; i < ed; ++i) cnt += pw[i % n] == fv[i / n];
        return cnt;
    });
    return BigInt(total);
}

/// The fibers #{x in k_r : N(f(x)) = lambda} for every lambda in k, computed
/// twice: through the descent polynomial T over k^r and by direct norm
/// evaluation over k_r.  Disagreement is an identity violation.
inline std::vector<std::uint64_t> norm_fiber_histogram(const UniPoly& f, const FieldTower& t, const Basis& B,
                                                       const CountOptions& opt = {}) {
    ensure_budget(t.q_pow(t.r), opt.budget, "norm fibers");
    const FieldLevel& K = *t.kr;
    auto fv = detail::value_table(f, t);
    auto nm = detail::norm_table(t);
    std::vector<std::uint64_t> direct(t.q(), 0);
    for (std::uint64_t x = 0; x < K.card(); ++x) direct[nm[fv[x]]] += 1;

    MultiPoly T = kummer_descent(f, t, B).form;
    detail::MultiEvalIdx ev(T);
    std::vector<std::uint64_t> via_T(t.q(), 0);
    std::vector<std::uint64_t> ws(ev.workspace_size());
    detail::iterate_points(*t.k, t.r, 0, K.card(), [&](std::span<const std::uint64_t> pt) { via_T[ev.eval(pt, ws)] += 1; });

    if (direct != via_T)
        throw identity_violation("norm fibers via T over k^r disagree with direct norm evaluation over k_r");
    return direct;
}

struct KummerNormCount {
    BigInt total;                        // delta + (q-1)/e * sum of unit fibers
    std::uint32_t delta = 0;             // distinct roots of f in k_r
    std::vector<std::uint64_t> fibers;   // fiber[lambda] for every lambda in k (index order)
};

/// The norm-identity route for the Kummer count; must equal count_kummer_direct.
inline KummerNormCount count_kummer_norm(const UniPoly& f, const FieldTower& t, std::uint32_t e, const Basis& B,
                                         const CountOptions& opt = {}) {
    if (e < 1 || (t.q() - 1) % e != 0) throw std::invalid_argument("count_kummer_norm: e must divide q-1");
    KummerNormCount out;
    out.fibers = norm_fiber_histogram(f, t, B, opt);
    out.delta = static_cast<std::uint32_t>(roots_in(f, t.kr, opt.budget).size());
    const FieldLevel& k = *t.k;
    BigInt unit_sum = 0;
    for (std::uint64_t lam = 0; lam < t.q(); ++lam)
        if (lam != 0 && k.pow_i(lam, static_cast<std::uint64_t>(e)) == k.one_i()) unit_sum += out.fibers[lam];
    out.total = BigInt(out.delta) + BigInt((t.q() - 1) / e) * unit_sum;
    return out;
}

/// Both sides of the non-vanishing identity for gcd(m, r) = 1:
/// (#{x in k_m^r : T(x) != 0}, q^{mr} - #roots of f in k_{mr}).
/// k_m extends k inside the tower; k_{mr} is built flat over F_p and reached
/// through an explicit embedding of k_r.
inline std::pair<BigInt, BigInt> count_nonvanishing_identity(const UniPoly& f, const FieldTower& t, std::uint32_t m,
                                                             const Basis& B, const CountOptions& opt = {}) {
    if (std::gcd(m, t.r) != 1)
        throw std::invalid_argument("count_nonvanishing_identity: m must be prime to r (identity not asserted)");
    ensure_budget(big_pow(t.q_pow(t.r), m), opt.budget, "count_nonvanishing_identity");

    MultiPoly T = kummer_descent(f, t, B).form;
    FieldPtr km = m == 1 ? t.k : FieldLevel::extension(t.k, m, opt.budget);
    MultiPoly Tm = m == 1 ? T : lift_chain(T, km);
    detail::MultiEvalIdx ev(Tm);
    std::uint64_t total_pts = 1;
    for (std::uint32_t i = 0; i < t.r; ++i) total_pts *= km->card();
    std::uint64_t nonzero =
        detail::blocked_sum(total_pts, total_pts / km->card(), opt.workers, [&](std::uint64_t b, std::uint64_t e) {
            std::vector<std::uint64_t> ws(ev.workspace_size());
            std::uint64_t c = 0;
            detail::iterate_points(*km, t.r, b, e, [&](std::span<const std::uint64_t> pt) { c += ev.eval(pt, ws) != 0; });
            return c;
        });

    FieldPtr prime = t.k;
    while (prime->base()) prime = prime->base();
    FieldPtr kmr = FieldLevel::extension(prime, t.k->abs_degree() * m * t.r, opt.budget);
    Embedding emb(t.kr, kmr);
    UniPoly fbig = lift(f, emb);
    std::uint64_t zeros = 0;
    for (std::uint64_t x = 0; x < kmr->card(); ++x)
        if (fbig.eval(kmr->element(x)).is_zero()) ++zeros;
    return {BigInt(nonzero), big_pow(t.q_pow(t.r), m) - zeros};
}

/// Artin-Schreier hypersurface count: q * #{y in k_r^n : Tr(f(y)) = 0},
/// verified against q * #V(k) for the multivariate descent form.
inline BigInt count_as_multivar(const MultiPoly& f, const FieldTower& t, const Basis& B,
                                const CountOptions& opt = {}) {
    if (f.field().get() != t.kr.get()) throw std::invalid_argument("count_as_multivar: f must be over k_r");
    const std::uint32_t n = f.nvars();
    ensure_budget(t.q_pow(t.r * n), opt.budget, "count_as_multivar");
    auto tr = detail::trace_table(t);
    detail::MultiEvalIdx ev(f);
    std::uint64_t total_pts = 1;
    for (std::uint32_t i = 0; i < n; ++i) total_pts *= t.kr->card();
    std::uint64_t fiber =
        detail::blocked_sum(total_pts, total_pts / t.kr->card(), opt.workers, [&](std::uint64_t b, std::uint64_t e) {
            std::vector<std::uint64_t> ws(ev.workspace_size());
            std::uint64_t c = 0;
            detail::iterate_points(*t.kr, n, b, e,
                                   [&](std::span<const std::uint64_t> pt) { c += tr[ev.eval(pt, ws)] == 0; });
            return c;
        });
    BigInt via_trace = BigInt(t.q()) * fiber;

    MultiPoly S = as_descent_multivar(f, t, B).form;
    BigInt via_descent = BigInt(t.q()) * count_hypersurface(S, t.k->zero(), opt);
    if (via_trace != via_descent)
        throw identity_violation("multivariate count: trace route " + via_trace.str() + " != descent route " +
                                 via_descent.str());
    return via_trace;
}

/// Divisors of q-1, ascending; the admissible e values for Kummer curves.
inline std::vector<std::uint32_t> divisors_of_q_minus_1(std::uint64_t q) {
    std::vector<std::uint32_t> out;
    for (std::uint64_t e = 1; e <= q - 1; ++e)
        if ((q - 1) % e == 0) out.push_back(static_cast<std::uint32_t>(e));
    return out;
}

}  // namespace weildesc

#endif  // WEILDESC_COUNTER_HPP
