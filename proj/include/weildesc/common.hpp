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

#ifndef WEILDESC_COMMON_HPP
#define WEILDESC_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace weildesc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Hard cap on the number of points any single enumeration may visit.
/// Exceeding it raises budget_error; nothing is ever sampled instead.
inline constexpr std::uint64_t default_enumeration_budget = std::uint64_t{1} << 24;

class budget_error : public std::runtime_error {
   public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// An exact integer identity that must hold by construction failed.
class identity_violation : public std::runtime_error {
   public:
    explicit identity_violation(const std::string& what) : std::runtime_error(what) {}
};

/// f' vanished identically (f lies in k[x^p]); the gcd square-free
/// criterion does not apply and silently answering would mask a
/// hypothesis violation.
class inseparable_error : public std::runtime_error {
   public:
    explicit inseparable_error(const std::string& what) : std::runtime_error(what) {}
};

inline void ensure_budget(const BigInt& points, std::uint64_t budget, const char* what) {
    if (points > BigInt(budget)) {
        throw budget_error(std::string(what) + ": " + points.str() + " points exceed enumeration budget " +
                           std::to_string(budget));
    }
}

inline BigInt big_pow(const BigInt& base, std::uint64_t exp) {
    BigInt acc = 1, b = base;
    while (exp) {
        if (exp & 1) acc *= b;
        b *= b;
        exp >>= 1;
    }
    return acc;
}

/// SplitMix64. Used everywhere randomness is needed so that reports are
/// byte-identical across platforms (std::uniform_int_distribution is not).
class SplitMix64 {
   public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n) via multiply-high; deterministic, bias < 2^-40 at desk scale.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Derive an independent deterministic stream from tag values.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        SplitMix64 s(a ^ (0x632be59bd9b4e019ull + b));
        s.next();
        return s.next();
    }

   private:
    std::uint64_t state_;
};

}  // namespace weildesc

#endif  // WEILDESC_COMMON_HPP
