#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace sparsepow {

// All values that can outgrow a machine word are arbitrary precision.
using Int = mpz_class;

inline Int pow_ui(std::uint64_t base, std::uint64_t exponent) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
    return r;
}

inline Int pow_int(const Int& base, std::uint64_t exponent) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

inline bool coprime_with(const Int& value, std::uint64_t base) {
    Int g;
    mpz_gcd_ui(g.get_mpz_t(), value.get_mpz_t(), base);
    return g == 1;
}

inline std::string to_decimal(const Int& value) { return value.get_str(10); }

/// Parses a non-negative decimal integer; rejects signs and garbage.
inline Int parse_decimal(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty integer literal");
    for (char c : text)
        if (c < '0' || c > '9') throw std::invalid_argument("not a non-negative decimal integer: " + text);
    return Int(text, 10);
}

inline std::size_t bit_length(const Int& n) {
    if (n == 0) return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline Int binomial(std::uint64_t n, std::uint64_t k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// n(n-1)/2 in machine words; callers keep n small enough (digit counts, not values).
inline std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }

inline std::vector<unsigned long> primes_up_to(unsigned long limit) {
    std::vector<unsigned long> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (unsigned long i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (unsigned long j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

}  // namespace sparsepow
