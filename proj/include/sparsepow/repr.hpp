#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sparsepow/integer.hpp"

namespace sparsepow {

/// Base-x digit string, least significant first, no most-significant zero.
/// The empty digit list represents 0.
struct BaseExpansion {
    std::uint64_t base = 2;
    std::vector<std::uint64_t> digits;

    std::size_t nonzero_count() const {
        std::size_t n = 0;
        for (auto d : digits) n += (d != 0);
        return n;
    }

    Int value() const {
        Int v = 0;
        for (std::size_t i = digits.size(); i-- > 0;) {
            v *= static_cast<unsigned long>(base);
            v += static_cast<unsigned long>(digits[i]);
        }
        return v;
    }
};

/// One non-zero digit of a canonical expansion: coefficient in [1, base-1].
struct SparseTerm {
    std::uint64_t exponent = 0;
    std::uint64_t coefficient = 0;
    friend bool operator==(const SparseTerm&, const SparseTerm&) = default;
};

/// The non-zero digits of a value, exponents strictly increasing.
/// Term count equals the non-zero digit count of the value.
struct SparseForm {
    std::uint64_t base = 2;
    std::vector<SparseTerm> terms;

    Int value() const {
        Int v = 0;
        for (const auto& t : terms) {
            Int p = pow_ui(base, t.exponent);
            mpz_addmul_ui(v.get_mpz_t(), p.get_mpz_t(), t.coefficient);
        }
        return v;
    }
};

/// n = root^degree with degree maximal (so root is not itself a perfect power).
struct PowerWitness {
    Int root;
    unsigned long degree = 0;
    friend bool operator==(const PowerWitness&, const PowerWitness&) = default;
};

/// A term of an uncarried expansion: exponents may repeat, coefficients are
/// unbounded positive integers.
struct UncarriedTerm {
    std::uint64_t exponent = 0;
    Int coefficient;
};

namespace detail {
inline void require_base(std::uint64_t base) {
    if (base < 2) throw std::invalid_argument("base must be >= 2");
}
inline void require_nonneg(const Int& n, const char* what) {
    if (n < 0) throw std::invalid_argument(std::string(what) + " must be non-negative");
}
}  // namespace detail

inline BaseExpansion to_expansion(const Int& n, std::uint64_t base) {
    detail::require_base(base);
    detail::require_nonneg(n, "value");
    BaseExpansion e{base, {}};
    Int rest = n;
    Int q;
    while (rest > 0) {
        unsigned long digit = mpz_fdiv_q_ui(q.get_mpz_t(), rest.get_mpz_t(), base);
        e.digits.push_back(digit);
        mpz_swap(rest.get_mpz_t(), q.get_mpz_t());
    }
    return e;
}

inline SparseForm to_sparse_form(const Int& n, std::uint64_t base) {
    BaseExpansion e = to_expansion(n, base);
    SparseForm s{base, {}};
    for (std::uint64_t i = 0; i < e.digits.size(); ++i)
        if (e.digits[i] != 0) s.terms.push_back({i, e.digits[i]});
    return s;
}

/// Evaluates an uncarried sum of coefficient * base^exponent terms.
inline Int from_terms(const std::vector<UncarriedTerm>& terms, std::uint64_t base) {
    detail::require_base(base);
    Int v = 0;
    for (const auto& t : terms) {
        detail::require_nonneg(t.coefficient, "coefficient");
        v += t.coefficient * pow_ui(base, t.exponent);
    }
    return v;
}

inline std::size_t count_nonzero(const Int& n, std::uint64_t base) {
    detail::require_base(base);
    detail::require_nonneg(n, "value");
    if (base == 2) return mpz_popcount(n.get_mpz_t());
    std::size_t count = 0;
    Int rest = n;
    Int q;
    while (rest > 0) {
        if (mpz_fdiv_q_ui(q.get_mpz_t(), rest.get_mpz_t(), base) != 0) ++count;
        mpz_swap(rest.get_mpz_t(), q.get_mpz_t());
    }
    return count;
}

namespace detail {
/// count_nonzero that gives up once the count exceeds `limit`; returns limit+1 then.
inline std::size_t count_nonzero_capped(const Int& n, std::uint64_t base, std::size_t limit) {
    if (base == 2) return mpz_popcount(n.get_mpz_t());
    std::size_t count = 0;
    Int rest = n;
    Int q;
    while (rest > 0) {
        if (mpz_fdiv_q_ui(q.get_mpz_t(), rest.get_mpz_t(), base) != 0)
            if (++count > limit) return count;
        mpz_swap(rest.get_mpz_t(), q.get_mpz_t());
    }
    return count;
}
}  // namespace detail

struct RootResult {
    Int root;
    bool exact = false;
};

/// Floor d-th root with exactness flag: root^d <= n < (root+1)^d.
inline RootResult integer_nth_root(const Int& n, unsigned long degree) {
    if (degree == 0) throw std::invalid_argument("root degree must be >= 1");
    detail::require_nonneg(n, "radicand");
    RootResult r;
    if (degree == 1) {
        r.root = n;
        r.exact = true;
        return r;
    }
    r.exact = mpz_root(r.root.get_mpz_t(), n.get_mpz_t(), degree) != 0;
    return r;
}

/// Maximal-degree perfect-power witness, or nullopt for powerfree n.
/// Degrees are stripped prime by prime; the maximal d is the product of the
/// stripped primes, which makes the witness unique.
inline std::optional<PowerWitness> as_perfect_power(const Int& n) {
    if (n < 2) throw std::invalid_argument("perfect-power test requires n >= 2");
    if (!mpz_perfect_power_p(n.get_mpz_t())) return std::nullopt;
    Int root = n;
    unsigned long degree = 1;
    bool stripped = true;
    while (stripped) {
        stripped = false;
        const auto primes = primes_up_to(bit_length(root));
        for (unsigned long p : primes) {
            Int r;
            if (mpz_root(r.get_mpz_t(), root.get_mpz_t(), p) != 0) {
                root = r;
                degree *= p;
                stripped = true;
                break;
            }
        }
    }
    if (degree < 2) return std::nullopt;
    return PowerWitness{root, degree};
}

}  // namespace sparsepow
