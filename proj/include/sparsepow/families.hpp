#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sparsepow/errors.hpp"
#include "sparsepow/integer.hpp"
#include "sparsepow/repr.hpp"

namespace sparsepow {

/// The unique split of a digit count k >= 5 across triangular-number intervals:
/// either k = C(p+1,2) - beta with beta in [0, p-2], or the boundary k = C(p,2)+1.
struct DigitDecomposition {
    enum class Form { generic, boundary };

    std::uint64_t k = 0;
    Form form = Form::generic;
    std::uint64_t p = 0;
    std::uint64_t beta = 0;  // p-1 in the boundary form

    bool is_boundary() const { return form == Form::boundary; }

    /// Inverse map; used by tests to confirm the decomposition is a bijection.
    std::uint64_t recompose() const {
        return is_boundary() ? choose2(p) + 1 : choose2(p + 1) - beta;
    }
};

inline DigitDecomposition decompose_digit_count(std::uint64_t k) {
    if (k < 5) throw std::out_of_range("digit counts below 5 have dedicated small-k constructions");
    std::uint64_t p = 2;
    while (choose2(p + 1) < k) ++p;
    const std::uint64_t beta = choose2(p + 1) - k;
    if (beta == p - 1) return {k, DigitDecomposition::Form::boundary, p, beta};
    return {k, DigitDecomposition::Form::generic, p, beta};
}

/// p such that k = C(p,2)+1, if k has that shape (k >= 2).
inline std::optional<std::uint64_t> boundary_order(std::uint64_t k) {
    const std::uint64_t target = k - 1;
    mpz_class s = 8 * mpz_class(target) + 1;
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
    const std::uint64_t p = (1 + r.get_ui()) / 2;
    if (p >= 2 && choose2(p) == target) return p;
    return std::nullopt;
}

/// Strictly increasing positive exponents alpha_1 < ... < alpha_{p-1};
/// alpha_0 = 0 is implicit everywhere.
struct AlphaSequence {
    std::vector<std::uint64_t> entries;

    AlphaSequence() = default;
    explicit AlphaSequence(std::vector<std::uint64_t> e) : entries(std::move(e)) {
        std::uint64_t prev = 0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i] == 0 || (i > 0 && entries[i] <= prev))
                throw std::invalid_argument("alpha sequence must be strictly increasing and positive");
            prev = entries[i];
        }
    }
};

/// Uncarried terms of (1 + x^a1 + ... + x^a_{p-1})^2: the squares x^{2ai} with
/// coefficient 1 and the cross terms 2 x^{ai+aj}, exponents possibly colliding.
using TermMultiset = std::vector<UncarriedTerm>;

inline TermMultiset square_expansion_terms(const AlphaSequence& alphas, std::uint64_t base) {
    detail::require_base(base);
    std::vector<std::uint64_t> full;
    full.reserve(alphas.entries.size() + 1);
    full.push_back(0);
    full.insert(full.end(), alphas.entries.begin(), alphas.entries.end());

    TermMultiset terms;
    terms.reserve(full.size() * (full.size() + 1) / 2);
    for (std::size_t i = 0; i < full.size(); ++i) terms.push_back({2 * full[i], 1});
    for (std::size_t i = 0; i < full.size(); ++i)
        for (std::size_t j = i + 1; j < full.size(); ++j) terms.push_back({full[i] + full[j], 2});
    std::sort(terms.begin(), terms.end(), [](const UncarriedTerm& a, const UncarriedTerm& b) {
        if (a.exponent != b.exponent) return a.exponent < b.exponent;
        return a.coefficient < b.coefficient;
    });
    return terms;
}

inline std::size_t exponent_collisions(const std::vector<std::uint64_t>& exponents) {
    std::vector<std::uint64_t> sorted = exponents;
    std::sort(sorted.begin(), sorted.end());
    const auto distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
    return sorted.size() - static_cast<std::size_t>(distinct);
}

inline std::size_t exponent_collisions(const TermMultiset& terms) {
    std::vector<std::uint64_t> exps;
    exps.reserve(terms.size());
    for (const auto& t : terms) exps.push_back(t.exponent);
    return exponent_collisions(exps);
}

/// Base-2 view of the expansion: a coefficient-2 term is one bit higher up.
inline std::vector<std::uint64_t> fold_binary_exponents(const TermMultiset& terms) {
    std::vector<std::uint64_t> exps;
    exps.reserve(terms.size());
    for (const auto& t : terms) {
        if (t.coefficient == 1)
            exps.push_back(t.exponent);
        else if (t.coefficient == 2)
            exps.push_back(t.exponent + 1);
        else
            throw std::invalid_argument("binary fold expects coefficients 1 or 2");
    }
    return exps;
}

enum class FamilyId {
    binary_generic,
    binary_special,
    basex_generic,
    base3_special,
    base45_special,
    basex_sigma,
    small_k,
};

inline std::string_view family_name(FamilyId id) {
    switch (id) {
        case FamilyId::binary_generic: return "binary-generic";
        case FamilyId::binary_special: return "binary-special";
        case FamilyId::basex_generic: return "basex-generic";
        case FamilyId::base3_special: return "base3-special";
        case FamilyId::base45_special: return "base45-special";
        case FamilyId::basex_sigma: return "basex-sigma";
        case FamilyId::small_k: return "small-k";
    }
    return "unknown";
}

/// One verified witness: value = root^degree, coprime with the base, with
/// exactly target_k non-zero base-x digits. The construction parameters are
/// kept so callers can reproduce or audit the member.
struct FamilyMember {
    FamilyId family = FamilyId::small_k;
    std::uint64_t base = 2;
    std::uint64_t target_k = 0;
    std::uint64_t t = 0;
    Int root;
    unsigned long degree = 2;
    Int value;
    SparseForm sparse;
    std::optional<DigitDecomposition> decomposition;
    AlphaSequence alphas;
    Int normalization = 1;
};

namespace detail {

inline FamilyMember finish_member(FamilyId family, std::uint64_t base, std::uint64_t k,
                                  std::uint64_t t, Int root, unsigned long degree,
                                  std::optional<DigitDecomposition> decomposition,
                                  AlphaSequence alphas, Int normalization = 1) {
    FamilyMember m;
    m.family = family;
    m.base = base;
    m.target_k = k;
    m.t = t;
    m.root = std::move(root);
    m.degree = degree;
    m.value = pow_int(m.root, degree);
    m.decomposition = std::move(decomposition);
    m.alphas = std::move(alphas);
    m.normalization = std::move(normalization);

    const auto count = count_nonzero(m.value, base);
    if (count != k)
        throw VerificationError("family " + std::string(family_name(family)) + " produced " +
                                std::to_string(count) + " digits instead of " + std::to_string(k) +
                                " (base " + std::to_string(base) + ", t " + std::to_string(t) + ")");
    if (!coprime_with(m.value, base))
        throw VerificationError("family " + std::string(family_name(family)) +
                                " produced a value sharing a factor with base " + std::to_string(base));
    m.sparse = to_sparse_form(m.value, base);
    return m;
}

inline Int power_sum_with_one(std::uint64_t base, const std::vector<std::uint64_t>& exponents) {
    Int y = 1;
    for (auto e : exponents) y += pow_ui(base, e);
    return y;
}

}  // namespace detail

/// Generic binary family: k = C(p+1,2) - beta with beta collisions engineered
/// through alpha_i = 2 alpha_{i-1} - 1 steps.
inline FamilyMember gen_binary_generic(std::uint64_t k, std::uint64_t t) {
    const auto dec = decompose_digit_count(k);
    if (dec.is_boundary())
        throw WrongFormError("k = C(p,2)+1 is handled by the binary boundary family");
    std::vector<std::uint64_t> a(dec.p - 1);
    a[0] = 3 + t;
    for (std::size_t i = 1; i < a.size(); ++i)
        a[i] = (i + 1 <= dec.beta + 1) ? 2 * a[i - 1] - 1 : 2 * a[i - 1];
    Int y = detail::power_sum_with_one(2, a);
    return detail::finish_member(FamilyId::binary_generic, 2, k, t, std::move(y), 2, dec,
                                 AlphaSequence(std::move(a)));
}

/// Binary boundary family for k = C(p,2)+1, k = 7 or k >= 11.
inline FamilyMember gen_binary_special(std::uint64_t k, std::uint64_t t) {
    const auto p = boundary_order(k);
    if (!p || (k != 7 && k < 11))
        throw WrongFormError("binary boundary family needs k = C(p,2)+1 with k = 7 or k >= 11");
    const std::uint64_t a1 = 4 + t;
    std::vector<std::uint64_t> a;
    if (k == 7) {
        a = {a1, a1 + 1, a1 + 2};
    } else {
        a.resize(*p - 1);
        a[0] = a1;
        a[1] = a1 + 1;
        a[2] = a1 + 2;
        a[3] = 2 * a1 + 4;
        for (std::size_t i = 4; i < a.size(); ++i) a[i] = 2 * a[i - 1] - 1;
    }
    Int y = detail::power_sum_with_one(2, a);
    DigitDecomposition dec{k, DigitDecomposition::Form::boundary, *p, *p - 1};
    return detail::finish_member(FamilyId::binary_special, 2, k, t, std::move(y), 2, dec,
                                 AlphaSequence(std::move(a)));
}

/// Generic family for base x >= 3: collisions come from alpha_i = 2 alpha_{i-1}.
inline FamilyMember gen_basex_generic(std::uint64_t x, std::uint64_t k, std::uint64_t t) {
    if (x < 3) throw WrongFormError("generic base-x family needs x >= 3");
    const auto dec = decompose_digit_count(k);
    if (dec.is_boundary())
        throw WrongFormError("k = C(p,2)+1 is handled by the per-base boundary families");
    std::vector<std::uint64_t> a(dec.p - 1);
    a[0] = 3 + t;
    for (std::size_t i = 1; i < a.size(); ++i)
        a[i] = (i + 1 <= dec.beta + 1) ? 2 * a[i - 1] : 2 * a[i - 1] + 1;
    Int y = detail::power_sum_with_one(x, a);
    return detail::finish_member(FamilyId::basex_generic, x, k, t, std::move(y), 2, dec,
                                 AlphaSequence(std::move(a)));
}

/// Base-3 boundary family for k = C(p,2)+1, k >= 7.
inline FamilyMember gen_base3_special(std::uint64_t k, std::uint64_t t) {
    const auto p = boundary_order(k);
    if (!p || k < 7)
        throw WrongFormError("base-3 boundary family needs k = C(p,2)+1 with k >= 7");
    std::vector<std::uint64_t> a;
    if (k == 7) {
        const std::uint64_t a1 = 3 + t;
        a = {a1, a1 + 1, a1 + 2};
    } else {
        const std::uint64_t a1 = 4 + t;
        a.resize(*p - 1);
        a[0] = a1;
        a[1] = a1 + 1;
        a[2] = 2 * a1;
        a[3] = 2 * a1 + 1;
        for (std::size_t i = 4; i < a.size(); ++i) a[i] = 2 * a[i - 1];
    }
    Int y = detail::power_sum_with_one(3, a);
    DigitDecomposition dec{k, DigitDecomposition::Form::boundary, *p, *p - 1};
    return detail::finish_member(FamilyId::base3_special, 3, k, t, std::move(y), 2, dec,
                                 AlphaSequence(std::move(a)));
}

namespace detail {
/// alpha_0 = 0, alpha_1 = 2+t, alpha_i = 2 alpha_{i-1} + 1: the shared exponent
/// ladder of the base-4/5 and sigma boundary constructions. Returns alpha_0..alpha_{p-2}.
inline std::vector<std::uint64_t> boundary_ladder(std::uint64_t p, std::uint64_t t) {
    std::vector<std::uint64_t> a(p - 1);
    a[0] = 0;
    if (p >= 3) a[1] = 2 + t;
    for (std::size_t i = 2; i < a.size(); ++i) a[i] = 2 * a[i - 1] + 1;
    return a;
}
}  // namespace detail

/// Boundary family for bases 4 and 5, k = C(p,2)+1 with k >= 4. The base-4
/// root 3*4^a + 2*(...) is even, so the member returned is its half, whose
/// square carries the same non-zero digit multiset one place lower.
inline FamilyMember gen_base45_special(std::uint64_t x, std::uint64_t k, std::uint64_t t) {
    if (x != 4 && x != 5) throw WrongFormError("this boundary family covers bases 4 and 5 only");
    const auto p = boundary_order(k);
    if (!p || *p < 3)
        throw WrongFormError("base-4/5 boundary family needs k = C(p,2)+1 with k >= 4");
    const auto a = detail::boundary_ladder(*p, t);
    DigitDecomposition dec{k, DigitDecomposition::Form::boundary, *p, *p - 1};
    AlphaSequence alphas(std::vector<std::uint64_t>(a.begin() + 1, a.end()));

    if (x == 4) {
        Int y0 = 3 * pow_ui(4, a[*p - 2]);
        for (std::size_t i = 0; i + 1 < a.size(); ++i) y0 += 2 * pow_ui(4, a[i]);
        Int y = y0 / 2;
        return detail::finish_member(FamilyId::base45_special, 4, k, t, std::move(y), 2, dec,
                                     std::move(alphas), 2);
    }
    Int y = 2 * pow_ui(5, a[*p - 2]) + 2 * pow_ui(5, a[*p - 3]);
    for (std::size_t i = 0; i + 2 < a.size(); ++i) y += pow_ui(5, a[i]);
    return detail::finish_member(FamilyId::base45_special, 5, k, t, std::move(y), 2, dec,
                                 std::move(alphas));
}

/// ceil(sqrt(x+1)): the leading coefficient whose square spans exactly two
/// base-x digits when x >= 6.
inline std::uint64_t sigma_for_base(std::uint64_t x) {
    mpz_class v = mpz_class(x);
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r.get_ui() + 1;
}

/// Boundary family for x >= 6, k = C(p,2)+1 with k >= 4.
inline FamilyMember gen_basex_sigma(std::uint64_t x, std::uint64_t k, std::uint64_t t) {
    if (x < 6) throw WrongFormError("sigma boundary family needs x >= 6");
    const auto p = boundary_order(k);
    if (!p || *p < 3)
        throw WrongFormError("sigma boundary family needs k = C(p,2)+1 with k >= 4");
    const auto a = detail::boundary_ladder(*p, t);
    const std::uint64_t sigma = sigma_for_base(x);
    Int y = sigma * pow_ui(x, a[*p - 2]);
    for (std::size_t i = 0; i + 1 < a.size(); ++i) y += pow_ui(x, a[i]);
    DigitDecomposition dec{k, DigitDecomposition::Form::boundary, *p, *p - 1};
    return detail::finish_member(FamilyId::basex_sigma, x, k, t, std::move(y), 2, dec,
                                 AlphaSequence(std::vector<std::uint64_t>(a.begin() + 1, a.end())));
}

/// k = 3 squares (x^a+1)^2 for any base, and k = 4 cubes (x^a+1)^3 for x >= 3.
/// For x in {2,3} the cube/square coefficients carry and are re-verified.
inline FamilyMember gen_small_k(std::uint64_t x, std::uint64_t k, std::uint64_t t) {
    if (x < 2) throw WrongFormError("base must be >= 2");
    unsigned long degree = 0;
    if (k == 3)
        degree = 2;
    else if (k == 4 && x >= 3)
        degree = 3;
    else
        throw WrongFormError("small-k family covers k=3 (any base) and k=4 (base >= 3) only");
    const std::uint64_t a = 2 + t;
    Int y = pow_ui(x, a) + 1;
    return detail::finish_member(FamilyId::small_k, x, k, t, std::move(y), degree, std::nullopt,
                                 AlphaSequence({a}));
}

}  // namespace sparsepow
