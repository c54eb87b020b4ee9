#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sparsepow/errors.hpp"
#include "sparsepow/families.hpp"

namespace sparsepow {

enum class StatusKind {
    finite_trivial,      // k = 1: a coprime single-digit value is < x
    finite_known,        // settled in the literature, with a citation tag
    conjectured_finite,  // k = 2, x >= 3
    open_question,       // (3, 4) restricted to squares
    infinite,            // an explicit family generator applies
};

inline std::string_view status_name(StatusKind kind) {
    switch (kind) {
        case StatusKind::finite_trivial: return "finite-trivial";
        case StatusKind::finite_known: return "finite-known";
        case StatusKind::conjectured_finite: return "conjectured-finite";
        case StatusKind::open_question: return "open-question";
        case StatusKind::infinite: return "infinite";
    }
    return "unknown";
}

struct CaseStatus {
    StatusKind kind = StatusKind::open_question;
    std::string_view citation{};          // set for finite_known
    std::optional<FamilyId> family{};     // set for infinite
    unsigned long degree = 0;             // set for infinite

    bool is_infinite() const { return kind == StatusKind::infinite; }
};

inline constexpr std::string_view kCitationMihailescu = "Mihailescu";
inline constexpr std::string_view kCitationCz4Digits = "CZ-4digits";

/// Knowledge status of the pair (x, k), optionally restricted to squares.
inline CaseStatus classify_case(std::uint64_t x, std::uint64_t k, bool square_only) {
    if (x < 2) throw std::invalid_argument("base must be >= 2");
    if (k < 1) throw std::invalid_argument("digit count must be >= 1");

    const auto infinite = [](FamilyId family, unsigned long degree) {
        return CaseStatus{StatusKind::infinite, {}, family, degree};
    };

    if (k == 1) return {StatusKind::finite_trivial};
    if (k == 2) {
        if (x == 2) return {StatusKind::finite_known, kCitationMihailescu};
        return {StatusKind::conjectured_finite};
    }
    if (k == 3) return infinite(FamilyId::small_k, 2);
    if (k == 4) {
        if (x == 2) return {StatusKind::finite_known, kCitationCz4Digits};
        if (x == 3) {
            if (square_only) return {StatusKind::open_question};
            return infinite(FamilyId::small_k, 3);
        }
        if (x <= 5) return infinite(FamilyId::base45_special, 2);
        return infinite(FamilyId::basex_sigma, 2);
    }

    const auto dec = decompose_digit_count(k);
    if (!dec.is_boundary())
        return infinite(x == 2 ? FamilyId::binary_generic : FamilyId::basex_generic, 2);
    if (x == 2) return infinite(FamilyId::binary_special, 2);
    if (x == 3) return infinite(FamilyId::base3_special, 2);
    if (x <= 5) return infinite(FamilyId::base45_special, 2);
    return infinite(FamilyId::basex_sigma, 2);
}

/// generate_member refused because the pair is not classified infinite; the
/// classification travels with the error so front ends can report it.
class StatusError : public std::runtime_error {
public:
    StatusError(CaseStatus status, const std::string& what)
        : std::runtime_error(what), status_(status) {}
    const CaseStatus& status() const { return status_; }

private:
    CaseStatus status_;
};

/// The t-th member of the family designated by classify_case.
inline FamilyMember generate_member(std::uint64_t x, std::uint64_t k, std::uint64_t t,
                                    bool square_only) {
    const CaseStatus status = classify_case(x, k, square_only);
    if (!status.is_infinite())
        throw StatusError(status, "no infinite family for base " + std::to_string(x) + ", " +
                                      std::to_string(k) + " digits: " +
                                      std::string(status_name(status.kind)));
    switch (*status.family) {
        case FamilyId::binary_generic: return gen_binary_generic(k, t);
        case FamilyId::binary_special: return gen_binary_special(k, t);
        case FamilyId::basex_generic: return gen_basex_generic(x, k, t);
        case FamilyId::base3_special: return gen_base3_special(k, t);
        case FamilyId::base45_special: return gen_base45_special(x, k, t);
        case FamilyId::basex_sigma: return gen_basex_sigma(x, k, t);
        case FamilyId::small_k: return gen_small_k(x, k, t);
    }
    throw std::logic_error("unreachable family dispatch");
}

}  // namespace sparsepow
