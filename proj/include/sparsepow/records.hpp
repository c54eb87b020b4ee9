#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "sparsepow/classify.hpp"
#include "sparsepow/families.hpp"
#include "sparsepow/oracle.hpp"
#include "sparsepow/repr.hpp"

namespace sparsepow {

// Flat JSON-lines records, one per line, schema fixed per kind. Integers are
// rendered as decimal strings so they round-trip at any size.
using Record = nlohmann::ordered_json;

inline std::string terms_string(const SparseForm& form) {
    std::string out;
    for (std::size_t i = 0; i < form.terms.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(form.terms[i].exponent);
        out += ':';
        out += std::to_string(form.terms[i].coefficient);
    }
    return out;
}

inline std::string digits_string(const BaseExpansion& expansion) {
    std::string out;
    for (std::size_t i = 0; i < expansion.digits.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(expansion.digits[i]);
    }
    return out;
}

inline std::string alphas_string(const AlphaSequence& alphas) {
    std::string out;
    for (std::size_t i = 0; i < alphas.entries.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(alphas.entries[i]);
    }
    return out;
}

inline Record classification_record(std::uint64_t base, std::uint64_t digits, bool square_only,
                                    const CaseStatus& status) {
    Record r;
    r["kind"] = "classification";
    r["base"] = std::to_string(base);
    r["digits"] = std::to_string(digits);
    r["square_only"] = square_only;
    r["status"] = std::string(status_name(status.kind));
    r["citation"] = status.citation.empty() ? Record() : Record(std::string(status.citation));
    r["family"] = status.family ? Record(std::string(family_name(*status.family))) : Record();
    r["degree"] = status.is_infinite() ? Record(std::to_string(status.degree)) : Record();
    return r;
}

inline Record member_record(const FamilyMember& m) {
    Record r;
    r["kind"] = "member";
    r["family"] = std::string(family_name(m.family));
    r["base"] = std::to_string(m.base);
    r["digits"] = std::to_string(m.target_k);
    r["t"] = std::to_string(m.t);
    r["y"] = to_decimal(m.root);
    r["d"] = std::to_string(m.degree);
    r["value"] = to_decimal(m.value);
    r["terms"] = terms_string(m.sparse);
    r["alphas"] = alphas_string(m.alphas);
    if (m.decomposition) {
        r["form"] = m.decomposition->is_boundary() ? "boundary" : "generic";
        r["p"] = std::to_string(m.decomposition->p);
        r["beta"] = m.decomposition->is_boundary() ? Record()
                                                   : Record(std::to_string(m.decomposition->beta));
    } else {
        r["form"] = Record();
        r["p"] = Record();
        r["beta"] = Record();
    }
    r["normalization"] = to_decimal(m.normalization);
    r["verified"] = true;
    return r;
}

inline Record verification_record(std::uint64_t base, const Int& value) {
    const auto expansion = to_expansion(value, base);
    Record r;
    r["kind"] = "verification";
    r["base"] = std::to_string(base);
    r["value"] = to_decimal(value);
    r["nonzero"] = std::to_string(expansion.nonzero_count());
    r["digits"] = digits_string(expansion);
    r["coprime"] = coprime_with(value, base);
    if (value >= 2) {
        if (const auto w = as_perfect_power(value))
            r["power"] = to_decimal(w->root) + "^" + std::to_string(w->degree);
        else
            r["power"] = Record();
    } else {
        r["power"] = Record();
    }
    return r;
}

inline Record hit_record(std::uint64_t base, const SearchHit& hit) {
    Record r;
    r["kind"] = "hit";
    r["base"] = std::to_string(base);
    r["value"] = to_decimal(hit.value);
    r["y"] = to_decimal(hit.witness.root);
    r["d"] = std::to_string(hit.witness.degree);
    r["terms"] = terms_string(hit.sparse);
    return r;
}

inline Record summary_record(const SearchSpec& spec, const SearchOutcome& outcome,
                             double elapsed_ms) {
    Record r;
    r["kind"] = "summary";
    r["base"] = std::to_string(spec.base);
    r["digits"] = std::to_string(spec.digit_count);
    r["max_exponent"] = std::to_string(spec.max_exponent);
    r["candidates"] = to_decimal(outcome.candidate_count);
    r["hits"] = std::to_string(outcome.hits.size());
    r["infeasible"] = outcome.infeasible;
    r["resume_token"] = outcome.last_tuple.empty() ? Record() : Record(format_token(outcome.last_tuple));
    r["elapsed_ms"] = std::to_string(elapsed_ms);
    return r;
}

inline Record checkpoint_record(const ExponentTuple& token) {
    Record r;
    r["kind"] = "checkpoint";
    r["token"] = format_token(token);
    return r;
}

inline Record table_cell_record(std::uint64_t base, std::uint64_t digits) {
    const auto status = classify_case(base, digits, false);
    const auto square = classify_case(base, digits, true);
    Record r;
    r["kind"] = "table-cell";
    r["base"] = std::to_string(base);
    r["digits"] = std::to_string(digits);
    r["status"] = std::string(status_name(status.kind));
    r["family"] = status.family ? Record(std::string(family_name(*status.family))) : Record();
    r["degree"] = status.is_infinite() ? Record(std::to_string(status.degree)) : Record();
    r["square_status"] = std::string(status_name(square.kind));
    r["square_family"] = square.family ? Record(std::string(family_name(*square.family))) : Record();
    r["square_degree"] = square.is_infinite() ? Record(std::to_string(square.degree)) : Record();
    return r;
}

}  // namespace sparsepow
