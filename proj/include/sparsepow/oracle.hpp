#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sparsepow/errors.hpp"
#include "sparsepow/integer.hpp"
#include "sparsepow/repr.hpp"

namespace sparsepow {

/// Empty = any degree >= 2. A value matches an explicit set when some listed
/// degree divides the maximal witness degree (64 is a 2nd, 3rd and 6th power).
struct DegreeFilter {
    std::vector<unsigned long> values;

    bool any() const { return values.empty(); }
    bool matches(unsigned long maximal_degree) const {
        if (any()) return maximal_degree >= 2;
        for (auto d : values)
            if (maximal_degree % d == 0) return true;
        return false;
    }
};

struct SearchSpec {
    std::uint64_t base = 2;
    std::uint64_t digit_count = 1;  // k
    std::uint64_t max_exponent = 0; // M: every exponent of a candidate is <= M
    DegreeFilter degrees{};
    bool coprime_only = true;       // pin the constant digit: c_0 != 0

    bool feasible() const { return digit_count >= 1 && digit_count <= max_exponent + 1; }
};

/// Ascending exponents of one candidate digit pattern; doubles as the
/// checkpoint token ("0,3,7").
using ExponentTuple = std::vector<std::uint64_t>;

inline std::string format_token(const ExponentTuple& tuple) {
    std::ostringstream out;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) out << ',';
        out << tuple[i];
    }
    return out.str();
}

inline ExponentTuple parse_token(const std::string& text) {
    ExponentTuple tuple;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad checkpoint token: " + text);
        tuple.push_back(std::stoull(part));
    }
    if (tuple.empty()) throw std::invalid_argument("empty checkpoint token");
    for (std::size_t i = 1; i < tuple.size(); ++i)
        if (tuple[i] <= tuple[i - 1]) throw std::invalid_argument("token exponents must increase");
    return tuple;
}

struct Candidate {
    Int value;
    ExponentTuple exponents;
    std::vector<std::uint64_t> coefficients;  // aligned with exponents, each in [1, base-1]
};

struct SearchHit {
    Int value;
    PowerWitness witness;
    SparseForm sparse;
};

struct SearchOutcome {
    std::vector<SearchHit> hits;
    Int candidate_count = 0;       // size of the candidate space addressed
    bool infeasible = false;       // k > M+1: nothing to enumerate
    ExponentTuple last_tuple{};    // lex-greatest exponent tuple of the space
};

struct SearchOptions {
    unsigned threads = 1;
    bool prune = true;           // interval pruning; never changes results
    bool residue_filter = true;  // residue pre-tests for explicit degree sets
    std::optional<ExponentTuple> resume_after{};  // skip tuples <= token (forces the
                                                  // plain enumeration path, single-threaded)
    std::uint64_t checkpoint_every = 0;           // plain path: report every N finished tuples
    std::function<void(const ExponentTuple&)> on_checkpoint{};
    std::optional<std::chrono::milliseconds> time_budget{};
};

namespace detail {

inline void validate_spec(const SearchSpec& spec) {
    require_base(spec.base);
    if (spec.digit_count < 1) throw std::invalid_argument("digit count must be >= 1");
    for (auto d : spec.degrees.values)
        if (d < 2) throw std::invalid_argument("degree filter entries must be >= 2");
}

inline void validate_token(const SearchSpec& spec, const ExponentTuple& token) {
    if (token.size() != spec.digit_count)
        throw std::invalid_argument("token length does not match the digit count");
    if (token.back() > spec.max_exponent)
        throw std::invalid_argument("token exceeds the exponent bound");
    if (spec.coprime_only && token.front() != 0)
        throw std::invalid_argument("coprime searches pin the first exponent at 0");
}

inline ExponentTuple first_tuple(const SearchSpec& spec) {
    ExponentTuple t(spec.digit_count);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = i;
    return t;
}

inline ExponentTuple last_tuple_of(const SearchSpec& spec) {
    const std::uint64_t k = spec.digit_count;
    ExponentTuple t;
    t.reserve(k);
    if (spec.coprime_only) {
        t.push_back(0);
        for (std::uint64_t i = 1; i < k; ++i) t.push_back(spec.max_exponent - (k - 1) + i);
    } else {
        for (std::uint64_t i = 0; i < k; ++i) t.push_back(spec.max_exponent - (k - 1) + i);
    }
    return t;
}

/// Lex successor of an ascending exponent tuple; false when exhausted.
/// Position 0 stays pinned at zero for coprime searches.
inline bool advance_tuple(ExponentTuple& t, const SearchSpec& spec) {
    const std::size_t k = t.size();
    const std::size_t lowest_free = spec.coprime_only ? 1 : 0;
    for (std::size_t i = k; i-- > lowest_free;) {
        const std::uint64_t limit = spec.max_exponent - (k - 1 - i);
        if (t[i] < limit) {
            ++t[i];
            for (std::size_t j = i + 1; j < k; ++j) t[j] = t[i] + (j - i);
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Streams every candidate with exactly k non-zero digits in lexicographic
/// order: by exponent tuple, then by coefficient tuple (highest exponent's
/// coefficient moving fastest).
class SparseEnumerator {
public:
    explicit SparseEnumerator(SearchSpec spec) : spec_(std::move(spec)) { init(); }

    SparseEnumerator(SearchSpec spec, const std::optional<ExponentTuple>& resume_after)
        : spec_(std::move(spec)) {
        init();
        if (resume_after && feasible_) {
            detail::validate_token(spec_, *resume_after);
            exponents_ = *resume_after;
            if (!detail::advance_tuple(exponents_, spec_)) {
                exhausted_ = true;
                return;
            }
            reset_coefficients();
        }
    }

    bool feasible() const { return feasible_; }
    const SearchSpec& spec() const { return spec_; }

    bool next(Candidate& out) {
        if (!feasible_ || exhausted_) return false;
        out.value = value_;
        out.exponents = exponents_;
        out.coefficients = coefficients_;
        advance();
        return true;
    }

private:
    void init() {
        detail::validate_spec(spec_);
        feasible_ = spec_.feasible();
        if (!feasible_) return;
        pow_.resize(spec_.max_exponent + 1);
        for (std::uint64_t e = 0; e <= spec_.max_exponent; ++e) pow_[e] = pow_ui(spec_.base, e);
        exponents_ = detail::first_tuple(spec_);
        reset_coefficients();
    }

    void reset_coefficients() {
        coefficients_.assign(spec_.digit_count, 1);
        value_ = 0;
        for (auto e : exponents_) value_ += pow_[e];
    }

    void advance() {
        // coefficient odometer first, highest exponent fastest
        for (std::size_t i = coefficients_.size(); i-- > 0;) {
            if (coefficients_[i] < spec_.base - 1) {
                ++coefficients_[i];
                value_ += pow_[exponents_[i]];
                return;
            }
            coefficients_[i] = 1;
            value_ -= (spec_.base - 2) * pow_[exponents_[i]];
        }
        if (!detail::advance_tuple(exponents_, spec_)) {
            exhausted_ = true;
            return;
        }
        reset_coefficients();
    }

    SearchSpec spec_;
    std::vector<Int> pow_;
    ExponentTuple exponents_;
    std::vector<std::uint64_t> coefficients_;
    Int value_;
    bool feasible_ = false;
    bool exhausted_ = false;
};

inline SparseEnumerator enumerate_sparse(const SearchSpec& spec) { return SparseEnumerator(spec); }

/// Number of exponent tuples of the spec.
inline Int tuple_count(const SearchSpec& spec) {
    if (!spec.feasible()) return 0;
    return spec.coprime_only ? binomial(spec.max_exponent, spec.digit_count - 1)
                             : binomial(spec.max_exponent + 1, spec.digit_count);
}

/// Closed-form size of the candidate space: tuples times coefficient choices.
inline Int candidate_space_size(const SearchSpec& spec) {
    if (!spec.feasible()) return 0;
    Int coeffs;
    mpz_ui_pow_ui(coeffs.get_mpz_t(), spec.base - 1, spec.digit_count);
    return tuple_count(spec) * coeffs;
}

/// 0-based lexicographic rank of a tuple among the spec's tuples.
inline Int tuple_rank(const SearchSpec& spec, const ExponentTuple& tuple) {
    detail::validate_token(spec, tuple);
    const std::size_t lowest_free = spec.coprime_only ? 1 : 0;
    Int rank = 0;
    std::uint64_t prev = 0;
    bool have_prev = false;
    for (std::size_t i = lowest_free; i < tuple.size(); ++i) {
        const std::uint64_t remaining = tuple.size() - 1 - i;
        const std::uint64_t start = have_prev ? prev + 1 : (spec.coprime_only ? 1 : 0);
        for (std::uint64_t v = start; v < tuple[i]; ++v)
            rank += binomial(spec.max_exponent - v, remaining);
        prev = tuple[i];
        have_prev = true;
    }
    return rank;
}

namespace detail {

/// Sound modular pre-test: a d-th power reduces to a d-th power residue
/// modulo every modulus, so a table miss rules the candidate out.
class ResidueFilter {
public:
    static constexpr std::uint64_t kModuli[] = {64, 63, 65, 11, 29, 31};

    ResidueFilter() = default;

    ResidueFilter(const DegreeFilter& degrees, bool enabled) {
        if (!enabled || degrees.any()) return;
        for (auto d : degrees.values) {
            PerDegree pd;
            for (auto m : kModuli) {
                std::vector<bool> table(m, false);
                for (std::uint64_t y = 0; y < m; ++y) {
                    std::uint64_t r = 1;
                    for (std::uint64_t i = 0; i < d; ++i) r = r * y % m;
                    table[r] = true;
                }
                const auto hits = std::count(table.begin(), table.end(), true);
                if (static_cast<double>(hits) / static_cast<double>(m) < 0.9)
                    pd.tables.emplace_back(m, std::move(table));
            }
            degrees_.push_back(std::move(pd));
        }
        for (auto m : kModuli) modulus_ *= m;
        active_ = true;
    }

    bool active() const { return active_; }

    bool may_match(const Int& value) const {
        if (!active_) return true;
        const std::uint64_t r = mpz_fdiv_ui(value.get_mpz_t(), modulus_);
        for (const auto& pd : degrees_) {
            bool ok = true;
            for (const auto& [m, table] : pd.tables)
                if (!table[r % m]) {
                    ok = false;
                    break;
                }
            if (ok) return true;
        }
        return false;
    }

private:
    struct PerDegree {
        std::vector<std::pair<std::uint64_t, std::vector<bool>>> tables;
    };
    std::vector<PerDegree> degrees_;
    std::uint64_t modulus_ = 1;
    bool active_ = false;
};

struct SearchContext {
    SearchSpec spec;
    std::vector<Int> pow;               // base^0 .. base^(M+1)
    std::vector<Int> repunit;           // smallest value with r digits, r = 0..k
    std::vector<Int> coeff_pow;         // (base-1)^r, r = 0..k
    std::vector<std::vector<Int>> binom;  // [n][r], n <= M+1, r <= k
    std::vector<unsigned long> primes;  // candidate prime degrees for "any"
    ResidueFilter residue;
    std::optional<std::chrono::steady_clock::time_point> deadline;

    SearchContext(const SearchSpec& s, const SearchOptions& opts) : spec(s) {
        pow.resize(spec.max_exponent + 2);
        for (std::uint64_t e = 0; e < pow.size(); ++e) pow[e] = pow_ui(spec.base, e);
        repunit.resize(spec.digit_count + 1);
        repunit[0] = 0;
        for (std::uint64_t r = 1; r <= spec.digit_count; ++r)
            repunit[r] = repunit[r - 1] + pow[r - 1];
        coeff_pow.resize(spec.digit_count + 1);
        for (std::uint64_t r = 0; r <= spec.digit_count; ++r)
            mpz_ui_pow_ui(coeff_pow[r].get_mpz_t(), spec.base - 1, r);
        binom.resize(spec.max_exponent + 2);
        for (std::uint64_t n = 0; n < binom.size(); ++n) {
            binom[n].resize(spec.digit_count + 1);
            for (std::uint64_t r = 0; r <= spec.digit_count; ++r)
                binom[n][r] = binomial(n, r);
        }
        primes = primes_up_to(bit_length(pow[spec.max_exponent + 1]) + 1);
        residue = ResidueFilter(spec.degrees, opts.residue_filter);
        if (opts.time_budget)
            deadline = std::chrono::steady_clock::now() + *opts.time_budget;
    }
};

inline Int ceil_root(const Int& n, unsigned long degree) {
    Int r;
    const bool exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), degree) != 0;
    if (!exact) r += 1;
    return r;
}

inline Int floor_root(const Int& n, unsigned long degree) {
    Int r;
    mpz_root(r.get_mpz_t(), n.get_mpz_t(), degree);
    return r;
}

/// Walks the search tree of one leading-exponent slice. The tree branches on
/// (exponent, coefficient) choices from the most significant digit down; at
/// every node the value interval of the subtree is known exactly, so the walk
/// switches to enumerating the few d-th powers inside the interval, or the
/// few remaining digit patterns, whichever is cheaper. Both finishes apply
/// the exact digit-pattern and power tests, so the hit set is identical to
/// the plain enumeration's.
class TreeSearcher {
public:
    static constexpr unsigned long kPowersLeaf = 3072;
    static constexpr unsigned long kCombosLeaf = 3072;
    static constexpr unsigned long kPowerCost = 16;

    TreeSearcher(const SearchContext& ctx, std::vector<SearchHit>& hits)
        : ctx_(ctx), spec_(ctx.spec), hits_(hits) {}

    /// Searches all candidates whose top digit is coefficient*base^exponent.
    void search_slice(std::uint64_t exponent, std::uint64_t coefficient) {
        value_ = coefficient * ctx_.pow[exponent];
        walk(exponent, spec_.digit_count - 1);
    }

private:
    void tick() {
        if (++ticks_ % 1024 == 0 && ctx_.deadline &&
            std::chrono::steady_clock::now() > *ctx_.deadline)
            throw SearchTimeout("sparse power search exceeded its time budget");
    }

    void walk(std::uint64_t bound, std::uint64_t remaining) {
        tick();
        if (remaining == 0) {
            check_leaf();
            return;
        }
        if (bound < remaining) return;

        const Int lo = value_ + ctx_.repunit[remaining];
        const Int hi = value_ + max_rest(bound, remaining);
        const Int powers = count_powers(lo, hi, kPowersLeaf * kPowerCost + 1);
        if (powers == 0) return;
        const Int combos = combo_count(bound, remaining);

        if (powers * kPowerCost <= combos) {
            if (powers <= kPowersLeaf) {
                enumerate_powers(lo, hi, remaining);
                return;
            }
        } else if (combos <= kCombosLeaf) {
            enumerate_combos(bound, remaining);
            return;
        }
        for_each_child(bound, remaining,
                       [&](std::uint64_t e, std::uint64_t r) { walk(e, r); });
    }

    void enumerate_combos(std::uint64_t bound, std::uint64_t remaining) {
        if (remaining == 0) {
            check_leaf();
            return;
        }
        tick();
        for_each_child(bound, remaining,
                       [&](std::uint64_t e, std::uint64_t r) { enumerate_combos(e, r); });
    }

    template <typename Fn>
    void for_each_child(std::uint64_t bound, std::uint64_t remaining, Fn&& fn) {
        const std::uint64_t min_e = remaining - 1;
        for (std::uint64_t e = bound; e-- > min_e;) {
            if (spec_.coprime_only && remaining == 1 && e != 0) continue;
            for (std::uint64_t c = 1; c <= spec_.base - 1; ++c) {
                mpz_addmul_ui(value_.get_mpz_t(), ctx_.pow[e].get_mpz_t(), c);
                fn(e, remaining - 1);
                mpz_submul_ui(value_.get_mpz_t(), ctx_.pow[e].get_mpz_t(), c);
            }
        }
    }

    Int max_rest(std::uint64_t bound, std::uint64_t remaining) const {
        if (spec_.coprime_only) {
            Int rest = ctx_.pow[bound] - ctx_.pow[bound - (remaining - 1)];
            rest += spec_.base - 1;
            return rest;
        }
        return ctx_.pow[bound] - ctx_.pow[bound - remaining];
    }

    Int combo_count(std::uint64_t bound, std::uint64_t remaining) const {
        const Int& positions = spec_.coprime_only ? ctx_.binom[bound - 1][remaining - 1]
                                                  : ctx_.binom[bound][remaining];
        return positions * ctx_.coeff_pow[remaining];
    }

    Int count_powers(const Int& lo, const Int& hi, unsigned long cap) const {
        Int total = 0;
        const auto count_for = [&](unsigned long d) {
            if (bit_length(hi) < d + 1) return;  // 2^d > hi
            Int top = floor_root(hi, d);
            Int bottom = ceil_root(lo, d);
            if (bottom < 2) bottom = 2;
            if (top >= bottom) total += top - bottom + 1;
        };
        if (spec_.degrees.any()) {
            for (auto p : ctx_.primes) {
                count_for(p);
                if (total > cap) break;
            }
        } else {
            for (auto d : spec_.degrees.values) {
                count_for(d);
                if (total > cap) break;
            }
        }
        return total;
    }

    void enumerate_powers(const Int& lo, const Int& hi, std::uint64_t remaining) {
        candidates_.clear();
        const auto gather = [&](unsigned long d) {
            if (bit_length(hi) < d + 1) return;
            Int y = ceil_root(lo, d);
            if (y < 2) y = 2;
            Int v = pow_int(y, d);
            while (v <= hi) {
                candidates_.push_back(v);
                y += 1;
                v = pow_int(y, d);
            }
        };
        if (spec_.degrees.any()) {
            for (auto p : ctx_.primes) gather(p);
        } else {
            for (auto d : spec_.degrees.values) gather(d);
        }
        std::sort(candidates_.begin(), candidates_.end());
        candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());

        Int rest;
        for (const Int& v : candidates_) {
            tick();
            rest = v - value_;
            if (spec_.coprime_only && mpz_fdiv_ui(rest.get_mpz_t(), spec_.base) == 0) continue;
            if (count_nonzero_capped(rest, spec_.base, remaining) != remaining) continue;
            record_hit(v);
        }
    }

    void check_leaf() {
        if (value_ < 2) return;
        if (!ctx_.residue.may_match(value_)) return;
        if (spec_.degrees.any()) {
            if (!mpz_perfect_power_p(value_.get_mpz_t())) return;
            record_hit(value_);
            return;
        }
        for (auto d : spec_.degrees.values) {
            Int r;
            if (mpz_root(r.get_mpz_t(), value_.get_mpz_t(), d) != 0) {
                record_hit(value_);
                return;
            }
        }
    }

    void record_hit(const Int& v) {
        auto witness = as_perfect_power(v);
        if (!witness || !spec_.degrees.matches(witness->degree)) return;
        hits_.push_back({v, *witness, to_sparse_form(v, spec_.base)});
    }

    const SearchContext& ctx_;
    const SearchSpec& spec_;
    std::vector<SearchHit>& hits_;
    Int value_ = 0;
    std::vector<Int> candidates_;
    std::uint64_t ticks_ = 0;
};

inline void plain_search(const SearchContext& ctx, const SearchOptions& opts,
                         std::vector<SearchHit>& hits) {
    SparseEnumerator en(ctx.spec, opts.resume_after);
    Candidate c;
    ExponentTuple current{};
    std::uint64_t tuples_done = 0;
    std::uint64_t ticks = 0;
    const auto tuple_finished = [&] {
        ++tuples_done;
        if (opts.checkpoint_every && opts.on_checkpoint && tuples_done % opts.checkpoint_every == 0)
            opts.on_checkpoint(current);
    };
    while (en.next(c)) {
        if (++ticks % 4096 == 0 && ctx.deadline &&
            std::chrono::steady_clock::now() > *ctx.deadline)
            throw SearchTimeout("sparse power search exceeded its time budget");
        if (!current.empty() && c.exponents != current) tuple_finished();
        current = c.exponents;
        if (c.value < 2 || !ctx.residue.may_match(c.value)) continue;
        std::optional<PowerWitness> w;
        if (ctx.spec.degrees.any()) {
            if (mpz_perfect_power_p(c.value.get_mpz_t())) w = as_perfect_power(c.value);
        } else {
            for (auto d : ctx.spec.degrees.values) {
                Int r;
                if (mpz_root(r.get_mpz_t(), c.value.get_mpz_t(), d) != 0) {
                    w = as_perfect_power(c.value);
                    break;
                }
            }
        }
        if (w && ctx.spec.degrees.matches(w->degree))
            hits.push_back({c.value, *w, to_sparse_form(c.value, ctx.spec.base)});
    }
    if (!current.empty()) tuple_finished();
}

}  // namespace detail

/// All perfect powers among the spec's candidates, ascending by value.
/// Deterministic for a fixed spec regardless of thread count or pruning.
inline SearchOutcome find_sparse_powers(const SearchSpec& spec, const SearchOptions& opts = {}) {
    detail::validate_spec(spec);
    SearchOutcome outcome;
    if (!spec.feasible()) {
        outcome.infeasible = true;
        return outcome;
    }
    detail::SearchContext ctx(spec, opts);
    outcome.last_tuple = detail::last_tuple_of(spec);

    const bool plain = opts.resume_after.has_value() || !opts.prune || opts.checkpoint_every > 0;
    if (plain) {
        outcome.candidate_count = candidate_space_size(spec);
        if (opts.resume_after) {
            Int coeffs;
            mpz_ui_pow_ui(coeffs.get_mpz_t(), spec.base - 1, spec.digit_count);
            outcome.candidate_count =
                (tuple_count(spec) - tuple_rank(spec, *opts.resume_after) - 1) * coeffs;
        }
        detail::plain_search(ctx, opts, outcome.hits);
    } else {
        outcome.candidate_count = candidate_space_size(spec);
        // leading-exponent slices, processed independently and merged by value
        const std::uint64_t top_min = spec.digit_count - 1;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> slices;
        for (std::uint64_t e = spec.max_exponent + 1; e-- > top_min;) {
            if (spec.coprime_only && spec.digit_count == 1 && e != 0) continue;
            for (std::uint64_t c = 1; c <= spec.base - 1; ++c) slices.emplace_back(e, c);
        }
        const unsigned workers =
            std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(slices.size())));
        if (workers == 1) {
            detail::TreeSearcher searcher(ctx, outcome.hits);
            for (const auto& [e, c] : slices) searcher.search_slice(e, c);
        } else {
            std::vector<std::vector<SearchHit>> partial(slices.size());
            std::atomic<std::size_t> next{0};
            std::atomic<bool> timed_out{false};
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (;;) {
                        const std::size_t i = next.fetch_add(1);
                        if (i >= slices.size() || timed_out.load()) return;
                        try {
                            detail::TreeSearcher searcher(ctx, opts.prune, partial[i]);
                            searcher.search_slice(slices[i].first, slices[i].second);
                        } catch (const SearchTimeout&) {
                            timed_out.store(true);
                            return;
                        }
                    }
                });
            for (auto& t : pool) t.join();
            if (timed_out.load())
                throw SearchTimeout("sparse power search exceeded its time budget");
            for (auto& part : partial)
                for (auto& hit : part) outcome.hits.push_back(std::move(hit));
        }
    }

    std::sort(outcome.hits.begin(), outcome.hits.end(),
              [](const SearchHit& a, const SearchHit& b) { return a.value < b.value; });
    return outcome;
}

}  // namespace sparsepow
