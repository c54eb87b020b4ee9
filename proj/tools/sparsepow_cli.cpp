// Command-line front end: classification, family generation, verification and
// bounded sparse-power search, all emitting JSON lines on stdout.
//
// Exit codes: 0 success, 2 invalid input, 3 requested pair has no infinite
// family, 4 internal verification failure.

#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sparsepow/sparsepow.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNotGeneratable = 3;
constexpr int kExitVerificationFailure = 4;

void emit(const sparsepow::Record& record) { std::cout << record.dump() << "\n"; }

struct ClassifyArgs {
    std::uint64_t base = 0;
    std::uint64_t digits = 0;
    bool square_only = false;
};

int run_classify(const ClassifyArgs& a) {
    const auto status = sparsepow::classify_case(a.base, a.digits, a.square_only);
    emit(sparsepow::classification_record(a.base, a.digits, a.square_only, status));
    return kExitOk;
}

struct GenerateArgs {
    std::uint64_t base = 0;
    std::uint64_t digits = 0;
    std::uint64_t count = 1;
    std::uint64_t start = 0;
    bool square_only = false;
};

int run_generate(const GenerateArgs& a) {
    for (std::uint64_t t = a.start; t < a.start + a.count; ++t) {
        const auto member = sparsepow::generate_member(a.base, a.digits, t, a.square_only);
        emit(sparsepow::member_record(member));
    }
    return kExitOk;
}

struct VerifyArgs {
    std::uint64_t base = 0;
    std::string value;
};

int run_verify(const VerifyArgs& a) {
    const sparsepow::Int value = sparsepow::parse_decimal(a.value);
    emit(sparsepow::verification_record(a.base, value));
    return kExitOk;
}

struct SearchArgs {
    std::uint64_t base = 0;
    std::uint64_t digits = 0;
    std::uint64_t max_exponent = 0;
    std::string degree = "any";
    bool coprime = true;
    unsigned threads = 1;
    std::string resume;
    std::uint64_t checkpoint_every = 0;
    bool no_prune = false;
};

sparsepow::DegreeFilter parse_degree(const std::string& text) {
    sparsepow::DegreeFilter filter;
    if (text == "any") return filter;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad degree filter: " + text);
        filter.values.push_back(std::stoul(part));
    }
    if (filter.values.empty()) throw std::invalid_argument("empty degree filter");
    return filter;
}

int run_search(const SearchArgs& a) {
    sparsepow::SearchSpec spec;
    spec.base = a.base;
    spec.digit_count = a.digits;
    spec.max_exponent = a.max_exponent;
    spec.degrees = parse_degree(a.degree);
    spec.coprime_only = a.coprime;

    sparsepow::SearchOptions opts;
    opts.threads = a.threads;
    opts.prune = !a.no_prune && a.checkpoint_every == 0;
    if (!a.resume.empty()) opts.resume_after = sparsepow::parse_token(a.resume);
    opts.checkpoint_every = a.checkpoint_every;
    if (a.checkpoint_every)
        opts.on_checkpoint = [](const sparsepow::ExponentTuple& token) {
            emit(sparsepow::checkpoint_record(token));
        };

    const auto start = std::chrono::steady_clock::now();
    const auto outcome = sparsepow::find_sparse_powers(spec, opts);
    const auto elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);

    for (const auto& hit : outcome.hits) emit(sparsepow::hit_record(spec.base, hit));
    emit(sparsepow::summary_record(spec, outcome, elapsed.count()));
    return kExitOk;
}

struct TableArgs {
    std::uint64_t max_base = 0;
    std::uint64_t max_digits = 0;
};

int run_table(const TableArgs& a) {
    if (a.max_base < 2) throw std::invalid_argument("--max-base must be >= 2");
    if (a.max_digits < 3) throw std::invalid_argument("--max-digits must be >= 3");
    for (std::uint64_t base = 2; base <= a.max_base; ++base)
        for (std::uint64_t digits = 3; digits <= a.max_digits; ++digits)
            emit(sparsepow::table_cell_record(base, digits));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constructive families and bounded searches of perfect powers with exactly k "
                 "non-zero base-x digits"};
    app.require_subcommand(1);

    ClassifyArgs classify_args;
    auto* classify = app.add_subcommand("classify", "report the knowledge status of a (base, digits) pair");
    classify->add_option("--base", classify_args.base, "radix x >= 2")->required();
    classify->add_option("--digits", classify_args.digits, "non-zero digit count k >= 1")->required();
    classify->add_flag("--square-only", classify_args.square_only, "restrict to perfect squares");

    GenerateArgs generate_args;
    auto* generate = app.add_subcommand("generate", "emit verified family members for a pair");
    generate->add_option("--base", generate_args.base, "radix x >= 2")->required();
    generate->add_option("--digits", generate_args.digits, "non-zero digit count k")->required();
    generate->add_option("--count", generate_args.count, "number of members (default 1)");
    generate->add_option("--start", generate_args.start, "first family index t (default 0)");
    generate->add_flag("--square-only", generate_args.square_only, "restrict to perfect squares");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "report digits, coprimality and power witness of a value");
    verify->add_option("--base", verify_args.base, "radix x >= 2")->required();
    verify->add_option("--value", verify_args.value, "non-negative integer, decimal")->required();

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "enumerate k-sparse values up to an exponent bound "
                                                "and report the perfect powers among them");
    search->add_option("--base", search_args.base, "radix x >= 2")->required();
    search->add_option("--digits", search_args.digits, "non-zero digit count k")->required();
    search->add_option("--max-exponent", search_args.max_exponent, "largest digit exponent M")->required();
    search->add_option("--degree", search_args.degree, "power degree: 'any' or a comma list (default any)");
    search->add_flag("--coprime,!--no-coprime", search_args.coprime,
                     "require the constant digit to be non-zero (default on)");
    search->add_option("--threads", search_args.threads, "search worker count (default 1)");
    search->add_option("--resume", search_args.resume, "checkpoint token to resume after");
    search->add_option("--checkpoint-every", search_args.checkpoint_every,
                       "emit a checkpoint record every N exponent tuples (plain scan)");
    search->add_flag("--no-prune", search_args.no_prune, "disable interval pruning (plain scan)");

    TableArgs table_args;
    auto* table = app.add_subcommand("table", "status grid over 2..max-base and 3..max-digits");
    table->add_option("--max-base", table_args.max_base, "largest radix")->required();
    table->add_option("--max-digits", table_args.max_digits, "largest digit count")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalidInput;
    }

    try {
        if (*classify) return run_classify(classify_args);
        if (*generate) return run_generate(generate_args);
        if (*verify) return run_verify(verify_args);
        if (*search) return run_search(search_args);
        if (*table) return run_table(table_args);
    } catch (const sparsepow::StatusError& e) {
        // not generatable: report the classification itself, then signal via exit code
        emit(sparsepow::classification_record(
            generate_args.base, generate_args.digits, generate_args.square_only, e.status()));
        std::cerr << e.what() << "\n";
        return kExitNotGeneratable;
    } catch (const sparsepow::VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
