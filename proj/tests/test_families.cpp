#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "sparsepow/classify.hpp"
#include "sparsepow/families.hpp"

using namespace sparsepow;

namespace {

std::size_t count_nonzero_via_string(const Int& n, int base) {
    if (n == 0) return 0;
    const std::string s = n.get_str(base);
    return std::count_if(s.begin(), s.end(), [](char c) { return c != '0'; });
}

}  // namespace

TEST_CASE("digit count decomposition") {
    auto d = decompose_digit_count(5);
    CHECK_FALSE(d.is_boundary());
    CHECK(d.p == 3);
    CHECK(d.beta == 1);

    d = decompose_digit_count(7);
    CHECK(d.is_boundary());
    CHECK(d.p == 4);

    d = decompose_digit_count(12);
    CHECK_FALSE(d.is_boundary());
    CHECK(d.p == 5);
    CHECK(d.beta == 3);

    CHECK_THROWS_AS(decompose_digit_count(4), std::out_of_range);
}

TEST_CASE("decomposition is a bijection on [5, 500]") {
    for (std::uint64_t k = 5; k <= 500; ++k) {
        const auto d = decompose_digit_count(k);
        CHECK(d.recompose() == k);
        if (d.is_boundary()) {
            CHECK(choose2(d.p) + 1 == k);
        } else {
            CHECK(d.beta <= d.p - 2);
            CHECK(choose2(d.p) + 1 < k);
            CHECK(k <= choose2(d.p + 1));
        }
    }
}

TEST_CASE("boundary_order recognizes C(p,2)+1") {
    CHECK(boundary_order(4) == 3);
    CHECK(boundary_order(7) == 4);
    CHECK(boundary_order(11) == 5);
    CHECK(boundary_order(46) == 10);
    CHECK_FALSE(boundary_order(5).has_value());
    CHECK_FALSE(boundary_order(12).has_value());
}

TEST_CASE("alpha sequences must increase strictly") {
    CHECK_NOTHROW(AlphaSequence({3, 6, 12}));
    CHECK_THROWS_AS(AlphaSequence({3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(AlphaSequence({0, 2}), std::invalid_argument);
}

TEST_CASE("square expansion term multiset") {
    const auto terms = square_expansion_terms(AlphaSequence({3, 6}), 10);
    const TermMultiset expected = {{0, 1}, {3, 2}, {6, 1}, {6, 2}, {9, 2}, {12, 1}};
    REQUIRE(terms.size() == expected.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        CHECK(terms[i].exponent == expected[i].exponent);
        CHECK(terms[i].coefficient == expected[i].coefficient);
    }
    CHECK(from_terms(terms, 10) == Int("1002003002001"));

    const auto trivial = square_expansion_terms(AlphaSequence({}), 5);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0].exponent == 0);
    CHECK(trivial[0].coefficient == 1);
}

TEST_CASE("square expansion evaluates to the square, with C(p+1,2) entries") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 120; ++iter) {
        const std::uint64_t p = 1 + rng() % 7;
        std::vector<std::uint64_t> entries;
        std::uint64_t prev = 0;
        for (std::uint64_t i = 1; i < p; ++i) {
            prev += 1 + rng() % 5;
            entries.push_back(prev);
        }
        const AlphaSequence alphas(entries);
        const std::uint64_t base = 2 + rng() % 9;
        const auto terms = square_expansion_terms(alphas, base);
        CHECK(terms.size() == choose2(p + 1));

        Int sum = 1;
        for (auto a : entries) sum += pow_ui(base, a);
        CHECK(from_terms(terms, base) == sum * sum);
    }
}

TEST_CASE("collision law, base >= 3: collisions count the alpha_i = 2 alpha_{i-1} steps") {
    std::mt19937_64 rng(5150);
    for (int iter = 0; iter < 200; ++iter) {
        const std::uint64_t p = 2 + rng() % 7;
        std::vector<std::uint64_t> entries;
        std::uint64_t prev = 0;
        std::size_t doublings = 0;
        for (std::uint64_t i = 1; i < p; ++i) {
            if (i == 1) {
                prev = 1 + rng() % 5;
            } else if (rng() % 2 == 0) {
                prev = 2 * prev;
                ++doublings;
            } else {
                prev = 2 * prev + 1 + rng() % 3;
            }
            entries.push_back(prev);
        }
        const auto terms = square_expansion_terms(AlphaSequence(entries), 7);
        CHECK(exponent_collisions(terms) == doublings);
    }
}

TEST_CASE("collision law, binary fold: collisions count the alpha_i = 2 alpha_{i-1} - 1 steps") {
    std::mt19937_64 rng(6021);
    for (int iter = 0; iter < 200; ++iter) {
        const std::uint64_t p = 2 + rng() % 7;
        std::vector<std::uint64_t> entries;
        std::uint64_t prev = 0;
        std::size_t near_doublings = 0;
        for (std::uint64_t i = 1; i < p; ++i) {
            if (i == 1) {
                prev = 3 + rng() % 4;
            } else if (rng() % 2 == 0) {
                prev = 2 * prev - 1;
                ++near_doublings;
            } else {
                prev = 2 * prev + rng() % 3;
            }
            entries.push_back(prev);
        }
        const auto folded = fold_binary_exponents(square_expansion_terms(AlphaSequence(entries), 2));
        CHECK(exponent_collisions(folded) == near_doublings);
    }
}

TEST_CASE("binary generic family") {
    auto m = gen_binary_generic(5, 0);
    CHECK(m.root == 41);
    CHECK(m.value == 1681);
    CHECK(m.sparse.terms.size() == 5);
    CHECK(m.alphas.entries == std::vector<std::uint64_t>{3, 5});

    m = gen_binary_generic(6, 0);
    CHECK(m.root == 73);
    CHECK(count_nonzero(m.value, 2) == 6);

    m = gen_binary_generic(9, 1);
    CHECK(m.alphas.entries == std::vector<std::uint64_t>{4, 7, 14});
    CHECK(count_nonzero(m.value, 2) == 9);

    CHECK_THROWS_AS(gen_binary_generic(7, 0), WrongFormError);
    CHECK_THROWS_AS(gen_binary_generic(11, 2), WrongFormError);
}

TEST_CASE("binary boundary family") {
    auto m = gen_binary_special(7, 0);
    CHECK(m.root == 113);
    CHECK(m.value == 12769);
    CHECK(m.value == from_terms({{0, 1}, {5, 1}, {6, 1}, {7, 1}, {8, 1}, {12, 1}, {13, 1}}, 2));

    m = gen_binary_special(11, 0);
    CHECK(m.root == 4209);
    CHECK(m.alphas.entries == std::vector<std::uint64_t>{4, 5, 6, 12});
    CHECK(count_nonzero(m.value, 2) == 11);

    m = gen_binary_special(16, 0);
    CHECK(m.alphas.entries == std::vector<std::uint64_t>{4, 5, 6, 12, 23});
    CHECK(count_nonzero(m.value, 2) == 16);

    CHECK_THROWS_AS(gen_binary_special(5, 0), WrongFormError);
    CHECK_THROWS_AS(gen_binary_special(4, 0), WrongFormError);
}

TEST_CASE("generic family for base >= 3") {
    auto m = gen_basex_generic(10, 5, 0);
    CHECK(m.root == 1001001);
    CHECK(m.value == Int("1002003002001"));
    CHECK(m.sparse.terms.size() == 5);

    m = gen_basex_generic(3, 5, 0);
    CHECK(m.root == 757);  // the merged coefficient 3 carries in base 3
    CHECK(count_nonzero(m.value, 3) == 5);

    m = gen_basex_generic(7, 6, 2);
    CHECK(m.alphas.entries == std::vector<std::uint64_t>{5, 11});
    CHECK(count_nonzero(m.value, 7) == 6);

    CHECK_THROWS_AS(gen_basex_generic(2, 5, 0), WrongFormError);
    CHECK_THROWS_AS(gen_basex_generic(10, 7, 0), WrongFormError);
}

TEST_CASE("base-3 boundary family") {
    auto m = gen_base3_special(7, 0);
    CHECK(m.root == 352);
    CHECK(m.value == 123904);
    const auto s = to_sparse_form(123904, 3);
    CHECK(s.terms.size() == 7);

    m = gen_base3_special(11, 0);
    CHECK(m.root == 1 + pow_ui(3, 4) + pow_ui(3, 5) + pow_ui(3, 8) + pow_ui(3, 9));
    CHECK(count_nonzero(m.value, 3) == 11);

    m = gen_base3_special(16, 0);
    CHECK(m.alphas.entries == std::vector<std::uint64_t>{4, 5, 8, 9, 18});
    CHECK(count_nonzero(m.value, 3) == 16);

    CHECK_THROWS_AS(gen_base3_special(4, 0), WrongFormError);
    CHECK_THROWS_AS(gen_base3_special(8, 0), WrongFormError);
}

TEST_CASE("base-4 and base-5 boundary families") {
    auto m = gen_base45_special(4, 4, 0);
    CHECK(m.root == 25);
    CHECK(m.value == 625);
    CHECK(to_expansion(625, 4).digits == std::vector<std::uint64_t>{1, 0, 3, 1, 2});
    CHECK(m.normalization == 2);
    CHECK(mpz_odd_p(m.root.get_mpz_t()));

    m = gen_base45_special(5, 4, 0);
    CHECK(m.root == 52);
    CHECK(m.value == 2704);
    CHECK(count_nonzero(m.value, 5) == 4);

    m = gen_base45_special(4, 7, 0);
    CHECK(m.root == (3 * pow_ui(4, 5) + 2 * pow_ui(4, 2) + 2) / 2);
    CHECK(count_nonzero(m.value, 4) == 7);

    CHECK_THROWS_AS(gen_base45_special(6, 4, 0), WrongFormError);
    CHECK_THROWS_AS(gen_base45_special(4, 5, 0), WrongFormError);
}

TEST_CASE("sigma boundary family") {
    CHECK(sigma_for_base(6) == 3);
    CHECK(sigma_for_base(7) == 3);
    CHECK(sigma_for_base(9) == 4);
    CHECK(sigma_for_base(15) == 4);
    CHECK(sigma_for_base(16) == 5);
    CHECK(sigma_for_base(48) == 7);

    auto m = gen_basex_sigma(7, 4, 0);
    CHECK(m.root == 148);
    CHECK(m.value == 21904);
    CHECK(m.value == from_terms({{5, 1}, {4, 2}, {2, 6}, {0, 1}}, 7));

    m = gen_basex_sigma(6, 4, 0);
    CHECK(m.root == 109);
    CHECK(count_nonzero(m.value, 6) == 4);

    m = gen_basex_sigma(9, 7, 0);
    CHECK(m.root == 4 * pow_ui(9, 5) + pow_ui(9, 2) + 1);
    CHECK(count_nonzero(m.value, 9) == 7);

    CHECK_THROWS_AS(gen_basex_sigma(5, 4, 0), WrongFormError);
    CHECK_THROWS_AS(gen_basex_sigma(9, 6, 0), WrongFormError);
}

TEST_CASE("sigma bounds hold for every base in [6, 1000]") {
    for (std::uint64_t x = 6; x <= 1000; ++x) {
        const std::uint64_t s = sigma_for_base(x);
        CHECK(2 * s <= x);
        CHECK(x < s * s);
        CHECK(s * s < 2 * x);
    }
}

TEST_CASE("small-k families") {
    auto m = gen_small_k(10, 3, 0);
    CHECK(m.root == 101);
    CHECK(m.value == 10201);
    CHECK(m.degree == 2);

    m = gen_small_k(10, 4, 0);
    CHECK(m.root == 101);
    CHECK(m.degree == 3);
    CHECK(m.value == 1030301);

    m = gen_small_k(3, 4, 0);
    CHECK(m.root == 10);
    CHECK(m.value == 1000);  // carried cube: 1 + 3^3 + 3^5 + 3^6
    CHECK(count_nonzero(m.value, 3) == 4);

    m = gen_small_k(2, 3, 1);
    CHECK(m.root == 9);
    CHECK(count_nonzero(m.value, 2) == 3);

    CHECK_THROWS_AS(gen_small_k(2, 4, 0), WrongFormError);
    CHECK_THROWS_AS(gen_small_k(10, 5, 0), WrongFormError);
}

TEST_CASE("members satisfy the family invariants, re-checked independently") {
    for (std::uint64_t x = 2; x <= 12; ++x) {
        for (std::uint64_t k = 3; k <= 20; ++k) {
            const auto status = classify_case(x, k, false);
            if (!status.is_infinite()) continue;
            for (std::uint64_t t : {0, 1}) {
                const auto m = generate_member(x, k, t, false);
                CHECK(m.value == pow_int(m.root, m.degree));
                CHECK(coprime_with(m.value, x));
                CHECK(m.sparse.terms.size() == k);
                CHECK(count_nonzero_via_string(m.value, static_cast<int>(x)) == k);
                CHECK(m.sparse.value() == m.value);
            }
        }
    }
}

TEST_CASE("families are strictly increasing in t") {
    const std::pair<std::uint64_t, std::uint64_t> pairs[] = {
        {2, 5}, {2, 7}, {2, 11}, {3, 7}, {3, 11}, {4, 7}, {5, 7}, {7, 4}, {10, 9}, {10, 3}, {5, 4},
    };
    for (const auto& [x, k] : pairs) {
        Int prev = 0;
        for (std::uint64_t t = 0; t <= 6; ++t) {
            const auto m = generate_member(x, k, t, false);
            CHECK(m.root > prev);
            prev = m.root;
        }
    }
}
