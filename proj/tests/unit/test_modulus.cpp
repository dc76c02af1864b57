#include <numeric>
#include <vector>

#include "doctest.h"
#include "zmtile/class_set.hpp"
#include "zmtile/error.hpp"
#include "zmtile/modulus.hpp"

using namespace zmtile;

namespace {

// phi and mu straight from their definitions.
int64_t naive_phi(int64_t n) {
    int64_t c = 0;
    for (int64_t k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
    return c;
}

int naive_mu(int64_t n) {
    int sign = 1;
    for (int64_t p = 2; p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    return sign;
}

}  // namespace

TEST_CASE("divisor lattice of 360") {
    const Modulus mod(360);
    CHECK(mod.num_divisors() == 24);
    CHECK(mod.divisor(0) == 1);
    CHECK(mod.divisor(mod.top_index()) == 360);
    REQUIRE(mod.factors().size() == 3);
    CHECK(mod.factors()[0] == PrimePower{2, 3});
    CHECK(mod.factors()[1] == PrimePower{3, 2});
    CHECK(mod.factors()[2] == PrimePower{5, 1});
    CHECK(mod.prime_powers() == std::vector<int64_t>{2, 3, 4, 5, 8, 9});
    CHECK(mod.is_prime_power(8));
    CHECK_FALSE(mod.is_prime_power(6));
    CHECK_FALSE(mod.is_prime_power(1));
    CHECK(mod.phi_of(360) == 96);
    CHECK(mod.mu_of(30) == -1);
    CHECK(mod.mu_of(4) == 0);
    CHECK(mod.class_size(mod.index_of(1)) == 96);
    CHECK(mod.class_size(mod.index_of(360)) == 1);
    CHECK(mod.divisor(mod.complement_index(mod.index_of(8))) == 45);
    CHECK_THROWS_AS(mod.index_of(7), InvalidInput);
}

TEST_CASE("phi and mu match their definitions for every divisor") {
    for (int64_t M : {2, 12, 30, 64, 97, 360, 900, 11025}) {
        const Modulus mod(M);
        int64_t classes = 0;
        for (std::size_t i = 0; i < mod.num_divisors(); ++i) {
            CHECK(mod.phi(i) == naive_phi(mod.divisor(i)));
            CHECK(mod.mu(i) == naive_mu(mod.divisor(i)));
            classes += mod.class_size(i);
        }
        // The classes partition Z_M.
        CHECK(classes == M);
    }
}

TEST_CASE("class_of is gcd with M") {
    const Modulus mod(36);
    CHECK(class_of(0, mod) == 36);
    CHECK(class_of(24, mod) == 12);
    CHECK(class_of(-6, mod) == 6);
    CHECK(class_of(5, mod) == 1);
    CHECK(mod.divisor(class_index_of(27, mod)) == 9);
}

TEST_CASE("modulus guards") {
    CHECK_THROWS_AS(Modulus(1), InvalidInput);
    CHECK_THROWS_AS(Modulus(0), InvalidInput);
    CHECK_THROWS_AS(Modulus(kMaxModulus + 1), ResourceLimit);
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(91));
    CHECK(factorize(11025) == std::vector<PrimePower>{{3, 2}, {5, 2}, {7, 2}});
}

TEST_CASE("class sets") {
    const Modulus mod(12);
    const ClassSet just_top(mod);
    CHECK(just_top.members() == std::vector<int64_t>{12});
    CHECK(just_top.to_hex() == "0x20");

    const ClassSet H = ClassSet::parse(mod, "1, 4,12");
    CHECK(H.members() == std::vector<int64_t>{1, 4, 12});
    CHECK(H.to_list() == "1,4,12");
    CHECK(H.contains(4));
    CHECK_FALSE(H.contains(6));
    CHECK(H.size() == 3);
    CHECK(ClassSet::parse(mod, H.to_hex()) == H);
    CHECK(ClassSet::parse(mod, "0x29") == H);
    CHECK(ClassSet::all(mod).size() == 6);

    CHECK_THROWS_AS(ClassSet::parse(mod, "1,4"), InvalidInput);
    CHECK_THROWS_AS(ClassSet::parse(mod, "5,12"), InvalidInput);
    CHECK_THROWS_AS(ClassSet::parse(mod, "0x1"), InvalidInput);
    CHECK_THROWS_AS(ClassSet::parse(mod, "0xz"), InvalidInput);
}
