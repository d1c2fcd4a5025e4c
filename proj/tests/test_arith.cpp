#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tel/arith.hpp"
#include "tel/bigint.hpp"
#include "tel/errors.hpp"

using namespace tel;
using namespace tel::arith;
using doctest::Approx;

namespace {

// F(n) = sum_{k=0}^{n} n!/k!, summed directly.
Int f_by_sum(unsigned long n) {
    Int total = 0;
    for (unsigned long k = 0; k <= n; ++k) {
        Int term = 1;
        for (unsigned long j = k + 1; j <= n; ++j) term *= Int(j);
        total += term;
    }
    return total;
}

uint64_t int_mod(const Int& v, uint64_t p) {
    Int r = v % Int(static_cast<unsigned long>(p));
    if (r < 0) r += Int(static_cast<unsigned long>(p));
    return r.get_ui();
}

// Root count via plain uint64 arithmetic, no Montgomery.
uint32_t rho_naive_builtin(uint32_t p) {
    uint32_t zeros = 0;
    uint64_t f = 1 % p;
    if (f == 0) ++zeros;
    for (uint32_t x = 1; x < p; ++x) {
        f = (static_cast<uint64_t>(x) * f + 1) % p;
        if (f == 0) ++zeros;
    }
    return zeros;
}

bool trial_division_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::complex<double> w_per_term(const PseudoPolySpec& spec, uint32_t p, uint64_t a) {
    const double tau = 6.283185307179586476925286766559;
    std::complex<double> sum = 0.0;
    for (uint32_t x = 0; x < p; ++x) {
        uint64_t v = int_mod(spec.value(x), p);
        sum += std::polar(1.0, tau * static_cast<double>(a % p * v % p) /
                                   static_cast<double>(p));
    }
    return sum / std::sqrt(static_cast<double>(p));
}

}  // namespace

TEST_CASE("builtin sequence matches its factorial-sum closed form") {
    CHECK(PseudoPolySpec::builtin_f().value(0) == 1);
    CHECK(PseudoPolySpec::builtin_f().value(1) == 2);
    CHECK(PseudoPolySpec::builtin_f().value(2) == 5);
    CHECK(PseudoPolySpec::builtin_f().value(3) == 16);
    CHECK(PseudoPolySpec::builtin_f().value(4) == 65);
    auto spec = PseudoPolySpec::builtin_f();
    for (unsigned long n = 0; n <= 20; ++n) CHECK(spec.value(n) == f_by_sum(n));
}

TEST_CASE("sequence specs parse, evaluate, and round trip") {
    CHECK(PseudoPolySpec::parse("builtin-F").is_builtin());
    CHECK(PseudoPolySpec::parse("builtin-F").label() == "builtin-F");

    auto cubic = PseudoPolySpec::parse("poly:7,-3,0,2");
    CHECK_FALSE(cubic.is_builtin());
    CHECK(cubic.coefficients() == std::vector<Int>{7, -3, 0, 2});
    CHECK(cubic.value(5) == 2 * 125 - 3 * 5 + 7);
    CHECK(cubic.value(0) == 7);
    CHECK(cubic.label() == "poly:7,-3,0,2");
    CHECK(PseudoPolySpec::parse(cubic.label()).coefficients() == cubic.coefficients());

    CHECK(PseudoPolySpec::polynomial({Int(1), Int(0), Int(1), Int(0)}).coefficients() ==
          std::vector<Int>{1, 0, 1});
    CHECK(PseudoPolySpec::polynomial({Int(0), Int(0)}).coefficients() == std::vector<Int>{0});

    CHECK_THROWS_AS(PseudoPolySpec::parse("poly:"), std::invalid_argument);
    CHECK_THROWS_AS(PseudoPolySpec::parse("poly:1,,2"), std::invalid_argument);
    CHECK_THROWS_AS(PseudoPolySpec::parse("garbage"), std::invalid_argument);
}

TEST_CASE("prime sieve agrees with trial division") {
    CHECK_FALSE(is_prime_u64(0));
    CHECK_FALSE(is_prime_u64(1));
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(997));
    CHECK_FALSE(is_prime_u64(1000));

    CHECK(primes_up_to(1).empty());
    CHECK(primes_up_to(2) == std::vector<uint32_t>{2});
    CHECK(primes_up_to(30) ==
          std::vector<uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});

    std::vector<uint32_t> by_division;
    for (uint32_t n = 0; n <= 10000; ++n)
        if (trial_division_prime(n)) by_division.push_back(n);
    CHECK(primes_up_to(10000) == by_division);
    CHECK(by_division.size() == 1229);

    uint64_t last = 0;
    uint64_t seen = 0;
    for_each_prime(10000, [&](uint64_t p) {
        CHECK(p > last);
        last = p;
        ++seen;
    });
    CHECK(seen == 1229);

    CHECK(prime_count(0) == 0);
    CHECK(prime_count(10000) == 1229);
    CHECK(prime_count(1000000) == 78498);
}

TEST_CASE("root counts match exact integer evaluation") {
    auto spec = PseudoPolySpec::builtin_f();
    CHECK(rho(spec, 2) == 1);
    CHECK(rho(spec, 3) == 0);
    CHECK(rho(spec, 5) == 2);
    CHECK_THROWS_AS(rho(spec, 10), std::invalid_argument);
    CHECK_THROWS_AS(rho(spec, 1), std::invalid_argument);

    for (uint32_t p : primes_up_to(50)) {
        uint32_t zeros = 0;
        for (uint32_t x = 0; x < p; ++x)
            if (int_mod(spec.value(x), p) == 0) ++zeros;
        CHECK(rho(spec, p) == zeros);
    }
}

TEST_CASE("montgomery root counting agrees with plain modular arithmetic") {
    auto spec = PseudoPolySpec::builtin_f();
    for (uint32_t p : primes_up_to(10000)) CHECK(rho(spec, p) == rho_naive_builtin(p));

    auto big = primes_up_to(100000);
    for (size_t i = big.size() - 3; i < big.size(); ++i)
        CHECK(rho(spec, big[i]) == rho_naive_builtin(big[i]));
}

TEST_CASE("root counts are independent of the residue representatives") {
    auto spec = PseudoPolySpec::builtin_f();
    for (uint32_t p : primes_up_to(50)) {
        uint32_t shifted = 0;
        for (uint32_t x = p; x < 2 * p; ++x)
            if (int_mod(spec.value(x), p) == 0) ++shifted;
        CHECK(rho(spec, p) == shifted);
    }
}

TEST_CASE("polynomial root counts match direct search") {
    auto quad = PseudoPolySpec::parse("poly:1,0,1");
    CHECK(rho(quad, 5) == 2);
    CHECK(rho(quad, 3) == 0);
    CHECK(rho(quad, 13) == 2);
    CHECK(rho(quad, 2) == 1);

    auto cubic = PseudoPolySpec::parse("poly:7,-3,0,2");
    for (uint32_t p : primes_up_to(200)) {
        uint32_t zeros = 0;
        for (uint32_t x = 0; x < p; ++x)
            if (int_mod(cubic.value(x), p) == 0) ++zeros;
        CHECK(rho(cubic, p) == zeros);
    }

    CHECK(rho(PseudoPolySpec::parse("poly:0,5"), 5) == 5);
}

TEST_CASE("root histogram reconciles with per-prime counts") {
    auto spec = PseudoPolySpec::builtin_f();
    auto h = rho_histogram(spec, 100);
    CHECK(h.bound == 100);
    CHECK(h.prime_total == 25);

    std::vector<uint64_t> expected(RhoHistogram::kMaxR + 2, 0);
    for (uint32_t p : primes_up_to(100))
        ++expected[std::min<uint32_t>(rho(spec, p), RhoHistogram::kMaxR + 1)];
    CHECK(h.counts == expected);

    uint64_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == h.prime_total);

    auto threaded = rho_histogram(spec, 2000, 3);
    CHECK(threaded.counts == rho_histogram(spec, 2000, 1).counts);
    CHECK(threaded.prime_total == 303);
}

TEST_CASE("histogram fractions, targets, and serialization") {
    RhoHistogram h;
    h.bound = 40;
    h.prime_total = 4;
    h.counts[0] = 1;
    h.counts[2] = 1;
    h.counts[13] = 2;
    CHECK(h.fraction(0) == Approx(0.25));
    CHECK(h.fraction(13) == Approx(0.5));
    CHECK_THROWS_AS(h.fraction(14), std::out_of_range);

    CHECK(RhoHistogram::target(0) == Approx(std::exp(-1.0)));
    CHECK(RhoHistogram::target(1) == Approx(std::exp(-1.0)));
    CHECK(RhoHistogram::target(3) == Approx(std::exp(-1.0) / 6.0));

    auto csv = h.to_csv();
    CHECK(csv.rfind("r,count,fraction,target\n", 0) == 0);
    CHECK(csv.find("\noverflow,2,0.5,0\n") != std::string::npos);

    auto j = nlohmann::json::parse(h.to_json_string("builtin-F"));
    CHECK(j["spec"] == "builtin-F");
    CHECK(j["primes"] == 4);
    CHECK(j["rows"].size() == 14);
    CHECK(j["rows"][2]["count"] == 1);
    CHECK(j["rows"][13]["count"] == 2);
}

TEST_CASE("linear sums vanish and quadratic sums lie on the unit circle") {
    auto linear = PseudoPolySpec::parse("poly:3,7");
    for (uint32_t p : {11u, 101u, 997u})
        for (uint64_t a = 1; a < std::min<uint32_t>(p, 12); ++a)
            CHECK(std::abs(expsum_w(linear, p, a)) < 1e-9);

    auto quad = PseudoPolySpec::parse("poly:1,0,1");
    for (uint32_t p : {3u, 11u, 101u, 997u})
        for (uint64_t a = 1; a < std::min<uint32_t>(p, 12); ++a)
            CHECK(std::abs(std::abs(expsum_w(quad, p, a)) - 1.0) < 1e-9);

    auto quad2 = PseudoPolySpec::parse("poly:5,3,2");
    for (uint64_t a = 1; a < 101; ++a)
        CHECK(std::abs(std::abs(expsum_w(quad2, 101, a)) - 1.0) < 1e-9);
}

TEST_CASE("exponential sums match per-term evaluation and conjugation symmetry") {
    auto spec = PseudoPolySpec::builtin_f();
    CHECK_THROWS_AS(expsum_w(spec, 7, 0), std::invalid_argument);
    CHECK_THROWS_AS(expsum_w(spec, 7, 14), std::invalid_argument);
    CHECK_THROWS_AS(expsum_w(spec, 8, 1), std::invalid_argument);

    for (uint64_t a : {1ull, 2ull, 57ull, 100ull}) {
        auto fast = expsum_w(spec, 101, a);
        auto slow = w_per_term(spec, 101, a);
        CHECK(std::abs(fast - slow) < 1e-10);
    }

    for (uint32_t p : {11u, 101u, 997u}) {
        double root = std::sqrt(static_cast<double>(p));
        for (uint64_t a = 1; a <= 10; ++a) {
            auto w = expsum_w(spec, p, a);
            auto wc = expsum_w(spec, p, p - a);
            CHECK(std::abs(w - std::conj(wc)) < 1e-10);
            CHECK(std::abs(w) <= root + 1e-9);
        }
    }
}

TEST_CASE("exact moment tables obey parseval and the quadratic law") {
    auto quad = PseudoPolySpec::parse("poly:1,0,1");
    auto qt = expsum_moments_exact(quad, 97, 4);
    CHECK(qt.value(0, 0).real() == Approx(1.0));
    CHECK(qt.value(1, 1).real() == Approx(1.0).epsilon(1e-9));
    CHECK(qt.value(2, 2).real() == Approx(1.0).epsilon(1e-9));
    CHECK(qt.trials() == 96);

    auto spec = PseudoPolySpec::builtin_f();
    uint32_t p = 997;
    auto table = expsum_moments_exact(spec, p, 2);

    std::vector<uint64_t> counts(p, 0);
    for (uint32_t x = 0; x < p; ++x) ++counts[int_mod(spec.value(x), p)];
    uint64_t sum_sq = 0;
    for (auto c : counts) sum_sq += c * c;
    double parseval = (static_cast<double>(sum_sq) - static_cast<double>(p)) /
                      static_cast<double>(p - 1);
    CHECK(table.value(1, 1).real() == Approx(parseval).epsilon(1e-9));
    CHECK(std::abs(table.value(1, 1).imag()) < 1e-12);
    CHECK(table.value(0, 0).real() == Approx(1.0));

    uint32_t big = 100001;
    while (!is_prime_u64(big)) ++big;
    CHECK_THROWS_AS(expsum_moments_exact(spec, big, 2), SizeGuardError);
}

TEST_CASE("sampled moments converge to the exact table and ignore thread count") {
    auto spec = PseudoPolySpec::builtin_f();
    uint32_t p = 101;
    auto exact = expsum_moments_exact(spec, p, 2);
    auto sampled = expsum_moments_sampled(spec, p, 2, 200000, 424242);
    for (int j = 0; j <= 2; ++j)
        for (int k = 0; j + k <= 2; ++k)
            CHECK(std::abs(sampled.value(j, k) - exact.value(j, k)) < 0.2);

    auto one = expsum_moments_sampled(spec, p, 4, 30000, 7, 1);
    auto four = expsum_moments_sampled(spec, p, 4, 30000, 7, 4);
    CHECK(one.to_csv() == four.to_csv());
    CHECK(one.to_json_string() == four.to_json_string());

    CHECK_THROWS_AS(expsum_moments_sampled(spec, p, 2, 0, 1), std::invalid_argument);
}

TEST_CASE("divisibility of differences holds for genuine pseudopolynomials only") {
    CHECK(hall_check(PseudoPolySpec::builtin_f(), 200));
    CHECK(hall_check(PseudoPolySpec::parse("poly:7,-3,0,2"), 100));
    CHECK(hall_check(PseudoPolySpec::parse("poly:1,0,1"), 50));

    std::vector<Int> factorials;
    Int f = 1;
    factorials.push_back(f);
    for (int n = 1; n <= 10; ++n) {
        f *= n;
        factorials.push_back(f);
    }
    CHECK_FALSE(hall_check_sequence(factorials));

    CHECK(hall_check_sequence({}));
    CHECK(hall_check_sequence({Int(42)}));
    CHECK(hall_check_sequence({Int(1), Int(2), Int(3)}));
    CHECK_FALSE(hall_check_sequence({Int(0), Int(0), Int(1)}));
}
