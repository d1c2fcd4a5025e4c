#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tel/bigint.hpp"
#include "tel/measures.hpp"
#include "tel/rng.hpp"

namespace tel::arith {

// Integer sequence with polynomial-style divisibility (m-n) | (a_m - a_n),
// so reduction mod p is well defined. Either the built-in sequence
// F(n) = n*F(n-1) + 1, F(0) = 1, or a genuine integer polynomial given by
// ascending coefficients.
class PseudoPolySpec {
public:
    static PseudoPolySpec builtin_f();
    static PseudoPolySpec polynomial(std::vector<Int> coeffs);
    // "builtin-F" or "poly:c0,c1,...".
    static PseudoPolySpec parse(const std::string& text);

    bool is_builtin() const { return builtin_; }
    const std::vector<Int>& coefficients() const { return coeffs_; }
    Int value(unsigned long n) const;
    std::string label() const;

private:
    PseudoPolySpec() = default;
    bool builtin_ = true;
    std::vector<Int> coeffs_;
};

// ---- Primes ----

bool is_prime_u64(uint64_t n);
// Segmented sieve; visits primes in increasing order.
void for_each_prime(uint64_t bound, const std::function<void(uint64_t)>& fn);
std::vector<uint32_t> primes_up_to(uint64_t bound);
uint64_t prime_count(uint64_t bound);

// ---- Root counting ----

// #{x in [0, p-1] : spec(x) = 0 mod p}; one O(p) pass (Montgomery
// arithmetic for the built-in recurrence).
uint32_t rho(const PseudoPolySpec& spec, uint32_t p);

struct RhoHistogram {
    static constexpr int kMaxR = 12;  // counts[13] buckets everything above

    uint64_t bound = 0;
    uint64_t prime_total = 0;
    std::vector<uint64_t> counts = std::vector<uint64_t>(kMaxR + 2, 0);

    double fraction(int r) const;
    static double target(int r);  // e^{-1} / r!
    // rows r,count,fraction,target (last row labeled "overflow")
    std::string to_csv() const;
    std::string to_json_string(const std::string& spec_label) const;
};

RhoHistogram rho_histogram(const PseudoPolySpec& spec, uint64_t bound, int threads = 1);

// ---- Exponential sums ----

// W(a; p) = p^{-1/2} sum_x e(a*spec(x)/p), x over [0, p-1]. Requires
// a != 0 mod p. Always |W| <= sqrt(p). Terms come from a precomputed
// long double root-of-unity table and are added with compensated
// summation, so the rounding error per sum stays below about p ulps
// of long double, far under double precision after the p^{-1/2} scale.
std::complex<double> expsum_w(const PseudoPolySpec& spec, uint32_t p, uint64_t a);

// Mixed moments (1/(p-1)) sum_{a=1}^{p-1} W^j conj(W)^k for j+k <= max_order,
// from the value histogram of spec mod p. O(p^2); refuses p > 10^5 unless
// the size guard is off (use the sampled variant instead).
measures::MomentTable expsum_moments_exact(const PseudoPolySpec& spec, uint32_t p,
                                           int max_order);
// Same moments averaged over `count` uniformly sampled a's.
measures::MomentTable expsum_moments_sampled(const PseudoPolySpec& spec, uint32_t p,
                                             int max_order, uint64_t count, uint64_t seed,
                                             int threads = 1);

// ---- Hall divisibility ----

// (m - n) | (a_m - a_n) for all 0 <= n < m <= n_max, in exact integers.
bool hall_check(const PseudoPolySpec& spec, int n_max);
bool hall_check_sequence(const std::vector<Int>& values);

}  // namespace tel::arith
