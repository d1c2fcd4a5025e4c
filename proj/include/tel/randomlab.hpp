#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tel/bigint.hpp"
#include "tel/combinatorics.hpp"
#include "tel/finite_field.hpp"
#include "tel/measures.hpp"
#include "tel/rng.hpp"

namespace tel::randomlab {

// Integer-valued sampling result. Moments derived from the histogram are
// exact rationals, so reports do not depend on summation order.
struct EmpiricalDistribution {
    std::string generator;
    uint64_t seed = 0;
    uint64_t trials = 0;
    std::map<int64_t, uint64_t> histogram;

    void add(int64_t value, uint64_t count = 1) {
        histogram[value] += count;
        trials += count;
    }
    void merge(const EmpiricalDistribution& other);

    Rat exact_moment(int k) const;  // sum count * value^k / trials
    double moment(int k) const { return rat_to_double(exact_moment(k)); }
    std::vector<int64_t> support() const;

    // Real moment table through max_order, carrying trials and support.
    measures::MomentTable to_moment_table(int max_order) const;

    std::string to_csv() const;  // header "value,count"
    std::string to_json_string() const;
};

// ---- Symmetric group ----

// Uniform permutation of {0..n-1} by Fisher-Yates.
std::vector<int> sample_permutation(int n, StreamRng& rng);
int fix_count(const std::vector<int>& perm);
// Number of cycles of each length 1..imax.
std::vector<int64_t> cycle_counts(const std::vector<int>& perm, int imax);

// P[fix = r] for r = 0..n, and E[fix^k] = partitions of a k-set into at
// most n blocks. Both exact.
std::vector<Rat> exact_fix_distribution(int n);
Rat exact_fix_moment(int n, int k);

EmpiricalDistribution perm_fix_experiment(int n, uint64_t trials, uint64_t seed,
                                          int threads = 1);

struct CycleExperiment {
    int n = 0;
    int imax = 0;
    uint64_t trials = 0;
    uint64_t seed = 0;
    // per_cycle[i-1] is the histogram of the number of i-cycles.
    std::vector<EmpiricalDistribution> per_cycle;
    // Estimates of E[prod l_i^{k_i}] keyed by the exponent vector, for all
    // exponent vectors with total degree 1..4 over the first min(imax, 6)
    // cycle lengths.
    std::map<std::vector<int>, Rat> joint_moments;
};
CycleExperiment cycle_poisson_experiment(int n, int imax, uint64_t trials, uint64_t seed,
                                         int threads = 1);

// ---- Matrix groups over finite fields ----

// Uniform element of GL_n(F_q) by rejection from uniform matrices; throws
// after 10^4 consecutive singular draws.
FqMatrix sample_gl(int n, const FiniteField& f, StreamRng& rng);
// q^(dim ker(g - I)).
int64_t gl_fix_size(const FiniteField& f, const FqMatrix& g);

struct AffineMap {
    FqMatrix a;
    std::vector<uint8_t> b;
};
AffineMap sample_aff(int n, const FiniteField& f, StreamRng& rng);
// Fixed vectors solve (A - I)x = -b: q^(n - rank) when solvable, else 0.
int64_t aff_fix_size(const FiniteField& f, const AffineMap& g);

EmpiricalDistribution gl_fix_experiment(int n, int q, uint64_t trials, uint64_t seed,
                                        int threads = 1);
EmpiricalDistribution aff_fix_experiment(int n, int q, uint64_t trials, uint64_t seed,
                                         int threads = 1);

// Full enumerations of GL_n(F_q) / Aff_n(F_q); trials is the group order.
// Guarded for q^(n^2) (resp. q^(n^2+n)) up to 2^22.
EmpiricalDistribution gl_fix_exact(int n, int q);
EmpiricalDistribution aff_fix_exact(int n, int q);

// ---- Unitary group ----

// Haar-distributed unitary: complex Ginibre matrix (entries drawn row by
// row), Householder QR, then each Q column is rotated by the phase of the
// matching R diagonal entry so the implicit R has positive diagonal.
Eigen::MatrixXcd sample_unitary(int n, StreamRng& rng);

// Empirical mixed moments E[Tr(U)^a conj(Tr(U))^b] for a+b <= max_order.
measures::MomentTable unitary_trace_experiment(int n, int max_order, uint64_t trials,
                                               uint64_t seed, int threads = 1);

// ---- Character moments ----

// E[chi_{lambda(n)}^a] over uniform S_n, summed exactly over cycle types:
// lambda(n) means lambda padded with a leading part to total n. Requires
// n >= weight(lambda) + largest part.
Rat character_moment_exact(const combinatorics::IntegerPartition& lambda, int n, int a);

struct StabilizationReport {
    combinatorics::IntegerPartition lambda;
    int a = 0;
    int n_start = 0;
    int bound = 0;  // 4 * a * weight(lambda) - 1
    std::vector<std::pair<int, Rat>> values;
    int observed = 0;  // first n from which the value is constant
    Rat limit;
    bool within_bound = false;
};
// Tracks the exact moment for n = n_start .. max(bound, n_start) + extra
// and reports where it stabilizes.
StabilizationReport character_moment_stabilization(
    const combinatorics::IntegerPartition& lambda, int a, int extra = 3);

// Histogram of chi_{lambda(n)} over sampled permutations.
EmpiricalDistribution character_mc_experiment(const combinatorics::IntegerPartition& lambda,
                                              int n, uint64_t trials, uint64_t seed,
                                              int threads = 1);

}  // namespace tel::randomlab
