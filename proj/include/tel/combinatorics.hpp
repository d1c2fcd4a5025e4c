#pragma once

#include <compare>
#include <map>
#include <vector>

#include "tel/bigint.hpp"
#include "tel/set_partition.hpp"

namespace tel::combinatorics {

// Number of partitions of a k-set, by the binomial recurrence
// a_{k+1} = sum_{r<=k} C(k,r) a_r.
Int bell(unsigned k);

// Partitions of a k-set into exactly j blocks.
Int stirling2(unsigned k, unsigned j);

// Partitions of a k-set into at most n blocks, sum_{j<=n} stirling2(k,j).
Int partitions_with_at_most(unsigned k, unsigned n);

// q-binomial coefficient: number of j-dimensional subspaces of F_q^m.
Int gauss_binomial(unsigned m, unsigned j, unsigned long q);

// All subspaces of F_q^m, respectively all nonempty affine subspaces.
Int count_subspaces(unsigned m, unsigned long q);
Int count_affine_subspaces(unsigned m, unsigned long q);

// Derangement count, !m = m*!(m-1) + (-1)^m.
Int subfactorial(unsigned m);

// Permutations of an n-set with exactly r fixed points.
Int rencontres(unsigned n, unsigned r);

// Conjugacy class of S_n, stored as cycle-length multiplicities.
class CycleType {
public:
    CycleType() = default;
    static CycleType from_multiplicities(int n, std::map<int, int> mult);
    static CycleType from_cycle_lengths(const std::vector<int>& lengths);

    int n() const { return n_; }
    // Multiplicity of cycle length i (zero entries are not stored).
    const std::map<int, int>& multiplicities() const { return mult_; }
    int multiplicity(int i) const;
    int fixed_points() const { return multiplicity(1); }
    // Cycle lengths expanded and sorted in decreasing order.
    std::vector<int> lengths_desc() const;
    Int class_size() const;

    friend bool operator==(const CycleType&, const CycleType&) = default;

private:
    int n_ = 0;
    std::map<int, int> mult_;
};

std::vector<CycleType> enumerate_cycle_types(int n);

// Weakly decreasing positive parts.
class IntegerPartition {
public:
    IntegerPartition() = default;
    explicit IntegerPartition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int weight() const { return weight_; }
    int length() const { return static_cast<int>(parts_.size()); }
    // The partition (n - weight, parts...); requires n - weight >= largest part.
    IntegerPartition padded(int n) const;

    friend bool operator==(const IntegerPartition&, const IntegerPartition&) = default;
    friend std::strong_ordering operator<=>(const IntegerPartition& a,
                                            const IntegerPartition& b) {
        return a.parts_ <=> b.parts_;
    }

private:
    std::vector<int> parts_;
    int weight_ = 0;
};

// All partitions of n, largest part first within each, in decreasing
// lexicographic order ((n) first, (1,...,1) last).
std::vector<IntegerPartition> enumerate_integer_partitions(int n);

// Irreducible character of S_n indexed by lambda (a partition of n),
// evaluated at class mu, via border-strip removal on beta-sets.
Int character_value(const IntegerPartition& lambda, const CycleType& mu);

}  // namespace tel::combinatorics
