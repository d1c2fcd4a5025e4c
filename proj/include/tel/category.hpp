#pragma once

#include <map>
#include <string>
#include <vector>

#include "tel/bigint.hpp"
#include "tel/poly.hpp"
#include "tel/set_partition.hpp"

namespace tel::category {

using combinatorics::SetPartition;

// Result of gluing a partition of X|Y with one of Y|Z along Y: the induced
// partition of X|Z plus the count of merged classes that contain only
// Y-elements (the exponent of t picked up by composition).
struct Glued {
    SetPartition partition;
    int gamma = 0;
};

Glued glue(const SetPartition& alpha, int x, int y, const SetPartition& beta, int z);

// Morphism X -> Y in the partition category with coefficients in Q[t]:
// a finite Q[t]-linear combination of partitions of X|Y, stored sparsely.
// X-elements occupy indices 0..|X|-1, Y-elements |X|..|X|+|Y|-1.
class Morphism {
public:
    Morphism(int source_size, int target_size);

    static Morphism basis(int source_size, int target_size, const SetPartition& p,
                          PolyT coeff = PolyT(1));
    static Morphism identity(int n);
    // Both pair element i of one copy of X with element i of the other.
    static Morphism ev(int n);    // X|X -> empty
    static Morphism coev(int n);  // empty -> X|X
    // The morphism Y -> X attached contravariantly to a set map f: X -> Y,
    // f given by images f[i] in {0..target_size-1}.
    static Morphism from_map(const std::vector<int>& f, int target_size);

    int source_size() const { return src_; }
    int target_size() const { return tgt_; }
    const std::map<SetPartition, PolyT>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }
    PolyT coeff(const SetPartition& p) const;

    Morphism& add_term(const SetPartition& p, const PolyT& c);
    // Coefficients evaluated at t = value (all resulting terms constant).
    Morphism evaluated_at(const Rat& value) const;

    Morphism operator-() const;
    Morphism& operator+=(const Morphism& o);
    Morphism& operator-=(const Morphism& o);
    friend Morphism operator+(Morphism a, const Morphism& b) { return a += b; }
    friend Morphism operator-(Morphism a, const Morphism& b) { return a -= b; }
    friend Morphism operator*(const PolyT& c, const Morphism& m);

    friend bool operator==(const Morphism&, const Morphism&) = default;

private:
    int src_ = 0;
    int tgt_ = 0;
    std::map<SetPartition, PolyT> terms_;
};

Morphism compose(const Morphism& later, const Morphism& first);
Morphism tensor(const Morphism& a, const Morphism& b);
Morphism transpose(const Morphism& a);

// Hom-space dimension at generic t: bell(|X| + |Y|).
Int hom_dim_generic(int x, int y);

// dim Hom(1, M^(tensor k)) in Rep(S_n), M the n-point permutation module:
// partitions of a k-set with at most n blocks.
Int hom_dim_repsn_unit_std(unsigned k, unsigned n);

// Exact rank of the bell(k) x bell(k) pairing matrix G[a,b] = n^(number of
// blocks of the join of a and b), by fraction-free elimination.
// Refuses k > 10 unless the size guard is off.
Int gram_rank_at(unsigned k, long n);

// Fraction-free row elimination rank of an integer matrix (exposed for the
// CLI and for cross-checks against rational elimination).
Int integer_matrix_rank(std::vector<std::vector<Int>> m);

// {"source_size":., "target_size":., "terms":[{"rgs":[..],"coeffs":["1","2/3",..]}]}
// with coefficient strings listed by degree.
std::string to_json_string(const Morphism& m);
Morphism morphism_from_json_string(const std::string& text);

}  // namespace tel::category
