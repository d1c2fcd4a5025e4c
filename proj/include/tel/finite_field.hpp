#pragma once

#include <cstdint>
#include <vector>

namespace tel::randomlab {

// Arithmetic table for F_q. Prime q uses modular arithmetic directly; the
// prime powers 4, 8, 9 use precomputed polynomial tables (elements are
// encoded as base-p digit strings of their coefficient vectors, so 0 and 1
// are the additive and multiplicative identities). Any other q is rejected.
class FiniteField {
public:
    explicit FiniteField(int q);

    int order() const { return q_; }
    int characteristic() const { return p_; }

    uint8_t add(uint8_t a, uint8_t b) const { return add_[idx(a, b)]; }
    uint8_t sub(uint8_t a, uint8_t b) const { return add_[idx(a, neg_[b])]; }
    uint8_t mul(uint8_t a, uint8_t b) const { return mul_[idx(a, b)]; }
    uint8_t neg(uint8_t a) const { return neg_[a]; }
    uint8_t inv(uint8_t a) const;  // throws on 0

private:
    size_t idx(uint8_t a, uint8_t b) const {
        return static_cast<size_t>(a) * q_ + b;
    }

    int q_;
    int p_;
    std::vector<uint8_t> add_;
    std::vector<uint8_t> mul_;
    std::vector<uint8_t> neg_;
    std::vector<uint8_t> inv_;
};

// Dense matrix over F_q, row major, entries in [0, q).
struct FqMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<uint8_t> data;

    FqMatrix() = default;
    FqMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0) {}

    uint8_t& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    uint8_t at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    static FqMatrix identity(int n);
    bool operator==(const FqMatrix&) const = default;
};

FqMatrix fq_mul(const FiniteField& f, const FqMatrix& a, const FqMatrix& b);
FqMatrix fq_sub(const FiniteField& f, const FqMatrix& a, const FqMatrix& b);

// Rank by Gaussian elimination over the field.
int fq_rank(const FiniteField& f, FqMatrix m);

// Whether a*x = b has a solution (b as column vector).
bool fq_solvable(const FiniteField& f, const FqMatrix& a, const std::vector<uint8_t>& b);

}  // namespace tel::randomlab
