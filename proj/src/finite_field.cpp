#include "tel/finite_field.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace tel::randomlab {

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Reduction polynomials for the supported prime-power orders, as the
// coefficient vector of x^k in terms of lower powers.
//   GF(4):  x^2 = x + 1        over F_2
//   GF(8):  x^3 = x + 1        over F_2
//   GF(9):  x^2 = -1 = 2       over F_3
std::vector<int> reduction_tail(int q) {
    if (q == 4) return {1, 1};
    if (q == 8) return {1, 1, 0};
    if (q == 9) return {2, 0};
    throw std::logic_error("no reduction polynomial");
}

std::array<int, 4> digits_of(int value, int p) {
    std::array<int, 4> d{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        d[i] = value % p;
        value /= p;
    }
    return d;
}

int value_of(const std::array<int, 4>& d, int p) {
    int v = 0;
    for (int i = 3; i >= 0; --i) v = v * p + d[i];
    return v;
}

}  // namespace

FiniteField::FiniteField(int q) : q_(q) {
    if (is_prime(q)) {
        p_ = q;
    } else if (q == 4 || q == 8 || q == 9) {
        p_ = (q == 9) ? 3 : 2;
    } else {
        throw std::invalid_argument("unsupported field order " + std::to_string(q));
    }

    int deg = 1;
    while (p_ > 1 && [&] {
        int pw = 1;
        for (int i = 0; i < deg; ++i) pw *= p_;
        return pw;
    }() < q_)
        ++deg;

    add_.assign(static_cast<size_t>(q_) * q_, 0);
    mul_.assign(static_cast<size_t>(q_) * q_, 0);
    neg_.assign(q_, 0);
    inv_.assign(q_, 0);

    for (int a = 0; a < q_; ++a) {
        for (int b = 0; b < q_; ++b) {
            if (p_ == q_) {
                add_[idx(a, b)] = static_cast<uint8_t>((a + b) % p_);
                mul_[idx(a, b)] = static_cast<uint8_t>((a * b) % p_);
                continue;
            }
            auto da = digits_of(a, p_);
            auto db = digits_of(b, p_);
            std::array<int, 4> sum{};
            for (int i = 0; i < 4; ++i) sum[i] = (da[i] + db[i]) % p_;
            add_[idx(a, b)] = static_cast<uint8_t>(value_of(sum, p_));

            std::array<int, 8> prod{};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
            auto tail = reduction_tail(q_);
            for (int k = 7; k >= deg; --k) {
                int c = prod[k];
                if (c == 0) continue;
                prod[k] = 0;
                for (int i = 0; i < deg; ++i)
                    prod[k - deg + i] = (prod[k - deg + i] + c * tail[i]) % p_;
            }
            std::array<int, 4> red{prod[0], prod[1], prod[2], prod[3]};
            mul_[idx(a, b)] = static_cast<uint8_t>(value_of(red, p_));
        }
    }

    for (int a = 0; a < q_; ++a) {
        for (int b = 0; b < q_; ++b) {
            if (add_[idx(a, b)] == 0) neg_[a] = static_cast<uint8_t>(b);
            if (a != 0 && mul_[idx(a, b)] == 1) inv_[a] = static_cast<uint8_t>(b);
        }
    }
}

uint8_t FiniteField::inv(uint8_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return inv_[a];
}

FqMatrix FqMatrix::identity(int n) {
    FqMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FqMatrix fq_mul(const FiniteField& f, const FqMatrix& a, const FqMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("shape mismatch in product");
    FqMatrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            uint8_t aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols; ++j)
                out.at(i, j) = f.add(out.at(i, j), f.mul(aik, b.at(k, j)));
        }
    return out;
}

FqMatrix fq_sub(const FiniteField& f, const FqMatrix& a, const FqMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("shape mismatch in difference");
    FqMatrix out(a.rows, a.cols);
    for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = f.sub(a.data[i], b.data[i]);
    return out;
}

namespace {

// Row echelon over F_q; returns rank. Operates on the first `cols` columns
// but eliminates across the full row width, so an augmented column rides
// along untouched by pivot selection.
int echelon(const FiniteField& f, FqMatrix& m, int cols) {
    int rank = 0;
    for (int c = 0; c < cols && rank < m.rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < m.rows; ++r)
            if (m.at(r, c) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pivot, j), m.at(rank, j));
        uint8_t scale = f.inv(m.at(rank, c));
        for (int j = 0; j < m.cols; ++j) m.at(rank, j) = f.mul(m.at(rank, j), scale);
        for (int r = 0; r < m.rows; ++r) {
            if (r == rank) continue;
            uint8_t factor = m.at(r, c);
            if (factor == 0) continue;
            for (int j = 0; j < m.cols; ++j)
                m.at(r, j) = f.sub(m.at(r, j), f.mul(factor, m.at(rank, j)));
        }
        ++rank;
    }
    return rank;
}

}  // namespace

int fq_rank(const FiniteField& f, FqMatrix m) { return echelon(f, m, m.cols); }

bool fq_solvable(const FiniteField& f, const FqMatrix& a, const std::vector<uint8_t>& b) {
    if (static_cast<int>(b.size()) != a.rows)
        throw std::invalid_argument("right-hand side length mismatch");
    FqMatrix aug(a.rows, a.cols + 1);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols) = b[static_cast<size_t>(i)];
    }
    echelon(f, aug, a.cols);
    for (int i = 0; i < aug.rows; ++i) {
        bool lhs_zero = true;
        for (int j = 0; j < a.cols; ++j)
            if (aug.at(i, j) != 0) {
                lhs_zero = false;
                break;
            }
        if (lhs_zero && aug.at(i, a.cols) != 0) return false;
    }
    return true;
}

}  // namespace tel::randomlab
