#pragma once

#include <vector>

#include "tel/bigint.hpp"

namespace tel::category {

// Element of Q[t], dense coefficients by degree, trailing zeros stripped.
class PolyT {
public:
    PolyT() = default;
    PolyT(const Rat& constant);                 // NOLINT: implicit by design
    PolyT(long constant) : PolyT(Rat(constant)) {}
    explicit PolyT(std::vector<Rat> coeffs);
    static PolyT t_power(unsigned k);

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    Rat coeff(unsigned d) const;
    const std::vector<Rat>& coeffs() const { return coeffs_; }

    Rat operator()(const Rat& x) const;

    PolyT operator-() const;
    PolyT& operator+=(const PolyT& o);
    PolyT& operator-=(const PolyT& o);
    friend PolyT operator+(PolyT a, const PolyT& b) { return a += b; }
    friend PolyT operator-(PolyT a, const PolyT& b) { return a -= b; }
    friend PolyT operator*(const PolyT& a, const PolyT& b);

    friend bool operator==(const PolyT&, const PolyT&) = default;

    // Text form like "2*t^3 - 1/2*t + 5", for diagnostics.
    std::string str() const;

private:
    void strip();
    std::vector<Rat> coeffs_;
};

}  // namespace tel::category
