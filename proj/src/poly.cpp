#include "tel/poly.hpp"

#include <sstream>

namespace tel::category {

PolyT::PolyT(const Rat& constant) {
    if (constant != 0) coeffs_.push_back(constant);
}

PolyT::PolyT(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

PolyT PolyT::t_power(unsigned k) {
    std::vector<Rat> c(k + 1);
    c[k] = 1;
    return PolyT(std::move(c));
}

Rat PolyT::coeff(unsigned d) const {
    return d < coeffs_.size() ? coeffs_[d] : Rat(0);
}

Rat PolyT::operator()(const Rat& x) const {
    Rat acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolyT PolyT::operator-() const {
    PolyT r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

PolyT& PolyT::operator+=(const PolyT& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    strip();
    return *this;
}

PolyT& PolyT::operator-=(const PolyT& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    strip();
    return *this;
}

PolyT operator*(const PolyT& a, const PolyT& b) {
    if (a.is_zero() || b.is_zero()) return PolyT();
    std::vector<Rat> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
        for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return PolyT(std::move(c));
}

std::string PolyT::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int d = degree(); d >= 0; --d) {
        Rat c = coeffs_[static_cast<size_t>(d)];
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        if (first && c < 0) os << "-";
        first = false;
        Rat a = abs(c);
        if (a != 1 || d == 0) os << rat_to_string(a);
        if (d > 0) {
            if (a != 1) os << "*";
            os << "t";
            if (d > 1) os << "^" << d;
        }
    }
    return os.str();
}

void PolyT::strip() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

}  // namespace tel::category
