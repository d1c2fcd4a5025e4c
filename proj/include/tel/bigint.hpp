#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace tel {

using Int = mpz_class;
using Rat = mpq_class;

Int factorial(unsigned long n);
Int binomial(unsigned long n, unsigned long k);
Int int_pow(const Int& base, unsigned long e);

// mpq_class(num, den) does not reduce; this does.
Rat make_rat(long num, long den);

// Canonical text form: "p" for integers, "p/q" otherwise (q > 0, gcd(p,q)=1).
std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s);

double rat_to_double(const Rat& r);

}  // namespace tel
