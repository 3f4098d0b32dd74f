#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace hmf {

using Int = mpz_class;
using Rat = mpq_class;

// mpq_class(n, d) does not canonicalize; these helpers always do.
Rat make_rat(const Int& num, const Int& den);
inline Rat make_rat(long num, long den = 1) { return make_rat(Int(num), Int(den)); }

// "p/q" or "p"; no decimals anywhere in the exchange formats.
std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s);

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// floor(sqrt(n)) for n >= 0.
Int isqrt(const Int& n);
bool is_square(const Int& n, Int* root = nullptr);

Int floor_div(const Int& a, const Int& b);
inline Int rat_floor(const Rat& r) { return floor_div(r.get_num(), r.get_den()); }

Int pow_int(const Int& base, unsigned long e);
Rat pow_rat(const Rat& base, long e);  // negative e inverts (base != 0)

// Kronecker symbol (a|n).
int kronecker(const Int& a, const Int& n);

bool is_probable_prime(const Int& n);

// Full factorization of |n| (trial division + Pollard rho), n != 0.
// Returns (prime, exponent) pairs with primes ascending.
std::vector<std::pair<Int, int>> factor_integer(const Int& n);

// Distinct primes dividing |n|, ascending; n != 0.
std::vector<Int> prime_divisors(const Int& n);

// Primes in [2, bound] ascending.
std::vector<Int> primes_up_to(long bound);

}  // namespace hmf
