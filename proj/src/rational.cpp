#include "hmf/rational.hpp"

#include <algorithm>
#include <map>

#include "hmf/errors.hpp"

namespace hmf {

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) fail(ErrorKind::Validation, "rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat rat_from_string(const std::string& s) {
  std::string t;
  t.reserve(s.size());
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) fail(ErrorKind::Validation, "empty rational literal");
  for (size_t i = 0; i < t.size(); ++i) {
    char c = t[i];
    bool ok = isdigit(static_cast<unsigned char>(c)) || c == '/' ||
              ((c == '-' || c == '+') && (i == 0 || t[i - 1] == '/'));
    if (!ok) fail(ErrorKind::Validation, "bad rational literal: " + s);
  }
  Rat r;
  if (r.set_str(t, 10) != 0 || r.get_den() == 0)
    fail(ErrorKind::Validation, "bad rational literal: " + s);
  r.canonicalize();
  return r;
}

Int isqrt(const Int& n) {
  if (n < 0) fail(ErrorKind::Internal, "isqrt of negative");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Int& n, Int* root) {
  if (n < 0) return false;
  Int r = isqrt(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rat pow_rat(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (e < 0) {
    if (base == 0) fail(ErrorKind::Validation, "inverse of zero");
    return pow_rat(Rat(1) / base, -e);
  }
  Rat num(pow_int(base.get_num(), static_cast<unsigned long>(e)));
  Rat den(pow_int(base.get_den(), static_cast<unsigned long>(e)));
  return num / den;
}

int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

bool is_probable_prime(const Int& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

// Pollard rho (Brent variant) for composites with no small factors.
Int pollard_rho(const Int& n) {
  if (n % 2 == 0) return Int(2);
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0x9e3779b9UL);
  while (true) {
    Int y = rng.get_z_range(n - 3) + 2;
    Int c = rng.get_z_range(n - 2) + 1;
    Int x = y, d(1), q(1), ys(0);
    long r = 1, m = 64;
    auto step = [&](Int& v) { v = (v * v + c) % n; };
    while (d == 1) {
      x = y;
      for (long i = 0; i < r; ++i) step(y);
      long k = 0;
      while (k < r && d == 1) {
        ys = y;
        long lim = std::min(m, r - k);
        for (long i = 0; i < lim; ++i) {
          step(y);
          q = q * abs(x - y) % n;
        }
        mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
      }
      r *= 2;
    }
    if (d == n) {
      d = 1;
      while (d == 1) {
        step(ys);
        Int diff = abs(x - ys);
        mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (d != n) return d;
  }
}

void factor_rec(const Int& n, std::map<Int, int>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n]++;
    return;
  }
  Int d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<Int, int>> factor_integer(const Int& n) {
  if (n == 0) fail(ErrorKind::Validation, "factor of zero");
  Int m = abs(n);
  std::map<Int, int> acc;
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
    while (m % p == 0) {
      acc[Int(p)]++;
      m /= p;
    }
  }
  factor_rec(m, acc);
  return {acc.begin(), acc.end()};
}

std::vector<Int> prime_divisors(const Int& n) {
  std::vector<Int> out;
  for (auto& [p, e] : factor_integer(n)) out.push_back(p);
  return out;
}

std::vector<Int> primes_up_to(long bound) {
  std::vector<Int> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(static_cast<size_t>(bound) + 1, true);
  for (long i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.emplace_back(i);
    for (long j = 2 * i; j <= bound; j += i) sieve[j] = false;
  }
  return out;
}

}  // namespace hmf
