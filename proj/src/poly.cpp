#include "hmf/poly.hpp"

#include <algorithm>
#include <random>

#include "hmf/errors.hpp"

namespace hmf {

RPoly poly_trim(const Ring& R, RPoly f) {
  while (!f.c.empty() && R.is_zero(f.c.back())) f.c.pop_back();
  return f;
}

RPoly poly_from_coeffs(const Ring& R, std::vector<RElem> c) {
  RPoly f;
  f.c = std::move(c);
  return poly_trim(R, std::move(f));
}

RPoly poly_x(const Ring& R) { return poly_from_coeffs(R, {R.zero(), R.one()}); }

RPoly poly_const(const Ring& R, const RElem& a) { return poly_from_coeffs(R, {a}); }

RPoly poly_add(const Ring& R, const RPoly& a, const RPoly& b) {
  std::vector<RElem> c(std::max(a.c.size(), b.c.size()), R.zero());
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.c.size()) c[i] = R.add(c[i], a.c[i]);
    if (i < b.c.size()) c[i] = R.add(c[i], b.c[i]);
  }
  return poly_from_coeffs(R, std::move(c));
}

RPoly poly_sub(const Ring& R, const RPoly& a, const RPoly& b) {
  std::vector<RElem> c(std::max(a.c.size(), b.c.size()), R.zero());
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.c.size()) c[i] = R.add(c[i], a.c[i]);
    if (i < b.c.size()) c[i] = R.sub(c[i], b.c[i]);
  }
  return poly_from_coeffs(R, std::move(c));
}

RPoly poly_mul(const Ring& R, const RPoly& a, const RPoly& b) {
  if (a.c.empty() || b.c.empty()) return RPoly{};
  std::vector<RElem> c(a.c.size() + b.c.size() - 1, R.zero());
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (R.is_zero(a.c[i])) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      c[i + j] = R.add(c[i + j], R.mul(a.c[i], b.c[j]));
  }
  return poly_from_coeffs(R, std::move(c));
}

RPoly poly_monic(const Ring& R, const RPoly& a) {
  if (a.c.empty()) return a;
  RElem inv = R.inv(a.c.back());
  RPoly r = a;
  for (auto& x : r.c) x = R.mul(x, inv);
  return r;
}

std::pair<RPoly, RPoly> poly_divmod(const Ring& R, const RPoly& a, const RPoly& b) {
  if (b.c.empty()) fail(ErrorKind::Internal, "polynomial division by zero");
  RPoly rem = a;
  RPoly quo;
  quo.c.assign(a.c.size() >= b.c.size() ? a.c.size() - b.c.size() + 1 : 0, R.zero());
  RElem lead_inv = R.inv(b.c.back());
  while (rem.c.size() >= b.c.size() && !rem.c.empty()) {
    RElem q = R.mul(rem.c.back(), lead_inv);
    size_t shift = rem.c.size() - b.c.size();
    quo.c[shift] = q;
    for (size_t i = 0; i < b.c.size(); ++i)
      rem.c[shift + i] = R.sub(rem.c[shift + i], R.mul(q, b.c[i]));
    rem = poly_trim(R, std::move(rem));
  }
  return {poly_trim(R, std::move(quo)), std::move(rem)};
}

RPoly poly_gcd(const Ring& R, const RPoly& a, const RPoly& b) {
  RPoly x = a, y = b;
  while (!y.c.empty()) {
    RPoly r = poly_divmod(R, x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.c.empty() ? x : poly_monic(R, x);
}

RPoly poly_pow_mod(const Ring& R, const RPoly& base, const Int& e, const RPoly& mod) {
  RPoly r = poly_const(R, R.one());
  RPoly b = poly_divmod(R, base, mod).second;
  Int k = e;
  while (k > 0) {
    if (k % 2 == 1) r = poly_divmod(R, poly_mul(R, r, b), mod).second;
    b = poly_divmod(R, poly_mul(R, b, b), mod).second;
    k /= 2;
  }
  return r;
}

RPoly poly_derivative(const Ring& R, const RPoly& a) {
  if (a.c.size() <= 1) return RPoly{};
  std::vector<RElem> c(a.c.size() - 1, R.zero());
  for (size_t i = 1; i < a.c.size(); ++i)
    c[i - 1] = R.mul(a.c[i], R.from_int(static_cast<long>(i)));
  return poly_from_coeffs(R, std::move(c));
}

RElem poly_eval(const Ring& R, const RPoly& a, const RElem& x) {
  RElem acc = R.zero();
  for (size_t i = a.c.size(); i-- > 0;) acc = R.add(R.mul(acc, x), a.c[i]);
  return acc;
}

std::string poly_to_string(const Ring& R, const RPoly& a) {
  if (a.c.empty()) return "0";
  std::string s;
  for (size_t i = a.c.size(); i-- > 0;) {
    if (R.is_zero(a.c[i])) continue;
    if (!s.empty()) s += " + ";
    s += "(" + R.to_string(a.c[i]) + ")";
    if (i >= 1) s += "*x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

MatR poly_eval_matrix(const RPoly& f, const MatR& M) {
  const Ring& R = M.ring();
  size_t n = M.rows();
  MatR acc(R, n, n);
  for (size_t i = f.c.size(); i-- > 0;) {
    acc = acc.mul(M);
    for (size_t d = 0; d < n; ++d) acc.at(d, d) = R.add(acc.at(d, d), f.c[i]);
  }
  return acc;
}

RPoly matrix_min_poly(const MatR& M) {
  const Ring& R = M.ring();
  if (!R.is_field()) fail(ErrorKind::Unsupported, "minimal polynomial needs a field");
  if (M.rows() != M.cols()) fail(ErrorKind::Internal, "square matrix expected");
  size_t n = M.rows();
  RPoly m = poly_const(R, R.one());
  for (size_t start = 0; start < n; ++start) {
    // annihilator of e_start under M, as a kernel vector of the Krylov matrix
    std::vector<std::vector<RElem>> krylov;  // v, Mv, M^2 v, ...
    std::vector<RElem> v(n, R.zero());
    v[start] = R.one();
    krylov.push_back(v);
    for (size_t step = 0; step < n; ++step) {
      std::vector<RElem> next(n, R.zero());
      for (size_t i = 0; i < n; ++i) {
        if (R.is_zero(krylov.back()[i])) continue;
        for (size_t r = 0; r < n; ++r)
          next[r] = R.add(next[r], R.mul(M.at(r, i), krylov.back()[i]));
      }
      krylov.push_back(std::move(next));
    }
    MatR K(R, n, krylov.size());
    for (size_t j = 0; j < krylov.size(); ++j)
      for (size_t i = 0; i < n; ++i) K.at(i, j) = krylov[j][i];
    // first dependent power gives the local annihilator
    MatR W = K;
    auto piv = rref(W);
    size_t dep = 0;
    {
      std::vector<bool> is_pivot(K.cols(), false);
      for (size_t p : piv) is_pivot[p] = true;
      while (dep < K.cols() && is_pivot[dep]) ++dep;
    }
    auto sol = solve(K.columns([&] {
                       std::vector<size_t> idx;
                       for (size_t j = 0; j < dep; ++j) idx.push_back(j);
                       return idx;
                     }()),
                     krylov[dep]);
    if (!sol) fail(ErrorKind::Internal, "Krylov solve failed");
    std::vector<RElem> ann(dep + 1, R.zero());
    for (size_t j = 0; j < dep; ++j) ann[j] = R.neg((*sol)[j]);
    ann[dep] = R.one();
    RPoly local = poly_from_coeffs(R, std::move(ann));
    // m = lcm(m, local)
    RPoly g = poly_gcd(R, m, local);
    m = poly_divmod(R, poly_mul(R, m, local), g).first;
    if (m.degree() == n) break;
  }
  return poly_monic(R, m);
}

namespace {

// distinct-degree: split squarefree f into products of irreducibles of
// equal degree
std::vector<std::pair<RPoly, size_t>> distinct_degree(const Ring& R, RPoly f) {
  std::vector<std::pair<RPoly, size_t>> out;
  Int q = pow_int(R.characteristic(), R.degree());
  RPoly x = poly_x(R);
  RPoly h = x;
  size_t d = 0;
  while (f.degree() >= 2 * (d + 1)) {
    ++d;
    h = poly_pow_mod(R, h, q, f);
    RPoly g = poly_gcd(R, poly_sub(R, h, x), f);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = poly_divmod(R, f, g).first;
      h = poly_divmod(R, h, f.degree() > 0 ? f : poly_const(R, R.one())).second;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, f.degree());
  return out;
}

// equal-degree splitting (Cantor–Zassenhaus), deterministic seeding
void equal_degree_split(const Ring& R, const RPoly& f, size_t d,
                        std::vector<RPoly>& out, std::mt19937_64& rng) {
  if (f.degree() == d) {
    out.push_back(poly_monic(R, f));
    return;
  }
  Int p = R.characteristic();
  Int q = pow_int(p, R.degree());
  size_t n = f.degree();
  while (true) {
    // random polynomial of degree < n
    std::vector<RElem> c;
    for (size_t i = 0; i < n; ++i) {
      std::vector<Rat> coeffs;
      for (unsigned j = 0; j < R.degree(); ++j)
        coeffs.emplace_back(static_cast<long>(rng() % p.get_ui()));
      c.push_back(R.from_coeffs(coeffs));
    }
    RPoly a = poly_from_coeffs(R, std::move(c));
    if (a.degree() < 1 && a.c.empty()) continue;
    RPoly g = poly_gcd(R, a, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree_split(R, g, d, out, rng);
      equal_degree_split(R, poly_divmod(R, f, g).first, d, out, rng);
      return;
    }
    RPoly b;
    if (p == 2) {
      // trace map T(a) = a + a^2 + ... + a^{2^{kd-1}}
      RPoly t = a;
      RPoly acc = a;
      unsigned long e = R.degree() * d;
      for (unsigned long i = 1; i < e; ++i) {
        acc = poly_pow_mod(R, acc, Int(2), f);
        t = poly_add(R, t, acc);
      }
      b = t;
    } else {
      Int e = (pow_int(q, static_cast<unsigned long>(d)) - 1) / 2;
      b = poly_pow_mod(R, a, e, f);
      b = poly_sub(R, b, poly_const(R, R.one()));
    }
    g = poly_gcd(R, b, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree_split(R, g, d, out, rng);
      equal_degree_split(R, poly_divmod(R, f, g).first, d, out, rng);
      return;
    }
  }
}

// p-th root of f = g(x^p); valid exactly when f' = 0.
RPoly pth_root(const Ring& R, const RPoly& f) {
  Int p = R.characteristic();
  unsigned long pl = p.get_ui();
  Int q = pow_int(p, R.degree());
  std::vector<RElem> c;
  Int e = q / p;
  for (size_t i = 0; i < f.c.size(); i += pl)
    c.push_back(R.pow(f.c[i], e.get_si()));  // p-th root is x^{q/p}
  return poly_from_coeffs(R, std::move(c));
}

// distinct monic irreducible factors (no multiplicities)
void distinct_factors(const Ring& R, const RPoly& f, std::vector<RPoly>& out,
                      std::mt19937_64& rng) {
  if (f.degree() == 0) return;
  RPoly df = poly_derivative(R, f);
  if (df.is_zero()) {
    distinct_factors(R, pth_root(R, f), out, rng);
    return;
  }
  RPoly g = poly_gcd(R, f, df);
  RPoly w = poly_divmod(R, f, g).first;  // squarefree
  for (const auto& [h, d] : distinct_degree(R, poly_monic(R, w))) {
    std::vector<RPoly> irred;
    equal_degree_split(R, h, d, irred, rng);
    for (auto& e : irred) out.push_back(std::move(e));
  }
  distinct_factors(R, g, out, rng);  // deg g < deg f
}

}  // namespace

std::vector<std::pair<RPoly, int>> factor_poly_finite_field(const Ring& R,
                                                            const RPoly& f) {
  if (R.kind() != Ring::Kind::FiniteField)
    fail(ErrorKind::Unsupported, "finite-field factorization over " + R.descriptor());
  if (f.degree() < 1) return {};
  std::mt19937_64 rng(0xABCDEF12345678ULL);
  std::vector<RPoly> raw;
  distinct_factors(R, poly_monic(R, f), raw, rng);
  // dedupe, then read multiplicities off the original by trial division
  std::sort(raw.begin(), raw.end(),
            [](const RPoly& a, const RPoly& b) { return a.c < b.c; });
  raw.erase(std::unique(raw.begin(), raw.end(),
                        [](const RPoly& a, const RPoly& b) { return a.c == b.c; }),
            raw.end());
  std::vector<std::pair<RPoly, int>> out;
  for (const RPoly& h : raw) {
    int mult = 0;
    RPoly rem = poly_monic(R, f);
    while (true) {
      auto [q, r] = poly_divmod(R, rem, h);
      if (!r.is_zero()) break;
      rem = q;
      ++mult;
    }
    if (mult > 0) out.emplace_back(h, mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.c.size() != b.first.c.size())
      return a.first.c.size() < b.first.c.size();
    return a.first.c < b.first.c;
  });
  return out;
}

std::vector<RElem> poly_roots_finite_field(const Ring& R, const RPoly& f) {
  std::vector<RElem> roots;
  for (const auto& [g, mult] : factor_poly_finite_field(R, f)) {
    if (g.degree() != 1) continue;
    // monic x + c0  =>  root -c0
    roots.push_back(R.neg(g.c[0]));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

RationalSplit rational_linear_split(const Ring& R, const RPoly& f) {
  if (R.kind() != Ring::Kind::Rationals)
    fail(ErrorKind::Unsupported, "rational split over " + R.descriptor());
  RationalSplit out;
  out.cofactor = poly_monic(R, f);
  bool progress = true;
  while (progress && out.cofactor.degree() >= 1) {
    progress = false;
    // clear denominators: integer polynomial a_n x^n + ... + a_0
    Int den(1);
    for (const auto& e : out.cofactor.c) {
      auto q = R.as_rational(e);
      den = lcm(den, q->get_den());
    }
    std::vector<Int> a;
    for (const auto& e : out.cofactor.c) {
      Rat v = *R.as_rational(e) * Rat(den);
      a.push_back(v.get_num());
    }
    if (a[0] == 0) {
      out.roots.push_back(R.zero());
      out.cofactor = poly_divmod(R, out.cofactor, poly_x(R)).first;
      progress = true;
      continue;
    }
    // candidate roots p/q with p | a_0, q | a_n
    for (const Int& p : [&] {
           std::vector<Int> ds{Int(1)};
           for (auto& [pp, e] : factor_integer(a[0])) {
             size_t sz = ds.size();
             Int pw(1);
             for (int i = 0; i < e; ++i) {
               pw *= pp;
               for (size_t k = 0; k < sz; ++k) ds.push_back(ds[k] * pw);
             }
           }
           return ds;
         }()) {
      if (progress) break;
      for (const Int& q : [&] {
             std::vector<Int> ds{Int(1)};
             for (auto& [pp, e] : factor_integer(a.back())) {
               size_t sz = ds.size();
               Int pw(1);
               for (int i = 0; i < e; ++i) {
                 pw *= pp;
                 for (size_t k = 0; k < sz; ++k) ds.push_back(ds[k] * pw);
               }
             }
             return ds;
           }()) {
        if (progress) break;
        for (int sign : {1, -1}) {
          Rat cand = make_rat(sign * p, q);
          RElem val = poly_eval(R, out.cofactor, R.from_rat(cand));
          if (R.is_zero(val)) {
            out.roots.push_back(R.from_rat(cand));
            RPoly lin = poly_from_coeffs(R, {R.from_rat(-cand), R.one()});
            out.cofactor = poly_divmod(R, out.cofactor, lin).first;
            progress = true;
            break;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace hmf
