#include "hmf/field_context.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "hmf/errors.hpp"

namespace hmf {

namespace {

struct Form {
  Int A, B, C;
  bool operator<(const Form& o) const {
    return std::tie(A, B, C) < std::tie(o.A, o.B, o.C);
  }
  bool operator==(const Form& o) const { return A == o.A && B == o.B && C == o.C; }
};

bool is_reduced(const Form& f, const Int& disc) {
  // |sqrt(disc) - 2|A|| < B < sqrt(disc), all comparisons exact.
  if (f.B <= 0) return false;
  if (f.B * f.B >= disc) return false;
  Int twoA = 2 * abs(f.A);
  // need (2|A| - B)^2 < disc when 2|A| > B, and disc < (2|A| + B)^2 always
  if (twoA > f.B && (twoA - f.B) * (twoA - f.B) >= disc) return false;
  if ((twoA + f.B) * (twoA + f.B) <= disc) return false;
  return true;
}

Form rho(const Form& f, const Int& disc, const Int& s) {
  // successor (C, B', C') with B' = s - ((s + B) mod 2|C|)
  Int twoC = 2 * abs(f.C);
  Int r = (s + f.B) % twoC;
  if (r < 0) r += twoC;
  Int Bp = s - r;
  Int Cp = (Bp * Bp - disc) / (4 * f.C);
  return Form{f.C, Bp, Cp};
}

}  // namespace

long narrow_class_number_by_forms(const Int& disc) {
  if (disc <= 0) fail(ErrorKind::Validation, "expected positive discriminant");
  Int s = isqrt(disc);
  std::set<Form> reduced;
  for (Int B = (disc % 2 == 0) ? Int(2) : Int(1); B * B < disc; B += 2) {
    Int M4 = B * B - disc;  // = 4AC < 0
    if (M4 % 4 != 0) continue;
    Int M = M4 / 4;
    Int absM = abs(M);
    std::vector<Int> divs;
    for (Int d = 1; d * d <= absM; ++d) {
      if (absM % d == 0) {
        divs.push_back(d);
        if (d * d != absM) divs.push_back(absM / d);
      }
    }
    for (const Int& d : divs) {
      for (int sa : {1, -1}) {
        Form f{sa * d, B, M / (sa * d)};
        if (is_reduced(f, disc)) reduced.insert(f);
      }
    }
  }
  long cycles = 0;
  std::set<Form> seen;
  for (const Form& f : reduced) {
    if (seen.count(f)) continue;
    ++cycles;
    Form cur = f;
    while (!seen.count(cur)) {
      seen.insert(cur);
      cur = rho(cur, disc, s);
      if (!reduced.count(cur)) fail(ErrorKind::Internal, "rho left the reduced set");
    }
  }
  return cycles;
}

FieldContext::FieldContext(const QuadraticField& F)
    : F_(F), units_(fundamental_unit(F)) {
  build_narrow_class_data();
}

std::shared_ptr<const FieldContext> FieldContext::get(const QuadraticField& F) {
  static std::mutex mu;
  static std::map<Int, std::shared_ptr<const FieldContext>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(F.d);
  if (it != cache.end()) return it->second;
  auto ctx = std::make_shared<FieldContext>(F);
  cache[F.d] = ctx;
  return ctx;
}

std::vector<Ideal> FieldContext::ideals_up_to(long B) const {
  if (B < 1) fail(ErrorKind::Validation, "ideal bound must be >= 1");
  std::vector<std::pair<Ideal, Int>> primes;  // (prime ideal, norm)
  for (const Int& p : primes_up_to(B - 1)) {
    for (const PrimeIdeal& P : primes_above(F_, p)) {
      Int nrm = ideal_norm(P.ideal).get_num();
      if (nrm < B) primes.emplace_back(P.ideal, nrm);
    }
  }
  std::sort(primes.begin(), primes.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second < y.second;
    return x.first < y.first;
  });

  std::vector<Ideal> out;
  Ideal unit;  // O_K
  // DFS over the prime list, multiplying in powers while the norm stays < B.
  auto rec = [&](auto&& self, size_t idx, const Ideal& cur, const Int& nrm) -> void {
    out.push_back(cur);
    for (size_t i = idx; i < primes.size(); ++i) {
      Int pnrm = nrm * primes[i].second;
      if (pnrm >= B) break;  // prime norms ascend
      Ideal pw = cur;
      while (pnrm < B) {
        pw = ideal_mul(F_, pw, primes[i].first);
        self(self, i + 1, pw, pnrm);
        pnrm *= primes[i].second;
      }
    }
  };
  rec(rec, 0, unit, Int(1));

  std::sort(out.begin(), out.end(), [](const Ideal& x, const Ideal& y) {
    Rat nx = ideal_norm(x), ny = ideal_norm(y);
    if (nx != ny) return nx < ny;
    return x < y;
  });
  return out;
}

IdealFactorization FieldContext::factorization(const Ideal& A) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = factor_cache_.find(A);
    if (it != factor_cache_.end()) return it->second;
  }
  IdealFactorization f = factor_ideal(F_, A);
  std::lock_guard<std::mutex> lock(mu_);
  factor_cache_[A] = f;
  return f;
}

std::vector<Ideal> FieldContext::divisors(const Ideal& A) const {
  IdealFactorization f = factorization(A);
  std::vector<Ideal> out{Ideal()};
  for (const auto& [P, e] : f) {
    std::vector<Ideal> next;
    Ideal power;  // O_K
    for (int i = 0; i <= e; ++i) {
      for (const Ideal& d : out) next.push_back(ideal_mul(F_, d, power));
      if (i < e) power = ideal_mul(F_, power, P.ideal);
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end(), [](const Ideal& x, const Ideal& y) {
    Rat nx = ideal_norm(x), ny = ideal_norm(y);
    if (nx != ny) return nx < ny;
    return x < y;
  });
  return out;
}

std::vector<FieldElement> FieldContext::points_in_box(const Ideal& t,
                                                      const FieldElement& corner) const {
  std::vector<FieldElement> out;
  if (embedding_sign(F_, corner, 1) <= 0 || embedding_sign(F_, corner, 2) <= 0)
    return out;  // empty box
  Rat U = embedding_abs_bound(F_, corner);
  auto [alpha, beta] = ideal_basis(t);
  // v = m*alpha + n*beta with alpha rational:
  //   v1 - v2 = n * c * sqrt(disc)      => |n| <= (U1+U2) / (c*sqrt(disc))
  //   v1 + v2 = 2 m alpha + n c (2b+t)  => bound on |m|
  Rat cc = t.c;
  Int sdisc = isqrt(F_.discriminant);  // sqrt(disc) >= sdisc >= 1
  Rat nmax_r = (2 * U) / (cc * Rat(sdisc));
  Int nmax = rat_floor(nmax_r) + 1;
  Rat twobt = Rat(2 * t.b + F_.omega_trace());
  Rat mmax_r = (2 * U + Rat(nmax) * cc * abs(twobt)) / (2 * alpha.x);
  Int mmax = rat_floor(mmax_r) + 1;

  for (Int n = -nmax; n <= nmax; ++n) {
    for (Int m = -mmax; m <= mmax; ++m) {
      if (m == 0 && n == 0) continue;
      FieldElement v = alpha.scaled(Rat(m)) + beta.scaled(Rat(n));
      if (embedding_sign(F_, v, 1) <= 0 || embedding_sign(F_, v, 2) <= 0) continue;
      FieldElement w = corner - v;
      if (embedding_sign(F_, w, 1) <= 0 || embedding_sign(F_, w, 2) <= 0) continue;
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FieldElement> FieldContext::points_in_symmetric_box(const Ideal& t,
                                                                const Rat& U) const {
  std::vector<FieldElement> out;
  if (U <= 0) return out;
  auto [alpha, beta] = ideal_basis(t);
  Rat cc = t.c;
  Int sdisc = isqrt(F_.discriminant);
  Int nmax = rat_floor((2 * U) / (cc * Rat(sdisc))) + 1;
  Rat twobt = Rat(2 * t.b + F_.omega_trace());
  Int mmax = rat_floor((2 * U + Rat(nmax) * cc * abs(twobt)) / (2 * alpha.x)) + 1;
  FieldElement bound = FieldElement::from_rat(U);
  for (Int n = -nmax; n <= nmax; ++n) {
    for (Int m = -mmax; m <= mmax; ++m) {
      if (m == 0 && n == 0) continue;
      FieldElement v = alpha.scaled(Rat(m)) + beta.scaled(Rat(n));
      bool inside = true;
      for (int emb : {1, 2}) {
        int s = embedding_sign(F_, v, emb);
        FieldElement diff = (s >= 0) ? bound - v : bound + v;
        if (embedding_sign(F_, diff, emb) < 0) {
          inside = false;
          break;
        }
      }
      if (inside) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<FieldElement> FieldContext::tpgen_uncached(const Ideal& A) const {
  // Any totally positive generator can be unit-scaled into the symmetric box
  // of radius sqrt(N) * eps_+^(1); the minimal-trace one lies inside too.
  Rat N = ideal_norm(A);
  Rat sqrtN = Rat(isqrt(N.get_num() * N.get_den()) + 1) / Rat(N.get_den());
  Rat U = sqrtN * embedding_abs_bound(F_, units_.totally_positive_fundamental_unit);
  std::optional<FieldElement> best;
  Rat best_trace;
  for (const FieldElement& v : points_in_symmetric_box(A, U)) {
    if (abs(norm(F_, v)) != N) continue;
    if (!is_totally_positive(F_, v)) continue;
    Rat tr = trace(F_, v);
    if (!best || tr < best_trace || (tr == best_trace && v < *best)) {
      best = v;
      best_trace = tr;
    }
  }
  return best;
}

std::optional<FieldElement> FieldContext::totally_positive_generator(const Ideal& A) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tpgen_cache_.find(A);
    if (it != tpgen_cache_.end()) return it->second;
  }
  auto g = tpgen_uncached(A);
  std::lock_guard<std::mutex> lock(mu_);
  tpgen_cache_[A] = g;
  return g;
}

std::optional<FieldElement> FieldContext::generator(const Ideal& A) const {
  Rat N = ideal_norm(A);
  Rat sqrtN = Rat(isqrt(N.get_num() * N.get_den()) + 1) / Rat(N.get_den());
  Rat U = sqrtN * embedding_abs_bound(F_, units_.totally_positive_fundamental_unit);
  std::optional<FieldElement> best;
  auto better = [&](const FieldElement& v, const FieldElement& w) {
    // prefer small |y|, then small |x|, then x > 0, then y > 0
    if (abs(v.y) != abs(w.y)) return abs(v.y) < abs(w.y);
    if (abs(v.x) != abs(w.x)) return abs(v.x) < abs(w.x);
    if ((v.x > 0) != (w.x > 0)) return v.x > 0;
    return v.y > 0;
  };
  for (const FieldElement& v : points_in_symmetric_box(A, U)) {
    if (abs(norm(F_, v)) != N) continue;
    if (!best || better(v, *best)) best = v;
  }
  return best;
}

long FieldContext::class_of(const Ideal& A) const {
  Ideal P = primitive_part(A);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = class_cache_.find(P);
    if (it != class_cache_.end()) return it->second;
  }
  long result = -1;
  for (long i = 0; i < narrow_.h_plus; ++i) {
    Ideal q = primitive_part(ideal_div(F_, P, narrow_.representatives[i]));
    if (totally_positive_generator(q)) {
      result = i;
      break;
    }
  }
  if (result < 0) fail(ErrorKind::Internal, "ideal matched no narrow class");
  std::lock_guard<std::mutex> lock(mu_);
  class_cache_[P] = result;
  return result;
}

void FieldContext::build_narrow_class_data() {
  narrow_.h_plus = narrow_class_number_by_forms(F_.discriminant);
  narrow_.representatives = {Ideal()};  // trivial class first
  long p_bound = 2;
  while (static_cast<long>(narrow_.representatives.size()) < narrow_.h_plus) {
    p_bound *= 2;
    std::vector<std::pair<Ideal, Int>> candidates;
    for (const Int& p : primes_up_to(p_bound)) {
      for (const PrimeIdeal& P : primes_above(F_, p))
        candidates.emplace_back(P.ideal, ideal_norm(P.ideal).get_num());
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second < y.second;
      return x.first < y.first;
    });
    narrow_.representatives = {Ideal()};
    for (const auto& [P, nrm] : candidates) {
      if (static_cast<long>(narrow_.representatives.size()) >= narrow_.h_plus) break;
      bool fresh = true;
      for (const Ideal& rep : narrow_.representatives) {
        Ideal q = primitive_part(ideal_div(F_, P, rep));
        if (tpgen_uncached(q)) {
          fresh = false;
          break;
        }
      }
      if (fresh) narrow_.representatives.push_back(P);
    }
  }
  narrow_.mul_table.assign(narrow_.h_plus, std::vector<long>(narrow_.h_plus, 0));
  narrow_.inverse.assign(narrow_.h_plus, 0);
  for (long i = 0; i < narrow_.h_plus; ++i) {
    for (long j = 0; j < narrow_.h_plus; ++j) {
      Ideal prod = ideal_mul(F_, narrow_.representatives[i], narrow_.representatives[j]);
      long k = -1;
      for (long l = 0; l < narrow_.h_plus; ++l) {
        Ideal q = primitive_part(ideal_div(F_, prod, narrow_.representatives[l]));
        if (tpgen_uncached(q)) {
          k = l;
          break;
        }
      }
      if (k < 0) fail(ErrorKind::Internal, "class table construction failed");
      narrow_.mul_table[i][j] = k;
      if (k == 0) narrow_.inverse[i] = j;
    }
  }
}

}  // namespace hmf
