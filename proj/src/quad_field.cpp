#include "hmf/quad_field.hpp"

#include <map>
#include <utility>

#include "hmf/errors.hpp"

namespace hmf {

QuadraticField QuadraticField::create(const Int& d) {
  if (d <= 1) fail(ErrorKind::Validation, "field parameter d must be > 1");
  for (auto& [p, e] : factor_integer(d))
    if (e > 1) fail(ErrorKind::Validation, "field parameter d must be squarefree");
  QuadraticField F;
  F.d = d;
  F.omega_is_half = (d % 4 == 1);
  F.discriminant = F.omega_is_half ? d : 4 * d;
  return F;
}

FieldElement mul(const QuadraticField& F, const FieldElement& a, const FieldElement& b) {
  // omega^2 = t*omega - n
  Rat t(F.omega_trace()), n(F.omega_norm());
  Rat yy = a.y * b.y;
  return {a.x * b.x - n * yy, a.x * b.y + a.y * b.x + t * yy};
}

FieldElement conjugate(const QuadraticField& F, const FieldElement& a) {
  // conj(omega) = t - omega
  return {a.x + a.y * Rat(F.omega_trace()), -a.y};
}

Rat norm(const QuadraticField& F, const FieldElement& a) {
  Rat t(F.omega_trace()), n(F.omega_norm());
  return a.x * a.x + t * a.x * a.y + n * a.y * a.y;
}

Rat trace(const QuadraticField& F, const FieldElement& a) {
  return 2 * a.x + Rat(F.omega_trace()) * a.y;
}

FieldElement inverse(const QuadraticField& F, const FieldElement& a) {
  Rat N = norm(F, a);
  if (N == 0) fail(ErrorKind::Validation, "inverse of zero field element");
  return conjugate(F, a).scaled(Rat(1) / N);
}

FieldElement pow(const QuadraticField& F, const FieldElement& a, long e) {
  if (e < 0) return pow(F, inverse(F, a), -e);
  FieldElement r = FieldElement::from_int(1), b = a;
  while (e > 0) {
    if (e & 1) r = mul(F, r, b);
    b = mul(F, b, b);
    e >>= 1;
  }
  return r;
}

int embedding_sign(const QuadraticField& F, const FieldElement& a, int i) {
  if (i != 1 && i != 2) fail(ErrorKind::Validation, "embedding index must be 1 or 2");
  // a = (2x + t*y)/2 + (±y/2) sqrt(disc_omega-adjusted); uniformly:
  // a^(i) = U + V*sqrt(d) with U = x + t*y/2, V = ±y/2 * (omega_is_half ? 1 : 2).
  Rat U = a.x + Rat(F.omega_trace()) * a.y / 2;
  Rat V = F.omega_is_half ? a.y / 2 : a.y;
  if (i == 2) V = -V;
  int su = sgn(U), sv = sgn(V);
  if (sv == 0) return su;
  if (su == 0) return sv;
  if (su == sv) return su;
  // opposite signs: compare U^2 against V^2 d (equality impossible, d nonsquare)
  Rat lhs = U * U, rhs = V * V * Rat(F.d);
  return lhs > rhs ? su : sv;
}

bool is_totally_positive(const QuadraticField& F, const FieldElement& a) {
  return embedding_sign(F, a, 1) > 0 && embedding_sign(F, a, 2) > 0;
}

Rat embedding_abs_bound(const QuadraticField& F, const FieldElement& a) {
  Rat U = a.x + Rat(F.omega_trace()) * a.y / 2;
  Rat V = F.omega_is_half ? a.y / 2 : a.y;
  Rat sd(isqrt(F.d) + 1);  // sqrt(d) < isqrt(d)+1
  return abs(U) + abs(V) * sd;
}

std::string element_to_string(const FieldElement& a) {
  if (a.y == 0) return rat_to_string(a.x);
  std::string s;
  if (a.x != 0) s = rat_to_string(a.x);
  std::string ys = rat_to_string(abs(a.y));
  std::string term = (ys == "1") ? "w" : ys + "w";
  if (a.y > 0)
    s += s.empty() ? term : "+" + term;
  else
    s += "-" + term;
  return s;
}

UnitData fundamental_unit(const QuadraticField& F) {
  // Continued fraction of omega = (P0 + sqrt(d))/Q0: detect the purely
  // periodic cycle of complete quotients, then the unit is
  // q_{l-1}*alpha + q_{l-2} for alpha the first recurring complete quotient.
  Int P = F.omega_is_half ? 1 : 0;
  Int Q = F.omega_is_half ? 2 : 1;
  Int s = isqrt(F.d);
  std::map<std::pair<Int, Int>, int> seen;
  std::vector<Int> partials;
  std::vector<std::pair<Int, Int>> states;
  int start = -1;
  for (int k = 0;; ++k) {
    auto st = std::make_pair(P, Q);
    auto it = seen.find(st);
    if (it != seen.end()) {
      start = it->second;
      break;
    }
    seen[st] = k;
    states.push_back(st);
    Int a = floor_div(P + s, Q);
    partials.push_back(a);
    P = a * Q - P;
    Q = (F.d - P * P) / Q;
    if (Q == 0) fail(ErrorKind::Internal, "degenerate continued fraction");
  }
  // Convergent denominators over one period starting at `start`.
  Int q_prev(0), q_curr(1);  // q_{-2}=1? convention: q_{-1}=0, q_0=a_0*q_{-1}+q_{-2}
  // Use h/k recurrences: k_{-1} = 0, k_{-2} = 1.
  Int k_m2(1), k_m1(0);
  size_t l = partials.size() - static_cast<size_t>(start);
  for (size_t j = 0; j < l; ++j) {
    Int a = partials[static_cast<size_t>(start) + j];
    Int k_new = a * k_m1 + k_m2;
    k_m2 = k_m1;
    k_m1 = k_new;
  }
  // eps = k_{l-1} * alpha + k_{l-2}
  auto [Pa, Qa] = states[static_cast<size_t>(start)];
  // alpha = (Pa + sqrt(d))/Qa as x + y*omega
  FieldElement alpha;
  if (F.omega_is_half) {
    // sqrt(d) = 2*omega - 1
    alpha = FieldElement(make_rat(Pa - 1, Qa), make_rat(Int(2), Qa));
  } else {
    alpha = FieldElement(make_rat(Pa, Qa), make_rat(Int(1), Qa));
  }
  FieldElement eps = alpha.scaled(Rat(k_m1)) + FieldElement(Rat(k_m2), Rat(0));

  UnitData u;
  u.fundamental_unit = eps;
  Rat N = norm(F, eps);
  if (!is_integer(eps.x) || !is_integer(eps.y) || abs(N) != 1)
    fail(ErrorKind::Internal, "continued fraction did not produce a unit");
  u.norm_of_unit = (N == 1) ? 1 : -1;
  u.totally_positive_fundamental_unit =
      (u.norm_of_unit == 1) ? eps : mul(F, eps, eps);
  return u;
}

}  // namespace hmf
