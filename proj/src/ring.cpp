#include "hmf/ring.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hmf/errors.hpp"

namespace hmf {

namespace {

// --- dense polynomial helpers over F_p (coeffs as Int in [0,p)) -----------

using ZPoly = std::vector<Int>;

ZPoly zp_trim(ZPoly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

ZPoly zp_mod_coeffs(ZPoly f, const Int& p) {
  for (auto& c : f) {
    c %= p;
    if (c < 0) c += p;
  }
  return zp_trim(std::move(f));
}

ZPoly zp_mul(const ZPoly& a, const ZPoly& b, const Int& p) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return zp_mod_coeffs(std::move(r), p);
}

Int zp_inv_scalar(const Int& a, const Int& p) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0)
    fail(ErrorKind::Internal, "non-invertible residue");
  return r;
}

ZPoly zp_rem(ZPoly a, const ZPoly& f, const Int& p) {
  a = zp_mod_coeffs(std::move(a), p);
  Int lead_inv = zp_inv_scalar(f.back(), p);
  while (a.size() >= f.size()) {
    Int q = a.back() * lead_inv % p;
    size_t shift = a.size() - f.size();
    for (size_t i = 0; i < f.size(); ++i) {
      a[shift + i] = (a[shift + i] - q * f[i]) % p;
      if (a[shift + i] < 0) a[shift + i] += p;
    }
    a = zp_trim(std::move(a));
  }
  return a;
}

// quotient + remainder, both reduced
std::pair<ZPoly, ZPoly> zp_divmod(ZPoly a, const ZPoly& f, const Int& p) {
  a = zp_mod_coeffs(std::move(a), p);
  ZPoly q(a.size() >= f.size() ? a.size() - f.size() + 1 : 0, Int(0));
  Int lead_inv = zp_inv_scalar(f.back(), p);
  while (a.size() >= f.size()) {
    Int qc = a.back() * lead_inv % p;
    size_t shift = a.size() - f.size();
    q[shift] = qc;
    for (size_t i = 0; i < f.size(); ++i) {
      a[shift + i] = (a[shift + i] - qc * f[i]) % p;
      if (a[shift + i] < 0) a[shift + i] += p;
    }
    a = zp_trim(std::move(a));
  }
  return {zp_trim(std::move(q)), std::move(a)};
}

ZPoly zp_gcd(ZPoly a, ZPoly b, const Int& p) {
  a = zp_mod_coeffs(std::move(a), p);
  b = zp_mod_coeffs(std::move(b), p);
  while (!b.empty()) {
    ZPoly r = zp_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Int inv = zp_inv_scalar(a.back(), p);
    for (auto& c : a) c = c * inv % p;
  }
  return a;
}

ZPoly zp_invert_mod(const ZPoly& a, const ZPoly& f, const Int& p, bool* ok) {
  ZPoly r0 = f, r1 = zp_rem(a, f, p);
  ZPoly s0 = {}, s1 = {Int(1)};
  while (!r1.empty()) {
    auto [q, r2] = zp_divmod(r0, r1, p);
    r0 = std::move(r1);
    r1 = std::move(r2);
    ZPoly qs = zp_mul(q, s1, p);
    ZPoly s2(std::max(s0.size(), qs.size()), Int(0));
    for (size_t i = 0; i < s2.size(); ++i) {
      Int v = (i < s0.size() ? s0[i] : Int(0)) - (i < qs.size() ? qs[i] : Int(0));
      v %= p;
      if (v < 0) v += p;
      s2[i] = v;
    }
    s0 = std::move(s1);
    s1 = zp_trim(std::move(s2));
  }
  if (r0.size() != 1) {
    *ok = false;
    return {};
  }
  *ok = true;
  Int inv = zp_inv_scalar(r0[0], p);
  ZPoly out = s0;
  for (auto& c : out) {
    c = c * inv % p;
    if (c < 0) c += p;
  }
  return zp_trim(std::move(out));
}

ZPoly zp_powmod(ZPoly base, Int e, const ZPoly& f, const Int& p) {
  ZPoly r = {Int(1)};
  base = zp_rem(std::move(base), f, p);
  while (e > 0) {
    if (e % 2 == 1) r = zp_rem(zp_mul(r, base, p), f, p);
    base = zp_rem(zp_mul(base, base, p), f, p);
    e /= 2;
  }
  return r;
}

ZPoly zp_sub_x(ZPoly t, const Int& p) {
  // t - x
  t.resize(std::max<size_t>(t.size(), 2), Int(0));
  t[1] = (t[1] - 1) % p;
  if (t[1] < 0) t[1] += p;
  return zp_trim(std::move(t));
}

bool zp_is_irreducible(const ZPoly& f, const Int& p) {
  size_t k = f.size() - 1;
  if (k == 0) return false;
  if (k == 1) return true;
  ZPoly x = {Int(0), Int(1)};
  if (!zp_sub_x(zp_powmod(x, pow_int(p, static_cast<unsigned long>(k)), f, p), p).empty())
    return false;
  for (const Int& q : prime_divisors(Int(static_cast<long>(k)))) {
    unsigned long e = static_cast<unsigned long>(k) / q.get_ui();
    ZPoly d = zp_sub_x(zp_powmod(x, pow_int(p, e), f, p), p);
    if (d.empty()) return false;
    if (zp_gcd(d, f, p).size() != 1) return false;
  }
  return true;
}

// Deterministic canonical monic irreducible of given degree over F_p:
// smallest coefficient vector in counter order.
ZPoly zp_canonical_irreducible(const Int& p, unsigned k) {
  if (k == 1) return {Int(0), Int(1)};  // x
  std::vector<Int> c(k, Int(0));
  while (true) {
    ZPoly f(c.begin(), c.end());
    f.push_back(Int(1));
    if (zp_is_irreducible(f, p)) return f;
    size_t i = 0;
    while (i < k) {
      c[i] += 1;
      if (c[i] < p) break;
      c[i] = 0;
      ++i;
    }
    if (i == k) fail(ErrorKind::Internal, "no irreducible polynomial found");
  }
}

// --- dense polynomial helpers over Q ---------------------------------------

using QPoly = std::vector<Rat>;

QPoly q_trim(QPoly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

QPoly q_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::pair<QPoly, QPoly> q_divmod(QPoly a, const QPoly& f) {
  a = q_trim(std::move(a));
  QPoly q(a.size() >= f.size() ? a.size() - f.size() + 1 : 0, Rat(0));
  while (a.size() >= f.size()) {
    Rat qc = a.back() / f.back();
    size_t shift = a.size() - f.size();
    q[shift] = qc;
    for (size_t i = 0; i < f.size(); ++i) a[shift + i] -= qc * f[i];
    a = q_trim(std::move(a));
  }
  return {q_trim(std::move(q)), std::move(a)};
}

QPoly q_invert_mod(const QPoly& a, const QPoly& f, bool* ok) {
  QPoly r0 = f, r1 = q_divmod(a, f).second;
  QPoly s0 = {}, s1 = {Rat(1)};
  while (!r1.empty()) {
    auto [q, r2] = q_divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r2);
    QPoly qs = q_mul(q, s1);
    QPoly s2(std::max(s0.size(), qs.size()), Rat(0));
    for (size_t i = 0; i < s2.size(); ++i)
      s2[i] = (i < s0.size() ? s0[i] : Rat(0)) - (i < qs.size() ? qs[i] : Rat(0));
    s0 = std::move(s1);
    s1 = q_trim(std::move(s2));
  }
  if (r0.size() != 1) {
    *ok = false;
    return {};
  }
  *ok = true;
  QPoly out = s0;
  for (auto& cc : out) cc /= r0[0];
  return q_trim(std::move(out));
}

std::vector<Int> normalize_inverted(const std::vector<Int>& raw) {
  std::set<Int> primes;
  for (const Int& v : raw) {
    if (v == 0) fail(ErrorKind::Validation, "cannot invert zero");
    if (abs(v) == 1) continue;
    for (const Int& p : prime_divisors(v)) primes.insert(p);
  }
  return {primes.begin(), primes.end()};
}

}  // namespace

struct Ring::Impl {
  Kind kind = Kind::Rationals;
  Int p = 0;  // characteristic (finite fields)
  unsigned deg = 1;
  std::vector<Rat> minpoly;    // monic, low..high (degree >= 2 kinds)
  std::vector<Int> minpoly_z;  // finite-field copy
  std::vector<Int> inverted;   // localized: prime list, ascending
};

Ring::Ring() : impl_(std::make_shared<Impl>()) {}

Ring Ring::rationals() { return Ring(); }

Ring Ring::number_field(const std::vector<Rat>& monic_minpoly) {
  if (monic_minpoly.size() < 3 || monic_minpoly.back() != 1)
    fail(ErrorKind::Validation,
         "number field needs a monic minimal polynomial of degree >= 2");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::NumberField;
  impl->deg = static_cast<unsigned>(monic_minpoly.size() - 1);
  impl->minpoly = monic_minpoly;
  return Ring(impl);
}

Ring Ring::finite_field(const Int& p, unsigned deg) {
  if (deg == 0) fail(ErrorKind::Validation, "finite field degree must be >= 1");
  if (deg == 1) return finite_field(p, std::vector<Int>{Int(0), Int(1)});
  return finite_field(p, zp_canonical_irreducible(p, deg));
}

Ring Ring::finite_field(const Int& p, const std::vector<Int>& monic_minpoly) {
  if (!is_probable_prime(p))
    fail(ErrorKind::Validation, "finite field characteristic must be prime");
  if (monic_minpoly.size() < 2 || monic_minpoly.back() != 1)
    fail(ErrorKind::Validation, "finite field needs a monic minimal polynomial");
  if (monic_minpoly.size() > 2 && !zp_is_irreducible(zp_mod_coeffs(monic_minpoly, p), p))
    fail(ErrorKind::Validation, "finite field modulus polynomial is reducible");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::FiniteField;
  impl->p = p;
  impl->deg = static_cast<unsigned>(monic_minpoly.size() - 1);
  impl->minpoly_z = monic_minpoly;
  for (auto& c : impl->minpoly_z) {
    c %= p;
    if (c < 0) c += p;
  }
  impl->minpoly_z.back() = 1;
  for (const Int& c : impl->minpoly_z) impl->minpoly.emplace_back(c);
  return Ring(impl);
}

Ring Ring::localized_integers(const std::vector<Int>& inverted) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::LocalizedIntegers;
  impl->inverted = normalize_inverted(inverted);
  return Ring(impl);
}

Ring Ring::from_descriptor(const std::string& desc) {
  auto parse_int_list = [](const std::string& s) {
    std::vector<Int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.emplace_back(item);
    }
    return out;
  };
  auto parse_rat_list = [](const std::string& s) {
    std::vector<Rat> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(rat_from_string(item));
    }
    return out;
  };

  if (desc == "q") return rationals();
  if (desc == "z") return localized_integers({});
  if (desc.rfind("fp:", 0) == 0) return finite_field(Int(desc.substr(3)), 1u);
  if (desc.rfind("fq:", 0) == 0) {
    std::string body = desc.substr(3);
    auto semi = body.find(";mod=");
    std::vector<Int> mod;
    if (semi != std::string::npos) {
      mod = parse_int_list(body.substr(semi + 5));
      body = body.substr(0, semi);
    }
    auto comma = body.find(',');
    if (comma == std::string::npos)
      fail(ErrorKind::Validation, "bad fq descriptor: " + desc);
    Int p(body.substr(0, comma));
    unsigned deg = static_cast<unsigned>(std::stoul(body.substr(comma + 1)));
    if (!mod.empty()) {
      if (mod.size() != deg + 1)
        fail(ErrorKind::Validation, "fq modulus degree mismatch");
      return finite_field(p, mod);
    }
    return finite_field(p, deg);
  }
  if (desc.rfind("nf:", 0) == 0) return number_field(parse_rat_list(desc.substr(3)));
  if (desc.rfind("loc:", 0) == 0) {
    std::string body = desc.substr(4);
    std::vector<Int> inverted;
    auto semi = body.find(";inv=");
    if (semi != std::string::npos) {
      inverted = parse_int_list(body.substr(semi + 5));
      body = body.substr(0, semi);
    }
    auto minpoly = parse_rat_list(body);
    if (minpoly.size() < 2)
      fail(ErrorKind::Validation, "bad loc descriptor: " + desc);
    if (minpoly.size() == 2) return localized_integers(inverted);
    // Localized orders of degree > 1 are represented but carry no
    // arithmetic; SNF and element operations report them unsupported.
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::LocalizedOrder;
    impl->deg = static_cast<unsigned>(minpoly.size() - 1);
    impl->minpoly = minpoly;
    impl->inverted = normalize_inverted(inverted);
    return Ring(impl);
  }
  fail(ErrorKind::Validation, "unknown ring descriptor: " + desc);
}

Ring::Kind Ring::kind() const { return impl_->kind; }
Int Ring::characteristic() const {
  return impl_->kind == Kind::FiniteField ? impl_->p : Int(0);
}
unsigned Ring::degree() const { return impl_->deg; }
const std::vector<Int>& Ring::inverted_primes() const { return impl_->inverted; }
const std::vector<Rat>& Ring::minpoly() const { return impl_->minpoly; }

bool Ring::is_field() const {
  switch (impl_->kind) {
    case Kind::Rationals:
    case Kind::NumberField:
    case Kind::FiniteField:
      return true;
    default:
      return false;
  }
}

bool Ring::is_pid() const {
  switch (impl_->kind) {
    case Kind::Rationals:
    case Kind::NumberField:
    case Kind::FiniteField:
    case Kind::LocalizedIntegers:
      return true;
    case Kind::LocalizedOrder:
      return false;
  }
  return false;
}

std::string Ring::descriptor() const {
  switch (impl_->kind) {
    case Kind::Rationals:
      return "q";
    case Kind::FiniteField: {
      if (impl_->deg == 1) return "fp:" + impl_->p.get_str();
      std::string s = "fq:" + impl_->p.get_str() + "," + std::to_string(impl_->deg);
      ZPoly canon = zp_canonical_irreducible(impl_->p, impl_->deg);
      if (canon != impl_->minpoly_z) {
        s += ";mod=";
        for (size_t i = 0; i < impl_->minpoly_z.size(); ++i) {
          if (i) s += ",";
          s += impl_->minpoly_z[i].get_str();
        }
      }
      return s;
    }
    case Kind::NumberField: {
      std::string s = "nf:";
      for (size_t i = 0; i < impl_->minpoly.size(); ++i) {
        if (i) s += ",";
        s += rat_to_string(impl_->minpoly[i]);
      }
      return s;
    }
    case Kind::LocalizedIntegers:
    case Kind::LocalizedOrder: {
      std::string s = "loc:";
      if (impl_->kind == Kind::LocalizedIntegers) {
        s += "0,1";
      } else {
        for (size_t i = 0; i < impl_->minpoly.size(); ++i) {
          if (i) s += ",";
          s += rat_to_string(impl_->minpoly[i]);
        }
      }
      if (!impl_->inverted.empty()) {
        s += ";inv=";
        for (size_t i = 0; i < impl_->inverted.size(); ++i) {
          if (i) s += ",";
          s += impl_->inverted[i].get_str();
        }
      }
      return s;
    }
  }
  fail(ErrorKind::Internal, "unreachable");
}

bool Ring::same_ring(const Ring& o) const {
  return impl_->kind == o.impl_->kind && impl_->p == o.impl_->p &&
         impl_->deg == o.impl_->deg && impl_->minpoly == o.impl_->minpoly &&
         impl_->inverted == o.impl_->inverted;
}

namespace {

void require_arithmetic(const Ring::Impl& impl) {
  if (impl.kind == Ring::Kind::LocalizedOrder)
    fail(ErrorKind::Unsupported,
         "localized orders of degree > 1 carry no arithmetic in this build");
}

RElem canonical(const Ring::Impl& impl, std::vector<Rat> c) {
  if (impl.kind == Ring::Kind::FiniteField) {
    for (auto& q : c) {
      if (q.get_den() % impl.p == 0)
        fail(ErrorKind::InvalidPrime,
             "denominator not invertible mod " + impl.p.get_str());
      Int den_inv;
      Int d = q.get_den() % impl.p;
      if (mpz_invert(den_inv.get_mpz_t(), d.get_mpz_t(), impl.p.get_mpz_t()) == 0)
        fail(ErrorKind::InvalidPrime, "denominator not invertible");
      Int v = q.get_num() % impl.p * den_inv % impl.p;
      if (v < 0) v += impl.p;
      q = Rat(v);
    }
  }
  while (!c.empty() && c.back() == 0) c.pop_back();
  RElem e;
  e.c = std::move(c);
  return e;
}

std::vector<Rat> reduce_rep(const Ring::Impl& impl, std::vector<Rat> c) {
  if (impl.deg <= 1 || c.size() <= impl.deg) return c;
  if (impl.kind == Ring::Kind::FiniteField) {
    ZPoly z;
    for (auto& q : c) z.push_back(q.get_num());  // already reduced residues
    z = zp_rem(std::move(z), impl.minpoly_z, impl.p);
    std::vector<Rat> out;
    for (auto& v : z) out.emplace_back(v);
    return out;
  }
  QPoly f(impl.minpoly.begin(), impl.minpoly.end());
  return q_divmod(std::move(c), f).second;
}

}  // namespace

RElem Ring::zero() const { return RElem{}; }
RElem Ring::one() const { return from_int(1); }
RElem Ring::from_int(long v) const { return from_rat(Rat(v)); }

RElem Ring::from_rat(const Rat& q) const {
  require_arithmetic(*impl_);
  if (impl_->kind == Kind::LocalizedIntegers) {
    Int den = q.get_den();
    for (const Int& p : impl_->inverted)
      while (den % p == 0) den /= p;
    if (den != 1)
      fail(ErrorKind::Validation,
           "rational " + rat_to_string(q) + " is not in " + descriptor());
  }
  return canonical(*impl_, {q});
}

RElem Ring::from_coeffs(std::vector<Rat> c) const {
  require_arithmetic(*impl_);
  if (impl_->deg == 1) {
    std::vector<Rat> t = c;
    while (t.size() > 1 && t.back() == 0) t.pop_back();
    if (t.size() > 1) fail(ErrorKind::Validation, "element degree exceeds ring degree");
    return t.empty() ? zero() : from_rat(t[0]);
  }
  c = canonical(*impl_, std::move(c)).c;
  c = reduce_rep(*impl_, std::move(c));
  return canonical(*impl_, std::move(c));
}

RElem Ring::generator() const {
  if (impl_->deg < 2) fail(ErrorKind::Validation, "ring has no generator");
  return from_coeffs({Rat(0), Rat(1)});
}

RElem Ring::add(const RElem& a, const RElem& b) const {
  require_arithmetic(*impl_);
  std::vector<Rat> c(std::max(a.c.size(), b.c.size()), Rat(0));
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.c.size()) c[i] += a.c[i];
    if (i < b.c.size()) c[i] += b.c[i];
  }
  return canonical(*impl_, std::move(c));
}

RElem Ring::sub(const RElem& a, const RElem& b) const { return add(a, neg(b)); }

RElem Ring::neg(const RElem& a) const {
  require_arithmetic(*impl_);
  std::vector<Rat> c = a.c;
  for (auto& q : c) q = -q;
  return canonical(*impl_, std::move(c));
}

RElem Ring::mul(const RElem& a, const RElem& b) const {
  require_arithmetic(*impl_);
  if (a.c.empty() || b.c.empty()) return zero();
  std::vector<Rat> c(a.c.size() + b.c.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
  c = canonical(*impl_, std::move(c)).c;
  c = reduce_rep(*impl_, std::move(c));
  return canonical(*impl_, std::move(c));
}

bool Ring::is_one(const RElem& a) const { return a.c.size() == 1 && a.c[0] == 1; }

bool Ring::is_unit(const RElem& a) const {
  if (a.c.empty()) return false;
  switch (impl_->kind) {
    case Kind::Rationals:
    case Kind::NumberField:
    case Kind::FiniteField:
      return true;
    case Kind::LocalizedIntegers: {
      Int num = abs(a.c[0].get_num());
      for (const Int& p : impl_->inverted)
        while (num % p == 0) num /= p;
      return num == 1;
    }
    case Kind::LocalizedOrder:
      require_arithmetic(*impl_);
  }
  return false;
}

RElem Ring::inv(const RElem& a) const {
  require_arithmetic(*impl_);
  if (a.c.empty()) fail(ErrorKind::NotInvertible, "zero is not invertible");
  if (!is_unit(a))
    fail(ErrorKind::NotInvertible, to_string(a) + " is not a unit in " + descriptor());
  if (impl_->deg == 1) return canonical(*impl_, {Rat(1) / a.c[0]});
  if (impl_->kind == Kind::FiniteField) {
    ZPoly z;
    for (auto& q : a.c) z.push_back(q.get_num());
    bool ok = false;
    ZPoly r = zp_invert_mod(z, impl_->minpoly_z, impl_->p, &ok);
    if (!ok) fail(ErrorKind::NotInvertible, "element not invertible");
    std::vector<Rat> c;
    for (auto& v : r) c.emplace_back(v);
    return canonical(*impl_, std::move(c));
  }
  QPoly f(impl_->minpoly.begin(), impl_->minpoly.end());
  bool ok = false;
  QPoly r = q_invert_mod(a.c, f, &ok);
  if (!ok) fail(ErrorKind::NotInvertible, "element not invertible (reducible modulus?)");
  return canonical(*impl_, std::move(r));
}

RElem Ring::div(const RElem& a, const RElem& b) const { return mul(a, inv(b)); }

RElem Ring::pow(const RElem& a, long e) const {
  if (e < 0) return pow(inv(a), -e);
  RElem r = one(), base = a;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::optional<Rat> Ring::as_rational(const RElem& a) const {
  if (a.c.empty()) return Rat(0);
  if (a.c.size() == 1) return a.c[0];
  return std::nullopt;
}

std::string Ring::to_string(const RElem& a) const {
  if (a.c.empty()) return "0";
  if (impl_->deg == 1) return rat_to_string(a.c[0]);
  std::string s;
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    std::string term;
    if (i == 0) {
      term = rat_to_string(a.c[i]);
    } else {
      std::string coeff = rat_to_string(abs(a.c[i]));
      term = (coeff == "1") ? "" : coeff + "*";
      term += "z";
      if (i > 1) term += "^" + std::to_string(i);
      term = (a.c[i] < 0 ? "-" : (s.empty() ? "" : "+")) + term;
    }
    s += term;
  }
  return s.empty() ? "0" : s;
}

std::optional<RElem> Ring::omega_image(const QuadraticField& F) const {
  if (impl_->kind != Kind::NumberField || impl_->deg != 2) return std::nullopt;
  std::vector<Rat> expect = {Rat(F.omega_norm()), Rat(-F.omega_trace()), Rat(1)};
  if (impl_->minpoly != expect) return std::nullopt;
  return generator();
}

Ring reduction_target(const Ring& R, const Int& p) {
  switch (R.kind()) {
    case Ring::Kind::Rationals:
      break;
    case Ring::Kind::LocalizedIntegers:
      for (const Int& q : R.inverted_primes())
        if (q == p)
          fail(ErrorKind::InvalidPrime,
               p.get_str() + " is in the inverted set of " + R.descriptor());
      break;
    default:
      fail(ErrorKind::Unsupported,
           "reduction mod p is defined for rational / localized-integer coefficients");
  }
  return Ring::finite_field(p, 1u);
}

RElem reduce_mod(const Ring& R, const RElem& a, const Int& p) {
  Ring T = reduction_target(R, p);
  if (a.c.empty()) return T.zero();
  const Rat& q = a.c[0];
  if (q.get_den() % p == 0)
    fail(ErrorKind::InvalidPrime,
         "denominator of " + rat_to_string(q) + " not invertible mod " + p.get_str());
  return T.from_rat(q);
}

RElem RingHom::apply(const RElem& a) const {
  if (a.c.empty()) return dst.zero();
  RElem acc = dst.zero();
  for (size_t i = a.c.size(); i-- > 0;) {
    acc = dst.mul(acc, gen_image);
    acc = dst.add(acc, dst.from_rat(a.c[i]));
  }
  return acc;
}

RingHom inclusion_hom(const Ring& src, const Ring& dst) {
  RingHom h{src, dst, dst.zero()};
  if (src.same_ring(dst)) {
    h.gen_image = dst.degree() >= 2 ? dst.generator() : dst.zero();
    return h;
  }
  if (src.degree() == 1) return h;  // prime field / rationals into anything
  fail(ErrorKind::Unsupported, "no canonical inclusion between these rings");
}

bool element_in_subring(const Ring& R, const RElem& a, const Ring& S) {
  (void)R;
  auto q = R.as_rational(a);
  if (!q) return false;  // only rational-content subrings are tested here
  switch (S.kind()) {
    case Ring::Kind::Rationals:
      return true;
    case Ring::Kind::LocalizedIntegers: {
      Int den = q->get_den();
      for (const Int& p : S.inverted_primes())
        while (den % p == 0) den /= p;
      return den == 1;
    }
    default:
      fail(ErrorKind::Unsupported, "unsupported subring descriptor " + S.descriptor());
  }
}

std::optional<RingWeightViolation> validate_ring_weight_compat(
    const Ring& R, const WeightSetDesc& W, const QuadraticField& F) {
  if (W.parallel_only) return std::nullopt;  // any Z[1/N]-algebra works
  for (const WeightVector& w : W.sample_weights) {
    if (w.is_parallel()) continue;
    if (!w.is_paritious())
      return RingWeightViolation{2, "weight " + w.to_string() + " is not paritious"};
    if (R.characteristic() > 0)
      return RingWeightViolation{
          2, "char p = " + R.characteristic().get_str() +
                 ": p^((k0-k)/2) is not a unit for non-parallel " + w.to_string()};
    if (!R.omega_image(F))
      return RingWeightViolation{
          2, "ring " + R.descriptor() +
                 " has no designated image of the quadratic field; "
                 "non-parallel weights need one"};
  }
  return std::nullopt;
}

}  // namespace hmf
