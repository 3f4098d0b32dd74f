#include "hmf/character.hpp"

#include <mutex>
#include <numeric>
#include <sstream>

#include "hmf/errors.hpp"

namespace hmf {

RElem ResidueField::image(const QuadraticField& F, const FieldElement& x) const {
  (void)F;
  // x = u + v*omega with denominators prime to p
  auto lift = [&](const Rat& q) -> RElem {
    if (q.get_den() % p == 0)
      fail(ErrorKind::InvalidPrime, "element not integral at the prime");
    return Fq.from_rat(q);
  };
  return Fq.add(lift(x.x), Fq.mul(lift(x.y), omega_image));
}

ResidueField residue_field(const QuadraticField& F, const PrimeIdeal& P) {
  ResidueField rf;
  rf.p = P.p;
  rf.degree = P.residue_degree;
  if (P.residue_degree == 1) {
    rf.Fq = Ring::finite_field(P.p, 1u);
    // omega = -b mod p from the HNF second basis vector b + omega
    Int r = (-(P.ideal.b)) % P.p;
    if (r < 0) r += P.p;
    rf.omega_image = rf.Fq.from_rat(Rat(r));
  } else {
    // inert: residue field F_p[x]/(minpoly of omega)
    std::vector<Int> mp = {F.omega_norm() % P.p, (-F.omega_trace()) % P.p, Int(1)};
    for (auto& c : mp)
      if (c < 0) c += P.p;
    rf.Fq = Ring::finite_field(P.p, mp);
    rf.omega_image = rf.Fq.generator();
  }
  return rf;
}

int residue_symbol(const QuadraticField& F, const PrimeIdeal& P, const FieldElement& x) {
  if (P.p == 2) fail(ErrorKind::Validation, "residue symbol needs an odd prime");
  ResidueField rf = residue_field(F, P);
  RElem img = rf.image(F, x);
  if (rf.Fq.is_zero(img)) return 0;
  Int q = pow_int(P.p, static_cast<unsigned long>(P.residue_degree));
  Int e = (q - 1) / 2;
  RElem s = rf.Fq.pow(img, e.get_si());
  if (rf.Fq.is_one(s)) return 1;
  if (rf.Fq.is_zero(rf.Fq.add(s, rf.Fq.one()))) return -1;
  fail(ErrorKind::Internal, "Euler criterion returned a non-sign");
}

struct IdealCharacter::Data {
  std::shared_ptr<const FieldContext> fc;
  Ideal modulus;
  Ring ring;
  Kind kind = Kind::Trivial;
  long table_bound = 0;
  std::vector<RElem> class_values;      // quadratic: one per narrow class
  std::vector<Ideal> class_prime_reps;  // quadratic: coprime rep per class
  std::optional<PrimeIdeal> prime_modulus;
  std::map<Ideal, RElem> table;
  mutable std::mutex mu;
  mutable std::map<Ideal, RElem> memo;
};

const Ideal& IdealCharacter::modulus() const { return d_->modulus; }
const Ring& IdealCharacter::ring() const { return d_->ring; }
IdealCharacter::Kind IdealCharacter::kind() const { return d_->kind; }

std::string IdealCharacter::describe() const {
  std::ostringstream os;
  switch (d_->kind) {
    case Kind::Trivial: os << "trivial"; break;
    case Kind::Quadratic: os << "quadratic"; break;
    case Kind::Genus: os << "genus"; break;
    case Kind::Table: os << "table"; break;
  }
  os << " mod " << d_->modulus.label();
  return os.str();
}

IdealCharacter IdealCharacter::trivial(std::shared_ptr<const FieldContext> fc,
                                       Ideal modulus) {
  auto d = std::make_shared<Data>();
  d->fc = std::move(fc);
  d->modulus = std::move(modulus);
  d->ring = Ring::rationals();
  d->kind = Kind::Trivial;
  return IdealCharacter(std::move(d));
}

IdealCharacter IdealCharacter::genus(std::shared_ptr<const FieldContext> fc,
                                     Ideal modulus) {
  if (fc->h_plus() != 2)
    fail(ErrorKind::Unsupported,
         "genus character requires narrow class number 2 (got h+ = " +
             std::to_string(fc->h_plus()) + ")");
  auto d = std::make_shared<Data>();
  d->fc = std::move(fc);
  d->modulus = std::move(modulus);
  d->ring = Ring::rationals();
  d->kind = Kind::Genus;
  return IdealCharacter(std::move(d));
}

IdealCharacter IdealCharacter::table(std::shared_ptr<const FieldContext> fc,
                                     Ideal modulus, Ring ring,
                                     std::map<Ideal, RElem> prime_values,
                                     long generation_bound) {
  auto d = std::make_shared<Data>();
  d->fc = std::move(fc);
  d->modulus = std::move(modulus);
  d->ring = std::move(ring);
  d->kind = Kind::Table;
  d->table = std::move(prime_values);
  d->table_bound = generation_bound;
  for (auto& [P, v] : d->table)
    if (!d->ring.is_unit(v) && !d->ring.is_zero(v))
      fail(ErrorKind::Validation,
           "character table value at " + P.label() + " is not a unit");
  return IdealCharacter(std::move(d));
}

IdealCharacter IdealCharacter::quadratic(std::shared_ptr<const FieldContext> fc,
                                         const PrimeIdeal& modulus, Ring ring,
                                         std::vector<RElem> nontrivial_class_values) {
  const QuadraticField& F = fc->field();
  Int q = pow_int(modulus.p, static_cast<unsigned long>(modulus.residue_degree));
  if (modulus.p == 2)
    fail(ErrorKind::Validation, "quadratic character needs an odd residue field");
  auto d = std::make_shared<Data>();
  d->fc = fc;
  d->modulus = modulus.ideal;
  d->ring = std::move(ring);
  d->kind = Kind::Quadratic;
  d->prime_modulus = modulus;

  // well-definedness: all totally positive units must be squares mod N
  const FieldElement& eps_plus = fc->units().totally_positive_fundamental_unit;
  if (residue_symbol(F, modulus, eps_plus) != 1)
    fail(ErrorKind::Validation,
         "quadratic character ill-defined mod " + modulus.ideal.label() +
             ": totally positive unit " + element_to_string(eps_plus) +
             " is not a square in the residue field of size " + q.get_str());

  long h = fc->h_plus();
  d->class_values.assign(h, d->ring.one());
  if (static_cast<long>(nontrivial_class_values.size()) > h - 1)
    fail(ErrorKind::Validation, "too many nontrivial class values");
  for (size_t i = 0; i < nontrivial_class_values.size(); ++i) {
    if (!d->ring.is_unit(nontrivial_class_values[i]))
      fail(ErrorKind::Validation, "class value is not a unit");
    d->class_values[i + 1] = nontrivial_class_values[i];
  }

  // per-class prime representatives coprime to the modulus (class 0 uses O)
  d->class_prime_reps.assign(h, Ideal());
  std::vector<bool> have(h, false);
  have[0] = true;
  long covered = 1, pb = 4;
  while (covered < h) {
    for (const Int& p : primes_up_to(pb)) {
      for (const PrimeIdeal& P : primes_above(F, p)) {
        if (!ideals_coprime(F, P.ideal, d->modulus)) continue;
        long cls = fc->class_of(P.ideal);
        if (!have[cls]) {
          have[cls] = true;
          d->class_prime_reps[cls] = P.ideal;
          ++covered;
        }
      }
      if (covered == h) break;
    }
    pb *= 2;
  }

  auto sym_of_trivial = [&](const Ideal& A) -> int {
    auto g = fc->totally_positive_generator(A);
    if (!g) fail(ErrorKind::Internal, "expected a narrowly trivial ideal");
    return residue_symbol(F, modulus, *g);
  };

  // multiplicative consistency of the declared class values:
  // v_i * v_j == v_{ij} * sym(rep_i * rep_j / rep_{ij})
  const auto& nc = fc->narrow_class();
  for (long i = 0; i < h; ++i) {
    for (long j = i; j < h; ++j) {
      long ij = nc.mul_table[i][j];
      Ideal prod = ideal_mul(F, d->class_prime_reps[i], d->class_prime_reps[j]);
      Ideal ratio = ideal_div(F, prod, d->class_prime_reps[ij]);
      int s = sym_of_trivial(ratio);
      RElem want = d->ring.mul(d->class_values[ij], d->ring.from_int(s));
      RElem got = d->ring.mul(d->class_values[i], d->class_values[j]);
      if (!(want == got))
        fail(ErrorKind::Validation,
             "quadratic character mod " + modulus.ideal.label() +
                 " has no consistent extension: classes (" + std::to_string(i) +
                 "," + std::to_string(j) + ") require value product " +
                 std::to_string(s) + " * v_" + std::to_string(ij) + " at " +
                 ratio.label());
    }
  }
  return IdealCharacter(std::move(d));
}

namespace {

RElem quadratic_prime_value(const IdealCharacter::Data& d, const Ideal& P);

}  // namespace

RElem IdealCharacter::eval(const Ideal& b) const {
  const QuadraticField& F = d_->fc->field();
  if (!b.is_integral)
    fail(ErrorKind::Validation, "character argument must be integral");
  if (!ideals_coprime(F, b, d_->modulus)) return d_->ring.zero();
  if (d_->kind == Kind::Trivial) return d_->ring.one();
  {
    std::lock_guard<std::mutex> lock(d_->mu);
    auto it = d_->memo.find(b);
    if (it != d_->memo.end()) return it->second;
  }
  RElem out = d_->ring.one();
  for (const auto& [P, e] : d_->fc->factorization(b)) {
    RElem v;
    switch (d_->kind) {
      case Kind::Genus:
        v = d_->ring.from_int(d_->fc->class_of(P.ideal) == 0 ? 1 : -1);
        break;
      case Kind::Quadratic:
        v = quadratic_prime_value(*d_, P.ideal);
        break;
      case Kind::Table: {
        auto it = d_->table.find(P.ideal);
        if (it == d_->table.end())
          fail(ErrorKind::InsufficientData,
               "character table has no value at prime " + P.ideal.label() +
                   " (generation bound " + std::to_string(d_->table_bound) + ")");
        v = it->second;
        break;
      }
      case Kind::Trivial:
        v = d_->ring.one();
        break;
    }
    out = d_->ring.mul(out, d_->ring.pow(v, e));
  }
  std::lock_guard<std::mutex> lock(d_->mu);
  d_->memo[b] = out;
  return out;
}

RElem IdealCharacter::eval_in(const Ring& R, const Ideal& b) const {
  RElem v = eval(b);
  if (R.same_ring(d_->ring)) return v;
  auto q = d_->ring.as_rational(v);
  if (!q)
    fail(ErrorKind::RingMismatch,
         "character value is not rational; cannot convert into " + R.descriptor());
  return R.from_rat(*q);
}

long IdealCharacter::order() const {
  auto elem_order = [&](const RElem& v) -> long {
    RElem w = v;
    long k = 1;
    while (!d_->ring.is_one(w)) {
      w = d_->ring.mul(w, v);
      ++k;
      if (k > 4096)
        fail(ErrorKind::Validation, "character value is not a root of unity");
    }
    return k;
  };
  switch (d_->kind) {
    case Kind::Trivial:
      return 1;
    case Kind::Genus:
      return 2;
    case Kind::Quadratic: {
      long ord = 2;  // the residue symbol is onto {±1}
      for (const RElem& v : d_->class_values) ord = std::lcm(ord, elem_order(v));
      return ord;
    }
    case Kind::Table: {
      long ord = 1;
      for (const auto& [P, v] : d_->table) {
        if (d_->ring.is_zero(v)) continue;
        ord = std::lcm(ord, elem_order(v));
      }
      return ord;
    }
  }
  fail(ErrorKind::Internal, "unreachable");
}

namespace {

RElem quadratic_prime_value(const IdealCharacter::Data& d, const Ideal& P) {
  const QuadraticField& F = d.fc->field();
  long cls = d.fc->class_of(P);
  Ideal ratio = ideal_div(F, P, d.class_prime_reps[cls]);
  auto g = d.fc->totally_positive_generator(ratio);
  if (!g) fail(ErrorKind::Internal, "class bookkeeping failed");
  int s = residue_symbol(F, *d.prime_modulus, *g);
  return d.ring.mul(d.class_values[cls], d.ring.from_int(s));
}

}  // namespace

}  // namespace hmf
