#include "hmf/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hmf/errors.hpp"

namespace hmf {

using nlohmann::json;

namespace {

json relem_to_json(const Ring& R, const RElem& v) {
  if (R.degree() == 1)
    return R.is_zero(v) ? "0" : rat_to_string(*R.as_rational(v));
  json arr = json::array();
  for (unsigned i = 0; i < R.degree(); ++i)
    arr.push_back(i < v.c.size() ? rat_to_string(v.c[i]) : "0");
  return arr;
}

RElem relem_from_json(const Ring& R, const json& j) {
  if (j.is_string()) return R.from_rat(rat_from_string(j.get<std::string>()));
  if (j.is_number_integer()) return R.from_int(j.get<long>());
  if (j.is_array()) {
    std::vector<Rat> c;
    for (const auto& e : j) c.push_back(rat_from_string(e.get<std::string>()));
    return R.from_coeffs(std::move(c));
  }
  fail(ErrorKind::Validation, "bad ring element encoding: " + j.dump());
}

json ideal_to_json(const Ideal& A) {
  return json{{"a", A.a.get_str()}, {"b", A.b.get_str()}, {"c", rat_to_string(A.c)}};
}

Ideal ideal_from_json(const QuadraticField& F, const json& j) {
  if (j.is_string()) return ideal_from_label(F, j.get<std::string>());
  if (j.is_object()) {
    if (j.contains("gen")) {
      FieldElement g(rat_from_string(j["gen"].value("x", "0")),
                     rat_from_string(j["gen"].value("y", "0")));
      return principal_ideal(F, g);
    }
    Int a(j.at("a").is_string() ? Int(j["a"].get<std::string>()) : Int(j["a"].get<long>()));
    Int b(j.at("b").is_string() ? Int(j["b"].get<std::string>()) : Int(j["b"].get<long>()));
    Rat c = j.contains("c")
                ? (j["c"].is_string() ? rat_from_string(j["c"].get<std::string>())
                                      : Rat(j["c"].get<long>()))
                : Rat(1);
    return make_ideal(F, a, b, c);
  }
  fail(ErrorKind::Validation, "bad ideal encoding: " + j.dump());
}

json series_to_json_obj(const AdelicSeries& f) {
  json j;
  j["field"] = f.ctx()->field().d.get_si();
  j["weight"] = {f.weight().k[0], f.weight().k[1]};
  j["ring"] = f.ring().descriptor();
  j["bound"] = f.bound();
  json classes = json::array();
  for (const Ideal& t : f.ctx()->representatives()) classes.push_back(t.label());
  j["classes"] = classes;
  json constant = json::array();
  for (long l = 0; l < f.ctx()->h_plus(); ++l)
    constant.push_back(relem_to_json(f.ring(), f.constant_slot(l)));
  j["constant"] = constant;
  json coeffs = json::array();
  for (const Ideal& m : f.ctx()->slot_ideals(f.bound())) {
    RElem v = f.coeff(m);
    if (f.ring().is_zero(v)) continue;
    coeffs.push_back(json{{"ideal", m.label()}, {"value", relem_to_json(f.ring(), v)}});
  }
  j["coeffs"] = coeffs;
  return j;
}

AdelicSeries series_from_json_obj(const json& j) {
  auto F = QuadraticField::create(Int(j.at("field").get<long>()));
  auto fc = FieldContext::get(F);
  std::vector<Ideal> reps;
  for (const auto& c : j.at("classes")) reps.push_back(ideal_from_label(F, c.get<std::string>()));
  auto ctx = SeriesContext::with_representatives(fc, std::move(reps));
  Ring R = Ring::from_descriptor(j.at("ring").get<std::string>());
  WeightVector w(j.at("weight")[0].get<int>(), j.at("weight")[1].get<int>());
  AdelicSeries f(ctx, R, w, j.at("bound").get<long>());
  const auto& constant = j.at("constant");
  if (static_cast<long>(constant.size()) != ctx->h_plus())
    fail(ErrorKind::Validation, "constant tuple size mismatch");
  for (long l = 0; l < ctx->h_plus(); ++l)
    f.constant_slot(l) = relem_from_json(R, constant[l]);
  for (const auto& e : j.at("coeffs")) {
    Ideal m = ideal_from_label(F, e.at("ideal").get<std::string>());
    f.set_coeff(m, relem_from_json(R, e.at("value")));
  }
  return f;
}

json parse(const std::string& s, const std::string& what) {
  json j = json::parse(s, nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::Validation, "malformed JSON in " + what);
  return j;
}

}  // namespace

std::string field_element_to_json(const FieldElement& e) {
  return json{{"x", rat_to_string(e.x)}, {"y", rat_to_string(e.y)}}.dump();
}

FieldElement field_element_from_json(const std::string& s) {
  json j = parse(s, "field element");
  return FieldElement(rat_from_string(j.value("x", "0")), rat_from_string(j.value("y", "0")));
}

std::string series_to_json(const AdelicSeries& f) { return series_to_json_obj(f).dump(2); }

AdelicSeries series_from_json(const std::string& s) {
  return series_from_json_obj(parse(s, "series"));
}

IdealCharacter character_from_json(std::shared_ptr<const FieldContext> fc,
                                   const std::string& s) {
  json j = parse(s, "character config");
  const QuadraticField& F = fc->field();
  Ideal modulus = j.contains("modulus") ? ideal_from_json(F, j["modulus"]) : Ideal();
  std::string kind = j.value("kind", "trivial");
  Ring R = Ring::from_descriptor(j.value("ring", "q"));
  if (kind == "trivial") return IdealCharacter::trivial(fc, modulus);
  if (kind == "genus") return IdealCharacter::genus(fc, modulus);
  if (kind == "quadratic") {
    Int N = ideal_norm(modulus).get_num();
    Int p = prime_divisors(N)[0];
    std::optional<PrimeIdeal> P;
    for (const PrimeIdeal& q : primes_above(F, p))
      if (q.ideal == modulus) P = q;
    if (!P) fail(ErrorKind::Validation, "quadratic character modulus must be prime");
    std::vector<RElem> cls;
    if (j.contains("nontrivial_class_values"))
      for (const auto& v : j["nontrivial_class_values"]) cls.push_back(relem_from_json(R, v));
    return IdealCharacter::quadratic(fc, *P, R, std::move(cls));
  }
  if (kind == "table") {
    std::map<Ideal, RElem> table;
    for (const auto& e : j.value("table", json::array()))
      table[ideal_from_json(F, e.at("prime"))] = relem_from_json(R, e.at("value"));
    return IdealCharacter::table(fc, modulus, R, std::move(table), j.value("bound", 0L));
  }
  fail(ErrorKind::Validation, "unknown character kind: " + kind);
}

EisensteinSpec eisenstein_spec_from_json(std::shared_ptr<const FieldContext> fc,
                                         const std::string& s) {
  json j = parse(s, "eisenstein spec");
  EisensteinSpec spec{
      character_from_json(fc, j.value("eta", json{{"kind", "trivial"}}).dump()),
      character_from_json(fc, j.value("psi", json{{"kind", "trivial"}}).dump()),
      j.value("weight", 1),
      {},
      Ring::from_descriptor(j.value("ring", "q")),
      j.value("bound", 0L),
      j.contains("scale") ? rat_from_string(j["scale"].get<std::string>()) : Rat(1),
      false};
  if (j.contains("constant")) {
    for (const auto& c : j["constant"]) spec.constant.push_back(relem_from_json(spec.ring, c));
  } else {
    spec.constant.assign(fc->h_plus(), spec.ring.one());
  }
  return spec;
}

// --- basis files --------------------------------------------------------------

std::string basis_file_to_json(const BasisFile& bf) {
  json header;
  header["field"] = bf.field_d.get_si();
  header["level"] = bf.level.label();
  header["weight"] = {bf.weight.k[0], bf.weight.k[1]};
  header["ring"] = bf.ring.descriptor();
  header["bound"] = bf.bound;
  header["cuspidal"] = bf.cuspidal;
  json classes = json::array();
  for (const Ideal& t : bf.classes) classes.push_back(t.label());
  header["classes"] = classes;
  json series = json::array();
  for (const AdelicSeries& f : bf.series) {
    json e;
    json constant = json::array();
    for (long l = 0; l < f.ctx()->h_plus(); ++l)
      constant.push_back(relem_to_json(f.ring(), f.constant_slot(l)));
    e["constant"] = constant;
    json coeffs = json::array();
    for (const Ideal& m : f.ctx()->slot_ideals(f.bound())) {
      RElem v = f.coeff(m);
      if (f.ring().is_zero(v)) continue;
      coeffs.push_back(json{{"ideal", m.label()}, {"value", relem_to_json(f.ring(), v)}});
    }
    e["coeffs"] = coeffs;
    series.push_back(e);
  }
  return json{{"header", header}, {"series", series}}.dump(2);
}

BasisFile basis_file_from_json(const std::string& s) {
  json j = parse(s, "basis file");
  if (!j.contains("header")) fail(ErrorKind::Validation, "basis file has no header");
  const json& h = j["header"];
  BasisFile bf;
  bf.field_d = Int(h.at("field").get<long>());
  auto F = QuadraticField::create(bf.field_d);
  auto fc = FieldContext::get(F);
  bf.level = ideal_from_json(F, h.at("level"));
  bf.weight = WeightVector(h.at("weight")[0].get<int>(), h.at("weight")[1].get<int>());
  bf.ring = Ring::from_descriptor(h.at("ring").get<std::string>());
  bf.bound = h.at("bound").get<long>();
  bf.cuspidal = h.value("cuspidal", false);
  for (const auto& c : h.at("classes"))
    bf.classes.push_back(ideal_from_label(F, c.get<std::string>()));
  auto ctx = SeriesContext::with_representatives(fc, bf.classes);
  size_t idx = 0;
  for (const auto& e : j.value("series", json::array())) {
    AdelicSeries f(ctx, bf.ring, bf.weight, bf.bound);
    const auto& constant = e.at("constant");
    if (static_cast<long>(constant.size()) != ctx->h_plus())
      fail(ErrorKind::Validation,
           "series " + std::to_string(idx) + ": constant tuple size mismatch");
    for (long l = 0; l < ctx->h_plus(); ++l)
      f.constant_slot(l) = relem_from_json(bf.ring, constant[l]);
    for (const auto& c : e.at("coeffs")) {
      Ideal m = ideal_from_label(F, c.at("ideal").get<std::string>());
      if (ideal_norm(m) >= bf.bound)
        fail(ErrorKind::Validation, "series " + std::to_string(idx) +
                                        ": coefficient at " + m.label() +
                                        " is beyond the declared bound");
      f.set_coeff(m, relem_from_json(bf.ring, c.at("value")));
    }
    bf.series.push_back(std::move(f));
    ++idx;
  }
  return bf;
}

BasisFile ingest_basis(const std::string& path, BasisValidation* validation,
                       const IdealCharacter* closure_eps) {
  BasisFile bf = basis_file_from_json(read_file(path));
  if (validation) {
    validation->ok = true;
    if (bf.series.empty()) {
      validation->ok = false;
      validation->messages.push_back("basis file contains no series");
    }
    if (closure_eps && !bf.series.empty()) {
      // spot Hecke-closure check at the smallest usable prime
      auto F = QuadraticField::create(bf.field_d);
      auto ctx = bf.series[0].ctx();
      HeckeContext hc(ctx, bf.level, *closure_eps, bf.weight.k0());
      std::optional<Ideal> probe;
      for (const Ideal& m : ctx->slot_ideals(bf.bound)) {
        auto fac = ctx->fc().factorization(m);
        if (fac.size() == 1 && fac[0].second == 1 && ideal_norm(m) * 2 <= bf.bound) {
          probe = m;
          break;
        }
      }
      if (probe) {
        long Bout = rat_floor(Rat(bf.bound) / ideal_norm(*probe)).get_si();
        size_t rows = static_cast<size_t>(ctx->h_plus()) + ctx->slot_ideals(Bout).size();
        MatR T(bf.ring.is_field() ? bf.ring : Ring::rationals(), rows, bf.series.size());
        Ring RF = T.ring();
        for (size_t jx = 0; jx < bf.series.size(); ++jx) {
          auto slots = to_slots(truncate(bf.series[jx], Bout));
          for (size_t i = 0; i < rows; ++i) T.at(i, jx) = RF.from_coeffs(slots[i].c);
        }
        for (const AdelicSeries& f : bf.series) {
          auto slots = to_slots(hecke_apply(hc, *probe, f));
          std::vector<RElem> b;
          for (auto& sv : slots) b.push_back(RF.from_coeffs(sv.c));
          bool closed = in_column_span(T, b);
          validation->hecke_closure.push_back(closed);
          if (!closed) {
            validation->ok = false;
            validation->messages.push_back("series not Hecke-closed under T_" +
                                           probe->label());
          }
        }
      }
    }
  }
  return bf;
}

// --- tables -------------------------------------------------------------------

namespace {

std::vector<std::pair<Ideal, std::string>> primes_with_labels(
    const SeriesContext& ctx, long norm_max) {
  std::vector<std::pair<Ideal, std::string>> out;
  for (const Ideal& m : ctx.slot_ideals(norm_max + 1)) {
    auto fac = ctx.fc().factorization(m);
    if (fac.size() != 1 || fac[0].second != 1) continue;
    auto g = ctx.fc().generator(m);
    out.emplace_back(m, g ? element_to_string(*g) : m.label());
  }
  return out;
}

std::string form_value_at(const Eigenform& f, const Ideal& m) {
  if (f.series) {
    if (ideal_norm(m) < f.series->bound())
      return f.ring.to_string(f.series->coeff(m));
    return "";
  }
  for (const auto& [idl, v] : f.eigenvalues)
    if (idl == m) return f.ring.to_string(v);
  return "";
}

}  // namespace

std::string eigenvalue_table_csv(const std::vector<Eigenform>& forms, long prime_norm_max) {
  std::ostringstream os;
  os << "norm,generator";
  for (size_t i = 0; i < forms.size(); ++i) os << ",f" << (i + 1);
  os << "\n";
  if (forms.empty()) return os.str();
  const AdelicSeries* any = nullptr;
  for (const Eigenform& f : forms)
    if (f.series) {
      any = &*f.series;
      break;
    }
  if (!any) fail(ErrorKind::Validation, "eigenvalue table needs normalized forms");
  const auto& ctx = *any->ctx();
  for (const auto& [P, label] : primes_with_labels(ctx, prime_norm_max)) {
    os << rat_to_string(ideal_norm(P)) << "," << label;
    for (const Eigenform& f : forms) os << "," << form_value_at(f, P);
    os << "\n";
  }
  return os.str();
}

std::string frequency_table_csv(const std::vector<Eigenform>& forms, long prime_norm_max) {
  std::ostringstream os;
  os << "value";
  for (size_t i = 0; i < forms.size(); ++i)
    os << ",f" << (i + 1) << "_abs,f" << (i + 1) << "_rel";
  os << "\n";
  if (forms.empty()) return os.str();
  if (!forms[0].series) fail(ErrorKind::Validation, "frequency table needs normalized forms");
  const auto& ctx = *forms[0].series->ctx();
  auto primes = primes_with_labels(ctx, prime_norm_max);
  std::set<std::string> values;
  std::vector<std::map<std::string, long>> counts(forms.size());
  std::vector<long> totals(forms.size(), 0);
  for (const auto& [P, label] : primes) {
    for (size_t i = 0; i < forms.size(); ++i) {
      std::string v = form_value_at(forms[i], P);
      if (v.empty()) continue;
      values.insert(v);
      counts[i][v]++;
      totals[i]++;
    }
  }
  for (const std::string& v : values) {
    os << v;
    for (size_t i = 0; i < forms.size(); ++i) {
      long c = counts[i].count(v) ? counts[i][v] : 0;
      os << "," << c << "," << rat_to_string(make_rat(Int(c), Int(std::max(totals[i], 1L))));
    }
    os << "\n";
  }
  return os.str();
}

// --- reports ------------------------------------------------------------------

namespace {

json eigenform_to_json(const Eigenform& f) {
  json j;
  j["ring"] = f.ring.descriptor();
  j["normalized"] = f.normalized;
  j["verified"] = to_string(f.verified);
  json evs = json::array();
  for (const auto& [m, v] : f.eigenvalues)
    evs.push_back(json{{"ideal", m.label()}, {"value", relem_to_json(f.ring, v)}});
  j["eigenvalues"] = evs;
  if (f.series) j["series"] = series_to_json_obj(*f.series);
  j["notes"] = f.notes;
  return j;
}

}  // namespace

std::string report_to_json(const StabilityReport& rep) {
  json j;
  j["ring"] = rep.ring_descriptor;
  j["bound"] = rep.bound;
  j["cuspidal"] = rep.cuspidal;
  j["initial_rank"] = rep.initial_rank;
  j["final_rank"] = rep.final_rank;
  json trace = json::array();
  for (const CutRecord& r : rep.trace)
    trace.push_back(json{{"ideal", r.ideal.label()},
                         {"rank_before", r.rank_before},
                         {"rank_after", r.rank_after}});
  j["trace"] = trace;
  json pivots = json::array();
  for (const Int& p : rep.raw_pivots) pivots.push_back(p.get_str());
  j["pivots"] = pivots;
  json primes = json::array();
  for (const Int& p : rep.prime_list) primes.push_back(p.get_str());
  j["prime_list"] = primes;
  json excl = json::array();
  for (const Int& p : rep.excluded_inverted) excl.push_back(p.get_str());
  j["excluded_inverted_primes"] = excl;
  j["sturm"] = json{{"hard_bound", rep.sturm.hard_bound.get_str()},
                    {"escalation", rep.sturm.escalation},
                    {"mode", rep.sturm_certified ? "certified" : "heuristic"}};
  j["assumptions"] = rep.assumptions;
  json runs = json::array();
  for (const CharacteristicRun& run : rep.runs) {
    json r;
    r["characteristic"] = run.p.get_str();
    r["dimension"] = run.dimension;
    json tr = json::array();
    for (const CutRecord& c : run.trace)
      tr.push_back(json{{"ideal", c.ideal.label()},
                        {"rank_before", c.rank_before},
                        {"rank_after", c.rank_after}});
    r["trace"] = tr;
    json forms = json::array();
    for (const Eigenform& f : run.forms) forms.push_back(eigenform_to_json(f));
    r["eigenforms"] = forms;
    runs.push_back(r);
  }
  j["runs"] = runs;
  return j.dump(2);
}

std::string report_to_text(const StabilityReport& rep) {
  std::ostringstream os;
  os << (rep.cuspidal ? "cuspidal " : "") << "stability run over " << rep.ring_descriptor
     << ", precision q^" << rep.bound << " ("
     << (rep.sturm_certified ? "certified" : "heuristic") << ", certified bound "
     << rep.sturm.hard_bound.get_str() << ")\n";
  os << "  candidate rank " << rep.initial_rank << " -> stable rank " << rep.final_rank
     << "\n";
  for (const CutRecord& r : rep.trace)
    os << "  cut by T_" << r.ideal.label() << ": " << r.rank_before << " -> "
       << r.rank_after << "\n";
  os << "  exceptional primes:";
  if (rep.prime_list.empty()) os << " none";
  for (const Int& p : rep.prime_list) os << " " << p.get_str();
  os << "\n";
  if (!rep.excluded_inverted.empty()) {
    os << "  pivot primes excluded as inverted:";
    for (const Int& p : rep.excluded_inverted) os << " " << p.get_str();
    os << "\n";
  }
  for (const CharacteristicRun& run : rep.runs) {
    if (run.p == 0)
      os << "  characteristic 0: dimension " << run.dimension << "\n";
    else
      os << "  mod " << run.p.get_str() << ": dimension " << run.dimension << "\n";
    for (const Eigenform& f : run.forms) {
      os << "    eigenform over " << f.ring.descriptor() << " ["
         << to_string(f.verified) << "]";
      int shown = 0;
      for (const auto& [m, v] : f.eigenvalues) {
        if (shown++ >= 6) break;
        os << " a_" << m.label() << "=" << f.ring.to_string(v);
      }
      os << "\n";
    }
  }
  for (const std::string& a : rep.assumptions) os << "  assumption: " << a << "\n";
  return os.str();
}

// --- run config -----------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Validation, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Validation, "cannot write file: " + path);
  out << content;
}

RunInputs run_inputs_from_json(const std::string& s, const std::string& base_dir) {
  json j = parse(s, "run config");
  auto F = QuadraticField::create(Int(j.at("field").get<long>()));
  auto fc = FieldContext::get(F);
  auto ctx = SeriesContext::canonical(F);

  auto resolve = [&](const std::string& path) {
    if (!path.empty() && path[0] == '/') return path;
    return base_dir.empty() ? path : base_dir + "/" + path;
  };

  RunInputs in{ctx,
               Ring::from_descriptor(j.value("ring", "q")),
               j.at("bound").get<long>(),
               ideal_from_json(F, j.at("level")),
               character_from_json(fc, j.value("space_character", json{{"kind", "trivial"}}).dump()),
               WeightVector(1, 1),
               WeightVector(1, 1),
               AdelicSeries(),
               {},
               {},
               {},
               {},
               j.value("cuspidal", false),
               j.value("jobs", 1)};
  if (j.contains("weight_k"))
    in.k = WeightVector(j["weight_k"][0].get<int>(), j["weight_k"][1].get<int>());
  if (j.contains("weight_kprime"))
    in.kprime =
        WeightVector(j["weight_kprime"][0].get<int>(), j["weight_kprime"][1].get<int>());

  // multiplier
  const json& m = j.at("multiplier");
  if (m.contains("eisenstein")) {
    EisensteinSpec spec = eisenstein_spec_from_json(fc, m["eisenstein"].dump());
    if (spec.bound == 0) spec.bound = in.bound;
    if (!m.value("skip_validation", false)) {
      auto witness = validate_constant_tuple(ctx, spec);
      if (witness) fail(ErrorKind::Validation, "multiplier constant tuple: " + witness->detail);
    }
    AdelicSeries E = eisenstein_series(ctx, spec);
    in.multiplier = spec.ring.same_ring(in.ring) ? E : convert_ring(E, in.ring);
  } else if (m.contains("series")) {
    in.multiplier = series_from_json_obj(m["series"]);
    if (!in.multiplier.ring().same_ring(in.ring))
      in.multiplier = convert_ring(in.multiplier, in.ring);
  } else if (m.contains("file")) {
    BasisFile bf = basis_file_from_json(read_file(resolve(m["file"].get<std::string>())));
    size_t idx = static_cast<size_t>(m.value("index", 0));
    if (idx >= bf.series.size()) fail(ErrorKind::Validation, "multiplier index out of range");
    in.multiplier = convert_ring(bf.series[idx], in.ring);
  } else {
    fail(ErrorKind::Validation, "run config has no usable multiplier");
  }

  auto load_basis = [&](const json& b, std::vector<AdelicSeries>* out) {
    BasisFile bf;
    if (b.contains("file"))
      bf = basis_file_from_json(read_file(resolve(b["file"].get<std::string>())));
    else if (b.contains("inline"))
      bf = basis_file_from_json(b["inline"].dump());
    else
      fail(ErrorKind::Validation, "basis entry needs a file or inline payload");
    if (bf.field_d != F.d) fail(ErrorKind::Validation, "basis file field mismatch");
    if (bf.bound < in.bound)
      fail(ErrorKind::OutOfPrecision, "basis file precision below the run bound");
    for (const AdelicSeries& g : bf.series) {
      AdelicSeries h = g.ring().same_ring(in.ring) ? g : convert_ring(g, in.ring);
      out->push_back(truncate(h, in.bound));
    }
    if (b.contains("cuspidal") ? b["cuspidal"].get<bool>() : bf.cuspidal)
      in.cuspidal = true;
  };
  load_basis(j.at("basis"), &in.basis);
  if (j.contains("basis2k")) load_basis(j["basis2k"], &in.basis2k);

  if (j.contains("schedule"))
    for (const auto& lbl : j["schedule"])
      in.schedule.push_back(ideal_from_label(F, lbl.get<std::string>()));
  if (j.contains("rerun_primes"))
    for (const auto& p : j["rerun_primes"])
      in.rerun_primes.push_back(p.is_string() ? Int(p.get<std::string>())
                                              : Int(p.get<long>()));
  return in;
}

}  // namespace hmf
