#include "wildbloch/serialize.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

namespace wildbloch {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw SchemaError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

// null stands for a non-finite value
double num(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw SchemaError("expected a number");
  return j.get<double>();
}

double num(const json& j, const char* key) { return num(field(j, key)); }

double num_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? num(j, key) : fallback;
}

int integer(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw SchemaError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

template <class T, class F>
std::vector<T> list(const json& j, F&& f) {
  if (!j.is_array()) throw SchemaError("expected an array");
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(f(x));
  return out;
}

std::vector<double> doubles(const json& j) {
  return list<double>(j, [](const json& x) { return num(x); });
}

std::vector<int> ints(const json& j) {
  return list<int>(j, [](const json& x) {
    if (!x.is_number_integer()) throw SchemaError("expected an integer");
    return x.get<int>();
  });
}

json encode_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (const cplx& z : v) a.push_back(encode(z));
  return a;
}

json encode_terms(const std::map<std::vector<int>, cplx>& terms) {
  json a = json::array();
  for (const auto& [k, c] : terms) a.push_back(json::array({k, encode(c)}));
  return a;
}

std::map<std::vector<int>, cplx> decode_terms(const json& j) {
  std::map<std::vector<int>, cplx> out;
  if (!j.is_array()) throw SchemaError("terms must be an array");
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2) throw SchemaError("term must be [index, coefficient]");
    out[ints(t[0])] += decode_cplx(t[1]);
  }
  return out;
}

}  // namespace

// --- scalars and polynomials --------------------------------------------------

json encode(cplx z) { return json::array({z.real(), z.imag()}); }

cplx decode_cplx(const json& j) {
  if (j.is_number() || j.is_null()) return {num(j), 0.0};
  if (!j.is_array() || j.size() != 2) throw SchemaError("complex number must be [re, im]");
  return {num(j[0]), num(j[1])};
}

std::vector<cplx> decode_cplx_list(const json& j) { return list<cplx>(j, decode_cplx); }

json encode(const Polynomial1D& p) { return {{"coeffs", encode_list(p.coeffs())}}; }

Polynomial1D decode_poly1d(const json& j) { return Polynomial1D(decode_cplx_list(field(j, "coeffs"))); }

json encode(const PolynomialND& p) { return {{"dim", p.dim()}, {"terms", encode_terms(p.terms())}}; }

PolynomialND decode_polynd(const json& j) {
  const int dim = integer(j, "dim");
  auto terms = decode_terms(field(j, "terms"));
  for (const auto& [k, c] : terms)
    if (static_cast<int>(k.size()) != dim) throw SchemaError("multi-index length differs from dim");
  std::erase_if(terms, [](const auto& t) { return t.second == cplx(0.0); });
  return PolynomialND(dim, terms);
}

json encode(const Domain& d) { return {{"kind", to_string(d)}, {"dim", d.dim}}; }

Domain decode_domain(const json& j) {
  try {
    return domain_from_string(text(j, "kind"), integer(j, "dim"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

json encode(const SampleGrid& g) {
  return {{"domain", encode(g.domain)}, {"radii", g.radii}, {"angular", g.angular}, {"seed", g.seed}};
}

SampleGrid decode_grid(const json& j) {
  SampleGrid g;
  g.domain = decode_domain(field(j, "domain"));
  g.radii = doubles(field(j, "radii"));
  g.angular = integer(j, "angular");
  g.seed = j.contains("seed") ? field(j, "seed").get<std::uint64_t>() : 0;
  return g;
}

json encode(const ArcSet& a) {
  json out = json::array();
  for (const Arc& p : a.pieces()) out.push_back(json::array({p.start, p.end}));
  return out;
}

ArcSet decode_arcs(const json& j) {
  const auto arcs = list<Arc>(j, [](const json& x) {
    const auto v = doubles(x);
    if (v.size() != 2) throw SchemaError("arc must be [start, end]");
    return Arc{v[0], v[1]};
  });
  try {
    return ArcSet(arcs);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

// --- inner functions and expressions -------------------------------------------

json encode(const SingularMeasureSpec& m) {
  if (m.kind == SingularMeasureSpec::Kind::Atomic) {
    json atoms = json::array();
    for (const Atom& a : m.atoms) atoms.push_back({{"zeta", encode(a.zeta)}, {"mass", a.mass}});
    return {{"kind", "atomic"}, {"atoms", atoms}};
  }
  const CantorSpec& c = m.cantor;
  return {{"kind", "cantor"},
          {"cantor", {{"center", c.center}, {"length", c.length}, {"ratio", c.ratio}, {"depth", c.depth}}},
          {"mass", m.cantor_mass}};
}

SingularMeasureSpec decode_measure(const json& j) {
  const std::string kind = text(j, "kind");
  if (kind == "atomic") {
    return SingularMeasureSpec::atomic(list<Atom>(field(j, "atoms"), [](const json& a) {
      return Atom{decode_cplx(field(a, "zeta")), num(a, "mass")};
    }));
  }
  if (kind == "cantor") {
    const json& c = field(j, "cantor");
    CantorSpec cs;
    cs.center = num_or(c, "center", cs.center);
    cs.length = num_or(c, "length", cs.length);
    cs.ratio = num_or(c, "ratio", cs.ratio);
    cs.depth = c.contains("depth") ? integer(c, "depth") : cs.depth;
    return SingularMeasureSpec::cantor_measure(cs, num(j, "mass"));
  }
  throw SchemaError("unknown measure kind '" + kind + "'");
}

json encode(const InnerSpec& s) {
  switch (s.kind) {
    case InnerSpec::Kind::Singular: return {{"kind", "singular"}, {"measure", encode(s.measure)}};
    case InnerSpec::Kind::Blaschke: return {{"kind", "blaschke"}, {"zeros", encode_list(s.zeros)}};
    case InnerSpec::Kind::Composition: {
      json chain = json::array();
      for (const auto& c : s.chain) chain.push_back(encode(c));
      return {{"kind", "composition"}, {"chain", chain}};
    }
  }
  return {};
}

InnerSpec decode_inner(const json& j) {
  const std::string kind = text(j, "kind");
  InnerSpec s;
  if (kind == "singular")
    s = InnerSpec::singular(decode_measure(field(j, "measure")));
  else if (kind == "blaschke")
    s = InnerSpec::blaschke(decode_cplx_list(field(j, "zeros")));
  else if (kind == "composition")
    s = InnerSpec::compose(list<InnerSpec>(field(j, "chain"), decode_inner));
  else if (kind == "power")
    s = InnerSpec::power(decode_inner(field(j, "base")), integer(j, "n"));
  else
    throw SchemaError("unknown inner kind '" + kind + "'");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return s;
}

json encode(const FunctionExpr& f) {
  using K = FunctionExpr::Kind;
  json out{{"kind", to_string(f.kind())}};
  switch (f.kind()) {
    case K::Poly1d: out["coeffs"] = encode_list(f.poly1d().coeffs()); break;
    case K::PolyNd:
      out["domain"] = encode(f.domain());
      out["terms"] = encode_terms(f.polynd().terms());
      break;
    case K::Inner: out["spec"] = encode(f.inner_spec()); break;
    case K::Sum:
    case K::Product:
    case K::Compose: {
      json c = json::array();
      for (const auto& x : f.children()) c.push_back(encode(x));
      out["children"] = c;
      break;
    }
    case K::Dilate:
      out["r"] = f.dilation();
      out["child"] = encode(f.children().at(0));
      break;
    case K::Radialize: out["child"] = encode(f.children().at(0)); break;
  }
  return out;
}

FunctionExpr decode_function(const json& j) {
  const std::string kind = text(j, "kind");
  auto children = [&]() {
    const auto c = list<FunctionExpr>(field(j, "children"), decode_function);
    if (c.size() != 2) throw SchemaError(kind + " needs two children");
    return c;
  };
  try {
    if (kind == to_string(FunctionExpr::Kind::Poly1d)) return FunctionExpr::poly(decode_poly1d(j));
    if (kind == to_string(FunctionExpr::Kind::PolyNd)) {
      const Domain d = decode_domain(field(j, "domain"));
      auto terms = decode_terms(field(j, "terms"));
      std::erase_if(terms, [](const auto& t) { return t.second == cplx(0.0); });
      return FunctionExpr::poly(PolynomialND(d.dim, terms), d);
    }
    if (kind == to_string(FunctionExpr::Kind::Inner)) return FunctionExpr::inner(decode_inner(field(j, "spec")));
    if (kind == to_string(FunctionExpr::Kind::Sum)) {
      const auto c = children();
      return FunctionExpr::sum(c[0], c[1]);
    }
    if (kind == to_string(FunctionExpr::Kind::Product)) {
      const auto c = children();
      return FunctionExpr::product(c[0], c[1]);
    }
    if (kind == to_string(FunctionExpr::Kind::Compose)) {
      const auto c = children();
      return FunctionExpr::compose(c[0], c[1]);
    }
    if (kind == to_string(FunctionExpr::Kind::Dilate))
      return FunctionExpr::dilate(decode_function(field(j, "child")), num(j, "r"));
    if (kind == to_string(FunctionExpr::Kind::Radialize))
      return FunctionExpr::radialize(decode_function(field(j, "child")));
    if (kind == "lacunary") return lacunary_baseline(integer(j, "K"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("unknown function kind '" + kind + "'");
}

// --- boundary targets and weights ------------------------------------------------

json encode(const BoundaryFunction& f) {
  using K = BoundaryFunction::Kind;
  switch (f.kind()) {
    case K::Trig: return {{"kind", "trig"}, {"dim", f.dim()}, {"terms", encode_terms(f.terms())}};
    case K::Step: {
      json pieces = json::array();
      for (const auto& p : f.pieces())
        pieces.push_back({{"arc", json::array({p.arc.start, p.arc.end})}, {"value", encode(p.value)}});
      return {{"kind", "step"}, {"pieces", pieces}, {"otherwise", encode(f.otherwise())}};
    }
    case K::Abs: return {{"kind", "abs"}, {"child", encode(f.children().at(0))}};
    case K::Sum: {
      json c = json::array();
      for (const auto& x : f.children()) c.push_back(encode(x));
      return {{"kind", "sum"}, {"children", c}};
    }
    case K::Callable: throw SchemaError("callable boundary function '" + f.label() + "' cannot be stored");
  }
  return {};
}

BoundaryFunction decode_boundary(const json& j) {
  const std::string kind = text(j, "kind");
  try {
    if (kind == "trig") return BoundaryFunction::trig(integer(j, "dim"), decode_terms(field(j, "terms")));
    if (kind == "constant")
      return BoundaryFunction::constant(j.contains("dim") ? integer(j, "dim") : 1, decode_cplx(field(j, "value")));
    if (kind == "step") {
      auto pieces = list<BoundaryFunction::StepPiece>(field(j, "pieces"), [](const json& p) {
        const auto a = doubles(field(p, "arc"));
        if (a.size() != 2) throw SchemaError("arc must be [start, end]");
        return BoundaryFunction::StepPiece{Arc{a[0], a[1]}, decode_cplx(field(p, "value"))};
      });
      return BoundaryFunction::step(std::move(pieces), j.contains("otherwise") ? decode_cplx(j["otherwise"]) : 0.0);
    }
    if (kind == "abs") return BoundaryFunction::abs(decode_boundary(field(j, "child")));
    if (kind == "sum") {
      const auto c = list<BoundaryFunction>(field(j, "children"), decode_boundary);
      if (c.empty()) throw SchemaError("sum needs children");
      BoundaryFunction out = c[0];
      for (std::size_t i = 1; i < c.size(); ++i) out = BoundaryFunction::sum(out, c[i]);
      return out;
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("unknown boundary function kind '" + kind + "'");
}

json encode(const WeightSpec& w) {
  switch (w.kind()) {
    case WeightSpec::Kind::Power: return {{"kind", "power"}, {"beta", w.parameter()}};
    case WeightSpec::Kind::LogPower: return {{"kind", "log_power"}, {"gamma", w.parameter()}};
    case WeightSpec::Kind::Table: return {{"kind", "table"}, {"t", w.table_t()}, {"w", w.table_w()}};
  }
  return {};
}

WeightSpec decode_weight(const json& j) {
  const std::string kind = text(j, "kind");
  try {
    if (kind == "power") return WeightSpec::power(num(j, "beta"));
    if (kind == "log_power") return WeightSpec::log_power(num(j, "gamma"));
    if (kind == "table") return WeightSpec::table(doubles(field(j, "t")), doubles(field(j, "w")));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("unknown weight kind '" + kind + "'");
}

json encode(const BlochReport& r) {
  json out{{"domain", encode(r.domain)},
           {"value_at_origin", r.value_at_origin},
           {"seminorm_sup", r.seminorm_sup},
           {"norm", r.norm},
           {"argmax", encode_list(r.argmax)},
           {"grid", encode(r.grid)}};
  out["certified_bound"] = r.certified_bound ? json(*r.certified_bound) : json(nullptr);
  return out;
}

// --- pipeline results ------------------------------------------------------------

json encode(const SeparablePolynomial& p) {
  json terms = json::array();
  for (const auto& t : p.terms) {
    json factors = json::array();
    for (const auto& f : t) factors.push_back(encode(f));
    terms.push_back(factors);
  }
  return {{"dim", p.dim}, {"terms", terms}};
}

SeparablePolynomial decode_separable(const json& j) {
  SeparablePolynomial p;
  p.dim = integer(j, "dim");
  p.terms = list<std::vector<Polynomial1D>>(field(j, "terms"), [&](const json& t) {
    auto f = list<Polynomial1D>(t, decode_poly1d);
    if (static_cast<int>(f.size()) != p.dim) throw SchemaError("term has the wrong number of factors");
    return f;
  });
  return p;
}

json encode(const GoodSet& e) {
  json factors = json::array();
  for (const auto& term : e.factors) {
    json row = json::array();
    for (const auto& s : term)
      row.push_back({{"F", encode(s.F)}, {"inner", encode(s.inner)}, {"pullback", s.pullback}});
    factors.push_back(row);
  }
  return {{"dim", e.dim}, {"factors", factors}};
}

GoodSet decode_goodset(const json& j) {
  GoodSet e;
  e.dim = integer(j, "dim");
  e.factors = list<std::vector<PullbackSet>>(field(j, "factors"), [&](const json& row) {
    auto r = list<PullbackSet>(row, [](const json& s) {
      return PullbackSet{decode_arcs(field(s, "F")), decode_inner(field(s, "inner")), field(s, "pullback").get<bool>()};
    });
    if (static_cast<int>(r.size()) != e.dim) throw SchemaError("good set term has the wrong number of factors");
    return r;
  });
  return e;
}

json encode(const SimulReport& r) {
  return {{"f0", r.f0},
          {"bloch", r.bloch},
          {"bloch_bound", r.bloch_bound},
          {"sup_error", r.sup_error},
          {"measure_E", r.measure_E},
          {"measure_half_width", r.measure_half_width},
          {"e_samples", r.e_samples},
          {"eta", r.eta},
          {"q_degrees", r.q_degrees},
          {"p_degrees", r.p_degrees},
          {"chain_lengths", r.chain_lengths},
          {"achieved_quotients", r.achieved_quotients},
          {"pre_truncation_bloch", r.pre_truncation_bloch},
          {"pre_truncation_sup_error", r.pre_truncation_sup_error},
          {"truncation_r", r.truncation_r},
          {"truncation_tail", r.truncation_tail},
          {"truncation_degree", r.truncation_degree},
          {"terms", r.terms},
          {"decomposition_error", r.decomposition_error},
          {"eta_condition", r.eta_condition},
          {"telescoping_lhs", r.telescoping_lhs},
          {"telescoping_rhs", r.telescoping_rhs}};
}

SimulReport decode_simul_report(const json& j) {
  SimulReport r;
  r.f0 = num(j, "f0");
  r.bloch = num(j, "bloch");
  r.bloch_bound = num(j, "bloch_bound");
  r.sup_error = num(j, "sup_error");
  r.measure_E = num(j, "measure_E");
  r.measure_half_width = num(j, "measure_half_width");
  r.e_samples = field(j, "e_samples").get<std::size_t>();
  r.eta = num(j, "eta");
  r.q_degrees = ints(field(j, "q_degrees"));
  r.p_degrees = ints(field(j, "p_degrees"));
  r.chain_lengths = ints(field(j, "chain_lengths"));
  r.achieved_quotients = doubles(field(j, "achieved_quotients"));
  r.pre_truncation_bloch = num(j, "pre_truncation_bloch");
  r.pre_truncation_sup_error = num(j, "pre_truncation_sup_error");
  r.truncation_r = num(j, "truncation_r");
  r.truncation_tail = num(j, "truncation_tail");
  r.truncation_degree = integer(j, "truncation_degree");
  r.terms = integer(j, "terms");
  r.decomposition_error = num(j, "decomposition_error");
  r.eta_condition = field(j, "eta_condition").get<bool>();
  r.telescoping_lhs = num(j, "telescoping_lhs");
  r.telescoping_rhs = num(j, "telescoping_rhs");
  return r;
}

json encode(const SimulApproxResult& r) {
  return {{"ok", r.ok},     {"stage", r.stage}, {"reason", r.reason},          {"eps", r.eps},
          {"f", encode(r.f)}, {"E", encode(r.E)}, {"report", encode(r.report)}};
}

SimulApproxResult decode_simul(const json& j) {
  SimulApproxResult r;
  r.ok = field(j, "ok").get<bool>();
  r.stage = text(j, "stage");
  r.reason = text(j, "reason");
  r.eps = num(j, "eps");
  r.f = decode_separable(field(j, "f"));
  r.E = decode_goodset(field(j, "E"));
  r.report = decode_simul_report(field(j, "report"));
  return r;
}

json encode(const Certificate& c) {
  return {{"target_id", c.target_id},
          {"n", c.n},
          {"r_n", c.r_n},
          {"anchors", encode_list(c.anchors)},
          {"mesh", c.mesh},
          {"d_per_anchor", c.d_per_anchor},
          {"d_sup", c.d_sup},
          {"good_measure", c.good_measure},
          {"good_tol", c.good_tol},
          {"block_norm", c.block_norm},
          {"off_mesh_bound", c.off_mesh_bound},
          {"eps", c.eps},
          {"verified", c.verified},
          {"note", c.note},
          {"grid_angular", c.grid_angular},
          {"grid_seed", c.grid_seed}};
}

Certificate decode_certificate(const json& j) {
  Certificate c;
  c.target_id = integer(j, "target_id");
  c.n = integer(j, "n");
  c.r_n = num(j, "r_n");
  c.anchors = decode_cplx_list(field(j, "anchors"));
  c.mesh = num(j, "mesh");
  c.d_per_anchor = doubles(field(j, "d_per_anchor"));
  c.d_sup = num(j, "d_sup");
  c.good_measure = num(j, "good_measure");
  c.good_tol = num(j, "good_tol");
  c.block_norm = num(j, "block_norm");
  c.off_mesh_bound = num(j, "off_mesh_bound");
  c.eps = num(j, "eps");
  c.verified = field(j, "verified").get<bool>();
  c.note = text(j, "note");
  c.grid_angular = integer(j, "grid_angular");
  c.grid_seed = field(j, "grid_seed").get<std::uint64_t>();
  return c;
}

json encode(const UniversalBlock& b) {
  return {{"target_id", b.target_id}, {"f", encode(b.f)},       {"budget", b.budget},
          {"bloch", b.bloch},         {"accepted", b.accepted}, {"stabilization_index", b.stabilization_index},
          {"stage", b.stage}};
}

UniversalBlock decode_block(const json& j) {
  UniversalBlock b;
  b.target_id = integer(j, "target_id");
  b.f = decode_poly1d(field(j, "f"));
  b.budget = num(j, "budget");
  b.bloch = num(j, "bloch");
  b.accepted = field(j, "accepted").get<bool>();
  b.stabilization_index = integer(j, "stabilization_index");
  b.stage = text(j, "stage");
  return b;
}

json encode(const UniversalCandidate& c) {
  json blocks = json::array(), certs = json::array(), targets = json::array();
  for (const auto& b : c.blocks) blocks.push_back(encode(b));
  for (const auto& x : c.certificates) certs.push_back(encode(x));
  for (const auto& t : c.targets) targets.push_back(encode(t));
  return {{"radii", c.radii},   {"anchors", encode_list(c.anchors)}, {"mesh", c.mesh},
          {"blocks", blocks},   {"certificates", certs},             {"partial_bloch", c.partial_bloch},
          {"targets", targets}, {"function", encode(c.sum())}};
}

UniversalCandidate decode_candidate(const json& j) {
  UniversalCandidate c;
  c.radii = doubles(field(j, "radii"));
  c.anchors = decode_cplx_list(field(j, "anchors"));
  c.mesh = num(j, "mesh");
  c.blocks = list<UniversalBlock>(field(j, "blocks"), decode_block);
  c.certificates = list<Certificate>(field(j, "certificates"), decode_certificate);
  c.partial_bloch = doubles(field(j, "partial_bloch"));
  c.targets = list<BoundaryFunction>(field(j, "targets"), decode_boundary);
  if (c.blocks.size() != c.targets.size()) throw SchemaError("one block per target expected");
  for (const auto& x : c.certificates)
    if (x.target_id < 0 || x.target_id >= static_cast<int>(c.targets.size()))
      throw SchemaError("certificate refers to an unknown target");
  return c;
}

json encode(const PathSpec& p) {
  return {{"zeta", encode(p.zeta)}, {"w", encode(p.w)}, {"schedule", p.schedule}};
}

PathSpec decode_path(const json& j) {
  PathSpec p;
  p.zeta = decode_cplx(field(j, "zeta"));
  p.w = j.contains("w") ? decode_cplx(j["w"]) : cplx(0.0);
  p.schedule = doubles(field(j, "schedule"));
  return p;
}

// --- documents and files -----------------------------------------------------------

json make_document(const std::string& kind, json payload, bool timestamp) {
  std::string stamp;
  if (timestamp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    stamp = buf;
  }
  return {{"schema_version", kSchemaVersion}, {"kind", kind}, {"generated_at", stamp}, {"payload", std::move(payload)}};
}

const json& document_payload(const json& doc, const std::string& kind) {
  const json& v = field(doc, "schema_version");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw SchemaError("unsupported schema_version " + v.dump());
  const std::string k = text(doc, "kind");
  if (k != kind) throw SchemaError("expected a '" + kind + "' document, found '" + k + "'");
  return field(doc, "payload");
}

json strip_timestamp(json doc) {
  if (doc.is_object()) doc.erase("generated_at");
  return doc;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string certificates_csv(const std::vector<Certificate>& certs) {
  std::ostringstream os;
  os << "target_id,n,r_n,d_sup,good_measure,block_norm\n";
  for (const auto& c : certs)
    os << c.target_id << ',' << c.n << ',' << format_double(c.r_n) << ',' << format_double(c.d_sup) << ','
       << format_double(c.good_measure) << ',' << format_double(c.block_norm) << '\n';
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace wildbloch
