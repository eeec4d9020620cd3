#include "epscontact/report.hpp"

#include <regex>
#include <sstream>

#include "epscontact/expr.hpp"

namespace epc {

using nlohmann::ordered_json;

namespace {

std::string witness_text(const ZeroTest& t) {
  if (t.witness) {
    std::string s = "nonzero at " + describe(*t.witness);
    if (t.witness_value) s += " (value " + to_string(*t.witness_value) + ")";
    return s;
  }
  if (t.vanishing) return "vanishes at admissible " + describe(*t.vanishing);
  return {};
}

ordered_json components(const TensorField& t) {
  ordered_json out = ordered_json::array();
  for (const Scalar& s : t.components()) out.push_back(s.to_string());
  return out;
}

// (1,1) tensors and bilinear forms as row-major matrices
ordered_json matrix(const TensorField& t) {
  const int n = t.dim();
  ordered_json rows = ordered_json::array();
  for (int a = 0; a < n; ++a) {
    ordered_json row = ordered_json::array();
    for (int b = 0; b < n; ++b) row.push_back(t.at({a, b}).to_string());
    rows.push_back(row);
  }
  return rows;
}

ordered_json matrix(const std::vector<Scalar>& m, int n) {
  ordered_json rows = ordered_json::array();
  for (int a = 0; a < n; ++a) {
    ordered_json row = ordered_json::array();
    for (int b = 0; b < n; ++b) row.push_back(m[static_cast<std::size_t>(a * n + b)].to_string());
    rows.push_back(row);
  }
  return rows;
}

// nonzero components of a form, keyed by increasing index labels
ordered_json form_support(const TensorField& w) {
  ordered_json out = ordered_json::object();
  for (std::size_t f = 0; f < w.size(); ++f) {
    if (w[f].is_zero()) continue;
    const auto idx = w.unflatten(f);
    if (!std::is_sorted(idx.begin(), idx.end()) || std::adjacent_find(idx.begin(), idx.end()) != idx.end()) continue;
    out[index_label(w.host(), idx)] = w[f].to_string();
  }
  return out;
}

const char* verdict_name(ZeroVerdict v) { return to_string(v); }

void add_identities(Report& r, const std::string& group, const IdentityReport& rep, const ManifoldPtr& host) {
  for (const auto& c : rep.checks) r.add(group, c.name, c.verdict, host);
}

/// Rows for the defining equations; false when verification failed.
bool add_definition(Report& r, const LoadedInput& in) {
  for (const auto& n : in.manifest.notes) r.notes.push_back(in.name + ": " + n);
  for (const auto& n : in.built.notes) r.notes.push_back(in.name + ": " + n);
  for (const auto& n : in.verification.notes) r.notes.push_back(in.name + ": " + n);
  const std::string group = in.name + ": definition";
  if (!in.verification.ok()) {
    const auto& f = *in.verification.failure;
    r.add(group, f.equation, f.verdict, in.built.manifold);
    r.rows.back().note = f.detail;
    if (r.rows.back().verdict == "Zero") r.rows.back().verdict = "Fail";
    return false;
  }
  for (const char* eq : {"alpha nowhere zero", "|alpha|^2 = eps", "alpha = *d alpha"})
    r.add(ReportRow{group, eq, "Zero", true, {}, {}, {}, {}});
  const auto& s = *in.verification.structure;
  r.payload["structures"][in.name] = {{"epsilon", s.epsilon()},
                                      {"signature", s.signature() < 0 ? "lorentzian" : "riemannian"},
                                      {"orientation", s.manifold()->orientation()},
                                      {"frame", s.manifold()->labels()},
                                      {"alpha", components(s.alpha())},
                                      {"xi", components(s.xi())}};
  return true;
}

Report start(const std::string& command, const std::vector<const LoadedInput*>& ins, const RunOptions& o) {
  Report r;
  r.command = command;
  for (const auto* in : ins) r.inputs.push_back(in->name);
  r.seed = o.seed;
  for (const auto& [k, v] : o.params) r.params[k] = to_string(v);
  for (const auto& a : o.assume) r.notes.push_back("extra assumption: " + a);
  return r;
}

SymbolTable symbols_of(const std::vector<const Manifest*>& ms) {
  SymbolTable t;
  for (const auto* m : ms) {
    for (const auto& p : m->parameters) t.params.insert(p.name);
    for (const auto& c : m->coordinates) t.vars.insert(c);
    for (const auto& f : m->functions) t.funcs.insert(f.name);
  }
  return t;
}

}  // namespace

void Report::add(const std::string& group, const std::string& name, const TensorVerdict& v, const ManifoldPtr& host,
                 bool required) {
  ReportRow row{group, name, verdict_name(v.verdict), required, {}, {}, {}, {}};
  if (v.verdict != ZeroVerdict::Zero) {
    if (!v.index.empty()) row.component = index_label(host, v.index);
    row.value = v.value.to_string();
    row.witness = witness_text(v.test);
    row.note = v.test.note;
  }
  rows.push_back(std::move(row));
}

void Report::add_flag(const std::string& group, const std::string& name, bool pass, const std::string& note) {
  rows.push_back(ReportRow{group, name, pass ? "Pass" : "Fail", true, {}, {}, {}, note});
}

ExitCode Report::exit_code() const {
  bool unknown = false;
  for (const auto& r : rows) {
    if (r.required && (r.verdict == "NonZero" || r.verdict == "Fail")) return ExitCode::Fail;
    if (r.verdict == "Unknown") unknown = true;
  }
  return unknown ? ExitCode::Unknown : ExitCode::Pass;
}

static const char* status_name(ExitCode c) {
  switch (c) {
    case ExitCode::Pass:
      return "pass";
    case ExitCode::Fail:
      return "fail";
    case ExitCode::Unknown:
      return "unknown";
    case ExitCode::InputError:
      return "input-error";
  }
  return "";
}

ordered_json Report::to_json() const {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["tool"] = {{"name", "epscontact"}, {"version", kToolVersion}};
  j["command"] = command;
  j["inputs"] = inputs;
  j["seed"] = seed;
  j["params"] = ordered_json::object();
  for (const auto& [k, v] : params) j["params"][k] = v;
  j["status"] = status_name(exit_code());
  j["exit_code"] = static_cast<int>(exit_code());
  j["notes"] = notes;
  ordered_json checks = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json c = {{"group", r.group}, {"name", r.name}, {"verdict", r.verdict}, {"required", r.required}};
    if (!r.component.empty()) c["component"] = r.component;
    if (!r.value.empty()) c["value"] = r.value;
    if (!r.witness.empty()) c["witness"] = r.witness;
    if (!r.note.empty()) c["note"] = r.note;
    checks.push_back(c);
  }
  j["checks"] = checks;
  j["results"] = payload;
  return j;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "epscontact " << kToolVersion << "  " << command;
  for (const auto& i : inputs) os << "  " << i;
  os << "  seed=" << seed;
  for (const auto& [k, v] : params) os << "  " << k << "=" << v;
  os << "\n";
  for (const auto& n : notes) os << "note: " << n << "\n";
  std::string group;
  for (const auto& r : rows) {
    if (r.group != group) {
      group = r.group;
      os << "[" << group << "]\n";
    }
    std::string v = r.verdict;
    if (!r.required) v = "(" + v + ")";
    v.resize(std::max<std::size_t>(v.size(), 10), ' ');
    os << "  " << v << " " << r.name;
    if (!r.component.empty()) os << "  at " << r.component << " = " << r.value;
    if (!r.witness.empty()) os << "  [" << r.witness << "]";
    if (!r.note.empty()) os << "  -- " << r.note;
    os << "\n";
  }
  if (!payload.empty()) {
    os << "results:\n";
    for (const auto& [k, v] : payload.items()) os << "  " << k << ": " << v.dump() << "\n";
  }
  os << "status: " << status_name(exit_code()) << " (exit " << static_cast<int>(exit_code()) << ")\n";
  return os.str();
}

std::optional<Scalar> monomial_sqrt(const Scalar& l2) {
  if (l2.is_zero()) return Scalar();
  if (!l2.is_single_term()) return std::nullopt;
  const auto& [m, q] = *l2.terms().begin();
  if (q < 0 || !m.exp_arg.is_zero()) return std::nullopt;
  mpz_class n = q.get_num(), d = q.get_den();
  mpz_class rn = sqrt(n), rd = sqrt(d);
  if (rn * rn != n || rd * rd != d) return std::nullopt;
  Monomial half;
  for (const auto& [atom, e] : m.factors) {
    if (e % 2 != 0) return std::nullopt;
    half.factors.emplace_back(atom, e / 2);
  }
  return Scalar::from_terms({{half, Rational(rn, rd)}});
}

LoadedInput load_input(const std::string& text, const std::string& name, const RunOptions& o, bool from_catalog) {
  Manifest m = parse_manifest(text);
  if (o.orientation) {
    if (*o.orientation == "auto")
      m.orientation.reset();
    else if (*o.orientation == "+1" || *o.orientation == "1")
      m.orientation = 1;
    else if (*o.orientation == "-1")
      m.orientation = -1;
    else
      throw InputError("orientation must be auto, +1 or -1");
  }
  for (const auto& a : o.assume) {
    for (auto& p : m.parameters) {
      const std::regex word("(^|[^A-Za-z0-9_])" + p.name + "([^A-Za-z0-9_]|$)");
      if (std::regex_search(a, word)) {
        p.assume.push_back(a);
        break;
      }
    }
  }
  std::map<std::string, Rational> params;
  for (const auto& p : m.parameters)
    if (auto it = o.params.find(p.name); it != o.params.end()) params.insert(*it);
  BuiltManifest b = build_manifest(m, params);
  ContactVerification v = verify_epsilon_contact(b.manifold, b.alpha, o.seed, b.auto_orientation);
  return LoadedInput{name, from_catalog, std::move(m), std::move(b), std::move(v)};
}

LoadedInput load_catalog_input(const std::string& name, const RunOptions& o) {
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw InputError("no catalog entry named " + name);
  return load_input(catalog_source(name), name, o, true);
}

Report run_check(const LoadedInput& in, const RunOptions& o) {
  Report r = start("check", {&in}, o);
  if (!add_definition(r, in)) return r;
  const auto& s = *in.verification.structure;
  const auto& host = s.manifold();
  add_identities(r, "structure tensor", structure_tensor_report(s), host);
  add_identities(r, "derived tensors", derived_tensor_report(s), host);
  add_identities(r, "invariants", structure_invariants(s), host);
  try {
    const ContactFrame f = find_contact_frame(s);
    add_identities(r, "contact frame", f.pairings, host);
    r.payload["contact_frame"] = {{"u", components(f.u)}, {"phi_u", components(f.phi_u)}};
  } catch (const SearchFailure& e) {
    r.add(ReportRow{"contact frame", "frame found", "Unknown", true, {}, {}, {}, e.what()});
  }
  r.payload["phi"] = matrix(s.phi());
  r.payload["h"] = matrix(s.h());
  return r;
}

Report run_classify(const LoadedInput& in, const RunOptions& o) {
  Report r = start("classify", {&in}, o);
  if (!add_definition(r, in)) return r;
  const auto& s = *in.verification.structure;
  const auto& host = s.manifold();
  const Classification c = classify(s);
  const TensorField ric = ricci_of(levi_civita(host)).ricci;
  r.payload["ricci"] = matrix(ric);
  if (!c.ok()) {
    r.add("eta-Einstein", "Ric = A g + B alpha (x) alpha", c.failure->witness, host);
    r.rows.back().note = c.failure->reason;
    if (c.failure->fit_lambda2) r.payload["fit"] = {{"lambda2", c.failure->fit_lambda2->to_string()},
                                                    {"kappa", c.failure->fit_kappa->to_string()}};
    return r;
  }
  const auto& cert = *c.certificate;
  r.add("eta-Einstein", "Ric = (s/2)(lambda^2 + kappa eps) g - s kappa alpha (x) alpha",
        zero_verdict(cert.residual, s.assumptions(), o.seed), host);
  r.payload["certificate"] = {{"space", std::string("Cont_") + (cert.signature < 0 ? "L" : "R")},
                              {"epsilon", cert.epsilon},
                              {"lambda2", cert.lambda2.to_string()},
                              {"kappa", cert.kappa.to_string()}};
  if (in.from_catalog) {
    std::map<std::string, Rational> params;
    for (const auto& p : in.manifest.parameters)
      if (auto it = o.params.find(p.name); it != o.params.end()) params.insert(*it);
    try {
      const CatalogEntry e = catalog(in.name, params, o.seed);
      if (e.expected) r.add_flag("catalog", "certificate matches the documented one", cont_space_membership(cert, *e.expected));
      if (e.displayed_ricci)
        r.add("catalog", "Ric equals the documented tensor",
              zero_verdict(ric - rehost(*e.displayed_ricci, host), s.assumptions(), o.seed), host);
    } catch (const CatalogError& err) {
      r.notes.push_back(std::string("documented certificate unavailable: ") + err.what());
    }
  }
  return r;
}

Report run_null_analysis(const LoadedInput& in, const RunOptions& o) {
  if (in.verification.ok() && in.verification.structure->epsilon() != 0)
    throw InputError("null-analysis needs a null structure; " + in.name + " has eps = " +
                     std::to_string(in.verification.structure->epsilon()));
  Report r = start("null-analysis", {&in}, o);
  if (!add_definition(r, in)) return r;
  const auto& s = *in.verification.structure;
  const auto& host = s.manifold();

  try {
    const Scalar mu = null_mu(s);
    r.payload["mu"] = mu.to_string();
    r.add_flag("deformation", "h = mu xi (x) alpha", true);
  } catch (const NullStructureError& e) {
    r.add_flag("deformation", "h = mu xi (x) alpha", false, e.what());
  }

  const PredicateResult sas = is_sasaki(s), kc = is_k_contact(s);
  r.add("predicates", "Sasaki (h = 0)", sas.witness, host, false);
  r.add("predicates", "K-contact (L_xi g = 0)", kc.witness, host, false);
  r.payload["sasaki"] = verdict_name(sas.verdict);
  r.payload["k_contact"] = verdict_name(kc.verdict);

  std::optional<ContactFrame> frame;
  try {
    frame = find_contact_frame(s);
    add_identities(r, "light-cone frame", frame->pairings, host);
  } catch (const SearchFailure& e) {
    r.add(ReportRow{"light-cone frame", "frame found", "Unknown", true, {}, {}, {}, e.what()});
    return r;
  }

  const ExtendedJ j = extend_j(s);
  const IntegrabilityReport ir = sasaki_iff_integrable_report(s, *frame);
  r.add("integrability", "N_J = 0", ir.nijenhuis, j.manifold, false);
  r.add(ReportRow{"integrability", "J zero-deformable", verdict_name(ir.zero_deformable.verdict), false, {}, {}, {},
                  "rank J = " + std::to_string(ir.zero_deformable.rank_j.rank) +
                      ", rank J^2 = " + std::to_string(ir.zero_deformable.rank_j2.rank)});
  r.add("integrability", "ker J involutive", ir.kernel.witness, j.manifold, false);
  r.rows.back().verdict = verdict_name(ir.kernel.verdict);
  const ZeroVerdict integrable = is_integrable(ir);
  r.payload["integrable"] = verdict_name(integrable);
  if (integrable == ZeroVerdict::Unknown || ir.sasaki.verdict == ZeroVerdict::Unknown)
    r.add(ReportRow{"integrability", "Sasaki iff J integrable", "Unknown", true, {}, {}, {}, {}});
  else
    r.add_flag("integrability", "Sasaki iff J integrable", ir.agrees);

  if (sas.verdict == ZeroVerdict::Zero) {
    const Scalar crit = saskc_criterion(s, *frame);
    r.payload["g(L_xi u, u)"] = crit.to_string();
    const auto cv = zero_verdict(TensorField::function(host, crit), s.assumptions(), o.seed).verdict;
    if (cv == ZeroVerdict::Unknown || kc.verdict == ZeroVerdict::Unknown)
      r.add(ReportRow{"predicates", "K-contact iff g(L_xi u, u) = 0", "Unknown", true, {}, {}, {}, {}});
    else
      r.add_flag("predicates", "K-contact iff g(L_xi u, u) = 0", cv == kc.verdict);
  }
  r.payload["J"] = matrix(j_matrix_in_frame(j, s, *frame), 4);
  return r;
}

Report run_product(const LoadedInput& n, const LoadedInput& x, const RunOptions& o) {
  const auto sig = [](const LoadedInput& in) { return in.built.manifold->signature(); };
  if (sig(n) >= 0) throw InputError("product: the first manifest must be Lorentzian (" + n.name + " is not)");
  if (sig(x) <= 0) throw InputError("product: the second manifest must be Riemannian (" + x.name + " is not)");
  Report r = start("product", {&n, &x}, o);
  const bool ok_n = add_definition(r, n);
  const bool ok_x = add_definition(r, x);
  if (!ok_n || !ok_x) return r;
  const auto& sn = *n.verification.structure;
  const auto& sx = *x.verification.structure;

  Scalar lambda;
  if (o.lambda) {
    try {
      lambda = parse_scalar(*o.lambda, symbols_of({&n.manifest, &x.manifest}));
    } catch (const std::exception& e) {
      throw InputError(std::string("--lambda: ") + e.what());
    }
  } else {
    const Classification cn = classify(sn);
    if (!cn.ok()) {
      r.add("factors", n.name + " is eta-Einstein", cn.failure->witness, sn.manifold());
      return r;
    }
    const auto root = monomial_sqrt(cn.certificate->lambda2);
    if (!root) throw InputError("cannot take the square root of lambda^2 = " + cn.certificate->lambda2.to_string() +
                                "; pass --lambda");
    lambda = *root;
  }
  r.payload["lambda"] = lambda.to_string();

  std::optional<SupergravityConfig> cfg;
  try {
    cfg = build_solution(sn, sx, lambda);
  } catch (const SugraError& e) {
    r.add_flag("factors", "compatible pair", false, e.what());
    return r;
  }
  r.add_flag("factors", "compatible pair", true);
  r.payload["l^2"] = cfg->l_squared ? cfg->l_squared->to_string() : "";
  r.payload["c"] = to_string(cfg->c);
  r.payload["flux"] = form_support(cfg->h);

  const EomReport eom = verify_eom(*cfg);
  for (const auto* c : eom.checks()) r.add("equations of motion", c->name, c->verdict, cfg->manifold);
  r.add("equations of motion", "(1/3!) H_abc H^abc = 0", eom.norm_contraction_verdict, cfg->manifold);
  const TorsionReport tor = torsion_ricci_flat(*cfg, eom);
  r.add("skew torsion", "Ric(nabla^H) = 0", tor.ricci, cfg->manifold);
  r.add("skew torsion", "antisymmetric part of Ric(nabla^H) = 0", tor.antisymmetric, cfg->manifold);
  r.add("flux", "*H block form", zero_verdict(star_block_residual(*cfg), cfg->assumptions, o.seed), cfg->manifold);
  return r;
}

}  // namespace epc
