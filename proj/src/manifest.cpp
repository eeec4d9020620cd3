#include "epscontact/manifest.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

#include "epscontact/expr.hpp"

namespace epc {

using ojson = nlohmann::ordered_json;

namespace {

struct Located {
  std::size_t line = 0, column = 0;
};

Located locate_offset(const std::string& text, std::size_t offset) {
  Located l{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++l.line;
      l.column = 1;
    } else {
      ++l.column;
    }
  }
  return l;
}

// Best-effort position of a string literal in the source text.
Located locate_literal(const std::string& text, const std::string& literal, std::size_t inner_column = 0) {
  const std::string quoted = ojson(literal).dump();
  const auto pos = text.find(quoted);
  if (pos == std::string::npos) return {};
  return locate_offset(text, pos + 1 + inner_column);
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& msg, const std::string& near = {}) const {
    const Located l = near.empty() ? Located{} : locate_literal(text_, near);
    throw ManifestError(msg, l.line, l.column);
  }

  const ojson& field(const ojson& obj, const std::string& key, const std::string& where) const {
    if (!obj.is_object()) fail(where + " must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + " lacks \"" + key + "\"");
    return *it;
  }

  std::string string(const ojson& v, const std::string& where) const {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    fail(where + " must be a string");
  }

  Scalar scalar(const std::string& literal, const SymbolTable& symbols, const std::string& where) const {
    try {
      return parse_scalar(literal, symbols);
    } catch (const ParseError& e) {
      const Located l = locate_literal(text_, literal, e.column() > 0 ? e.column() - 1 : 0);
      throw ManifestError(where + ": " + e.what(), l.line, l.column);
    } catch (const ExprError& e) {
      const Located l = locate_literal(text_, literal);
      throw ManifestError(where + ": " + e.what(), l.line, l.column);
    }
  }

 private:
  const std::string& text_;
};

SymbolTable symbols_of(const Manifest& m, bool with_labels) {
  SymbolTable s;
  for (const auto& p : m.parameters) s.params.insert(p.name);
  for (const auto& f : m.functions) s.funcs.insert(f.name);
  for (const auto& c : m.coordinates) s.vars.insert(c);
  if (with_labels)
    for (const auto& l : m.frame) s.params.insert(l);
  return s;
}

// Splits a linear combination of frame labels into coefficients.
std::vector<Scalar> linear_in_labels(const Scalar& s, const std::vector<std::string>& labels, const std::string& where,
                                     const Reader& r, const std::string& literal) {
  std::vector<Scalar> out;
  Scalar rebuilt;
  const std::set<std::string> label_set(labels.begin(), labels.end());
  for (const auto& l : labels) {
    Scalar c = s.coefficient(l, 1);
    for (const auto& p : c.params())
      if (label_set.count(p)) r.fail(where + " is not linear in the frame labels", literal);
    rebuilt += c * Scalar::param(l);
    out.push_back(std::move(c));
  }
  if (!(rebuilt == s)) r.fail(where + " must be a linear combination of frame labels", literal);
  return out;
}

std::string signature_name(int s) { return s > 0 ? "riemannian" : "lorentzian"; }

}  // namespace

Manifest parse_manifest(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    const Located l = locate_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ManifestError(std::string("JSON syntax error: ") + e.what(), l.line, l.column);
  }
  Reader r(text);
  Manifest m;
  if (!j.is_object()) r.fail("manifest must be a JSON object");
  if (j.contains("schema") && r.string(j["schema"], "schema") != kManifestSchema)
    r.fail("unsupported schema " + j["schema"].dump());
  m.name = j.contains("name") ? r.string(j["name"], "name") : "";

  std::set<std::string> names;
  auto claim = [&](const std::string& name, const std::string& what) {
    if (name.empty()) r.fail(what + " with empty name");
    if (!names.insert(name).second) r.fail("symbol \"" + name + "\" declared twice", name);
  };

  if (j.contains("parameters")) {
    for (const auto& p : j["parameters"]) {
      ManifestParameter mp;
      mp.name = r.string(r.field(p, "name", "parameter"), "parameter name");
      claim(mp.name, "parameter");
      if (p.contains("assume")) {
        const auto& a = p["assume"];
        if (a.is_array())
          for (const auto& t : a) mp.assume.push_back(r.string(t, "assumption"));
        else
          mp.assume.push_back(r.string(a, "assumption"));
      }
      m.parameters.push_back(std::move(mp));
    }
  }
  if (j.contains("functions")) {
    for (const auto& f : j["functions"]) {
      ManifestFunction mf;
      mf.name = r.string(r.field(f, "name", "function"), "function name");
      claim(mf.name, "function");
      if (f.contains("assume")) {
        const std::string a = r.string(f["assume"], "function assumption");
        if (a != "nonzero") r.fail("unsupported function assumption \"" + a + "\"", a);
        mf.nonzero = true;
      }
      m.functions.push_back(std::move(mf));
    }
  }

  const ojson& man = r.field(j, "manifold", "manifest");
  if (man.contains("kind")) m.kind = r.string(man["kind"], "manifold.kind");
  if (m.kind != "left-invariant" && m.kind != "coordinate") r.fail("unknown manifold kind \"" + m.kind + "\"", m.kind);
  for (const auto& l : r.field(man, "frame", "manifold")) {
    m.frame.push_back(r.string(l, "frame label"));
    claim(m.frame.back(), "frame label");
  }
  const std::size_t n = m.frame.size();
  if (n == 0) r.fail("manifold.frame is empty");
  if (man.contains("coordinates"))
    for (const auto& c : man["coordinates"]) {
      m.coordinates.push_back(r.string(c, "coordinate"));
      claim(m.coordinates.back(), "coordinate");
    }
  if (m.kind == "coordinate" && m.coordinates.size() != n)
    r.fail("a coordinate frame needs one coordinate per frame label");
  if (m.kind == "left-invariant" && !m.coordinates.empty()) r.fail("left-invariant frames take no coordinates");

  if (man.contains("brackets")) {
    if (m.kind == "coordinate") r.fail("coordinate frames commute; brackets are not allowed");
    const auto& b = man["brackets"];
    if (!b.is_object()) r.fail("manifold.brackets must be an object");
    for (const auto& [key, value] : b.items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos) r.fail("bracket key \"" + key + "\" must read \"a,b\"", key);
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(' '));
        s.erase(s.find_last_not_of(' ') + 1);
        return s;
      };
      ManifestBracket mb{trim(key.substr(0, comma)), trim(key.substr(comma + 1)), r.string(value, "bracket value")};
      for (const auto& side : {mb.left, mb.right})
        if (std::find(m.frame.begin(), m.frame.end(), side) == m.frame.end())
          r.fail("bracket key \"" + key + "\" names an unknown frame label", key);
      if (mb.left == mb.right) r.fail("bracket key \"" + key + "\" repeats a label", key);
      for (const auto& other : m.brackets)
        if ((other.left == mb.left && other.right == mb.right) || (other.left == mb.right && other.right == mb.left))
          r.fail("bracket [" + mb.left + "," + mb.right + "] given twice", key);
      m.brackets.push_back(std::move(mb));
    }
  }

  const auto& g = r.field(man, "metric", "manifold");
  if (!g.is_array() || g.size() != n) r.fail("manifold.metric must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  for (const auto& row : g) {
    if (!row.is_array() || row.size() != n) r.fail("manifold.metric rows must have " + std::to_string(n) + " entries");
    std::vector<std::string> rr;
    for (const auto& e : row) rr.push_back(r.string(e, "metric entry"));
    m.metric.push_back(std::move(rr));
  }
  const std::string sig = r.string(r.field(man, "signature", "manifold"), "manifold.signature");
  if (sig == "riemannian") m.signature = 1;
  else if (sig == "lorentzian") m.signature = -1;
  else r.fail("signature must be \"riemannian\" or \"lorentzian\"", sig);
  if (man.contains("orientation")) {
    const auto& o = man["orientation"];
    if (o.is_string() && o.get<std::string>() == "auto") m.orientation = std::nullopt;
    else if (o.is_number_integer() && (o.get<int>() == 1 || o.get<int>() == -1)) m.orientation = o.get<int>();
    else r.fail("orientation must be 1, -1 or \"auto\"");
  }

  const auto& a = r.field(j, "alpha", "manifest");
  if (a.is_string()) {
    m.alpha_expr = a.get<std::string>();
  } else if (a.is_object()) {
    for (const auto& [label, value] : a.items()) {
      if (std::find(m.frame.begin(), m.frame.end(), label) == m.frame.end())
        r.fail("alpha names unknown frame label \"" + label + "\"", label);
      m.alpha_components.emplace_back(label, r.string(value, "alpha component"));
    }
  } else {
    r.fail("alpha must be a string or an object");
  }
  if (j.contains("notes"))
    for (const auto& note : j["notes"]) m.notes.push_back(r.string(note, "note"));

  // Every literal must parse against the declared symbols.
  const SymbolTable plain = symbols_of(m, false);
  const SymbolTable labelled = symbols_of(m, true);
  for (const auto& b : m.brackets) {
    const Scalar s = r.scalar(b.value, labelled, "bracket [" + b.left + "," + b.right + "]");
    linear_in_labels(s, m.frame, "bracket [" + b.left + "," + b.right + "]", r, b.value);
  }
  for (const auto& row : m.metric)
    for (const auto& e : row) r.scalar(e, plain, "metric entry");
  if (m.alpha_expr) linear_in_labels(r.scalar(*m.alpha_expr, labelled, "alpha"), m.frame, "alpha", r, *m.alpha_expr);
  for (const auto& [label, value] : m.alpha_components) r.scalar(value, plain, "alpha component " + label);
  return m;
}

std::string serialize_manifest(const Manifest& m) {
  ojson j;
  j["schema"] = kManifestSchema;
  j["name"] = m.name;
  if (!m.parameters.empty()) {
    ojson ps = ojson::array();
    for (const auto& p : m.parameters) ps.push_back({{"name", p.name}, {"assume", p.assume}});
    j["parameters"] = ps;
  }
  if (!m.functions.empty()) {
    ojson fs = ojson::array();
    for (const auto& f : m.functions) {
      ojson o{{"name", f.name}};
      if (f.nonzero) o["assume"] = "nonzero";
      fs.push_back(o);
    }
    j["functions"] = fs;
  }
  ojson man;
  man["kind"] = m.kind;
  man["frame"] = m.frame;
  if (!m.coordinates.empty()) man["coordinates"] = m.coordinates;
  if (!m.brackets.empty()) {
    ojson b = ojson::object();
    for (const auto& br : m.brackets) b[br.left + "," + br.right] = br.value;
    man["brackets"] = b;
  }
  man["metric"] = m.metric;
  man["signature"] = signature_name(m.signature);
  if (m.orientation) man["orientation"] = *m.orientation;
  else man["orientation"] = "auto";
  j["manifold"] = man;
  if (m.alpha_expr) {
    j["alpha"] = *m.alpha_expr;
  } else {
    ojson a = ojson::object();
    for (const auto& [label, value] : m.alpha_components) a[label] = value;
    j["alpha"] = a;
  }
  if (!m.notes.empty()) j["notes"] = m.notes;
  return j.dump(2) + "\n";
}

BuiltManifest build_manifest(const Manifest& m, const std::map<std::string, Rational>& params) {
  const std::string text = serialize_manifest(m);
  Reader r(text);
  const SymbolTable plain = symbols_of(m, false);
  const SymbolTable labelled = symbols_of(m, true);
  const int n = static_cast<int>(m.frame.size());
  auto label_index = [&](const std::string& l) {
    return static_cast<int>(std::find(m.frame.begin(), m.frame.end(), l) - m.frame.begin());
  };

  FrameManifold::Data d;
  d.name = m.name;
  d.labels = m.frame;
  d.signature = m.signature;
  d.orientation = m.orientation.value_or(1);
  if (m.kind == "coordinate") d.coordinates = m.coordinates;
  d.structure.assign(static_cast<std::size_t>(n * n * n), Scalar());
  for (const auto& b : m.brackets) {
    const auto coeffs =
        linear_in_labels(r.scalar(b.value, labelled, "bracket"), m.frame, "bracket", r, b.value);
    const int i = label_index(b.left), jj = label_index(b.right);
    for (int k = 0; k < n; ++k) {
      d.structure[static_cast<std::size_t>((k * n + i) * n + jj)] = coeffs[static_cast<std::size_t>(k)];
      d.structure[static_cast<std::size_t>((k * n + jj) * n + i)] = -coeffs[static_cast<std::size_t>(k)];
    }
  }
  for (const auto& row : m.metric)
    for (const auto& e : row) d.metric.push_back(r.scalar(e, plain, "metric entry"));
  try {
    for (const auto& p : m.parameters) {
      d.assumptions.declare(p.name);
      for (const auto& t : p.assume) d.assumptions.add(t);
    }
    for (const auto& f : m.functions) d.assumptions.declare_function(f.name, f.nonzero);
    d.assumptions.check_consistent();
  } catch (const std::exception& e) {
    throw ManifestError(std::string("assumptions: ") + e.what());
  }

  ManifoldPtr manifold;
  try {
    manifold = FrameManifold::make(std::move(d));
  } catch (const GeometryError& e) {
    throw ManifestError(std::string("manifold: ") + e.what());
  }
  if (auto v = manifold->jacobi_violation()) {
    const auto& l = manifold->labels();
    throw ManifestError("Jacobi identity fails for (" + l[static_cast<std::size_t>((*v)[0])] + ", " +
                        l[static_cast<std::size_t>((*v)[1])] + ", " + l[static_cast<std::size_t>((*v)[2])] + ")");
  }

  std::vector<Scalar> alpha(static_cast<std::size_t>(n));
  if (m.alpha_expr) {
    alpha = linear_in_labels(r.scalar(*m.alpha_expr, labelled, "alpha"), m.frame, "alpha", r, *m.alpha_expr);
  } else {
    for (const auto& [label, value] : m.alpha_components)
      alpha[static_cast<std::size_t>(label_index(label))] = r.scalar(value, plain, "alpha component");
  }

  BuiltManifest out{manifold, TensorField::one_form(manifold, alpha), !m.orientation.has_value(), {}};
  for (const auto& [name, value] : params) {
    if (!plain.params.count(name)) throw ManifestError("unknown parameter \"" + name + "\"");
    if (!out.manifold->assumptions().admits(name, value))
      throw ManifestError("parameter " + name + " = " + to_string(value) + " is outside its declared range");
    out.manifold = substitute_parameter(out.manifold, name, Scalar(value));
    out.alpha = rehost(out.alpha.map([&](const Scalar& c) { return c.substitute(name, Scalar(value)); }), out.manifold);
    out.notes.push_back("substituted " + name + " = " + to_string(value));
  }
  return out;
}

std::map<std::string, Rational> parse_param_list(const std::string& text) {
  std::map<std::string, Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw ManifestError("parameter binding \"" + item + "\" must read name=value");
      std::string key = item.substr(0, eq);
      key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
      try {
        out[key] = parse_rational(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw ManifestError("parameter value \"" + item.substr(eq + 1) + "\" is not a rational number");
      }
    }
    start = end + 1;
  }
  return out;
}

}  // namespace epc
