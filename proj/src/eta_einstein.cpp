#include "epscontact/eta_einstein.hpp"

#include <algorithm>

namespace epc {

namespace detail {
const std::vector<std::pair<std::string, std::string>>& catalog_sources();
}

namespace {

struct Fit {
  Scalar a, b;  // Ric ~ a g + b alpha (x) alpha
};

std::optional<Fit> cramer(const Scalar& g1, const Scalar& q1, const Scalar& r1, const Scalar& g2, const Scalar& q2,
                          const Scalar& r2) {
  const Scalar det = g1 * q2 - g2 * q1;
  if (det.is_zero()) return std::nullopt;
  const Scalar inv = det.inverse();
  return Fit{(r1 * q2 - r2 * q1) * inv, (g1 * r2 - g2 * r1) * inv};
}

std::optional<Fit> least_squares(const TensorField& g, const TensorField& aa, const TensorField& ric) {
  Scalar gg, ga, qq, gr, qr;
  for (std::size_t f = 0; f < g.size(); ++f) {
    gg += g[f] * g[f];
    ga += g[f] * aa[f];
    qq += aa[f] * aa[f];
    gr += g[f] * ric[f];
    qr += aa[f] * ric[f];
  }
  try {
    return cramer(gg, ga, gr, ga, qq, qr);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// (lambda^2, kappa) from Ric = A g + B alpha (x) alpha.
std::pair<Scalar, Scalar> constants_of(const Fit& f, int sg, int eps) {
  const Scalar kappa = Scalar(static_cast<long>(-sg)) * f.b;
  const Scalar lambda2 = Scalar(static_cast<long>(2 * sg)) * f.a - Scalar(static_cast<long>(eps)) * kappa;
  return {lambda2, kappa};
}

}  // namespace

TensorField eta_einstein_ricci(const EpsilonContactStructure& s, const Scalar& lambda2, const Scalar& kappa) {
  const Scalar sg(static_cast<long>(s.signature()));
  const Scalar a = sg * Scalar(Rational(1, 2)) * (lambda2 + kappa * Scalar(static_cast<long>(s.epsilon())));
  return a * TensorField::metric(s.manifold()) - (sg * kappa) * tensor_product(s.alpha(), s.alpha());
}

Classification classify(const EpsilonContactStructure& s, Exec exec) {
  const auto& m = s.manifold();
  const auto& as = s.assumptions();
  const TensorField ric = ricci_of(levi_civita(m, exec), exec).ricci;
  const TensorField g = TensorField::metric(m);
  const TensorField aa = tensor_product(s.alpha(), s.alpha());
  const int n = m->dim();
  Classification out;

  auto fail = [&](const std::string& reason, const TensorField& residual) {
    NotEtaEinstein ne{reason, zero_verdict(residual, as, s.seed()), {}, {}};
    if (auto fit = least_squares(g, aa, ric)) {
      auto [l2, k] = constants_of(*fit, s.signature(), s.epsilon());
      ne.fit_lambda2 = l2;
      ne.fit_kappa = k;
    }
    out.failure = std::move(ne);
    return out;
  };

  std::optional<Fit> fit;
  for (int p = 0; p < n * n && !fit; ++p)
    for (int q = p + 1; q < n * n && !fit; ++q) {
      const auto P = static_cast<std::size_t>(p), Q = static_cast<std::size_t>(q);
      fit = cramer(g[P], aa[P], ric[P], g[Q], aa[Q], ric[Q]);
    }
  if (!fit) return fail("g and alpha (x) alpha are proportional; the system is singular", ric);

  const TensorField residual = ric - fit->a * g - fit->b * aa;
  if (!residual.is_zero()) return fail("Ric is not a combination of g and alpha (x) alpha", residual);
  if (fit->a.depends_on_coordinates() || fit->b.depends_on_coordinates())
    return fail("the coefficients of g and alpha (x) alpha are not constant",
                TensorField::function(m, fit->a.depends_on_coordinates() ? fit->a : fit->b));

  auto [lambda2, kappa] = constants_of(*fit, s.signature(), s.epsilon());
  const SignVerdict l2sign = sign_check(lambda2, as, s.seed());
  if (l2sign != SignVerdict::NonNegative)
    return fail(l2sign == SignVerdict::Negative ? "lambda^2 < 0" : "lambda^2 >= 0 could not be certified",
                TensorField::function(m, lambda2));
  if (s.signature() < 0) {
    const SignVerdict ksign = sign_check(kappa, as, s.seed());
    if (ksign != SignVerdict::NonNegative)
      return fail(ksign == SignVerdict::Negative ? "kappa < 0 in Lorentzian signature"
                                                 : "kappa >= 0 could not be certified",
                  TensorField::function(m, kappa));
  }
  out.certificate =
      EtaEinsteinCertificate{s.epsilon(), s.signature(), lambda2, kappa, ric - eta_einstein_ricci(s, lambda2, kappa)};
  return out;
}

bool cont_space_membership(const EtaEinsteinCertificate& c, const ContSpace& space) {
  return c.signature == space.signature && c.epsilon == space.epsilon && (c.lambda2 - space.lambda2).is_zero() &&
         (c.kappa - space.kappa).is_zero();
}

PairCompatibility compatible_pair(const EtaEinsteinCertificate& n, const EtaEinsteinCertificate& x,
                                  const Assumptions& a, std::uint64_t seed) {
  PairCompatibility r;
  r.lambda2 = n.lambda2;
  r.l2 = n.kappa;
  if (n.signature != -1) {
    r.failed = "the first factor must be Lorentzian";
  } else if (x.signature != 1) {
    r.failed = "the second factor must be Riemannian";
  } else if (x.epsilon != 1) {
    r.failed = "the Riemannian factor must have eps = 1";
  } else if (!(n.lambda2 - x.lambda2).is_zero()) {
    r.failed = "lambda^2 differs: " + n.lambda2.to_string() + " vs " + x.lambda2.to_string();
  } else if (sign_check(n.kappa, a, seed) != SignVerdict::NonNegative) {
    r.failed = "l^2 = kappa_N = " + n.kappa.to_string() + " is not certified nonnegative";
  } else if (!(x.kappa - Scalar(static_cast<long>(n.epsilon)) * n.kappa).is_zero()) {
    r.failed = "kappa_X = " + x.kappa.to_string() + " differs from eps_N l^2 = " +
               (Scalar(static_cast<long>(n.epsilon)) * n.kappa).to_string();
  } else {
    r.compatible = true;
  }
  return r;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::catalog_sources()) out.push_back(name);
  return out;
}

const std::string& catalog_source(const std::string& name) {
  for (const auto& [n, text] : detail::catalog_sources())
    if (n == name) return text;
  std::string known;
  for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
  throw CatalogError("unknown catalog entry \"" + name + "\" (known: " + known + ")");
}

CatalogEntry catalog(const std::string& name, const std::map<std::string, Rational>& params, std::uint64_t seed) {
  Manifest manifest = parse_manifest(catalog_source(name));
  auto built = [&] {
    try {
      return build_manifest(manifest, params);
    } catch (const ManifestError& e) {
      throw CatalogError(name + ": " + e.what());
    }
  }();
  ContactVerification v = verify_epsilon_contact(built.manifold, built.alpha, seed, built.auto_orientation);
  if (!v.ok()) throw CatalogError(name + ": not an epsilon-contact structure (" + v.failure->equation + ")");
  const EpsilonContactStructure& s = *v.structure;

  auto bind = [&](Scalar e) {
    for (const auto& [p, value] : params) e = e.substitute(p, Scalar(value));
    return e;
  };
  const Scalar lam2 = bind(Scalar::param("lam").pow(2));
  const Scalar half(Rational(1, 2));
  const TensorField g = TensorField::metric(s.manifold());
  const TensorField aa = tensor_product(s.alpha(), s.alpha());
  std::optional<ContSpace> expected;
  std::optional<TensorField> displayed;
  if (name == "su2") {
    expected = ContSpace{1, 1, lam2, lam2 - 1};
    displayed = (half * (2 * lam2 - 1)) * g + (1 - lam2) * aa;
  } else if (name == "sl2-lor") {
    expected = ContSpace{-1, -1, lam2, 1 - lam2};
    displayed = (-half * (2 * lam2 - 1)) * g + (1 - lam2) * aa;
  } else if (name == "sl2-para") {
    expected = ContSpace{-1, 1, lam2, lam2 - 1};
    displayed = (-half * (2 * lam2 - 1)) * g + (lam2 - 1) * aa;
  } else if (name == "sl2-null") {
    const Scalar k = bind(Scalar::param("alpha0").pow(-2));
    expected = ContSpace{-1, 0, Scalar(1L), k};
    displayed = -half * g + k * aa;
  }

  std::vector<std::string> notes = manifest.notes;
  notes.insert(notes.end(), built.notes.begin(), built.notes.end());
  notes.insert(notes.end(), v.notes.begin(), v.notes.end());
  if (expected) {
    const Classification c = classify(s);
    if (!c.ok()) throw CatalogError(name + ": expected an eta-Einstein structure (" + c.failure->reason + ")");
    if (!cont_space_membership(*c.certificate, *expected))
      throw CatalogError(name + ": certificate (" + c.certificate->lambda2.to_string() + ", " +
                         c.certificate->kappa.to_string() + ") differs from the expected constants");
  }
  return CatalogEntry{name, std::move(manifest), std::move(built), s, expected, displayed, std::move(notes)};
}

}  // namespace epc
