#pragma once

// JSON manifests describing a framed 3-manifold with a candidate 1-form.
//
//   {
//     "schema": "epscontact-manifest/1",
//     "name": "su2",
//     "parameters": [{"name": "lam", "assume": ["lam^2 > 0"]}],
//     "functions": [{"name": "q", "assume": "nonzero"}],
//     "manifold": {
//       "kind": "left-invariant" | "coordinate",
//       "frame": ["e1", "e2", "e3"],
//       "coordinates": ["t", "x", "y"],              (coordinate kind only)
//       "brackets": {"e2,e3": "e1", ...},             (left-invariant kind only)
//       "metric": [["1", "0", "0"], ...],
//       "signature": "riemannian" | "lorentzian",
//       "orientation": 1 | -1 | "auto"
//     },
//     "alpha": "e1"  or  {"e1": "1"},
//     "notes": ["..."]
//   }
//
// Bracket values and string-valued alpha are linear combinations of frame
// labels with scalar coefficients.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epscontact/frame.hpp"

namespace epc {

inline constexpr const char* kManifestSchema = "epscontact-manifest/1";

class ManifestError : public std::runtime_error {
 public:
  explicit ManifestError(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(msg), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

struct ManifestParameter {
  std::string name;
  std::vector<std::string> assume;
  bool operator==(const ManifestParameter&) const = default;
};

struct ManifestFunction {
  std::string name;
  bool nonzero = false;
  bool operator==(const ManifestFunction&) const = default;
};

struct ManifestBracket {
  std::string left, right, value;
  bool operator==(const ManifestBracket&) const = default;
};

struct Manifest {
  std::string name;
  std::vector<ManifestParameter> parameters;
  std::vector<ManifestFunction> functions;
  std::string kind = "left-invariant";
  std::vector<std::string> frame;
  std::vector<std::string> coordinates;
  std::vector<ManifestBracket> brackets;
  std::vector<std::vector<std::string>> metric;
  int signature = 1;
  std::optional<int> orientation = 1;  // nullopt: auto
  std::optional<std::string> alpha_expr;
  std::vector<std::pair<std::string, std::string>> alpha_components;
  std::vector<std::string> notes;

  bool operator==(const Manifest&) const = default;
};

/// Parses and validates (symbols declared, shapes consistent).  Errors carry
/// the line and column of the offending JSON text where available.
Manifest parse_manifest(const std::string& text);
std::string serialize_manifest(const Manifest& m);

struct BuiltManifest {
  ManifoldPtr manifold;
  TensorField alpha;
  bool auto_orientation = false;
  std::vector<std::string> notes;
};

/// Builds the manifold and alpha.  `params` substitutes parameter values,
/// each of which must satisfy the declared assumptions.  Rejects frames
/// whose structure functions violate the Jacobi identity.
BuiltManifest build_manifest(const Manifest& m, const std::map<std::string, Rational>& params = {});

/// Parses "k=v,k2=v2".
std::map<std::string, Rational> parse_param_list(const std::string& text);

}  // namespace epc
