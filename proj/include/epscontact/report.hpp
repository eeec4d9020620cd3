#pragma once

// Verification reports and the commands behind the command-line tool.  A
// Report renders to text or JSON from the same rows, so both formats carry
// identical verdicts.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epscontact/sugra6.hpp"

namespace epc {

inline constexpr const char* kReportSchema = "epscontact-report/1";
inline constexpr const char* kToolVersion = "1.0.0";

enum class ExitCode { Pass = 0, Fail = 1, InputError = 2, Unknown = 3 };

/// One row.  Required rows decide pass/fail; informational rows (a predicate
/// that may legitimately be false) only contribute Unknown.
struct ReportRow {
  std::string group;
  std::string name;
  std::string verdict;  // Zero, NonZero, Unknown, Pass, Fail
  bool required = true;
  std::string component, value, witness, note;
};

struct Report {
  std::string command;
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;
  std::vector<std::string> notes;
  std::vector<ReportRow> rows;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();

  void add(ReportRow row) { rows.push_back(std::move(row)); }
  void add(const std::string& group, const std::string& name, const TensorVerdict& v, const ManifoldPtr& host,
           bool required = true);
  void add_flag(const std::string& group, const std::string& name, bool pass, const std::string& note = {});

  ExitCode exit_code() const;
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

/// Input rejected before any verification ran (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::optional<std::string> orientation;  // "auto", "+1", "-1"; unset keeps the manifest's value
  std::map<std::string, Rational> params;
  std::vector<std::string> assume;          // extra assumptions, e.g. "a != 0"
  std::optional<std::string> lambda;        // product: lambda as an expression
};

struct LoadedInput {
  std::string name;
  bool from_catalog = false;
  Manifest manifest;
  BuiltManifest built;
  ContactVerification verification;
};

/// Parses, builds and verifies; options.params entries not declared by this
/// manifest are skipped.
LoadedInput load_input(const std::string& text, const std::string& name, const RunOptions& o, bool from_catalog = false);
LoadedInput load_catalog_input(const std::string& name, const RunOptions& o);

Report run_check(const LoadedInput& in, const RunOptions& o);
Report run_classify(const LoadedInput& in, const RunOptions& o);
Report run_null_analysis(const LoadedInput& in, const RunOptions& o);
Report run_product(const LoadedInput& n, const LoadedInput& x, const RunOptions& o);

/// lambda with lambda^2 = l2 when l2 is a monomial with even exponents and
/// a square coefficient.
std::optional<Scalar> monomial_sqrt(const Scalar& l2);

}  // namespace epc
