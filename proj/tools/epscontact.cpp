// epscontact: verify epsilon-contact structures, eta-Einstein certificates,
// the null-contact theory and six-dimensional product solutions.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "epscontact/report.hpp"

namespace {

using namespace epc;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem(const std::string& path) {
  auto s = path.substr(path.find_last_of('/') + 1);
  if (auto dot = s.rfind(".json"); dot != std::string::npos && dot + 5 == s.size()) s.resize(dot);
  return s;
}

LoadedInput load_file(const std::string& path, const RunOptions& o) {
  try {
    return load_input(slurp(path), stem(path), o);
  } catch (const ManifestError& e) {
    if (e.line() == 0) throw;
    throw ManifestError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what(),
                        e.line(), e.column());
  }
}

// every --params key must be declared by some input
void check_params(const RunOptions& o, const std::vector<const LoadedInput*>& ins) {
  for (const auto& [k, v] : o.params) {
    bool found = false;
    for (const auto* in : ins)
      for (const auto& p : in->manifest.parameters) found = found || p.name == k;
    if (!found) throw InputError("unknown parameter \"" + k + "\"");
  }
}

Report dispatch(const std::string& action, const std::vector<LoadedInput>& ins, const RunOptions& o) {
  std::vector<const LoadedInput*> ptrs;
  for (const auto& in : ins) ptrs.push_back(&in);
  check_params(o, ptrs);
  if (action == "product") {
    if (ins.size() != 2) throw InputError("product takes two manifests");
    return run_product(ins[0], ins[1], o);
  }
  if (ins.size() != 1) throw InputError(action + " takes one manifest");
  if (action == "check") return run_check(ins[0], o);
  if (action == "classify") return run_classify(ins[0], o);
  if (action == "null-analysis") return run_null_analysis(ins[0], o);
  throw InputError("unknown command " + action);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of epsilon-contact structures and six-dimensional product solutions"};
  app.set_version_flag("--version", std::string(epc::kToolVersion));
  app.require_subcommand(1);

  RunOptions opts;
  std::string format = "text", params, orientation;
  std::vector<std::string> assume;
  std::string lambda;
  app.add_option("--seed", opts.seed, "seed for randomized witnesses")->capture_default_str();
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--orientation", orientation, "override the manifest orientation")
      ->check(CLI::IsMember({"auto", "+1", "1", "-1"}));
  app.add_option("--params", params, "parameter values, e.g. lam=1/2,a=0");
  app.add_option("--assume", assume, "extra assumption, e.g. \"a != 0\"");
  app.add_option("--lambda", lambda, "product: lambda as an expression (default: sqrt of the certified lambda^2)");

  std::vector<std::string> files;
  auto* check = app.add_subcommand("check", "verify the structure and its identity suites");
  check->add_option("manifest", files, "manifest file")->required()->expected(1);
  auto* classify = app.add_subcommand("classify", "eta-Einstein certificate");
  classify->add_option("manifest", files, "manifest file")->required()->expected(1);
  auto* null = app.add_subcommand("null-analysis", "null-contact theory (eps = 0)");
  null->add_option("manifest", files, "manifest file")->required()->expected(1);
  auto* product = app.add_subcommand("product", "six-dimensional solution on N x X");
  product->add_option("manifests", files, "Lorentzian and Riemannian manifests")->required()->expected(2);

  std::vector<std::string> cat_args;
  bool list = false;
  auto* cat = app.add_subcommand("catalog", "run a command on a built-in example");
  cat->add_flag("--list", list, "list the built-in examples");
  cat->add_option("args", cat_args, "<name> [check|classify|null-analysis|product <riemannian name>]")->expected(0, 3);

  for (auto* sub : {check, classify, null, product, cat}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::InputError);
  }

  try {
    if (!params.empty()) opts.params = parse_param_list(params);
    if (!orientation.empty()) opts.orientation = orientation;
    opts.assume = assume;
    if (!lambda.empty()) opts.lambda = lambda;

    std::string action;
    std::vector<LoadedInput> inputs;
    if (cat->parsed()) {
      if (list) {
        for (const auto& n : catalog_names()) std::cout << n << "\n";
        return 0;
      }
      if (cat_args.empty()) throw InputError("catalog needs an entry name (see catalog --list)");
      action = cat_args.size() > 1 ? cat_args[1] : "check";
      inputs.push_back(load_catalog_input(cat_args[0], opts));
      if (action == "product") {
        if (cat_args.size() != 3) throw InputError("catalog <lorentzian> product <riemannian>");
        inputs.push_back(load_catalog_input(cat_args[2], opts));
      } else if (cat_args.size() > 2) {
        throw InputError("unexpected argument " + cat_args[2]);
      }
    } else {
      action = app.get_subcommands().front()->get_name();
      for (const auto& f : files) inputs.push_back(load_file(f, opts));
    }

    const Report r = dispatch(action, inputs, opts);
    if (format == "json")
      std::cout << r.to_json().dump(2) << "\n";
    else
      std::cout << r.to_text();
    return static_cast<int>(r.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return static_cast<int>(ExitCode::InputError);
}
