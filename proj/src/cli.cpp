#include "ndual/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ndual/errors.hpp"
#include "ndual/functionals.hpp"
#include "ndual/json_io.hpp"
#include "ndual/nnorms.hpp"
#include "ndual/ortho.hpp"
#include "ndual/sip.hpp"
#include "ndual/verifier.hpp"

namespace ndual {

namespace {

using json_io::json;

/// Usage and input problems detected by the CLI itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed JSON in " + path + ": " + e.what());
  }
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(15) << v;
  return s.str();
}

void print_vector(std::ostream& out, const Vector& v) {
  for (std::size_t k = 0; k < v.coords().size(); ++k) out << (k ? " " : "") << num(v[k]);
  out << '\n';
}

struct Common {
  std::string file;
  std::optional<double> p;
  bool as_json = false;
};

void add_common(CLI::App* sub, Common& c, const char* what) {
  sub->add_option("file", c.file, std::string(what) + " JSON file, or - for stdin")->required();
  sub->add_option("--p", c.p, "exponent p in [1, 16]; overrides the file's space");
  sub->add_flag("--json", c.as_json, "print JSON instead of text");
}

struct SearchOpts {
  int restarts = NNormConfig{}.restarts;
  int max_iters = NNormConfig{}.max_iters;
  std::uint64_t seed = 0;
  bool no_witness = false;

  NNormConfig config() const {
    NNormConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.seed = seed;
    cfg.witness_seeding = !no_witness;
    cfg.validate();
    return cfg;
  }
};

void add_search(CLI::App* sub, SearchOpts& s) {
  sub->add_option("--restarts", s.restarts, "random restarts");
  sub->add_option("--max-iters", s.max_iters, "sweeps per restart");
  sub->add_option("--seed", s.seed, "seed for random restarts");
  sub->add_flag("--no-witness", s.no_witness, "skip the g-orthogonal witness start");
}

int run_nnorm(const Common& c, const SearchOpts& s, const std::string& method, std::ostream& out) {
  const auto xs = json_io::tuple_from_json(read_json(c.file), c.p);
  json j{{"method", method}};
  double value = 0.0;
  if (method == "lp") {
    value = lp_n_norm(xs);
  } else if (method == "euclidean") {
    value = gahler_n_norm_euclidean(xs);
  } else {
    const GahlerEstimate est = gahler_n_norm_estimate(xs, s.config());
    value = est.value;
    j["estimate"] = json_io::to_json(est);
  }
  j["value"] = value;
  if (c.as_json) {
    out << j.dump(2) << '\n';
  } else {
    out << num(value) << '\n';
  }
  return 0;
}

int run_sip(const Common& c, bool numeric, std::ostream& out) {
  const auto xs = json_io::tuple_from_json(read_json(c.file), c.p);
  if (xs.size() != 2) throw UsageError("sip expects a tuple of exactly two vectors (x, y)");
  const Vector& x = xs[0];
  const Vector& y = xs[1];
  SipConfig cfg;
  cfg.method = numeric ? SipConfig::Method::numeric : SipConfig::Method::closed_form;
  const double gv = g(x, y, cfg);
  const bool orth = is_g_orthogonal(x, y);
  std::optional<TauPair> t;
  if (!x.is_zero()) t = tau(x, y);
  if (c.as_json) {
    json j{{"g", gv}, {"method", numeric ? "numeric" : "closed_form"}, {"g_orthogonal", orth}};
    j["tau_minus"] = t ? json(t->tau_minus) : json(nullptr);
    j["tau_plus"] = t ? json(t->tau_plus) : json(nullptr);
    out << j.dump(2) << '\n';
  } else {
    out << "g " << num(gv) << '\n';
    if (t) out << "tau_minus " << num(t->tau_minus) << "\ntau_plus " << num(t->tau_plus) << '\n';
    out << "g_orthogonal " << (orth ? "true" : "false") << '\n';
  }
  return 0;
}

int run_orth(const Common& c, std::ostream& out) {
  const auto xs = json_io::tuple_from_json(read_json(c.file), c.p);
  const OrthogonalizationResult r = left_g_orthogonalize(xs);
  if (c.as_json) {
    out << json_io::to_json(r).dump(2) << '\n';
  } else {
    for (const Vector& v : r.orthogonalized) print_vector(out, v);
  }
  return 0;
}

int run_fnorm(const Common& c, const SearchOpts& s, const std::string& mode, std::ostream& out) {
  const MultiFunctional f = json_io::tensor_from_json(read_json(c.file), c.p);
  const NNormConfig cfg = s.config();
  FunctionalNormEstimate est;
  if (mode == "n1") {
    est = norm_n1(f, cfg);
  } else if (mode == "nn") {
    est = norm_nn(f, cfg);
  } else if (mode == "op") {
    est = op_norm(curry(f), cfg);
  } else {
    est = op_norm_G(curry(f), cfg);
  }
  if (c.as_json) {
    out << json_io::to_json(est).dump(2) << '\n';
  } else {
    out << num(est.value) << '\n';
  }
  return 0;
}

int run_bounds(const Common& c, std::ostream& out) {
  const auto xs = json_io::tuple_from_json(read_json(c.file), c.p);
  const SandwichBounds b = sandwich_bounds(xs);
  if (c.as_json) {
    out << json{{"lower", b.lower}, {"upper", b.upper}}.dump(2) << '\n';
  } else {
    out << "lower " << num(b.lower) << "\nupper " << num(b.upper) << '\n';
  }
  return 0;
}

struct VerifyOpts {
  SuiteConfig cfg;
  std::vector<std::string> tols;
  std::string mutation = "none";
  std::string out_path;
  bool as_json = false;
};

int run_verify(VerifyOpts& v, std::ostream& out) {
  for (const std::string& entry : v.tols) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects prop=value, got \"" + entry + "\"");
    double val = 0.0;
    try {
      std::size_t used = 0;
      val = std::stod(entry.substr(eq + 1), &used);
      if (used != entry.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw UsageError("--tol value in \"" + entry + "\" is not a number");
    }
    v.cfg.tolerances[entry.substr(0, eq)] = val;
  }
  const auto m = parse_mutation(v.mutation);
  if (!m) throw UsageError("unknown mutation \"" + v.mutation + "\"");
  v.cfg.mutation = *m;

  const VerificationReport rep = run_suite(v.cfg);
  const json j = rep.to_json();
  if (!v.out_path.empty()) write_atomically(v.out_path, j.dump(2) + "\n");
  if (v.as_json) {
    out << j.dump(2) << '\n';
  } else {
    for (const PropertyRecord& r : rep.properties) {
      const char* status = r.ok() ? "PASS" : (r.soft ? "SOFT-FAIL" : "FAIL");
      out << std::left << std::setw(10) << status << std::setw(34) << r.property_id << std::right << std::setw(6)
          << r.passes << "/" << std::left << std::setw(6) << r.trials << " worst " << num(r.worst_violation) << '\n';
    }
    out << (rep.all_pass() ? "all properties passed" : "some properties FAILED") << " in "
        << num(rep.wall_time_ms) << " ms\n";
  }
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"n-norms, semi-inner products and n-dual functional norms on l^p"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand all subcommand help");

  Common nn_c, sip_c, orth_c, fn_c, b_c;
  SearchOpts nn_s, fn_s;

  auto* nnorm = app.add_subcommand("nnorm", "n-norm of a tuple (l^p determinant formula or Gähler)");
  add_common(nnorm, nn_c, "tuple");
  add_search(nnorm, nn_s);
  bool use_lp = false, use_gahler = false, use_euclid = false;
  auto* o_lp = nnorm->add_flag("--lp", use_lp, "l^p determinant-formula n-norm (default)");
  auto* o_g = nnorm->add_flag("--gahler", use_gahler, "Gähler n-norm estimate");
  auto* o_e = nnorm->add_flag("--euclidean", use_euclid, "closed-form Gähler n-norm at p = 2");
  o_lp->excludes(o_g)->excludes(o_e);
  o_g->excludes(o_e);

  auto* sip = app.add_subcommand("sip", "semi-inner product g(x, y), tau_-/tau_+ and g-orthogonality");
  add_common(sip, sip_c, "tuple (x, y)");
  bool numeric = false;
  sip->add_flag("--numeric", numeric, "evaluate g from one-sided derivatives");

  auto* orth = app.add_subcommand("orth", "left g-orthogonalization of a tuple");
  add_common(orth, orth_c, "tuple");

  auto* fnorm = app.add_subcommand("fnorm", "norm of a multilinear functional");
  add_common(fnorm, fn_c, "tensor");
  add_search(fnorm, fn_s);
  std::string mode = "n1";
  fnorm->add_option("--mode", mode, "n1 | nn | op | opG")->check(CLI::IsMember({"n1", "nn", "op", "opG"}));

  auto* bounds = app.add_subcommand("bounds", "Gähler sandwich bounds of a tuple");
  add_common(bounds, b_c, "tuple");

  VerifyOpts v;
  auto* verify = app.add_subcommand("verify", "run the randomized property suites");
  verify->add_option("--seed", v.cfg.seed, "suite seed");
  verify->add_option("--trials", v.cfg.trials_per_property, "trials per property (200 = full counts)");
  verify->add_option("--p", v.cfg.exponents, "exponents, comma separated")->delimiter(',');
  verify->add_option("--dims", v.cfg.dims, "dimensions, comma separated")->delimiter(',');
  verify->add_option("--orders", v.cfg.orders, "orders n, comma separated")->delimiter(',');
  verify->add_option("--tol", v.tols, "tolerance overrides prop=val, comma separated")->delimiter(',');
  verify->add_option("--parallel", v.cfg.parallel, "run properties concurrently (true/false)")
      ->expected(0, 1)
      ->default_str("false");
  verify->add_option("--out", v.out_path, "write the JSON report here (atomically)");
  verify->add_option("--mutate", v.mutation, "inject a fault: sip.drop_norm_factor | nnorm.sum_of_norms");
  verify->add_option("--only", v.cfg.only, "property id prefixes to run")->delimiter(',');
  verify->add_flag("--json", v.as_json, "print the report to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*nnorm) return run_nnorm(nn_c, nn_s, use_gahler ? "gahler" : use_euclid ? "euclidean" : "lp", out);
    if (*sip) return run_sip(sip_c, numeric, out);
    if (*orth) return run_orth(orth_c, out);
    if (*fnorm) return run_fnorm(fn_c, fn_s, mode, out);
    if (*bounds) return run_bounds(b_c, out);
    if (*verify) return run_verify(v, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace ndual
