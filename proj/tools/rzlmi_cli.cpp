#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rzlmi/construct.hpp"
#include "rzlmi/corpus.hpp"
#include "rzlmi/interlace.hpp"
#include "rzlmi/pencil.hpp"
#include "rzlmi/poly_io.hpp"
#include "rzlmi/rz.hpp"
#include "rzlmi/sampling.hpp"

#ifndef RZLMI_VERSION
#define RZLMI_VERSION "0.0.0"
#endif

using namespace rzlmi;
using nlohmann::json;

namespace {

constexpr int kUsageError = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string mode;  // empty: taken from the input documents
  double tol = 1e-8;
  int samples = 200;
  int lines = 200;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  bool quiet = false;

  std::string poly_path;
  std::string pencil_path;
  std::string q_path;
  std::string point;
  std::string query;
  std::string derivative_at;
  int order = -1;
  int cofactor = 0;  // 1-based; 0 = all
  int attempts = 5;
  std::string corpus_action;
  std::string corpus_name;

  json echo() const {
    // Thread count is left out: results do not depend on it.
    json j{{"mode", mode.empty() ? "auto" : mode}, {"tol", tol}, {"samples", samples}, {"lines", lines}, {"seed", seed}};
    if (!poly_path.empty()) j["poly"] = poly_path;
    if (!pencil_path.empty()) j["pencil"] = pencil_path;
    if (!q_path.empty()) j["q"] = q_path;
    if (!point.empty()) j["point"] = point;
    if (!query.empty()) j["x"] = query;
    if (!derivative_at.empty()) j["derivative_at"] = derivative_at;
    if (order >= 0) j["order"] = order;
    if (cofactor > 0) j["cofactor"] = cofactor;
    return j;
  }
};

// stdin can be named by several options ("construct | verify" reads pencil and
// polynomial from the same document), so each path is read once.
std::map<std::string, std::string>& text_cache() {
  static std::map<std::string, std::string> cache;
  return cache;
}

const std::string& slurp(const std::string& path) {
  auto& cache = text_cache();
  auto it = cache.find(path);
  if (it != cache.end()) return it->second;
  try {
    return cache.emplace(path, read_text_file(path)).first->second;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::optional<json> as_json(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return std::nullopt;
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON: ") + e.what());
  }
}

struct Input {
  PolyDocument poly;
  std::optional<json> doc;  // the enclosing JSON document, if any
};

Input load_poly(const std::string& path) {
  const std::string& text = slurp(path);
  Input in;
  in.doc = as_json(text);
  if (!in.doc) {
    in.poly = parse_polynomial_text(text);
  } else if (in.doc->contains("poly")) {
    in.poly = polynomial_from_json((*in.doc)["poly"]);
  } else {
    in.poly = polynomial_from_json(*in.doc);
  }
  return in;
}

std::vector<Exact> parse_point(const std::string& text, const std::string& what) {
  std::vector<Exact> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.emplace_back(parse_rational(item));
    } catch (const std::exception& e) {
      throw UsageError(what + ": " + e.what());
    }
  }
  return out;
}

// --point, else the document's x0, else the origin.
std::vector<Exact> base_point(const RunConfig& cfg, const std::optional<json>& doc, int d) {
  std::vector<Exact> x0;
  if (!cfg.point.empty()) {
    x0 = parse_point(cfg.point, "--point");
  } else if (doc && doc->contains("x0") && (*doc)["x0"].is_array()) {
    for (std::size_t i = 0; i < (*doc)["x0"].size(); ++i)
      x0.emplace_back(rational_from_json((*doc)["x0"][i], "$.x0[" + std::to_string(i) + "]"));
  } else {
    x0.assign(d, Exact(0));
  }
  if (static_cast<int>(x0.size()) != d)
    throw UsageError("base point has " + std::to_string(x0.size()) + " coordinates, expected " + std::to_string(d));
  return x0;
}

CoeffMode resolve_mode(const RunConfig& cfg, std::initializer_list<CoeffMode> inputs) {
  if (!cfg.mode.empty()) return coeff_mode_from_string(cfg.mode);
  for (CoeffMode m : inputs)
    if (m == CoeffMode::kFloat) return CoeffMode::kFloat;
  return CoeffMode::kExact;
}

template <class K>
std::vector<K> as_k(const std::vector<Exact>& v) {
  std::vector<K> out;
  for (const auto& x : v) out.push_back(convert_scalar<K>(x));
  return out;
}

json header(const RunConfig& cfg) {
  return {{"tool", "rzlmi"}, {"version", RZLMI_VERSION}, {"command", cfg.command}, {"config", cfg.echo()}};
}

json merged(json base, const json& extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it) base[it.key()] = it.value();
  return base;
}

struct Outcome {
  json report;
  int code = 0;
  std::string summary;
};

Outcome from_verdict(const RunConfig& cfg, const VerdictReport& v, json extra = json::object()) {
  Outcome o;
  o.report = merged(header(cfg), extra);
  o.report["status"] = to_string(v.status);
  o.report["verdict"] = v.to_json();
  o.code = exit_code(v.status);
  std::ostringstream s;
  s << v.check << ": " << to_string(v.status) << " (tested " << v.tested << ", max residual " << v.max_residual << ")";
  o.summary = s.str();
  return o;
}

// Combines several checks: any fail fails, else any inconclusive is inconclusive.
Status combine(const std::vector<VerdictReport>& checks) {
  Status s = Status::kPass;
  for (const auto& c : checks) {
    if (c.status == Status::kFail) return Status::kFail;
    if (c.status == Status::kInconclusive) s = Status::kInconclusive;
  }
  return s;
}

Outcome from_checks(const RunConfig& cfg, const std::vector<VerdictReport>& checks, json extra = json::object()) {
  Outcome o;
  o.report = merged(header(cfg), extra);
  const Status s = combine(checks);
  o.report["status"] = to_string(s);
  json arr = json::array();
  std::ostringstream sum;
  for (const auto& c : checks) {
    arr.push_back(c.to_json());
    sum << c.check << "=" << to_string(c.status) << " ";
  }
  o.report["checks"] = arr;
  o.code = exit_code(s);
  o.summary = cfg.command + ": " + to_string(s) + " [" + sum.str() + "]";
  return o;
}

// ---- subcommands ----------------------------------------------------------------

template <class K>
Outcome rz_check(const RunConfig& cfg, const Input& in) {
  const auto p = in.poly.poly.cast<K>();
  const auto x0 = as_k<K>(base_point(cfg, in.doc, p.num_vars()));
  const auto v = is_rz_sampled(p, x0, cfg.lines, cfg.tol, cfg.seed, cfg.threads);
  Outcome o;
  o.report = header(cfg);
  o.report["status"] = to_string(v.status);
  o.report["verdict"] = v.to_json();
  o.code = exit_code(to_status(v.status));
  o.summary = "rz-check: " + to_string(v.status) + " over " + std::to_string(v.lines_tested) + " lines";
  return o;
}

template <class K>
Outcome hermite(const RunConfig& cfg, const Input& in) {
  const auto p = in.poly.poly.cast<K>();
  const auto x0 = as_k<K>(base_point(cfg, in.doc, p.num_vars()));
  const auto H = hermite_matrix(p, x0);
  json rows = json::array();
  for (int i = 0; i < H.H.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < H.H.cols(); ++j) r.push_back(polynomial_to_json(H.H(i, j)));
    rows.push_back(r);
  }
  const auto v = hermite_psd_check(H, cfg.samples, cfg.tol, cfg.seed, cfg.threads);
  return from_verdict(cfg, v, {{"matrix", rows}, {"m", H.m}});
}

template <class K>
Outcome renegar(const RunConfig& cfg, const Input& in) {
  const auto p = in.poly.poly.cast<K>();
  const auto x0 = as_k<K>(base_point(cfg, in.doc, p.num_vars()));
  const int m = p.degree();
  json ders = json::array();
  const int lo = cfg.order >= 0 ? cfg.order : 0, hi = cfg.order >= 0 ? cfg.order : std::max(m - 1, 0);
  for (int k = lo; k <= hi; ++k) ders.push_back({{"order", k}, {"poly", polynomial_to_json(renegar_derivative(p, x0, k))}});
  Outcome o;
  o.report = header(cfg);
  o.report["status"] = "pass";
  o.report["derivatives"] = ders;
  o.summary = "renegar: " + std::to_string(ders.size()) + " derivative(s) of a degree " + std::to_string(m) + " polynomial";
  return o;
}

template <class K>
Outcome member(const RunConfig& cfg, const Input& in) {
  const auto p = in.poly.poly.cast<K>();
  const int d = p.num_vars();
  const auto x0 = as_k<K>(base_point(cfg, in.doc, d));
  if (cfg.query.empty()) throw UsageError("member needs --x <point>");
  const auto xq = parse_point(cfg.query, "--x");
  if (static_cast<int>(xq.size()) != d) throw UsageError("--x has the wrong number of coordinates");
  const auto x = as_k<K>(xq);
  const MembershipOracle<K> oracle(p, x0);
  const auto levels = oracle.levels(x, cfg.tol);
  const auto values = oracle.values(x);
  const bool inside = std::all_of(levels.begin(), levels.end(), [](bool b) { return b; });
  Outcome o;
  o.report = header(cfg);
  o.report["status"] = inside ? "pass" : "fail";
  o.report["inside"] = inside;
  o.report["levels"] = levels;
  o.report["values"] = values;
  if (!inside) {
    const auto k = std::find(levels.begin(), levels.end(), false) - levels.begin();
    o.report["witness"] = {{"order", k}, {"value", values[k]}};
  }
  o.code = inside ? 0 : 1;
  o.summary = std::string("member: ") + (inside ? "inside" : "outside") + " the component of the base point";
  return o;
}

template <class K>
HomogeneousPolynomial<K> interlacer_for(const RunConfig& cfg, const HomogeneousPolynomial<K>& P,
                                        const std::vector<K>& x0, int d) {
  const int m = P.degree();
  if (!cfg.q_path.empty()) {
    const auto q = load_poly(cfg.q_path).poly.poly.cast<K>();
    if (q.num_vars() != d) throw UsageError("--interlacer uses a different number of variables");
    return homogenize(q, std::max(m - 1, q.degree()));
  }
  std::vector<K> X(d + 1);
  X[0] = ScalarTraits<K>::from_int(1);
  const auto at = cfg.derivative_at.empty() ? x0 : as_k<K>(parse_point(cfg.derivative_at, "--derivative-at"));
  if (static_cast<int>(at.size()) != d) throw UsageError("--derivative-at has the wrong number of coordinates");
  for (int i = 0; i < d; ++i) X[i + 1] = at[i];
  return directional_derivative(P, X);
}

template <class K>
Outcome interlace(const RunConfig& cfg, const Input& in) {
  const auto p = in.poly.poly.cast<K>();
  const int d = p.num_vars();
  const auto x0 = as_k<K>(base_point(cfg, in.doc, d));
  const auto P = homogenize(p, p.degree());
  const auto Q = interlacer_for(cfg, P, x0, d);
  std::vector<VerdictReport> checks;
  checks.push_back(interlaces_sampled(P, Q, x0, cfg.lines, cfg.tol, cfg.seed, cfg.threads));
  checks.push_back(psd_interlacing_check(P, Q, x0, cfg.samples, cfg.tol, cfg.seed, cfg.threads));
  const bool agree = checks[0].status == checks[1].status;
  return from_checks(cfg, checks, {{"q", polynomial_to_json(Q.poly())}, {"agree", agree}});
}

template <class K>
json scalar_json_of(const K& v) {
  if constexpr (kIsExact<K>) {
    return v.is_real() ? scalar_to_json_re(v) : json{{"re", scalar_to_json_re(v)}, {"im", scalar_to_json_im(v)}};
  } else {
    return v.real();
  }
}

template <class K>
Outcome construct_cmd(const RunConfig& cfg, const Input& in) {
  const auto p = in.poly.poly.cast<K>();
  const int d = p.num_vars();
  const auto x0 = as_k<K>(base_point(cfg, in.doc, d));
  InterlacerSpec<K> spec;
  if (!cfg.q_path.empty()) spec.q = load_poly(cfg.q_path).poly.poly.cast<K>();
  if (!cfg.derivative_at.empty()) spec.derivative_at = as_k<K>(parse_point(cfg.derivative_at, "--derivative-at"));
  ConstructOptions opts;
  opts.max_attempts = cfg.attempts;
  opts.verify_samples = cfg.samples;
  opts.rz_lines = cfg.lines;
  Outcome o;
  o.report = header(cfg);
  json pt = json::array();
  for (const auto& v : x0) pt.push_back(scalar_json_of(v));
  o.report["x0"] = pt;
  try {
    const auto res = construct(p, x0, spec, cfg.seed, opts);
    o.report["status"] = "pass";
    o.report["pencil"] = pencil_to_json(res.pencil);
    o.report["poly"] = polynomial_to_json(res.p);
    o.report["trace"] = res.trace;
    o.summary = "construct: " + std::to_string(res.pencil.n()) + "x" + std::to_string(res.pencil.n()) + " pencil in " +
                res.trace.value("attempts", json(1)).dump() + " attempt(s)";
  } catch (const ConstructionError& e) {
    o.report["status"] = "fail";
    o.report["error"] = {{"stage", e.stage()}, {"message", e.what()}, {"retryable", e.retryable()}};
    o.code = 1;
    o.summary = std::string("construct: failed: ") + e.what();
  }
  return o;
}

struct PencilInput {
  PencilDocument pencil;
  std::optional<json> doc;
};

PencilInput load_pencil(const std::string& path) {
  const std::string& text = slurp(path);
  PencilInput in;
  in.pencil = parse_pencil(text);
  in.doc = as_json(text);
  return in;
}

template <class K>
Outcome verify(const RunConfig& cfg, const PencilInput& pin, const Input& pl) {
  const auto pencil = pin.pencil.pencil.cast<K>();
  const auto p = pl.poly.poly.cast<K>();
  if (p.num_vars() != pencil.d()) throw UsageError("pencil and polynomial use different dimensions");
  const auto x0 = as_k<K>(base_point(cfg, pl.doc ? pl.doc : pin.doc, pencil.d()));
  const auto rep = verify_lmi(pencil, p, x0, std::max(cfg.tol, 1e-6), cfg.samples, cfg.seed);
  Outcome o;
  o.report = merged(header(cfg), rep.to_json());
  o.code = exit_code(rep.status);
  std::ostringstream s;
  s << "verify: " << to_string(rep.status) << " (det residual " << rep.det_residual << ", basepoint "
    << to_string(rep.basepoint) << ")";
  o.summary = s.str();
  return o;
}

template <class K>
Outcome cross_check(const RunConfig& cfg, const PencilInput& pin) {
  const auto pencil = pin.pencil.pencil.cast<K>();
  const int d = pencil.d();
  const auto x0 = as_k<K>(base_point(cfg, pin.doc, d));
  if (cfg.cofactor < 0 || cfg.cofactor > pencil.n())
    throw UsageError("--cofactor must lie in 1.." + std::to_string(pencil.n()));
  std::vector<K> X0{ScalarTraits<K>::from_int(1)};
  X0.insert(X0.end(), x0.begin(), x0.end());
  std::vector<VerdictReport> checks;
  checks.push_back(cauchy_cross_check(pencil, x0, cfg.lines, cfg.tol, cfg.seed, cfg.cofactor - 1, cfg.threads));
  checks.push_back(eigenspace_orthogonality_check(pencil, X0, cfg.tol, cfg.seed));
  checks.push_back(pairing_check(pencil, X0, std::min(cfg.samples, 50), cfg.tol, cfg.seed));
  checks.push_back(derdet_check(pencil, std::min(cfg.samples, 50), 1e-9, cfg.seed));
  return from_checks(cfg, checks);
}

template <class K>
Outcome realify_cmd(const RunConfig& cfg, const PencilInput& pin) {
  const auto out = realify(pin.pencil.pencil.cast<K>());
  Outcome o;
  o.report = header(cfg);
  o.report["status"] = "pass";
  o.report["pencil"] = pencil_to_json(out);
  o.summary = "realify: " + std::to_string(out.n()) + "x" + std::to_string(out.n()) + " real-symmetric pencil";
  return o;
}

Outcome corpus_cmd(const RunConfig& cfg) {
  Outcome o;
  if (cfg.corpus_action == "list") {
    o.report = header(cfg);
    o.report["status"] = "pass";
    o.report["names"] = corpus_names();
    o.summary = "corpus: " + std::to_string(corpus_names().size()) + " names";
  } else if (cfg.corpus_action == "emit") {
    if (cfg.corpus_name.empty()) throw UsageError("corpus emit needs a name");
    try {
      o.report = corpus_instance(cfg.corpus_name).to_json();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    o.summary = "corpus: emitted " + cfg.corpus_name;
  } else {
    throw UsageError("corpus action must be list or emit");
  }
  return o;
}

template <class K>
Outcome dispatch_poly(const RunConfig& cfg, const Input& in) {
  const std::string& c = cfg.command;
  if (c == "rz-check") return rz_check<K>(cfg, in);
  if (c == "hermite") return hermite<K>(cfg, in);
  if (c == "renegar") return renegar<K>(cfg, in);
  if (c == "member") return member<K>(cfg, in);
  if (c == "interlace") return interlace<K>(cfg, in);
  return construct_cmd<K>(cfg, in);
}

Outcome run(const RunConfig& cfg) {
  if (cfg.threads > 0) set_default_threads(cfg.threads);
  const std::string& c = cfg.command;
  if (c == "corpus") return corpus_cmd(cfg);
  if (c == "verify" || c == "cross-check" || c == "realify") {
    if (cfg.pencil_path.empty()) throw UsageError(c + " needs --pencil");
    const auto pin = load_pencil(cfg.pencil_path);
    if (c == "realify") {
      return resolve_mode(cfg, {pin.pencil.mode}) == CoeffMode::kExact ? realify_cmd<Exact>(cfg, pin)
                                                                         : realify_cmd<Complex>(cfg, pin);
    }
    if (c == "cross-check") {
      return resolve_mode(cfg, {pin.pencil.mode}) == CoeffMode::kExact ? cross_check<Exact>(cfg, pin)
                                                                         : cross_check<Complex>(cfg, pin);
    }
    Input pl;
    if (!cfg.poly_path.empty()) {
      pl = load_poly(cfg.poly_path);
    } else if (pin.doc && pin.doc->contains("poly")) {
      pl.poly = polynomial_from_json((*pin.doc)["poly"]);
    } else {
      throw UsageError("verify needs --poly (or a pencil document carrying \"poly\")");
    }
    return resolve_mode(cfg, {pin.pencil.mode, pl.poly.mode}) == CoeffMode::kExact ? verify<Exact>(cfg, pin, pl)
                                                                                   : verify<Complex>(cfg, pin, pl);
  }
  if (cfg.poly_path.empty()) throw UsageError(c + " needs --poly");
  const auto in = load_poly(cfg.poly_path);
  return resolve_mode(cfg, {in.poly.mode}) == CoeffMode::kExact ? dispatch_poly<Exact>(cfg, in)
                                                                : dispatch_poly<Complex>(cfg, in);
}

void emit(const RunConfig& cfg, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + cfg.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-zero polynomials, interlacers and determinantal representations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RZLMI_VERSION);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--mode", cfg.mode, "Coefficient field (default: from the input)")
        ->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--tol", cfg.tol, "Tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--samples", cfg.samples, "Sample points")->check(CLI::PositiveNumber);
    sub->add_option("--lines", cfg.lines, "Sampled lines")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Seed for all sampling");
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", cfg.out, "Write the JSON report here instead of stdout");
    sub->add_flag("-q,--quiet", cfg.quiet, "No summary on stderr");
  };
  auto poly_opt = [&cfg](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--poly", cfg.poly_path, "Polynomial file (text or JSON, - for stdin)");
    if (required) o->required();
    sub->add_option("--point", cfg.point, "Base point x0 as comma-separated rationals");
  };

  auto* rz = app.add_subcommand("rz-check", "Sample lines through x0 for real-rootedness");
  auto* he = app.add_subcommand("hermite", "Hermite matrix and its PSD check");
  auto* re = app.add_subcommand("renegar", "Renegar derivatives at x0");
  auto* me = app.add_subcommand("member", "Membership of a point in the component of x0");
  auto* il = app.add_subcommand("interlace", "Check that Q interlaces P with respect to x0");
  auto* co = app.add_subcommand("construct", "Build a definite determinantal representation (d = 2)");
  auto* ve = app.add_subcommand("verify", "Verify an LMI representation of p");
  auto* cc = app.add_subcommand("cross-check", "Cofactor interlacing and adjugate identities of a pencil");
  auto* rl = app.add_subcommand("realify", "Real-symmetric doubling of a hermitian pencil");
  auto* cp = app.add_subcommand("corpus", "List or emit corpus instances");
  for (auto* s : {rz, he, re, me, il, co, ve, cc, rl, cp}) common(s);
  for (auto* s : {rz, he, re, me, il, co}) poly_opt(s, true);
  poly_opt(ve, false);
  re->add_option("--order", cfg.order, "Only this derivative order")->check(CLI::NonNegativeNumber);
  me->add_option("--x", cfg.query, "Query point")->required();
  for (auto* s : {il, co}) {
    s->add_option("--interlacer", cfg.q_path, "Interlacer polynomial file (affine, degree m-1)");
    s->add_option("--derivative-at", cfg.derivative_at, "Use the directional derivative at this point");
  }
  co->add_option("--attempts", cfg.attempts, "Split/coordinate retries")->check(CLI::PositiveNumber);
  for (auto* s : {ve, cc, rl}) s->add_option("--pencil", cfg.pencil_path, "Pencil JSON (- for stdin)")->required();
  cc->add_option("--point", cfg.point, "Base point x0 as comma-separated rationals");
  cc->add_option("--cofactor", cfg.cofactor, "Only this diagonal cofactor (1-based)");
  cp->add_option("action", cfg.corpus_action, "list | emit")->required()->check(CLI::IsMember({"list", "emit"}));
  cp->add_option("name", cfg.corpus_name, "Instance name for emit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }
  for (auto* s : app.get_subcommands()) cfg.command = s->get_name();

  try {
    const Outcome o = run(cfg);
    emit(cfg, o.report);
    if (!cfg.quiet && !o.summary.empty()) std::cerr << o.summary << "\n";
    return o.code;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsageError;
}
