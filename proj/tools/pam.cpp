// pam: command-line front end. Reads JSON payloads, prints exact JSON results.
//
// Exit codes: 0 success, 1 input error ({"error": kind, "detail": ...}),
// 2 when a checked identity fails.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pam/selftest.hpp"

namespace {

using pam::io::Json;

struct Output {
  Json body;
  bool identity_ok = true;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) pam::fail(pam::ErrorKind::invalid_argument, "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    pam::fail(pam::ErrorKind::schema, "'" + path + "' is not valid JSON: " + e.what());
  }
}

pam::Rational parse_rational(const std::string& text) { return pam::io::rational_from(Json(text)); }

std::vector<pam::Rational> parse_list(const std::string& text) {
  std::vector<pam::Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

Json value_json(const pam::MeasureValue& v, long p) {
  return Json{{"value", pam::io::to_json(v)}, {"norm", pam::io::to_json(v.norm(p))}};
}

Json nproduct_json(const pam::NProductCheck& c) {
  return Json{{"product", pam::io::to_json(c.product)}, {"factors", pam::io::to_json(c.factors)}, {"holds", c.holds}};
}

Json fubini_json(const pam::FubiniResult& f) {
  Json out{{"product", pam::io::to_json(f.product)}, {"iterated", pam::io::to_json(f.iterated)}, {"holds", f.holds}};
  out["reversed"] = f.reversed ? pam::io::to_json(*f.reversed) : Json(nullptr);
  return out;
}

Json integrability_json(const pam::IntegrabilityReport& r) {
  Json th = Json::array();
  for (const auto& t : r.thresholds) {
    Json balls = Json::array();
    Json points = Json::array();
    for (const pam::Ball& b : t.balls) balls.push_back(pam::io::to_json(b));
    for (const pam::Rational& x : t.points) points.push_back(pam::to_string(x));
    th.push_back(Json{{"epsilonExp", t.epsilon_exponent}, {"balls", balls}, {"points", points},
                      {"delta", pam::io::to_json(t.delta)}});
  }
  return Json{{"constantOnSupport", r.constant_on_support}, {"integrable", r.integrable},
              {"workingLevel", r.working_level}, {"thresholds", th}};
}

Output spectral_demo(const pam::SpectralSpec& spec, const std::string& times_arg) {
  const pam::StationaryProcess proc = pam::synthesize(spec);
  std::optional<std::vector<pam::Rational>> times;
  if (times_arg != "auto") times = parse_list(times_arg);
  const pam::Recovery rec = pam::spectral_recover(proc, spec.frequencies, times);

  const pam::Ambient g = pam::ambient_for(spec.r, spec.frequencies);
  const pam::Measure mu_spec = pam::spectral_measure(spec, g);
  Json table = Json::array();
  bool cov_ok = true;
  for (const pam::Rational& t : rec.times) {
    Json row = Json::array();
    for (const pam::Rational& q : rec.times) {
      const pam::Cyclotomic b = pam::covariance(proc, t, q);
      cov_ok = cov_ok && b == pam::char_functional(mu_spec, t + q);
      row.push_back(pam::io::to_json(b));
    }
    table.push_back(row);
  }
  Json times_json = Json::array();
  Json masses = Json::array();
  for (const pam::Rational& t : rec.times) times_json.push_back(pam::to_string(t));
  for (const pam::Cyclotomic& m : rec.masses) masses.push_back(m.is_rational() ? Json(pam::to_string(m.to_rational())) : pam::io::to_json(m));
  bool exact = rec.masses_rational && rec.masses.size() == spec.masses.size();
  for (std::size_t k = 0; exact && k < spec.masses.size(); ++k) exact = rec.masses[k] == pam::Cyclotomic(spec.masses[k]);
  Json failures = Json::array();
  for (const std::string& f : rec.failures) failures.push_back(f);
  if (!cov_ok) failures.push_back("covariance table differs from the characteristic functional at t + q");
  if (!exact) failures.push_back("recovered masses differ from the spec");
  const bool pass = cov_ok && exact && rec.consistent && rec.m_conditions.all() && rec.failures.empty();
  Json body{{"spec", pam::io::to_json(spec)},
            {"times", times_json},
            {"masses", masses},
            {"covariance", table},
            {"consistent", rec.consistent},
            {"mConditions", pam::io::to_json(rec.m_conditions)},
            {"failures", failures},
            {"pass", pass}};
  return {body, pass};
}

/// "pam measure eval" and friends become "measure-eval".
std::vector<std::string> normalize_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.size() >= 2 && (args[0] == "measure" || args[0] == "stochastic" || args[0] == "spectral")) {
    args[0] += "-" + args[1];
    args.erase(args.begin() + 1);
  }
  return args;
}

void emit(const Json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) pam::fail(pam::ErrorKind::invalid_argument, "cannot write '" + out_path + "'");
  out << text;
}

int error_exit(const std::string& kind, const std::string& detail) {
  std::cout << Json{{"error", kind}, {"detail", detail}}.dump(2) << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact p-adic measure and stochastic-integral toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  app.add_option("--out", out_path, "write the JSON result here instead of standard output");

  std::optional<Output> result;
  auto run = [&](auto&& fn) { return [&, fn] { result = fn(); }; };

  std::string x_arg;
  std::string s_arg;
  std::string y_arg;
  std::string point_arg;
  std::string times_arg = "auto";
  long p_arg = 0;
  int level_arg = 0;
  int q_arg = 1;
  std::optional<long> prime_arg;
  std::string measure_path;
  std::string set_path;
  std::string fn_path;
  std::string a_path;
  std::string b_path;
  std::string matrix_path;
  std::string xi_path;
  std::string spec_path;
  std::string config_arg = "default";
  std::string suite_arg;

  auto* norm = app.add_subcommand("norm", "p-adic norm of a rational");
  norm->add_option("--x", x_arg)->required();
  norm->add_option("--p", p_arg)->required();
  norm->callback(run([&] {
    pam::require_prime(p_arg, "prime p");
    return Output{Json{{"norm", pam::io::to_json(pam::padic_valuation(parse_rational(x_arg), p_arg))}}};
  }));

  auto* meval = app.add_subcommand("measure-eval", "evaluate a measure on a clopen set (default: the whole ball)");
  meval->add_option("--measure", measure_path)->required();
  meval->add_option("--set", set_path);
  meval->callback(run([&] {
    const pam::Measure mu = pam::io::measure_from(read_json(measure_path));
    const pam::ClopenSet a = set_path.empty() ? pam::ClopenSet::whole(mu.ambient()) : pam::io::set_from(read_json(set_path));
    Json body = value_json(mu.eval(a), mu.value_prime());
    body["setNorm"] = pam::io::to_json(mu.ball_norm(a));
    return Output{body};
  }));

  auto* nmu = app.add_subcommand("nmu", "N_mu at an exact point");
  nmu->add_option("--measure", measure_path)->required();
  nmu->add_option("--point", point_arg)->required();
  nmu->callback(run([&] {
    const pam::Measure mu = pam::io::measure_from(read_json(measure_path));
    const pam::Rational x = parse_rational(point_arg);
    return Output{Json{{"point", pam::to_string(x)},
                       {"norm", pam::io::to_json(mu.n_mu(x))},
                       {"stationaryLevel", mu.stationary_level(x)}}};
  }));

  auto* integ = app.add_subcommand("integrate", "integral of a locally constant function");
  integ->add_option("--fn", fn_path)->required();
  integ->add_option("--measure", measure_path)->required();
  integ->callback(run([&] {
    const pam::Measure mu = pam::io::measure_from(read_json(measure_path));
    const pam::LocallyConstantFn f = pam::io::fn_from(read_json(fn_path));
    Json body = value_json(pam::integrate(f, mu), mu.value_prime());
    body["integrability"] = integrability_json(pam::integrability_report(f, mu));
    return Output{body};
  }));

  auto* lq = app.add_subcommand("lq", "L^q seminorm of a locally constant function");
  lq->add_option("--fn", fn_path)->required();
  lq->add_option("--measure", measure_path)->required();
  lq->add_option("--q", q_arg)->required();
  lq->callback(run([&] {
    if (q_arg < 1) pam::fail(pam::ErrorKind::invalid_argument, "q must be at least 1");
    const pam::Measure mu = pam::io::measure_from(read_json(measure_path));
    const pam::LocallyConstantFn f = pam::io::fn_from(read_json(fn_path));
    return Output{Json{{"q", q_arg}, {"norm", pam::io::to_json(pam::lq_norm(f, mu, q_arg))}}};
  }));

  auto* prod = app.add_subcommand("product-check", "N-product identity and Fubini for a product measure");
  prod->add_option("--a", a_path, "left measure")->required();
  prod->add_option("--b", b_path, "right measure")->required();
  prod->add_option("--x", x_arg);
  prod->add_option("--y", y_arg);
  prod->add_option("--fn", fn_path, "function on the product");
  prod->callback(run([&] {
    const pam::ProductMeasure pm(pam::io::measure_from(read_json(a_path)), pam::io::measure_from(read_json(b_path)));
    if (fn_path.empty() && (x_arg.empty() || y_arg.empty())) {
      pam::fail(pam::ErrorKind::invalid_argument, "give --x and --y, or --fn, or both");
    }
    Json body = Json::object();
    bool ok = true;
    if (!x_arg.empty() && !y_arg.empty()) {
      const pam::NProductCheck c = pam::product_n_identity_check(pm, parse_rational(x_arg), parse_rational(y_arg));
      body["nProduct"] = nproduct_json(c);
      ok = ok && c.holds;
    }
    if (!fn_path.empty()) {
      const pam::FubiniResult f = pam::fubini_check(pam::io::product_fn_from(read_json(fn_path)), pm);
      body["fubini"] = fubini_json(f);
      ok = ok && f.holds;
    }
    body["pass"] = ok;
    return Output{body, ok};
  }));

  auto* conv = app.add_subcommand("convolve", "convolution of two measures on the same ball group");
  conv->add_option("--a", a_path)->required();
  conv->add_option("--b", b_path)->required();
  conv->callback(run([&] {
    return Output{pam::io::to_json(
        pam::convolve(pam::io::measure_from(read_json(a_path)), pam::io::measure_from(read_json(b_path))))};
  }));

  auto* tr = app.add_subcommand("trace", "trace and operator norm of a finite matrix");
  tr->add_option("--matrix", matrix_path)->required();
  tr->callback(run([&] {
    const Json j = read_json(matrix_path);
    const pam::FinMatrix f = pam::io::matrix_from(j);
    Json body{{"trace", pam::to_string(pam::trace(f))}, {"opNorm", pam::io::to_json(pam::op_norm(f))}};
    bool ok = true;
    if (j.contains("rank_one")) {
      const Json& claim = j.at("rank_one");
      const pam::FinVector a = pam::io::vector_from(pam::io::detail::field(claim, "a"), f.prime());
      const pam::FinVector b = pam::io::vector_from(pam::io::detail::field(claim, "b"), f.prime());
      const bool same = f == pam::rank_one(a, b);
      const bool traced = pam::trace(f) == pam::pairing(a, b);
      body["rankOne"] = Json{{"pairing", pam::to_string(pam::pairing(a, b))}, {"matches", same}, {"traceEqualsPairing", traced}};
      ok = same && traced;
    }
    body["pass"] = ok;
    return Output{body, ok};
  }));

  auto* trm = app.add_subcommand("trace-measure", "trace of a matrix-valued measure");
  trm->add_option("--measure", measure_path)->required();
  trm->callback(run([&] { return Output{pam::io::to_json(pam::trace_measure(pam::io::measure_from(read_json(measure_path))))}; }));

  auto* sbuild = app.add_subcommand("stochastic-build", "orthogonal stochastic measure with the given structure");
  sbuild->add_option("--measure", measure_path)->required();
  sbuild->add_option("--level", level_arg)->required();
  sbuild->add_option("--prime", prime_arg, "must match the measure's value prime");
  sbuild->callback(run([&] {
    const pam::Measure mu = pam::io::measure_from(read_json(measure_path));
    if (prime_arg && *prime_arg != mu.value_prime()) {
      pam::fail(pam::ErrorKind::invalid_argument, "--prime differs from the measure's value prime");
    }
    return Output{pam::io::to_json(pam::build_orthogonal_measure(mu, level_arg))};
  }));

  auto* sverify = app.add_subcommand("stochastic-verify", "exhaustive M-condition check");
  sverify->add_option("--xi", xi_path)->required();
  sverify->add_option("--max-level", level_arg)->required();
  sverify->callback(run([&] {
    const pam::MReport rep = pam::verify_m_conditions(pam::io::xi_from(read_json(xi_path)), level_arg);
    return Output{pam::io::to_json(rep), rep.all()};
  }));

  auto* sint = app.add_subcommand("stochastic-integrate", "stochastic integral of a locally constant function");
  sint->add_option("--fn", fn_path)->required();
  sint->add_option("--xi", xi_path)->required();
  sint->callback(run([&] {
    const pam::OrthStochMeasure xi = pam::io::xi_from(read_json(xi_path));
    const pam::LocallyConstantFn f = pam::io::fn_from(read_json(fn_path));
    const pam::RandomVariable v = pam::stochastic_integral(f, xi);
    const pam::IsometryCheck iso = pam::isometry_identity_check(f, f, xi);
    return Output{Json{{"variable", pam::io::to_json(v)},
                       {"expectation", pam::io::to_json(v.expectation())},
                       {"secondMoment", pam::io::to_json(iso.lhs)},
                       {"normSquaredIntegral", pam::io::to_json(iso.rhs)},
                       {"pass", iso.holds}},
                  iso.holds};
  }));

  auto* cf = app.add_subcommand("charfun", "characteristic functional of a measure");
  cf->add_option("--measure", measure_path)->required();
  cf->add_option("--s", s_arg)->required();
  cf->callback(run([&] {
    const pam::Measure mu = pam::io::measure_from(read_json(measure_path));
    const pam::Rational s = parse_rational(s_arg);
    return Output{Json{{"s", pam::to_string(s)}, {"value", pam::io::to_json(pam::char_functional(mu, s))}}};
  }));

  auto* sdemo = app.add_subcommand("spectral-demo", "synthesize, tabulate covariances, recover");
  sdemo->add_option("--spec", spec_path)->required();
  sdemo->add_option("--times", times_arg, "'auto' or a comma-separated list of rationals");
  sdemo->callback(run([&] { return spectral_demo(pam::io::spec_from(read_json(spec_path)), times_arg); }));

  auto* st = app.add_subcommand("selftest", "run the seeded property suites");
  st->add_option("--config", config_arg, "'default' or a JSON config file");
  st->add_option("--suite", suite_arg, "run one suite only");
  st->callback(run([&] {
    pam::selftest::Config cfg;
    if (config_arg != "default") cfg = pam::selftest::config_from(read_json(config_arg));
    if (const char* seed = std::getenv("PAM_SEED")) {
      try {
        cfg.seed = std::stoull(seed);
      } catch (const std::exception&) {
        pam::fail(pam::ErrorKind::invalid_argument, "PAM_SEED must be a non-negative integer");
      }
    }
    const pam::selftest::Results rs =
        suite_arg.empty() ? pam::selftest::run_all(cfg) : pam::selftest::run_suite(suite_arg, cfg);
    return Output{pam::selftest::report_json(cfg, rs), pam::selftest::all_pass(rs)};
  }));

  const std::vector<std::string> args = normalize_args(argc, argv);
  std::vector<const char*> cargs{argv[0]};
  for (const std::string& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit("usage", e.what());
  } catch (const pam::Error& e) {
    return error_exit(pam::to_string(e.kind()), e.what());
  } catch (const pam::IdentityFailure& e) {
    std::cout << Json{{"error", "identity-failure"}, {"detail", e.what()}}.dump(2) << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    return error_exit("schema", e.what());
  }

  try {
    emit(result->body, out_path);
  } catch (const pam::Error& e) {
    return error_exit(pam::to_string(e.kind()), e.what());
  }
  return result->identity_ok ? 0 : 2;
}
