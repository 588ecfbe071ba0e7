#include "iqlab/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iqlab/arith.hpp"
#include "iqlab/dioph.hpp"
#include "iqlab/errors.hpp"
#include "iqlab/expsum.hpp"
#include "iqlab/field.hpp"
#include "iqlab/hsieve.hpp"
#include "iqlab/lab.hpp"
#include "iqlab/smooth.hpp"

namespace iqlab {

namespace {

using nlohmann::ordered_json;

struct GlobalOpts {
  int d = -1;
  bool d_given = false;
  std::string alpha = "sqrt2_sqrt3";
  unsigned long long seed = 1;
  std::string out;
  std::string format = "json";
  std::string config;
  int threads = 1;
};

// ---- config file: flat key=value lines, '#' comments, repeats allowed ----

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("config: cannot open " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParamError("config: line " + std::to_string(lineno) + " is not key=value");
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

/** First two bare tokens form the command path; every other flag eats a value. */
std::vector<std::string> command_path(const std::vector<std::string>& args) {
  std::vector<std::string> path;
  for (std::size_t i = 0; i < args.size() && path.size() < 2; ++i) {
    const std::string& tok = args[i];
    if (tok == "--help" || tok == "-h") continue;
    if (tok.size() >= 2 && tok[0] == '-' &&
        !std::isdigit(static_cast<unsigned char>(tok[1])) && tok[1] != '.') {
      if (tok.find('=') == std::string::npos) ++i;
      continue;
    }
    path.push_back(tok);
  }
  return path;
}

const std::set<std::string> kGlobalKeys = {"d", "alpha", "seed", "out", "format", "threads"};

std::set<std::string> verb_keys(const std::string& group, const std::string& verb) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"field info", {}},
      {"primes sieve", {"xmax"}},
      {"dioph gintner", {"qmax"}},
      {"expsum lin", {"params"}},
      {"expsum avg", {"params"}},
      {"expsum bilinear", {"params"}},
      {"expsum verify", {"params"}},
      {"smooth poisson", {"params"}},
      {"smooth theta", {"params"}},
      {"smooth perron", {"params"}},
      {"smooth sawtooth", {"params"}},
      {"sieve check", {"x", "mu", "kappa", "M", "support"}},
      {"experiment main-count", {"qnorm", "delta", "cap"}},
      {"experiment search", {"xmax", "theta"}},
      {"experiment landau", {"x"}},
  };
  auto it = table.find(group + " " + verb);
  return it == table.end() ? std::set<std::string>{} : it->second;
}

/** Appends config pairs as flags unless the flag already appears on the line. */
void merge_config(std::vector<std::string>& args,
                  const std::vector<std::pair<std::string, std::string>>& kv,
                  const std::set<std::string>& allowed) {
  auto present = [&args](const std::string& key) {
    std::string flag = "--" + key;
    for (const auto& tok : args)
      if (tok == flag || tok.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  for (const auto& [k, v] : kv) {
    if (!kGlobalKeys.count(k) && !allowed.count(k)) continue;
    if (present(k)) continue;
    args.push_back("--" + k);
    args.push_back(v);
  }
}

// ---- small shared helpers ----

void emit_bytes(const GlobalOpts& g, const std::string& bytes) {
  if (g.out.empty()) {
    std::cout << bytes << std::flush;
    return;
  }
  std::ofstream of(g.out, std::ios::binary);
  if (!of) throw ParamError("cannot open output file " + g.out);
  of << bytes;
}

void require_json(const GlobalOpts& g) {
  if (g.format != "json") throw UnknownFormat(g.format + " (this command emits json only)");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

/** Cross-type copy keeping the spelled key order of the source report. */
ordered_json report_json(const BoundReport& r) {
  return ordered_json::parse(r.to_json().dump());
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& items,
                                                const std::set<std::string>& allowed) {
  std::map<std::string, std::string> kv;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParamError("params: expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    if (!allowed.count(key)) throw ParamError("params: unknown key '" + key + "'");
    kv[key] = item.substr(eq + 1);
  }
  return kv;
}

double param_d(const std::map<std::string, std::string>& kv, const std::string& key,
               double def) {
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw ParamError("");
    return v;
  } catch (const std::exception&) {
    throw ParamError("params: " + key + " is not a number: '" + it->second + "'");
  }
}

long long param_i(const std::map<std::string, std::string>& kv, const std::string& key,
                  long long def) {
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  try {
    std::size_t used = 0;
    long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw ParamError("");
    return v;
  } catch (const std::exception&) {
    throw ParamError("params: " + key + " is not an integer: '" + it->second + "'");
  }
}

std::string param_s(const std::map<std::string, std::string>& kv, const std::string& key,
                    const std::string& def) {
  auto it = kv.find(key);
  return it == kv.end() ? def : it->second;
}

ordered_json elt_json(const RingElt& r) {
  return ordered_json{{"n1", r.n1}, {"n2", r.n2}};
}

/** The admissible approximation whose N(q) is nearest the target. */
Approximation pick_approx(const FieldCtx& f, const Alpha& alpha, long long q_norm_target) {
  if (q_norm_target < 2) throw ParamError("qnorm target must be >= 2");
  auto apps = gintner_search(f, alpha, 2 * q_norm_target);
  if (apps.empty())
    throw NoApproximationFound("no admissible denominator up to twice the target norm");
  const Approximation* best = &apps.front();
  long long best_nq = norm(f, best->q);
  for (const auto& ap : apps) {
    long long nq = norm(f, ap.q);
    if (std::llabs(nq - q_norm_target) < std::llabs(best_nq - q_norm_target)) {
      best = &ap;
      best_nq = nq;
    }
  }
  return *best;
}

std::uint64_t mix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ull;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
  return v ^ (v >> 31);
}

std::uint64_t pack_elt(const RingElt& r) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r.n1)) << 32) |
         static_cast<std::uint32_t>(r.n2);
}

/** Pseudorandom fixed-point weight in [0, 4) supported on N(r) <= support. */
SieveWeight seeded_weight(const FieldCtx& f, long long support, std::uint64_t salt,
                          long long vanish_below = 0) {
  SieveWeight w;
  w.support_bound = support;
  w.eval = [f, support, salt, vanish_below](const RingElt& r) -> Fx128 {
    long long nm = norm(f, r);
    if (nm > support || nm <= vanish_below) return Fx128{};
    return Fx128::from_ratio(mix64(pack_elt(r) ^ salt) % 1024, 256);
  };
  return w;
}

// ---- one handler per verb, each returning the process exit code ----

int do_field_info(const GlobalOpts& g) {
  require_json(g);
  auto one = [](const FieldCtx& f) {
    ordered_json j;
    j["d"] = f.d;
    j["omega"] = f.kind == OmegaKind::sqrt_d ? "sqrt(d)" : "(1+sqrt(d))/2";
    j["omega_square"] = ordered_json{{"xi1", f.xi1}, {"xi2", f.xi2}};
    j["trace"] = f.trace_t;
    j["norm_omega"] = f.norm_omega;
    j["unit_count"] = f.unit_count;
    j["im_omega"] = static_cast<double>(f.im_omega());
    j["approx_constant"] = f.gintner_c_d();
    return j;
  };
  if (g.d_given) {
    emit_bytes(g, dump(one(make_field(g.d))));
    return 0;
  }
  ordered_json arr = ordered_json::array();
  for (int d : kHeegnerD) arr.push_back(one(make_field(d)));
  emit_bytes(g, dump(arr));
  return 0;
}

int do_primes_sieve(const GlobalOpts& g, long long xmax) {
  FieldCtx f = make_field(g.d);
  PrimeTable tab = sieve_primes(f, xmax);
  if (g.format == "csv") {
    std::string bytes = "n1,n2,norm\n";
    for (std::size_t i = 0; i < tab.primes.size(); ++i)
      bytes += std::to_string(tab.primes[i].n1) + ',' + std::to_string(tab.primes[i].n2) +
               ',' + std::to_string(tab.prime_norms[i]) + '\n';
    emit_bytes(g, bytes);
    return 0;
  }
  require_json(g);
  ordered_json j;
  j["field_d"] = f.d;
  j["xmax"] = xmax;
  j["count"] = tab.primes.size();
  auto arr = ordered_json::array();
  for (std::size_t i = 0; i < tab.primes.size(); ++i) {
    ordered_json p = elt_json(tab.primes[i]);
    p["norm"] = tab.prime_norms[i];
    arr.push_back(std::move(p));
  }
  j["primes"] = std::move(arr);
  emit_bytes(g, dump(j));
  return 0;
}

int do_dioph_gintner(const GlobalOpts& g, long long qmax) {
  require_json(g);
  FieldCtx f = make_field(g.d);
  Alpha a = make_alpha(f, g.alpha);
  auto apps = gintner_search(f, a, qmax);
  ordered_json j;
  j["field_d"] = f.d;
  j["alpha_spec"] = a.label;
  j["qmax"] = qmax;
  j["count"] = apps.size();
  auto arr = ordered_json::array();
  for (const auto& ap : apps) {
    long long nq = norm(f, ap.q);
    ordered_json e;
    e["q"] = elt_json(ap.q);
    e["a"] = elt_json(ap.a);
    e["q_norm"] = nq;
    e["gamma_abs"] = std::sqrt(static_cast<double>(ap.gamma_abs_sq));
    e["C"] = ap.C;
    e["bound"] = ap.C / static_cast<double>(nq);
    arr.push_back(std::move(e));
  }
  j["approximations"] = std::move(arr);
  emit_bytes(g, dump(j));
  return 0;
}

int do_expsum(const GlobalOpts& g, const std::string& verb,
              const std::vector<std::string>& raw_params) {
  require_json(g);
  FieldCtx f = make_field(g.d);
  Alpha a = make_alpha(f, g.alpha);
  ordered_json j;
  j["field_d"] = f.d;
  j["alpha_spec"] = a.label;

  if (verb == "lin") {
    auto kv = parse_params(raw_params, {"x", "y"});
    long long x = param_i(kv, "x", 0), y = param_i(kv, "y", 1024);
    auto [value, rep] = lin_sum(f, a, x, y);
    j["x"] = x;
    j["y"] = y;
    j["value_re"] = value.real();
    j["value_im"] = value.imag();
    j["value_abs"] = std::abs(value);
    j["report"] = report_json(rep);
  } else if (verb == "avg") {
    auto kv = parse_params(raw_params, {"lo", "hi", "M", "qnorm"});
    RangeSpec range{param_i(kv, "lo", 1), param_i(kv, "hi", 1024)};
    double M = param_d(kv, "M", 32.0);
    Approximation ap = pick_approx(f, a, param_i(kv, "qnorm", 5));
    auto [S, reps] = avg_sum(f, a, range, M, ap);
    j["lo"] = range.lo;
    j["hi"] = range.hi;
    j["M"] = M;
    j["q_norm"] = norm(f, ap.q);
    j["S"] = S;
    auto arr = ordered_json::array();
    for (const auto& r : reps) arr.push_back(report_json(r));
    j["reports"] = std::move(arr);
  } else if (verb == "bilinear") {
    auto kv = parse_params(raw_params,
                           {"J1", "J2", "x", "type1", "M", "mu", "kappa", "mode", "seed"});
    BilinearParams p;
    p.J1 = static_cast<int>(param_i(kv, "J1", p.J1));
    p.J2 = static_cast<int>(param_i(kv, "J2", p.J2));
    p.x = param_i(kv, "x", p.x);
    p.type1 = param_i(kv, "type1", 1) != 0;
    p.M = param_i(kv, "M", p.M);
    p.mu = param_d(kv, "mu", p.mu);
    p.kappa = param_d(kv, "kappa", p.kappa);
    std::string mode = param_s(kv, "mode", "ones");
    if (mode == "ones")
      p.mode = CoeffMode::ones;
    else if (mode == "zeros")
      p.mode = CoeffMode::zeros;
    else if (mode == "random_signs")
      p.mode = CoeffMode::random_signs;
    else if (mode == "aligned")
      p.mode = CoeffMode::aligned;
    else
      throw ParamError("params: unknown mode '" + mode + "'");
    p.seed = static_cast<std::uint64_t>(param_i(kv, "seed", static_cast<long long>(g.seed)));
    BilinearResult res = bilinear_F(f, a, p);
    j["J1"] = p.J1;
    j["J2"] = p.J2;
    j["x"] = p.x;
    j["type1"] = p.type1;
    j["mode"] = mode;
    j["seed"] = p.seed;
    j["value"] = res.value;
    j["range_empty"] = res.range_empty;
  } else {  // verify
    auto kv = parse_params(
        raw_params,
        {"kind", "x", "J1", "J2", "M", "mu", "kappa", "J", "delta", "qnorm", "seed"});
    std::string kind_s = param_s(kv, "kind", "type1");
    Section5Kind kind;
    if (kind_s == "type1")
      kind = Section5Kind::type1;
    else if (kind_s == "type2")
      kind = Section5Kind::type2;
    else if (kind_s == "gsum")
      kind = Section5Kind::gsum;
    else
      throw ParamError("params: unknown kind '" + kind_s + "'");
    Section5Params p;
    p.ap = pick_approx(f, a, param_i(kv, "qnorm", 5));
    p.x = param_i(kv, "x", p.x);
    p.J1 = static_cast<int>(param_i(kv, "J1", p.J1));
    p.J2 = static_cast<int>(param_i(kv, "J2", p.J2));
    p.M = param_i(kv, "M", p.M);
    p.mu = param_d(kv, "mu", p.mu);
    p.kappa = param_d(kv, "kappa", p.kappa);
    p.J = static_cast<int>(param_i(kv, "J", p.J));
    p.delta = Fx128::from_decimal(param_s(kv, "delta", "0.3"));
    p.seed = static_cast<std::uint64_t>(param_i(kv, "seed", static_cast<long long>(g.seed)));
    BoundReport rep = verify_section5_bound(f, a, kind, p);
    j["kind"] = kind_s;
    j["q_norm"] = norm(f, p.ap.q);
    j["report"] = report_json(rep);
  }
  emit_bytes(g, dump(j));
  return 0;
}

int do_smooth(const GlobalOpts& g, const std::string& verb,
              const std::vector<std::string>& raw_params) {
  require_json(g);
  ordered_json j;

  if (verb == "poisson") {
    auto kv = parse_params(raw_params, {"R", "x_eps"});
    double R = param_d(kv, "R", 16.0);
    double x_eps = param_d(kv, "x_eps", 1.0);
    FieldCtx f = make_field(g.d);
    Alpha a = make_alpha(f, g.alpha);
    GaussLatticeSum s = gauss_lattice_sum(f, R, a.w128, x_eps);
    double dre = static_cast<double>(s.direct.re);
    double dim = static_cast<double>(s.direct.im);
    double sigma0 = static_cast<double>(s.sigma0);
    double sigma_star = static_cast<double>(s.sigma_star);
    double unfolded = sigma0 + sigma_star;
    j["field_d"] = f.d;
    j["alpha_spec"] = a.label;
    j["R"] = R;
    j["x_eps"] = x_eps;
    j["direct_re"] = dre;
    j["direct_im"] = dim;
    j["sigma0"] = sigma0;
    j["sigma_star"] = sigma_star;
    j["unfolded"] = unfolded;
    j["gap"] = std::hypot(dre - unfolded, dim);
    j["class"] = s.cls == ThetaClass::near ? "near" : "far";
  } else if (verb == "theta") {
    auto kv = parse_params(raw_params, {"theta", "delta"});
    double theta = param_d(kv, "theta", 0.3);
    double delta = param_d(kv, "delta", 0.25);
    ThetaPair p = theta_wdelta(theta, delta);
    double direct = static_cast<double>(p.direct);
    double dual = static_cast<double>(p.dual);
    j["theta"] = theta;
    j["delta"] = delta;
    j["direct"] = direct;
    j["dual"] = dual;
    j["gap"] = std::fabs(direct - dual);
  } else if (verb == "perron") {
    auto kv = parse_params(raw_params, {"gamma", "rho", "T"});
    double gamma = param_d(kv, "gamma", 0.4);
    double rho = param_d(kv, "rho", 0.7);
    double T = param_d(kv, "T", 50.0);
    PerronResult p = perron_indicator(gamma, rho, T);
    double step = gamma < rho ? 1.0 : 0.0;
    j["gamma"] = gamma;
    j["rho"] = rho;
    j["T"] = T;
    j["integral"] = p.integral;
    j["step"] = step;
    j["gap"] = std::fabs(p.integral - step);
    j["err_bound"] = p.err_bound;
  } else {  // sawtooth
    auto kv = parse_params(raw_params, {"x", "J"});
    double x = param_d(kv, "x", 0.37);
    long long J = param_i(kv, "J", 16);
    SawtoothResult s = sawtooth_approx(x, J);
    j["x"] = x;
    j["J"] = J;
    j["approx"] = s.approx;
    j["exact"] = s.exact;
    j["err"] = s.err;
  }
  emit_bytes(g, dump(j));
  return 0;
}

int do_sieve_check(const GlobalOpts& g, long long x, double mu, double kappa, long long M,
                   long long support) {
  require_json(g);
  FieldCtx f = make_field(g.d);
  if (M == 0) M = x;
  if (support == 0) support = x;
  SieveConfig cfg = make_sieve_config(x, kappa, mu, M, support);

  SieveWeight w = seeded_weight(f, support, g.seed);
  SieveWeight wt = seeded_weight(f, support, mix64(g.seed ^ 0x5eedULL));
  SieveWeight gated = seeded_weight(f, support, g.seed, cfg.mu_floor);

  LegendreCheck lc = legendre_identity_check(f, w, cfg.z);
  BuchstabResult br = buchstab_decompose(f, cfg, gated);
  TypeSplit ts = type_split(f, cfg, w, wt);

  bool gap_zero = br.identity_gap == Fx128{};
  bool ok = lc.equal && gap_zero && ts.total_check;

  ordered_json j;
  j["field_d"] = f.d;
  j["x"] = cfg.x;
  j["z"] = cfg.z;
  j["mu_floor"] = cfg.mu_floor;
  j["M"] = cfg.M;
  j["support"] = cfg.support_bound;
  j["seed"] = g.seed;
  j["legendre"] = ordered_json{{"lhs", lc.lhs.to_double()},
                               {"rhs", lc.rhs.to_double()},
                               {"equal", lc.equal}};
  j["buchstab"] = ordered_json{{"t", br.t},
                               {"truncated_early", br.truncated_early},
                               {"direct", br.direct.to_double()},
                               {"residual", br.residual.to_double()},
                               {"identity_gap", br.identity_gap.to_double()},
                               {"gap_zero", gap_zero}};
  j["type_split"] = ordered_json{{"s1", ts.s1.to_double()},
                                 {"s2", ts.s2.to_double()},
                                 {"difference", ts.difference.to_double()},
                                 {"total_check", ts.total_check}};
  j["all_hold"] = ok;
  emit_bytes(g, dump(j));
  if (!ok) {
    std::cerr << "sieve check: an identity failed\n";
    return 2;
  }
  return 0;
}

int do_experiment(const GlobalOpts& g, const std::string& verb, long long qnorm, double delta,
                  long long cap, long long xmax, double theta, long long x) {
  FieldCtx f = make_field(g.d);
  ExperimentReport rep;
  auto t0 = std::chrono::steady_clock::now();
  if (verb == "main-count") {
    Alpha a = make_alpha(f, g.alpha);
    rep = run_main_count(f, a, qnorm, delta, cap);
  } else if (verb == "search") {
    Alpha a = make_alpha(f, g.alpha);
    rep = search_good_primes(f, a, xmax, theta);
  } else {
    rep = landau_check(f, x);
  }
  rep.seed = g.seed;
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string bytes = emit_report(rep, g.format);
  emit_bytes(g, bytes);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args_in) {
  auto t0 = std::chrono::steady_clock::now();
  GlobalOpts g;
  try {
    std::vector<std::string> args = args_in;

    // Config values fill in any flag the command line leaves unset.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string val;
      if (args[i] == "--config" && i + 1 < args.size())
        val = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0)
        val = args[i].substr(9);
      else
        continue;
      auto path = command_path(args);
      merge_config(args, read_config(val),
                   path.size() == 2 ? verb_keys(path[0], path[1]) : std::set<std::string>{});
      break;
    }

    CLI::App app{"desk-scale laboratory for prime distribution in the nine "
                 "imaginary quadratic rings of class number one"};
    app.require_subcommand(1);
    app.fallthrough();
    auto* opt_d = app.add_option("--d", g.d, "field discriminant parameter (one of the nine)");
    app.add_option("--alpha", g.alpha, "target number: preset name or 're,im' decimals");
    app.add_option("--seed", g.seed, "seed for any randomized coefficients");
    app.add_option("--out", g.out, "write the report to this path instead of stdout");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "plot"}));
    app.add_option("--config", g.config, "flat key=value file supplying default flags");
    app.add_option("--threads", g.threads, "worker threads (advisory; desk scale runs single-threaded)")
        ->check(CLI::Range(1, 64));

    auto* field = app.add_subcommand("field", "ring constants");
    field->fallthrough();
    auto* field_info = field->add_subcommand("info", "print the field table");
    field_info->fallthrough();

    long long xmax = 100;
    auto* primes = app.add_subcommand("primes", "prime elements");
    primes->fallthrough();
    auto* primes_sieve = primes->add_subcommand("sieve", "canonical primes up to a norm bound");
    primes_sieve->fallthrough();
    auto* opt_xmax = primes_sieve->add_option("--xmax", xmax, "norm bound");

    long long qmax = 100;
    auto* dioph = app.add_subcommand("dioph", "approximation search");
    dioph->fallthrough();
    auto* dioph_g = dioph->add_subcommand("gintner", "admissible a/q with N(q) <= qmax");
    dioph_g->fallthrough();
    dioph_g->add_option("--qmax", qmax, "denominator norm bound");

    std::vector<std::string> params;
    auto* expsum = app.add_subcommand("expsum", "exponential sums and bounds");
    expsum->fallthrough();
    expsum->require_subcommand(1);
    for (const char* v : {"lin", "avg", "bilinear", "verify"}) {
      auto* sub = expsum->add_subcommand(v);
      sub->fallthrough();
      sub->add_option("--params", params, "key=value settings");
    }

    auto* smooth = app.add_subcommand("smooth", "smoothed weights and kernels");
    smooth->fallthrough();
    smooth->require_subcommand(1);
    for (const char* v : {"poisson", "theta", "perron", "sawtooth"}) {
      auto* sub = smooth->add_subcommand(v);
      sub->fallthrough();
      sub->add_option("--params", params, "key=value settings");
    }

    long long sx = 0, sM = 0, ssupport = 0;
    double smu = 0, skappa = 0;
    auto* sieve = app.add_subcommand("sieve", "identity machinery");
    sieve->fallthrough();
    auto* sieve_check = sieve->add_subcommand("check", "run the three identity checks");
    sieve_check->fallthrough();
    sieve_check->add_option("--x", sx, "scale")->required();
    sieve_check->add_option("--mu", smu, "lower range exponent")->required();
    sieve_check->add_option("--kappa", skappa, "sifting exponent")->required();
    sieve_check->add_option("--M", sM, "split point (default x)");
    sieve_check->add_option("--support", ssupport, "weight support bound (default x)");

    long long qnorm = 0, cap = 10'000'000, exmax = 0, ex = 0;
    double delta = 0, theta = 0;
    auto* experiment = app.add_subcommand("experiment", "headline experiments");
    experiment->fallthrough();
    experiment->require_subcommand(1);
    auto* exp_main = experiment->add_subcommand("main-count", "hits against the main term");
    exp_main->fallthrough();
    exp_main->add_option("--qnorm", qnorm, "denominator norm target")->required();
    exp_main->add_option("--delta", delta, "window half-width")->required();
    exp_main->add_option("--cap", cap, "cap on x = N(q)^{28/5}");
    auto* exp_search = experiment->add_subcommand("search", "primes with small ||p alpha||");
    exp_search->fallthrough();
    exp_search->add_option("--xmax", exmax, "norm bound")->required();
    exp_search->add_option("--theta", theta, "threshold exponent")->required();
    auto* exp_landau = experiment->add_subcommand("landau", "prime ideal count vs li(x)");
    exp_landau->fallthrough();
    exp_landau->add_option("--x", ex, "count up to this norm")->required();

    std::vector<const char*> argv;
    argv.push_back("iqlab");
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? 0 : 3;
    }
    g.d_given = opt_d->count() > 0;

    int rc = 0;
    if (field_info->parsed())
      rc = do_field_info(g);
    else if (primes_sieve->parsed()) {
      if (opt_xmax->count() == 0) throw ParamError("primes sieve: --xmax is required");
      rc = do_primes_sieve(g, xmax);
    } else if (dioph_g->parsed())
      rc = do_dioph_gintner(g, qmax);
    else if (expsum->parsed())
      rc = do_expsum(g, expsum->get_subcommands().at(0)->get_name(), params);
    else if (smooth->parsed())
      rc = do_smooth(g, smooth->get_subcommands().at(0)->get_name(), params);
    else if (sieve_check->parsed())
      rc = do_sieve_check(g, sx, smu, skappa, sM, ssupport);
    else if (experiment->parsed())
      rc = do_experiment(g, experiment->get_subcommands().at(0)->get_name(), qnorm, delta, cap,
                         exmax, theta, ex);
    else
      throw ParamError("no command given");

    std::fprintf(stderr, "runtime_seconds %.3f\n",
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return rc;
  } catch (const ParamError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 3;
  } catch (const CheckError& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace iqlab
