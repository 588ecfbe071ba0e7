#include "iqlab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "iqlab/dioph.hpp"
#include "iqlab/errors.hpp"
#include "iqlab/real.hpp"

namespace iqlab {

namespace {

constexpr long long kNormCap = 100'000'000;

double dist128(const FieldCtx& f, const RingElt& elt, const Alpha& alpha) {
  return dist_coords(mul_elt_coords(f, elt, alpha.w128)).to_double();
}

double dist256(const FieldCtx& f, const RingElt& elt, const Alpha& alpha) {
  return dist_coords(mul_elt_coords(f, elt, alpha.w256)).to_double();
}

// Shortest representation that parses back to the same double.
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = 0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[40];
      std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
      std::sscanf(shorter, "%lf", &back);
      if (back == v) return shorter;
    }
  }
  return buf;
}

}  // namespace

HitCount count_hits_in_range(const FieldCtx& f, const Alpha& alpha, long long lo, long long hi,
                             double delta) {
  if (lo < 1 || hi < lo) throw ParamError("count_hits_in_range: need 1 <= lo <= hi");
  if (hi - 1 > kNormCap) throw BoundTooLarge("count_hits_in_range: upper norm bound");
  if (!(delta >= 0.0) || delta > 0.5)
    throw ParamOutOfRange("count_hits_in_range: delta must lie in [0, 1/2]");
  HitCount out;
  if (hi < 3) return out;
  PrimeTable tab = sieve_primes(f, hi - 1);
  for (std::size_t i = 0; i < tab.primes.size(); ++i) {
    if (tab.prime_norms[i] < lo) continue;
    for (int u = 0; u < f.unit_count; ++u) {
      RingElt elt = ring_mul(f, f.units[u], tab.primes[i]);
      out.elements += 1;
      if (dist128(f, elt, alpha) < delta) out.hits += 1;
    }
  }
  return out;
}

ExperimentReport run_main_count(const FieldCtx& f, const Alpha& alpha, long long q_norm_target,
                                double delta, long long cap) {
  if (q_norm_target < 2) throw ParamError("run_main_count: denominator norm target must be >= 2");
  if (!(delta > 0.0) || delta > 0.5)
    throw ParamOutOfRange("run_main_count: delta must lie in (0, 1/2]");
  if (cap < 16) throw ParamError("run_main_count: cap too small to hold a counting window");
  if (cap > kNormCap) throw BoundTooLarge("run_main_count: cap");

  ExperimentReport rep;
  rep.experiment_id = "main-count";
  rep.field_d = f.d;
  rep.alpha_spec = alpha.label;

  auto apps = gintner_search(f, alpha, 2 * q_norm_target);
  if (apps.empty())
    throw NoApproximationFound("run_main_count: no admissible denominator up to twice the target");
  const Approximation* best = &apps.front();
  long long best_nq = norm(f, best->q);
  for (const auto& ap : apps) {
    long long nq = norm(f, ap.q);
    if (std::llabs(nq - q_norm_target) < std::llabs(best_nq - q_norm_target)) {
      best = &ap;
      best_nq = nq;
    }
  }

  double xd = std::pow(static_cast<double>(best_nq), 28.0 / 5.0);
  long long x = xd >= static_cast<double>(cap) ? cap : std::llround(xd);
  long long lo = x / 2;

  PrimeTable tab = sieve_primes(f, x - 1);
  std::vector<double> dists;
  for (std::size_t i = 0; i < tab.primes.size(); ++i) {
    if (tab.prime_norms[i] < lo) continue;
    for (int u = 0; u < f.unit_count; ++u)
      dists.push_back(dist128(f, ring_mul(f, f.units[u], tab.primes[i]), alpha));
  }
  std::sort(dists.begin(), dists.end());
  rep.prime_count = static_cast<long long>(dists.size());
  auto hits_below = [&dists](double del) {
    return static_cast<long long>(std::lower_bound(dists.begin(), dists.end(), del) -
                                  dists.begin());
  };

  rep.hit_count = hits_below(delta);
  rep.expected = 4.0 * delta * delta * static_cast<double>(rep.prime_count);
  double delta_floor = std::pow(static_cast<double>(x), -1.0 / 28.0);
  rep.delta_below_range = delta < delta_floor;

  double deviation = rep.expected > 0
                         ? std::fabs(static_cast<double>(rep.hit_count) / rep.expected - 1.0)
                         : 0.0;
  rep.ratios["deviation"] = deviation;
  rep.ratios["hit_share"] =
      rep.prime_count > 0 ? static_cast<double>(rep.hit_count) / rep.prime_count : 0.0;

  rep.params["cap"] = static_cast<double>(cap);
  rep.params["delta"] = delta;
  rep.params["delta_floor"] = delta_floor;
  rep.params["q_n1"] = static_cast<double>(best->q.n1);
  rep.params["q_n2"] = static_cast<double>(best->q.n2);
  rep.params["q_norm"] = static_cast<double>(best_nq);
  rep.params["x"] = static_cast<double>(x);

  // Geometric grid from 1/2 downward; at least five points even when the
  // nominal floor already exceeds 1/2, as it does for every x this cap allows.
  double g = 0.5;
  while (rep.sweep.size() < 5 || g >= delta_floor) {
    long long h = hits_below(g);
    double exp_g = 4.0 * g * g * static_cast<double>(rep.prime_count);
    rep.sweep.emplace_back(
        g, exp_g > 0 ? std::fabs(static_cast<double>(h) / exp_g - 1.0) : 0.0);
    g /= std::sqrt(2.0);
    if (rep.sweep.size() >= 40) break;
  }
  return rep;
}

ExperimentReport search_good_primes(const FieldCtx& f, const Alpha& alpha, long long x_max,
                                    double theta_exp) {
  if (x_max < 2) throw ParamError("search_good_primes: x_max must be >= 2");
  if (x_max > kNormCap) throw BoundTooLarge("search_good_primes: x_max");
  if (!(theta_exp >= 0.0) || theta_exp > 2.0)
    throw ParamOutOfRange("search_good_primes: exponent must lie in [0, 2]");

  ExperimentReport rep;
  rep.experiment_id = "search";
  rep.field_d = f.d;
  rep.alpha_spec = alpha.label;
  rep.params["theta"] = theta_exp;
  rep.params["x_max"] = static_cast<double>(x_max);

  PrimeTable tab = sieve_primes(f, x_max);
  for (std::size_t i = 0; i < tab.primes.size(); ++i) {
    long long nm = tab.prime_norms[i];
    double threshold = std::pow(static_cast<double>(nm), -theta_exp);
    for (int u = 0; u < f.unit_count; ++u) {
      RingElt elt = ring_mul(f, f.units[u], tab.primes[i]);
      rep.prime_count += 1;
      if (dist128(f, elt, alpha) > threshold) continue;
      double confirmed = dist256(f, elt, alpha);
      if (confirmed > threshold) continue;
      rep.records.push_back({elt, nm, confirmed, threshold});
    }
  }
  rep.hit_count = static_cast<long long>(rep.records.size());
  rep.ratios["hit_share"] =
      rep.prime_count > 0 ? static_cast<double>(rep.hit_count) / rep.prime_count : 0.0;
  return rep;
}

ExperimentReport landau_check(const FieldCtx& f, long long x) {
  if (x < 2) throw ParamError("landau_check: x must be >= 2");
  if (x > kNormCap) throw BoundTooLarge("landau_check: x");

  ExperimentReport rep;
  rep.experiment_id = "landau";
  rep.field_d = f.d;
  rep.params["x"] = static_cast<double>(x);
  rep.prime_count = prime_ideal_count(f, x);

  double li = log_integral(static_cast<double>(x));
  rep.expected = li;
  rep.ratios["li"] = li;
  rep.ratios["deviation"] = std::fabs(static_cast<double>(rep.prime_count) / li - 1.0);
  return rep;
}

double log_integral(double x) {
  if (!(x > 1.0)) throw ParamError("log_integral: x must exceed 1");
  double lx = std::log(x);
  double sum = static_cast<double>(real_euler()) + std::log(lx);
  double term = 1.0;
  for (int k = 1; k <= 400; ++k) {
    term *= lx / k;
    double add = term / k;
    sum += add;
    if (term < 1.0 && add < 1e-17 * std::fabs(sum)) break;
  }
  return sum;
}

std::string emit_report(const ExperimentReport& report, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["artifact_version"] = report.artifact_version;
    j["experiment_id"] = report.experiment_id;
    j["field_d"] = report.field_d;
    j["alpha_spec"] = report.alpha_spec;
    j["seed"] = report.seed;
    j["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.params) j["params"][k] = v;
    j["counts"] = nlohmann::ordered_json{{"expected", report.expected},
                                         {"hit_count", report.hit_count},
                                         {"prime_count", report.prime_count}};
    j["delta_below_range"] = report.delta_below_range;
    j["ratios"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.ratios) j["ratios"][k] = v;
    auto recs = nlohmann::ordered_json::array();
    for (const auto& r : report.records)
      recs.push_back(nlohmann::ordered_json{{"norm", r.norm},
                                            {"n1", r.p.n1},
                                            {"n2", r.p.n2},
                                            {"dist", r.dist},
                                            {"threshold", r.threshold}});
    j["records"] = std::move(recs);
    auto sw = nlohmann::ordered_json::array();
    for (const auto& [del, dev] : report.sweep)
      sw.push_back(nlohmann::ordered_json::array({del, dev}));
    j["sweep"] = std::move(sw);
    return j.dump(2) + "\n";
  }
  if (format == "csv") {
    std::ostringstream os;
    os << "norm,n1,n2,dist,threshold\n";
    for (const auto& r : report.records)
      os << r.norm << ',' << r.p.n1 << ',' << r.p.n2 << ',' << fmt_double(r.dist) << ','
         << fmt_double(r.threshold) << '\n';
    return os.str();
  }
  if (format == "plot") {
    std::ostringstream os;
    for (const auto& [del, dev] : report.sweep)
      os << fmt_double(del) << ' ' << fmt_double(dev) << '\n';
    return os.str();
  }
  throw UnknownFormat("emit_report: format must be json, csv, or plot");
}

}  // namespace iqlab
