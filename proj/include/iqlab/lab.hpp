#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iqlab/arith.hpp"
#include "iqlab/field.hpp"

namespace iqlab {

/** One prime element passing a distance test, with the bound it met. */
struct PrimeRecord {
  RingElt p;
  long long norm{0};
  double dist{0};  // ||p alpha||_omega
  double threshold{0};
};

/**
 * Self-describing result of one experiment.  expected = 4 delta^2 *
 * prime_count whenever a delta is in play, zero otherwise.  The sweep holds
 * (delta, deviation) pairs on the geometric grid.  runtime_seconds is
 * carried for the caller but excluded from emitted bytes, so identical
 * inputs produce identical reports.
 */
struct ExperimentReport {
  std::string artifact_version{"1"};
  std::string experiment_id;
  int field_d{0};
  std::string alpha_spec;
  std::uint64_t seed{0};
  std::map<std::string, double> params;
  long long hit_count{0};
  long long prime_count{0};
  double expected{0};
  bool delta_below_range{false};
  std::map<std::string, double> ratios;
  std::vector<PrimeRecord> records;
  std::vector<std::pair<double, double>> sweep;
  double runtime_seconds{0};
};

/**
 * Hits ||p alpha||_omega < delta among prime elements with lo <= N(p) < hi,
 * each associate counted separately.  hits is monotone in delta and under
 * range inclusion.
 */
struct HitCount {
  long long hits{0};
  long long elements{0};
};
HitCount count_hits_in_range(const FieldCtx& f, const Alpha& alpha, long long lo, long long hi,
                             double delta);

/**
 * Picks the admissible approximation with N(q) nearest q_norm_target, sets
 * x = min(N(q)^{28/5}, cap), and counts prime elements p with x/2 <= N(p)
 * < x and ||p alpha||_omega < delta against the main term 4 delta^2 *
 * prime_count.  delta below x^{-1/28} is flagged but still computed.  The
 * sweep column holds the deviation over the delta grid descending from 1/2
 * by factors of sqrt(2).
 */
ExperimentReport run_main_count(const FieldCtx& f, const Alpha& alpha, long long q_norm_target,
                                double delta, long long cap);

/**
 * Scans all prime elements with N(p) <= x_max and records those with
 * ||p alpha||_omega <= N(p)^{-theta_exp}, sorted by norm.  Candidates found
 * with 128-bit coordinates are admitted only after the distance recomputed
 * from 256-bit coordinates also meets the bound.
 */
ExperimentReport search_good_primes(const FieldCtx& f, const Alpha& alpha, long long x_max,
                                    double theta_exp);

/** Prime ideal count up to x against the logarithmic integral. */
ExperimentReport landau_check(const FieldCtx& f, long long x);

/** li(x) = gamma + log log x + sum_k (log x)^k / (k * k!), for x > 1. */
double log_integral(double x);

/**
 * Serializes a report: "json" (fixed key order), "csv" (header plus one row
 * per record), or "plot" (one "delta deviation" line per sweep point).
 * Byte-stable for fixed report contents.
 */
std::string emit_report(const ExperimentReport& report, const std::string& format);

}  // namespace iqlab
