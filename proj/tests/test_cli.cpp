#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iqlab/cli.hpp"

using nlohmann::json;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("iqlab_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::vector<std::string>& args) { return iqlab::run_cli(args); }

json run_json(std::vector<std::string> args, const std::string& name) {
  std::string path = tmp_path(name);
  args.push_back("--out");
  args.push_back(path);
  REQUIRE(run(args) == 0);
  return json::parse(slurp(path));
}

}  // namespace

TEST_CASE("field info") {
  json j = run_json({"field", "info", "--d", "-3"}, "fi.json");
  CHECK(j["d"] == -3);
  CHECK(j["omega"] == "(1+sqrt(d))/2");
  CHECK(j["omega_square"]["xi1"] == -1);
  CHECK(j["omega_square"]["xi2"] == 1);
  CHECK(j["trace"] == 1);
  CHECK(j["norm_omega"] == 1);
  CHECK(j["unit_count"] == 6);
  CHECK(j["im_omega"].get<double>() == doctest::Approx(0.8660254038).epsilon(1e-9));
  CHECK(j["approx_constant"].get<double>() == doctest::Approx(0.6752372371).epsilon(1e-9));

  json all = run_json({"field", "info"}, "fi_all.json");
  REQUIRE(all.is_array());
  REQUIRE(all.size() == 9);
  CHECK(all[0]["d"] == -1);
  CHECK(all[8]["d"] == -163);
}

TEST_CASE("primes sieve emits matching csv and json") {
  std::string csv_path = tmp_path("ps.csv");
  REQUIRE(run({"primes", "sieve", "--d", "-1", "--xmax", "20", "--format", "csv", "--out",
               csv_path}) == 0);
  std::istringstream is(slurp(csv_path));
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "n1,n2,norm");
  REQUIRE(std::getline(is, line));
  CHECK(line == "1,1,2");
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 8);

  json j = run_json({"primes", "sieve", "--d", "-1", "--xmax", "20"}, "ps.json");
  CHECK(j["field_d"] == -1);
  CHECK(j["count"] == 8);
  REQUIRE(j["primes"].size() == 8);
  CHECK(j["primes"][0]["n1"] == 1);
  CHECK(j["primes"][0]["n2"] == 1);
  CHECK(j["primes"][0]["norm"] == 2);
}

TEST_CASE("dioph gintner lists admissible approximations") {
  json j = run_json(
      {"dioph", "gintner", "--d", "-1", "--alpha", "sqrt2_sqrt3", "--qmax", "10"}, "dg.json");
  CHECK(j["count"] == 2);
  REQUIRE(j["approximations"].size() == 2);
  const json& first = j["approximations"][0];
  CHECK(first["q"]["n1"] == 1);
  CHECK(first["q"]["n2"] == 1);
  CHECK(first["a"]["n1"] == 0);
  CHECK(first["a"]["n2"] == 3);
  CHECK(first["q_norm"] == 2);
  CHECK(first["gamma_abs"].get<double>() == doctest::Approx(0.2474002631).epsilon(1e-9));
  CHECK(first["C"].get<double>() == doctest::Approx(0.7796968012).epsilon(1e-9));
  CHECK(first["bound"].get<double>() ==
        doctest::Approx(first["C"].get<double>() / 2).epsilon(1e-12));
}

TEST_CASE("expsum subcommands") {
  json lin = run_json({"expsum", "lin", "--d", "-1", "--alpha", "e_pi", "--params", "x=0",
                       "--params", "y=500"},
                      "el.json");
  CHECK(lin["value_re"].get<double>() == doctest::Approx(1.3913741488).epsilon(1e-9));
  CHECK(std::fabs(lin["value_im"].get<double>()) < 1e-12);
  CHECK(lin["report"]["ratio"].get<double>() == doctest::Approx(0.0175296720).epsilon(1e-8));
  CHECK(lin["report"]["ratio"].get<double>() <= 1.0);

  json ver = run_json({"expsum", "verify", "--d", "-1", "--alpha", "sqrt2_sqrt3", "--params",
                       "kind=type1", "--params", "x=1024", "--params", "qnorm=5"},
                      "ev.json");
  CHECK(ver["kind"] == "type1");
  CHECK(ver["q_norm"] == 5);
  CHECK(ver["report"]["value"].get<double>() >= 0.0);
  CHECK(ver["report"]["rhs"].get<double>() > 0.0);

  // Same seed, same bytes.
  std::string p1 = tmp_path("eb1.json"), p2 = tmp_path("eb2.json");
  std::vector<std::string> base = {"expsum",   "bilinear", "--d",      "-1",
                                   "--alpha",  "e_pi",     "--params", "mode=random_signs",
                                   "--params", "x=256",    "--seed",   "4"};
  auto a1 = base, a2 = base;
  a1.insert(a1.end(), {"--out", p1});
  a2.insert(a2.end(), {"--out", p2});
  REQUIRE(run(a1) == 0);
  REQUIRE(run(a2) == 0);
  CHECK(slurp(p1) == slurp(p2));
  json eb = json::parse(slurp(p1));
  CHECK(eb["value"].get<double>() == doctest::Approx(478.3646568299).epsilon(1e-9));
  CHECK(eb["range_empty"] == false);
}

TEST_CASE("smooth subcommands") {
  json th = run_json({"smooth", "theta", "--params", "theta=0.3", "--params", "delta=0.25"},
                     "st.json");
  CHECK(th["direct"].get<double>() == doctest::Approx(0.0108467106).epsilon(1e-9));
  CHECK(th["gap"].get<double>() < 1e-15);

  json sw = run_json({"smooth", "sawtooth", "--params", "x=0.37", "--params", "J=16"},
                     "ss.json");
  CHECK(sw["exact"].get<double>() == doctest::Approx(-0.13).epsilon(1e-12));
  CHECK(sw["err"].get<double>() == doctest::Approx(0.0012059253).epsilon(1e-8));

  json pe = run_json({"smooth", "perron", "--params", "gamma=0.4", "--params", "rho=0.7",
                      "--params", "T=50"},
                     "sp.json");
  CHECK(pe["step"] == 1.0);
  CHECK(pe["gap"].get<double>() <= pe["err_bound"].get<double>());

  json po = run_json({"smooth", "poisson", "--d", "-1", "--alpha", "e_pi", "--params",
                      "R=16", "--params", "x_eps=1"},
                     "sg.json");
  double gap = po["gap"].get<double>();
  double direct = po["direct_re"].get<double>();
  CHECK(gap < 1e-9 * std::max(1.0, std::fabs(direct)));
}

TEST_CASE("sieve check reports all identities holding") {
  json j = run_json(
      {"sieve", "check", "--d", "-1", "--x", "1024", "--mu", "0.3", "--kappa", "0.5",
       "--seed", "7"},
      "sc.json");
  CHECK(j["z"] == 32);
  CHECK(j["mu_floor"] == 8);
  CHECK(j["legendre"]["equal"] == true);
  CHECK(j["legendre"]["lhs"].get<double>() == j["legendre"]["rhs"].get<double>());
  CHECK(j["legendre"]["lhs"].get<double>() == 1280.234375);
  CHECK(j["buchstab"]["t"] == 11);
  CHECK(j["buchstab"]["gap_zero"] == true);
  CHECK(j["buchstab"]["identity_gap"].get<double>() == 0.0);
  CHECK(j["buchstab"]["direct"].get<double>() == -43.8515625);
  CHECK(j["type_split"]["total_check"] == true);
  CHECK(j["type_split"]["s1"].get<double>() == -17.43359375);
  CHECK(j["all_hold"] == true);

  // Different seed, different weights, identities still hold.
  json j2 = run_json(
      {"sieve", "check", "--d", "-3", "--x", "512", "--mu", "0.35", "--kappa", "0.4",
       "--seed", "11"},
      "sc2.json");
  CHECK(j2["all_hold"] == true);
}

TEST_CASE("experiment reruns are byte-identical") {
  std::vector<std::string> base = {"experiment", "main-count", "--d",    "-1",
                                   "--alpha",    "sqrt2_sqrt3", "--qnorm", "5",
                                   "--delta",    "0.3",         "--cap",   "10000",
                                   "--seed",     "9"};
  std::string p1 = tmp_path("em1.json"), p2 = tmp_path("em2.json");
  auto a1 = base, a2 = base;
  a1.insert(a1.end(), {"--out", p1});
  a2.insert(a2.end(), {"--out", p2});
  REQUIRE(run(a1) == 0);
  REQUIRE(run(a2) == 0);
  std::string bytes = slurp(p1);
  CHECK(bytes == slurp(p2));

  json j = json::parse(bytes);
  CHECK(j["seed"] == 9);
  CHECK(j["params"]["x"] == 8208.0);
  CHECK(j["counts"]["prime_count"] == 1880);
  CHECK(j["counts"]["hit_count"] == 672);
  CHECK(j["ratios"]["deviation"].get<double>() == doctest::Approx(0.0070922).epsilon(1e-4));
  CHECK(j.find("runtime_seconds") == j.end());

  json la = run_json({"experiment", "landau", "--d", "-7", "--x", "100000"}, "la.json");
  CHECK(la["counts"]["prime_count"] == 9593);
  CHECK(la["ratios"]["deviation"].get<double>() == doctest::Approx(0.0038224).epsilon(1e-4));

  std::string sp = tmp_path("se.csv");
  REQUIRE(run({"experiment", "search", "--d", "-1", "--alpha", "sqrt2_sqrt3", "--xmax",
               "300", "--theta", "0.5", "--format", "csv", "--out", sp}) == 0);
  std::istringstream is(slurp(sp));
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "norm,n1,n2,dist,threshold");
  REQUIRE(std::getline(is, line));
  CHECK(line == "2,1,1,0.31783724519578227,0.7071067811865476");
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 28);
}

TEST_CASE("config file fills flags and the command line wins") {
  std::string cfg = tmp_path("cfg.txt");
  {
    std::ofstream out(cfg);
    out << "d=-3\n";
    out << "alpha=e_pi\n";
    out << "xmax=15\n";
    out << "format=csv\n";
    out << "# a comment line\n";
  }
  std::string p = tmp_path("cfg_out.csv");
  REQUIRE(run({"primes", "sieve", "--config", cfg, "--out", p}) == 0);
  std::istringstream is(slurp(p));
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "n1,n2,norm");
  REQUIRE(std::getline(is, line));
  CHECK(line == "1,1,3");  // d = -3 came from the file

  json j = run_json({"primes", "sieve", "--config", cfg, "--d", "-1", "--format", "json"},
                    "cfg_out.json");
  CHECK(j["field_d"] == -1);  // flag overrides file
  CHECK(j["xmax"] == 15);     // file still supplies the rest
  CHECK(j["count"] == 6);

  std::string bad = tmp_path("cfg_bad.txt");
  {
    std::ofstream out(bad);
    out << "no equals sign here\n";
  }
  CHECK(run({"primes", "sieve", "--config", bad, "--xmax", "10"}) == 3);
  CHECK(run({"primes", "sieve", "--config", tmp_path("does_not_exist.txt"), "--xmax",
             "10"}) == 3);
}

TEST_CASE("exit codes") {
  std::string sink = tmp_path("sink.json");
  CHECK(run({"field", "info", "--d", "-3", "--out", sink}) == 0);
  CHECK(run({"field", "info", "--d", "-5", "--out", sink}) == 3);
  CHECK(run({"primes", "sieve", "--out", sink}) == 3);  // missing --xmax
  CHECK(run({"bogus", "--out", sink}) == 3);
  CHECK(run({}) == 3);
  CHECK(run({"experiment", "main-count", "--qnorm", "5", "--delta", "0.9", "--cap", "10000",
             "--out", sink}) == 3);
  CHECK(run({"smooth", "theta", "--params", "theta=xyz", "--out", sink}) == 3);
  CHECK(run({"smooth", "theta", "--params", "bogus=3", "--out", sink}) == 3);
  CHECK(run({"dioph", "gintner", "--format", "csv", "--qmax", "10", "--out", sink}) == 3);
  CHECK(run({"experiment", "landau", "--x", "50", "--format", "yaml", "--out", sink}) == 3);
  CHECK(run({"experiment", "landau", "--x", "1", "--out", sink}) == 3);
}
