#include <random>
#include <sstream>

#include "doctest.h"

#include "cpm/cli.hpp"
#include "cpm/model_io.hpp"

using namespace cpm;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result cpm_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string fixture(const char* name) { return std::string(CPM_TEST_DATA) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

/// "[a,b]" printed by the tool, read back by hand.
std::pair<Rational, Rational> ends(const std::string& text) {
  auto comma = text.find(',');
  return {Rational::parse(text.substr(1, comma - 1)), Rational::parse(text.substr(comma + 1, text.size() - comma - 2))};
}

std::vector<std::vector<std::string>> templates() {
  return {
      {"encode", "pair", "1", "2"},
      {"encode", "tuple", "1", "2", "3"},
      {"encode", "zeta", "4"},
      {"encode", "rho", "1/3"},
      {"encode", "interval", "[1,2]"},
      {"encode", "bits", "1", "0", "1"},
      {"decode", "pair", "7"},
      {"decode", "tuple", "100", "3"},
      {"decode", "beta", "13", "6"},
      {"model", "list"},
      {"model", "states", "--model", "calibrated-orbit", "--where", "tau=[0.29,0.41]", "--count"},
      {"model", "member", "--model", "discrete-orbit", "--state", "5"},
      {"prob", "--model", "radioactive", "--given", "tau=2", "--event", "status@2=1"},
      {"oracle", "--point", "9/4", "--count", "3"},
      {"predict", "--model", "orbit", "--time", "9/4", "--digits", "2"},
      {"algebra", "equiv", fixture("identity_pair.json"), fixture("halved_triple.json")},
  };
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("documented examples") {
    CHECK(cpm_run({"encode", "pair", "1", "2"}).out == "7\n");
    CHECK(cpm_run({"prob", "--model", "radioactive", "--given", "tau=2", "--event", "status@2=1"}).out == "3/4\n");
    auto r = cpm_run({"model", "states", "--model", "calibrated-orbit", "--where", "tau=[0.29,0.41]", "--count"});
    CHECK(r.status == cli::ok);
    CHECK(r.out == "40\n");
    auto eq = cpm_run({"algebra", "equiv", fixture("identity_pair.json"), fixture("halved_triple.json")});
    CHECK(eq.out == "equivalent=true isomorphic=false\n");
    CHECK(cpm_run({"decode", "beta", "13", "6"}).out == "0 0 1 1 0 1\n");
  }

  TEST_CASE("output is byte-identical across runs") {
    for (const auto& args : templates()) {
      auto a = cpm_run(args), b = cpm_run(args);
      CHECK(a.status == cli::ok);
      CHECK(a.out == b.out);
      CHECK(a.err == b.err);
    }
  }

  TEST_CASE("predict emits nested intervals around 90") {
    for (int n = 1; n <= 6; ++n) {
      auto r = cpm_run({"predict", "--model", "continuous-orbit", "--time", "9/4", "--digits", std::to_string(n)});
      REQUIRE(r.status == cli::ok);
      auto ls = lines(r.out);
      REQUIRE(ls.size() == static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < ls.size(); ++i) {
        auto [a, b] = ends(ls[i]);
        CHECK(a < Rational(90));
        CHECK(Rational(90) < b);
        if (i > 0) {
          auto [pa, pb] = ends(ls[i - 1]);
          CHECK(pa <= a);
          CHECK(b <= pb);
        }
      }
    }
    auto wrapped = cpm_run({"predict", "--model", "orbit", "--time", "3", "--digits", "2"});
    CHECK(wrapped.out == "[356.4,39.6]\n[359.64,3.96]\n");
  }

  TEST_CASE("json records") {
    CHECK(cpm_run({"--json", "encode", "pair", "1", "2"}).out == "{\"code\":\"7\"}\n");
    CHECK(cpm_run({"prob", "--json", "--model", "radioactive", "--given", "tau=2", "--event", "status@2=1"}).out ==
          "{\"probability\":\"3/4\"}\n");
    auto eq = cpm_run({"--json", "algebra", "equiv", fixture("identity_pair.json"), fixture("halved_triple.json")});
    CHECK(eq.out == "{\"equivalent\":true,\"isomorphic\":false}\n");
    auto o = cpm_run({"--json", "oracle", "--point", "9/4", "--count", "1"});
    CHECK(o.out.starts_with("{\"index\":0,\"interval\":\"[2.19,2.31]\",\"code\":"));
  }

  TEST_CASE("value syntax") {
    CHECK(cpm_run({"encode", "interval", "[0.29,0.41]"}).out == cpm_run({"encode", "interval", "29/100", "41/100"}).out);
    auto z = cpm_run({"model", "states", "--model", "meters", "--where", "delta=z:5", "--count"});
    CHECK(z.status == cli::ok);
    CHECK(z.out == "2\n");
    std::string code = cpm_run({"encode", "rho", "-68.4"}).out;
    code.pop_back();
    CHECK(cpm_run({"decode", "rho", code}).out == "-68.4\n");
  }

  TEST_CASE("exit statuses") {
    CHECK(cpm_run({}).status == cli::usage_error);
    CHECK(cpm_run({"--help"}).status == cli::ok);
    auto bad_flag = cpm_run({"oracle", "--point", "1", "--bogus"});
    CHECK(bad_flag.status == cli::usage_error);
    CHECK(bad_flag.err.find("--bogus") != std::string::npos);
    auto bad_value = cpm_run({"oracle", "--point", "1/0"});
    CHECK(bad_value.status == cli::usage_error);
    CHECK(bad_value.err.find("--point") != std::string::npos);
    CHECK(cpm_run({"model", "member", "--model", "nowhere", "--state", "1"}).status == cli::domain_error);
    CHECK(cpm_run({"model", "observe", "--model", "discrete-orbit", "--state", "5"}).status == cli::domain_error);
    CHECK(cpm_run({"model", "states", "--model", "continuous-orbit", "--where", "alpha=[68.4,111.6]"}).status ==
          cli::inconclusive);
    CHECK(cpm_run({"--fuel", "1", "predict", "--model", "orbit", "--time", "9/4", "--digits", "5"}).status ==
          cli::inconclusive);
  }

  TEST_CASE("model files") {
    CHECK(load_finite_model(fixture("identity_pair.json")).size() == 2u);
    CHECK_THROWS_AS(load_finite_model(fixture("missing_state.json")), ValidationError);
    auto r = cpm_run({"algebra", "reduced", fixture("missing_state.json")});
    CHECK(r.status == cli::domain_error);
    CHECK(r.err.find("state 2") != std::string::npos);
    CHECK(cpm_run({"algebra", "reduced", fixture("halved_triple.json")}).out == "reduced=false\n");
    CHECK(cpm_run({"algebra", "epi", fixture("halved_triple.json"), fixture("identity_pair.json")}).out ==
          "epimorphic=true\n");
  }

  TEST_CASE("fuzzed malformed arguments exit with 1 or 2") {
    const std::vector<std::string> bad{"",      "x",      "1/0",   "[",    "[1,]", "z:",  "q:",     "1.2.3",
                                       "--nope", "[a,b]", "=",     "-",    "q:x",  "z:y", "tau",    "1e5",
                                       "[1,2",  "@",      "-x",    "--json=3", "status@=1", "0x10", "nan", "+-1"};
    auto ts = templates();
    std::mt19937_64 rng(2718);
    int seen[4] = {0, 0, 0, 0};
    for (int trial = 0; trial < 1000; ++trial) {
      auto args = ts[rng() % ts.size()];
      const std::string& token = bad[rng() % bad.size()];
      std::size_t at = rng() % (args.size() + 1);
      if (rng() % 2 == 0 && at < args.size())
        args[at] = token;
      else
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), token);
      int status = cpm_run(args).status;
      std::string shown;
      for (const auto& a : args) shown += "'" + a + "' ";
      INFO(shown);
      CHECK((status == cli::domain_error || status == cli::usage_error));
      if (status >= 0 && status < 4) ++seen[status];
    }
    CHECK(seen[1] + seen[2] == 1000);
  }
}
