#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mqmi/cli.hpp"
#include "mqmi/json_io.hpp"
#include "mqmi/qmatrix.hpp"
#include "mqmi/states.hpp"

using namespace mqmi;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "json"});
  const auto r = run(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return Json::parse(r.out);
}

std::string temp_path(const std::string& name) {
  const char* dir = std::getenv("MQMI_TEST_TMP");
  return (dir ? std::string(dir) + "/" : std::string()) + name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("compute") {
    auto j = run_json({"compute", "--state", "ggz:n=3,p=0.5", "--measure", "M", "--k", "1"});
    CHECK(j["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(j["measure"] == "M_1^(3)");
    j = run_json({"compute", "--state", "cluster4", "--measure", "C"});
    CHECK(j["value"].get<double>() == doctest::Approx(-2.0).epsilon(1e-12));
    j = run_json({"compute", "--state", "ggz:n=3", "--measure", "T"});
    CHECK(j["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
    j = run_json({"compute", "--state", "ggz:n=3", "--measure", "M", "--k", "1", "--blocks", "1;2,3"});
    CHECK(j["partition"] == "{1}:{2,3}");
    CHECK(j["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    j = run_json({"compute", "--state", "ggz:n=3", "--measure", "combined", "--lambda", "0.5,0.5,0"});
    CHECK(j["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));

    const auto text = run({"compute", "--state", "ggz:n=3", "--measure", "M", "--k", "1"});
    CHECK(text.code == 0);
    CHECK(text.out.rfind("M_1^(3) = 3\n", 0) == 0);
    const auto csv = run({"--format", "csv", "compute", "--state", "ggz:n=3", "--measure", "M", "--k", "3"});
    CHECK(csv.out == "measure,partition,value\nM_3^(3),{1}:{2}:{3},0\n");
  }

  TEST_CASE("gcmi from a dense state file") {
    const std::string path = temp_path("cli_ghz3.json");
    {
      std::ofstream f(path);
      f << state_to_json(ggz_state(3, 0.5)).dump();
    }
    const auto j = run_json({"compute", "--state", "dense@" + path, "--measure", "gcmi", "--blocks", "1;2", "--cond", "3"});
    CHECK(j["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["cond"] == "{3}");
    std::remove(path.c_str());
  }

  TEST_CASE("emitted states round-trip") {
    const auto j = run_json({"compute", "--state", "random_mixed:dims=2x3,rank=3,seed=4", "--emit-state"});
    const std::string path = temp_path("cli_emit.json");
    {
      std::ofstream f(path);
      f << j["state"].dump();
    }
    const auto back = run_json({"compute", "--state", "dense@" + path});
    CHECK(std::abs(back["value"].get<double>() - j["value"].get<double>()) < 1e-12);
    std::remove(path.c_str());
  }

  TEST_CASE("table") {
    const auto r = run({"table", "--builtin-table1"});
    REQUIRE(r.code == 0);
    int rows = 0;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);) rows += line.rfind("| ", 0) == 0 ? 1 : 0;
    CHECK(rows == 13);  // header plus twelve states
    CHECK(r.out.find("| gGHZ_3 (p=0.5) | 3 | 3 | 0 | \xC3\x97 | 0 |") != std::string::npos);

    const auto j = run_json({"table", "--state", "cluster4"});
    REQUIRE(j.size() == 1);
    const auto csv = run({"--format", "csv", "table", "--state", "ggz:n=2"});
    CHECK(csv.out.find("state,M_1,M_2,M_3,M_4,C\n") == 0);
    CHECK(run({"table"}).code == cli::kParseFailure);
  }

  TEST_CASE("regions") {
    const auto j = run_json({"regions", "--state", "ggz:n=3"});
    CHECK(j["T_3"].get<double>() == doctest::Approx(3.0));
    CHECK(j["S_3"].get<double>() == doctest::Approx(3.0));
    CHECK(j["abc"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(run({"regions", "--state", "ggz:n=4"}).code == cli::kDimensionFailure);
    CHECK(run({"regions", "--state", "ggz:n=4", "--blocks", "1;2;3,4"}).code == 0);
  }

  TEST_CASE("deviate") {
    const auto j = run_json({"deviate", "--state", "ggz:n=2", "--channel", "depolarize:party=1,p=1", "--measure", "T"});
    CHECK(j["deviation"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["after"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
    const auto id = run_json({"deviate", "--state", "ggz:n=3", "--channel", "identity:party=2"});
    CHECK(std::abs(id["deviation"].get<double>()) < 1e-12);
  }

  TEST_CASE("verify and scan") {
    auto r = run({"verify", "--n", "3", "--samples", "5"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("0 failures") != std::string::npos);
    r = run({"scan", "--n", "4", "--samples", "5", "--property", "broadcast_registers_k1"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("finding") != std::string::npos);
    r = run({"verify", "--list"});
    CHECK(r.code == 0);
    CHECK(r.out.find("subadditivity\n") != std::string::npos);
    const auto a = run({"--seed", "5", "--format", "json", "verify", "--n", "3", "--samples", "4", "--threads", "1"});
    const auto b = run({"--seed", "5", "--format", "json", "verify", "--n", "3", "--samples", "4", "--threads", "2"});
    CHECK(a.out == b.out);
    CHECK(run({"verify", "--property", "nope"}).code == cli::kParseFailure);
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == cli::kParseFailure);
    CHECK(run({"frobnicate"}).code == cli::kParseFailure);
    CHECK(run({"compute"}).code == cli::kParseFailure);
    CHECK(run({"compute", "--state", "nope:n=3"}).code == cli::kParseFailure);
    CHECK(run({"--format", "xml", "compute", "--state", "ggz:n=3"}).code == cli::kParseFailure);
    CHECK(run({"compute", "--state", "ggz:n=3", "--blocks", "1;4"}).code == cli::kDimensionFailure);
    CHECK(run({"compute", "--state", "ggz:n=3", "--measure", "M", "--k", "5"}).code == cli::kDimensionFailure);
    CHECK(run({"compute", "--state", "ggz:n=1"}).code == cli::kDimensionFailure);

    const std::string path = temp_path("cli_bad_state.json");
    {
      std::ofstream f(path);
      ComplexMatrix m = ComplexMatrix::Identity(2, 2);  // trace 2
      f << Json{{"dims", {2}}, {"matrix", matrix_to_json(m)}}.dump();
    }
    const auto bad = run({"compute", "--state", "dense@" + path});
    CHECK(bad.code == cli::kNumericalFailure);
    CHECK_FALSE(bad.err.empty());
    std::remove(path.c_str());

    CHECK(run({"deviate", "--state", "ggz:n=2", "--channel", "teleport:party=1"}).code == cli::kParseFailure);
    CHECK(run({"--help"}).code == cli::kOk);
  }

  TEST_CASE("default tolerance from the environment") {
    ::setenv("MQMI_DEFAULT_TOL", "1e-6", 1);
    CHECK(run({"compute", "--state", "ggz:n=3"}).code == 0);
    ::setenv("MQMI_DEFAULT_TOL", "tiny", 1);
    CHECK(run({"compute", "--state", "ggz:n=3"}).code == cli::kParseFailure);
    ::setenv("MQMI_DEFAULT_TOL", "-1", 1);
    CHECK(run({"compute", "--state", "ggz:n=3"}).code == cli::kParseFailure);
    ::unsetenv("MQMI_DEFAULT_TOL");
    CHECK(run({"compute", "--state", "ggz:n=3"}).code == 0);
  }

  TEST_CASE("number formatting") {
    CHECK(cli::format_number(-0.0, 1e-9) == "0");
    CHECK(cli::format_number(-3e-12, 1e-9) == "0");
    CHECK(cli::format_number(3e-12, 0.0) == "3e-12");
    CHECK(cli::format_number(2.754887502163469, 1e-9) == "2.75489");
    CHECK(cli::format_number(-2.000000000000008, 1e-9) == "-2");
  }
}
