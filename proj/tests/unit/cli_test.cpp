#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entangle/cli.hpp"
#include "entangle/errors.hpp"
#include "entangle/states.hpp"

using namespace entangle;
using namespace entangle::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (l == line) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("0.5") == std::vector<double>{0.5});
  CHECK(parse_grid("0.1,0.3") == std::vector<double>{0.1, 0.3});
  const auto g = parse_grid("0:1:5");
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g[2] == doctest::Approx(0.5));
  CHECK(g.back() == 1.0);
  CHECK(parse_grid("0.2:0.8:1") == std::vector<double>{0.2});
  CHECK(parse_grid("0:1:0").empty());
  CHECK_THROWS_AS(parse_grid("1:0:3"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("0:1"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("abc"), InvalidArgument);
}

TEST_CASE("pair list and Gisin parameter parsing") {
  CHECK(parse_n_list("1,3") == std::vector<std::size_t>{1, 3});
  CHECK_THROWS_AS(parse_n_list("0"), InvalidArgument);
  CHECK_THROWS_AS(parse_n_list("6"), InvalidArgument);
  const auto g = parse_gisin("0.5,0.6,0.8");
  CHECK(g.x == 0.5);
  CHECK(g.a == Complex(0.6));
  CHECK_THROWS_AS(parse_gisin("0.5,0.6,0.6"), InvalidArgument);
  CHECK_THROWS_AS(parse_gisin("0.5,0.6"), InvalidArgument);
}

TEST_CASE("argument parsing") {
  const auto cfg = parse_args({"scan", "--n", "1,2", "--x", "0:1:3", "--seed", "4"});
  CHECK(cfg.command == Command::Scan);
  CHECK(cfg.strategy == Strategy::Optimize);
  CHECK(cfg.seed == 4);
  CHECK(cfg.x_grid.size() == 3);
  CHECK(parse_args({"ppt", "--werner", "0.3"}).strategy == Strategy::Xor);
  CHECK(parse_args({"chsh", "--werner", "0.3", "--format", "json"}).format == Format::Json);

  CHECK_THROWS_AS(parse_args({}), InvalidArgument);
  CHECK_THROWS_AS(parse_args({"ppt", "--bogus", "1"}), InvalidArgument);
  CHECK_THROWS_AS(parse_args({"ppt", "--werner", "1.5"}), InvalidArgument);
  CHECK_THROWS_AS(parse_args({"scan", "--n", "1"}), InvalidArgument);
  CHECK_THROWS_AS(parse_args({"scan", "--n", "1", "--x", "0.5", "--strategy", "best"}),
                  InvalidArgument);
  CHECK_THROWS_AS(parse_args({"ppt", "--werner", "0.5", "--format", "xml"}), InvalidArgument);
}

TEST_CASE("ppt command") {
  const auto r = invoke({"ppt", "--werner", "0.5"});
  CHECK(r.code == kExitOk);
  CHECK(has_line(r.out, "min_eigenvalue,-0.125"));
  CHECK(has_line(r.out, "verdict,inseparable"));

  const auto low = invoke({"ppt", "--werner", "0.25"});
  CHECK(has_line(low.out, "verdict,ppt"));

  const auto two = invoke({"ppt", "--werner", "0.5", "--gisin", "0.5,1,0"});
  CHECK(two.code == kExitInput);
  CHECK(two.err.find("exactly one") != std::string::npos);
}

TEST_CASE("scan command") {
  const auto r = invoke({"scan", "--n", "1", "--x", "0.5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "n,x,strategy,chsh_max,success_probability\n1,0.5000000000,xor,1.4142135624,1.0000000000\n");

  const auto empty = invoke({"scan", "--n", "2", "--x", "0:1:0"});
  CHECK(empty.code == kExitOk);
  CHECK(empty.out == "n,x,strategy,chsh_max,success_probability\n");

  const auto again = invoke({"scan", "--n", "2,1", "--x", "0.6,0.4", "--restarts", "2", "--seed", "3"});
  CHECK(again.out == invoke({"scan", "--n", "2,1", "--x", "0.6,0.4", "--restarts", "2", "--seed", "3"}).out);
}

TEST_CASE("collective command") {
  const auto r = invoke({"collective", "--werner", "0.5", "--n", "5", "--strategy", "xor"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("chsh_max,2.00087") != std::string::npos);
  CHECK(invoke({"collective", "--werner", "0.5", "--n", "2", "--strategy", "chad"}).code == kExitInput);
  CHECK(invoke({"collective", "--polarized", "0", "--n", "2"}).code == kExitOk);
}

TEST_CASE("JSON output of a state command re-reads with --input") {
  const auto path = std::filesystem::temp_directory_path() / "entangle_cli_state.json";
  const auto r = invoke({"ppt", "--gisin", "0.4,0.6,0.8", "--format", "json", "--out", path.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  const auto back = state_from_file(path);
  CHECK(max_abs_diff(back.rho(), gisin_state({0.4, 0.6, 0.8}).rho()) == 0.0);

  const auto again = invoke({"ppt", "--input", path.string()});
  CHECK(again.code == kExitOk);
  CHECK(again.out == invoke({"ppt", "--gisin", "0.4,0.6,0.8"}).out);
  std::filesystem::remove(path);
}

TEST_CASE("invalid input files exit with code 1") {
  const auto path = std::filesystem::temp_directory_path() / "entangle_cli_bad.json";
  std::ofstream(path) << R"({"dims":[2,2],"re":[[0.225,0,0,0],[0,0.225,0,0],[0,0,0.225,0],[0,0,0,0.225]],)"
                      << R"("im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})";
  const auto r = invoke({"ppt", "--input", path.string()});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("trace") != std::string::npos);
  std::filesystem::remove(path);
  CHECK(invoke({"ppt", "--input", path.string()}).code == kExitInput);
}

TEST_CASE("examples table") {
  const auto r = invoke({"examples"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("claim,expected,computed,status\n", 0) == 0);
  CHECK(r.out.find(",FAIL") == std::string::npos);
  CHECK(r.out.find("gisin |ab|=0.5 ppt threshold") != std::string::npos);
}

TEST_CASE("format_number") {
  CHECK(format_number(1.41421356237) == "1.4142135624");
  CHECK(format_number(0.0) == "0.0000000000");
}
