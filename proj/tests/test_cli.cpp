#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bellbound/state_io.hpp"
#include "bellbound/states.hpp"
#include "helpers.hpp"
#include "proc_util.hpp"

using namespace bellbound;
using testutil::kPi;
using testutil::run_cmd;

namespace {

const std::string kCli = BELLBOUND_CLI_PATH;

std::filesystem::path scratch() {
  static const std::filesystem::path dir = testutil::make_temp_dir("bellbound-cli");
  return dir;
}

std::string write_state(const std::string& name, const nlohmann::json& j) {
  const auto path = scratch() / name;
  save_state_file(path.string(), j);
  return path.string();
}

// field,value CSV -> map
std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma != std::string::npos) kv[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return kv;
}

std::vector<std::vector<double>> parse_rows(const std::string& text, std::string* header = nullptr) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("state-info on a Bell state") {
  const std::string path =
      write_state("bell.json", state_to_json(PureState(testutil::bell_phi_plus())));
  const auto r = run_cmd(kCli + " state-info --input " + path, scratch());
  REQUIRE(r.exit_code == 0);
  const auto kv = parse_kv(r.out);
  CHECK(kv.at("kind") == "pure");
  CHECK(std::stod(kv.at("concurrence")) == Catch::Approx(1.0).margin(1e-6));
  CHECK(std::stod(kv.at("entropy")) == Catch::Approx(1.0).margin(1e-6));
  CHECK(std::stod(kv.at("horodecki_max")) == Catch::Approx(2.0 * kSqrt2).margin(1e-5));
  CHECK(std::stod(kv.at("theta")) == Catch::Approx(kPi / 2.0).margin(1e-6));
}

TEST_CASE("state-info on lambda_state(2.7)") {
  const std::string path = write_state("lam27.json", state_to_json(lambda_state(2.7)));
  const auto r = run_cmd(kCli + " state-info --input " + path, scratch());
  REQUIRE(r.exit_code == 0);
  const auto kv = parse_kv(r.out);
  CHECK(kv.at("kind") == "density");
  CHECK(std::stod(kv.at("concurrence")) == Catch::Approx(0.6).margin(1e-6));
  CHECK(kv.find("theta") == kv.end());
}

TEST_CASE("state-info json format") {
  const std::string path =
      write_state("bell2.json", state_to_json(PureState(testutil::bell_phi_plus())));
  const auto r = run_cmd(kCli + " state-info --input " + path + " --format json", scratch());
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("kind") == "pure");
  CHECK(j.at("concurrence").get<double>() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("input errors exit with code 2 and a named failure") {
  const auto bad_path = scratch() / "bad.json";
  std::ofstream(bad_path) << "{ this is not json";
  auto r = run_cmd(kCli + " state-info --input " + bad_path.string(), scratch());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.err.find("JSON") != std::string::npos);

  const auto trace_path = scratch() / "badtrace.json";
  std::ofstream(trace_path) << R"({"kind": "density", "data": [
      [2,0],[0,0],[0,0],[0,0],
      [0,0],[0,0],[0,0],[0,0],
      [0,0],[0,0],[0,0],[0,0],
      [0,0],[0,0],[0,0],[0,0]]})";
  r = run_cmd(kCli + " state-info --input " + trace_path.string(), scratch());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("trace") != std::string::npos);

  r = run_cmd(kCli + " state-info --input " + (scratch() / "missing.json").string(), scratch());
  CHECK(r.exit_code == 2);

  r = run_cmd(kCli + " state-info --input " + bad_path.string() + " --format yaml", scratch());
  CHECK(r.exit_code == 2);

  r = run_cmd(kCli + " no-such-command", scratch());
  CHECK(r.exit_code == 2);

  r = run_cmd(kCli + " sweep-lambda --grid-step -1", scratch());
  CHECK(r.exit_code == 2);
}

TEST_CASE("bound verdicts") {
  const std::string max_path =
      write_state("max.json", state_to_json(schmidt_to_pure(SchmidtForm(kPi / 2.0, 0.0))));
  auto r = run_cmd(kCli + " bound --input " + max_path, scratch());
  REQUIRE(r.exit_code == 0);
  auto kv = parse_kv(r.out);
  CHECK(kv.at("verdict") == "maximal");
  CHECK(std::stod(kv.at("value")) == Catch::Approx(2.82843).margin(1e-4));

  const std::string low_path =
      write_state("low.json", state_to_json(schmidt_to_pure(SchmidtForm(0.2, 0.0))));
  r = run_cmd(kCli + " bound --input " + low_path, scratch());
  REQUIRE(r.exit_code == 0);
  CHECK(parse_kv(r.out).at("verdict") == "no-violation");

  const std::string mixed_path =
      write_state("mixed.json", state_to_json(DensityMatrix(0.25 * CMatrix4::identity())));
  r = run_cmd(kCli + " bound --input " + mixed_path + " --starts 8", scratch());
  REQUIRE(r.exit_code == 0);
  kv = parse_kv(r.out);
  CHECK(kv.at("verdict") == "no-violation");
  CHECK(std::stod(kv.at("value")) <= 1e-6);

  const std::string viol_path = write_state("lam35.json", state_to_json(lambda_state(3.5)));
  r = run_cmd(kCli + " bound --input " + viol_path + " --starts 16", scratch());
  REQUIRE(r.exit_code == 0);
  kv = parse_kv(r.out);
  CHECK(kv.at("verdict") == "violation");
  CHECK(std::stod(kv.at("value")) == Catch::Approx(2.19989).margin(1e-4));
}

TEST_CASE("bound json includes the parameters") {
  const std::string path =
      write_state("forjson.json", state_to_json(schmidt_to_pure(SchmidtForm(1.0, 0.7))));
  const auto r = run_cmd(kCli + " bound --input " + path + " --format json", scratch());
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("verdict") == "violation");
  CHECK(j.at("best_params").at("a").contains("beta"));
  CHECK(j.at("evaluations").get<long>() == 0);  // pure input, analytic route

  const auto forced = run_cmd(
      kCli + " bound --input " + path + " --format json --numeric --starts 8", scratch());
  REQUIRE(forced.exit_code == 0);
  CHECK(nlohmann::json::parse(forced.out).at("evaluations").get<long>() > 0);
}

TEST_CASE("sweep-theta output contract") {
  const std::string cmd = kCli + " sweep-theta --grid-step 0.62831853071795864769 --chi 0,2 "
                                 "--starts 16 --seed 3";
  const auto r = run_cmd(cmd, scratch());
  REQUIRE(r.exit_code == 0);

  std::string header;
  const auto rows = parse_rows(r.out, &header);
  CHECK(header == "theta,bound_analytic,bound_numeric,entropy,classical_bound");
  REQUIRE(rows.size() == 12);  // 6 theta points x 2 chi values

  CHECK(rows[0][0] == 0.0);
  CHECK(rows[0][1] == Catch::Approx(1.41421).margin(1e-5));
  CHECK(rows[0][3] == Catch::Approx(0.0).margin(1e-9));
  CHECK(rows[0][4] == 2.0);
  for (const auto& row : rows) {
    CHECK(std::abs(row[2] - row[1]) <= 2e-4);  // numeric vs analytic at CSV precision
  }
  // chi pairs agree
  for (std::size_t t = 0; t < rows.size(); t += 2) {
    CHECK(std::abs(rows[t][2] - rows[t + 1][2]) <= 2e-4);
  }

  const auto again = run_cmd(cmd, scratch());
  CHECK(again.out == r.out);  // byte-identical rerun
}

TEST_CASE("sweep-lambda output contract") {
  const std::string cmd = kCli + " sweep-lambda --grid-step 0.25 --starts 16 --seed 7";
  const auto r = run_cmd(cmd, scratch());
  REQUIRE(r.exit_code == 0);

  std::string header;
  const auto rows = parse_rows(r.out, &header);
  CHECK(header == "lambda,bound,concurrence,horodecki_max,classical_bound");
  REQUIRE(rows.size() == 17);
  CHECK(rows.back()[0] == 4.0);
  CHECK(rows.back()[2] == Catch::Approx(8.0 / 9.0).margin(1e-5));
  CHECK(rows.back()[1] == Catch::Approx(16.0 * kSqrt2 / 9.0).margin(1e-4));

  // summary goes to stderr in CSV mode
  CHECK(r.err.find("onset,2.86") != std::string::npos);
  CHECK(r.err.find("turning_point,3.5") != std::string::npos);

  const auto again = run_cmd(cmd, scratch());
  CHECK(again.out == r.out);
  CHECK(again.err == r.err);

  // CSV round trip: re-emitting the parsed rows reproduces the bytes
  std::ostringstream rebuilt;
  rebuilt << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.6g", row[c]);
      rebuilt << (c ? "," : "") << buf;
    }
    rebuilt << "\n";
  }
  CHECK(rebuilt.str() == r.out);
}

TEST_CASE("sweep-lambda json summary") {
  const auto r = run_cmd(
      kCli + " sweep-lambda --grid-step 0.5 --starts 12 --seed 1 --format json", scratch());
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.at("rows").size() == 9);
  CHECK(j.at("summary").at("onset").get<double>() == Catch::Approx(2.864).margin(5e-3));
  CHECK(j.at("summary").at("turning_point").get<double>() == Catch::Approx(3.5).margin(0.06));
}

TEST_CASE("verify subcommand passes on a small budget") {
  const auto r = run_cmd(kCli + " verify --samples 60 --starts 8 --seed 1", scratch());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[PASS]") != std::string::npos);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
  CHECK(r.out.find("suites passed") != std::string::npos);
  CHECK(r.out.find("spectral-identity 60/60") != std::string::npos);
}
