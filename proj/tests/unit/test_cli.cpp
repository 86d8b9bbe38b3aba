#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twinbeam/cli.hpp"
#include "twinbeam/output.hpp"

using namespace twinbeam;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "twinbeam");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "twinbeam_cli_test" / name;
  fs::remove_all(p);
  return p;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

nlohmann::json error_record(const Run& r) { return nlohmann::json::parse(r.err).at("error"); }

}  // namespace

TEST_CASE("config errors exit 1 with a JSON record naming the field") {
  const Run r = run({"--out", scratch("bad").string(), "--set", "pump.waist_m=-1", "joint"});
  CHECK(r.code == 1);
  const auto e = error_record(r);
  CHECK(e.at("kind") == "config");
  CHECK(e.at("path") == "pump.waist_m");
  CHECK(e.at("exit_code") == 1);

  const Run unknown = run({"--out", scratch("bad").string(), "--set", "grid.spacing=1", "joint"});
  CHECK(unknown.code == 1);
  CHECK(error_record(unknown).at("path") == "grid.spacing");

  CHECK(run({"no-such-command"}).code == 1);
  CHECK(run({}).code == 1);
}

TEST_CASE("schema prints the embedded document") {
  const Run r = run({"schema"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("title") == "twinbeam run configuration");
}

TEST_CASE("curve covers every plane for every pump variant") {
  const fs::path dir = scratch("curve");
  const Run r = run({"--out", dir.string(), "--set", "grid.n=65", "--set", "analysis.check_refinement=false", "curve"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "coherence_curve.csv");
  CHECK(count_lines(csv) == 1 + 6 * 2);
  CHECK(fs::exists(dir / "coherence_curve.csv.json"));
  const auto sidecar = nlohmann::json::parse(slurp(dir / "coherence_curve.csv.json"));
  CHECK(sidecar.at("sha256") == sha256_hex(csv));
  CHECK(sidecar.at("command") == "curve");
  CHECK(sidecar.at("config").at("grid").at("n") == 65);
}

TEST_CASE("maps write csv and pgm with the expected headers") {
  const fs::path dir = scratch("maps");
  const Run r = run({"--out", dir.string(), "--format", "both", "--set", "grid.n=33", "--set", "planes=[\"0.083 zR\"]",
                     "conditional"});
  REQUIRE(r.code == 0);
  const std::string stem = "conditional_p0_l0_z0.083zR";
  const std::string pgm = slurp(dir / (stem + ".pgm"));
  const std::string header = "P5\n33 33\n65535\n";
  CHECK(pgm.substr(0, header.size()) == header);
  CHECK(pgm.size() == header.size() + 2 * 33 * 33);
  const std::string csv = slurp(dir / (stem + ".csv"));
  CHECK(csv.rfind("x_c_m,y_c_m,value\r\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + 33 * 33);
  CHECK(r.out.find("wrote ") != std::string::npos);
}

TEST_CASE("reruns are byte-identical and independent of the thread count") {
  const std::vector<std::string> common = {"--set", "grid.n=65", "--set", "planes=[\"0.0008 zR\",\"0.5 zR\"]",
                                           "--set", "pump.oam=1"};
  for (const std::string cmd : {"joint", "profile", "coherence"}) {
    CAPTURE(cmd);
    const fs::path dirs[3] = {scratch("a"), scratch("b"), scratch("c")};
    const char* threads[3] = {"1", "4", "1"};
    for (int i = 0; i < 3; ++i) {
      std::vector<std::string> v = {"--out", dirs[i].string(), "--threads", threads[i]};
      v.insert(v.end(), common.begin(), common.end());
      v.push_back(cmd);
      REQUIRE(run(v).code == 0);
    }
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const std::string name = entry.path().filename().string();
      const std::string ref = slurp(entry.path());
      if (entry.path().extension() == ".json") {
        // sidecars record the output directory and thread count; the rest must agree
        auto strip = [](std::string text) {
          auto j = nlohmann::json::parse(text);
          j["config"]["output"].erase("dir");
          j["config"].erase("threads");
          return j;
        };
        CHECK(strip(ref) == strip(slurp(dirs[1] / name)));
        CHECK(strip(ref) == strip(slurp(dirs[2] / name)));
        continue;
      }
      CHECK(ref == slurp(dirs[1] / name));
      CHECK(ref == slurp(dirs[2] / name));
      ++compared;
    }
    CHECK(compared > 0);
  }
}

TEST_CASE("clipping sweep writes one row per fraction, geometry and plane") {
  const fs::path dir = scratch("clip");
  const Run r = run({"--out", dir.string(), "--set", "clipping.fractions=[0,0.5]", "clipping"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "clipping.csv");
  CHECK(csv.rfind("fraction,geometry,z_m,z_over_zr,oam,cut_probe_m,cut_conjugate_m,eta,noise_snl\r\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + 2 * 2 * 2);

  const Run exact = run({"--out", dir.string(), "--set", "sinc.mode=exact", "clipping"});
  CHECK(exact.code == 1);
  CHECK(error_record(exact).at("path") == "sinc.mode");
}

TEST_CASE("numerical failures exit 2") {
  // exact sinc at z = L/2, where one of the tail chirps has no phase
  const Run r = run({"--out", scratch("num").string(), "--set", "grid.n=9", "--set", "sinc.mode=exact", "--set",
                     "planes=[\"6 mm\"]", "conditional"});
  CHECK(r.code == 2);
  CHECK(error_record(r).at("kind") == "numerical");
}

TEST_CASE("degenerate maps exit 3") {
  // probe and conjugate half a metre apart: every pixel underflows
  const Run r = run({"--out", scratch("deg").string(), "--set", "grid.n=9", "--set", "analysis.slice_x_m=[0.5,-0.5]",
                     "--set", "planes=[\"0.0008 zR\"]", "joint"});
  CHECK(r.code == 3);
  CHECK(error_record(r).at("kind") == "degenerate");
}
