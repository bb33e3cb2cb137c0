#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("corex_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(COREX_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("generate writes the instance files") {
  const auto out = scratch() / "gen";
  REQUIRE(run("generate --sizes balanced --graphon 1 --ratio 3 --seed 4 --out-dir " + out.string()) == 0);
  for (const char* f : {"edges.tsv", "truth.csv", "meta.json", "run.json"}) CHECK(fs::exists(out / f));
  const auto truth = slurp(out / "truth.csv");
  std::size_t core_rows = 0;
  std::istringstream in(truth);
  std::string line;
  while (std::getline(in, line)) core_rows += line.size() > 2 && line.substr(line.size() - 2) == ",1" ? 1 : 0;
  CHECK(core_rows == 1000);
  const auto run_json = nlohmann::json::parse(slurp(out / "run.json"));
  CHECK(run_json["subcommand"] == "generate");
  CHECK(run_json["parameters"]["degree_ratio"] == 3.0);
}

TEST_CASE("generate with an empty periphery") {
  const auto out = scratch() / "pure";
  REQUIRE(run("generate --n-core 200 --n-periphery 0 --density 0.1 --out-dir " + out.string()) == 0);
  CHECK(count_lines(out / "truth.csv") == 201);
  CHECK(slurp(out / "truth.csv").find(",0\n") == std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("") == 2);
  CHECK(run("generate --bogus 1 --out-dir " + (scratch() / "x").string()) == 2);
  CHECK(run("identify --input " + (scratch() / "missing.tsv").string() + " --out-dir " + (scratch() / "y").string()) == 3);
  CHECK(run("generate --ratio 1000 --density 0.5 --out-dir " + (scratch() / "z").string()) == 4);
  {
    std::ofstream e(scratch() / "empty.tsv");
    e << "n 10\n";
  }
  CHECK(run("identify --input " + (scratch() / "empty.tsv").string() + " --rank 2 --out-dir " +
            (scratch() / "e").string()) == 3);
  CHECK(run("identify --input " + (scratch() / "empty.tsv").string() + " --select topk:x --out-dir " +
            (scratch() / "e2").string()) == 2);
}

TEST_CASE("identify writes scores and partition") {
  const auto gen = scratch() / "gen_small";
  REQUIRE(run("generate --n-core 150 --n-periphery 150 --density 0.1 --ratio 3 --out-dir " + gen.string()) == 0);
  const auto out = scratch() / "id";
  REQUIRE(run("identify --input " + (gen / "edges.tsv").string() +
              " --model er --rank 6 --select topk:150 --out-dir " + out.string()) == 0);
  CHECK(slurp(out / "scores.csv").rfind("node_id,score\n", 0) == 0);
  CHECK(slurp(out / "partition.csv").rfind("node_id,is_core,score\n", 0) == 0);
  CHECK(count_lines(out / "partition.csv") == 301);
  const auto rep = nlohmann::json::parse(slurp(out / "identify.json"));
  CHECK(rep["n_core"] == 150);
  CHECK(rep["rank"] == 6);

  const auto autod = scratch() / "id_auto";
  REQUIRE(run("identify --input " + (gen / "edges.tsv").string() + " --rank auto --select threshold --out-dir " +
              autod.string()) == 0);
  const auto arep = nlohmann::json::parse(slurp(autod / "identify.json"));
  CHECK(arep["rank_selection"]["chosen_r"] == arep["rank"]);
}

TEST_CASE("identify lists zero-degree nodes under the configuration model") {
  {
    std::ofstream e(scratch() / "iso.tsv");
    e << "n 8\n0 1\n0 2\n1 2\n2 3\n3 4\n4 5\n3 5\n";
  }
  const auto out = scratch() / "iso";
  REQUIRE(run("identify --input " + (scratch() / "iso.tsv").string() +
              " --model config --rank 2 --select topk:3 --out-dir " + out.string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(out / "identify.json"));
  CHECK(rep["excluded"] == nlohmann::json::array({6, 7}));
}

TEST_CASE("diagnose from metadata and from a graph") {
  const auto gen = scratch() / "gen_diag";
  REQUIRE(run("generate --n-core 100 --n-periphery 100 --density 0.1 --out-dir " + gen.string()) == 0);
  const auto out = scratch() / "diag";
  REQUIRE(run("diagnose --truth-p " + (gen / "meta.json").string() + " --rank 6 --sweep 0,100,200 --out-dir " +
              out.string()) == 0);
  const auto d = nlohmann::json::parse(slurp(out / "diagnostics.json"));
  CHECK(d["h_n"].is_number());
  CHECK(d["eigenvalues"].size() == 200);
  CHECK(count_lines(out / "eigengap.csv") == 4);

  const auto emp = scratch() / "diag_graph";
  REQUIRE(run("diagnose --input " + (gen / "edges.tsv").string() + " --rank 3 --out-dir " + emp.string()) == 0);
  const auto e = nlohmann::json::parse(slurp(emp / "diagnostics.json"));
  CHECK(e["h_n"].is_null());
  CHECK(e["eigenvalues"].size() == 4);
  CHECK(run("diagnose --input " + (gen / "edges.tsv").string() + " --require-h --out-dir " +
            (scratch() / "diag_h").string()) == 3);
}

TEST_CASE("diagnose on a malformed path leaves no files") {
  const auto out = scratch() / "diag_bad";
  CHECK(run("diagnose --truth-p " + (scratch() / "nope" / "meta.json").string() + " --out-dir " + out.string()) == 3);
  CHECK_FALSE(fs::exists(out));
  {
    std::ofstream bad(scratch() / "bad.tsv");
    bad << "0 1\n1 q\n";
  }
  const auto out2 = scratch() / "diag_bad2";
  CHECK(run("diagnose --input " + (scratch() / "bad.tsv").string() + " --out-dir " + out2.string()) == 3);
  CHECK_FALSE(fs::exists(out2));
}

TEST_CASE("bench writes per-method curves and a summary") {
  const auto out = scratch() / "bench";
  REQUIRE(run("bench --n-core 80 --n-periphery 80 --density 0.15 --ratios 1,2 --replicates 2 --rank 6 "
              "--methods degree,spectral_er,kcore --out-dir " + out.string()) == 0);
  const auto s = nlohmann::json::parse(slurp(out / "summary.json"));
  REQUIRE(s["runs"].size() == 2);
  CHECK(s["runs"][1]["degree_ratio"] == 2.0);
  CHECK(s["runs"][0]["methods"].size() == 3);
  CHECK(fs::exists(out / "roc_kcore_ratio2.csv"));
  CHECK(slurp(out / "roc_degree_ratio1.csv").rfind("method,fpr,tpr\n", 0) == 0);
  CHECK(run("bench --preset fig9-g1 --out-dir " + (scratch() / "b2").string()) == 2);
}
