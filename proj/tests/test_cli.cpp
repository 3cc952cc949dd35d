#include "grnn/cli.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result
{
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args)
{
  std::ostringstream out, err;
  Result r;
  r.code = grnn::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name)
{
  const fs::path p = fs::temp_directory_path() / ("grnn_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::vector<double>> csv_rows(const std::string& text)
{
  std::map<std::string, std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string key, field;
    std::getline(fields, key, ',');
    std::vector<double> values;
    while (std::getline(fields, field, ',')) {
      try {
        values.push_back(std::stod(field));
      } catch (...) {
        values.clear();
        break;
      }
    }
    if (!values.empty()) {
      rows[key] = values;
    }
  }
  return rows;
}

} // namespace

TEST_SUITE("cli")
{
  TEST_CASE("validate")
  {
    CHECK(run({"validate", "--builtin", "multilayer"}).code == 0);
    CHECK(run({"validate", "/nonexistent/missing.json"}).code == 2);

    const fs::path dir = scratch("validate");
    fs::create_directories(dir);
    const fs::path broken = dir / "broken.json";
    std::ofstream(broken) << R"({"inputs": ["u"], "outputs": ["a"],
      "genes": {"a": {"k1": 1, "k2": 1, "d1": 1, "d2": 1, "copy_number": 1},
                "b": {"k1": 1, "k2": 1, "d1": 1, "d2": 1, "copy_number": 1}},
      "edges": [{"from": "u", "to": "a", "mode": "activation", "k_half": 1},
                {"from": "a", "to": "b", "mode": "activation", "k_half": 1},
                {"from": "b", "to": "a", "mode": "repression", "k_half": 1}]})";
    const auto r = run({"validate", broken.string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("cycle") != std::string::npos);

    const fs::path garbled = dir / "garbled.json";
    std::ofstream(garbled) << "{ not json";
    CHECK(run({"validate", "--spec", garbled.string()}).code == 1);
  }

  TEST_CASE("usage errors exit with 2")
  {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"simulate", "--builtin", "multilayer", "--t-end", "abc"}).code == 2);
    CHECK(run({"classify", "--builtin", "multilayer", "--grid", "7"}).code == 2);
    CHECK(run({"steady-state"}).code == 2);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("simulate terminal values match steady-state")
  {
    const auto ss = run({"steady-state", "--builtin", "multilayer"});
    REQUIRE(ss.code == 0);
    const fs::path dir = scratch("simulate");
    const auto sim = run({"simulate", "--builtin", "multilayer", "--out", dir.string()});
    REQUIRE(sim.code == 0);
    const auto a = csv_rows(ss.out);
    const auto b = csv_rows(sim.out);
    for (const std::string g : {"g1_1", "g1_2", "g1_3", "g2_1"}) {
      CAPTURE(g);
      REQUIRE(a.count(g));
      REQUIRE(b.count(g));
      CHECK(oracle::rel_diff(a.at(g)[1], b.at(g)[1]) < 1e-6);
    }
    CHECK(fs::exists(dir / "trace.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
  }

  TEST_CASE("zero horizon gives a single row")
  {
    const fs::path dir = scratch("zero");
    REQUIRE(run({"simulate", "--builtin", "ecoli", "--t-end", "0", "--out", dir.string()}).code == 0);
    const std::string trace = slurp(dir / "trace.csv");
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 2);
  }

  TEST_CASE("ecoli simulation is finite")
  {
    const auto r = run({"simulate", "--builtin", "ecoli"});
    REQUIRE(r.code == 0);
    for (const auto& [gene, v] : csv_rows(r.out)) {
      for (double x : v) {
        CHECK(std::isfinite(x));
      }
    }
  }

  TEST_CASE("stability summary")
  {
    const fs::path dir = scratch("stability");
    const auto r = run({"stability", "--builtin", "multilayer", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(slurp(dir / "summary.csv"));
    CHECK(rows.size() == 4);
    CHECK(rows.at("g1_2")[0] == -0.2);
    CHECK(rows.at("g1_2")[1] == -0.2);
    CHECK(fs::exists(dir / "lyapunov_g2_1.csv"));
    CHECK(r.out.find("not_reached") == std::string::npos);
    CHECK(run({"stability", "--builtin", "multilayer", "--mode", "sideways"}).code == 2);
  }

  TEST_CASE("overrides and param sets")
  {
    const auto base = csv_rows(run({"steady-state", "--builtin", "multilayer"}).out);
    const auto doubled =
        csv_rows(run({"steady-state", "--builtin", "multilayer", "--set", "g1_1.copy_number=200"}).out);
    CHECK(doubled.at("g1_1")[1] == doctest::Approx(2.0 * base.at("g1_1")[1]));
    const auto edge = csv_rows(
        run({"steady-state", "--builtin", "multilayer", "--set", "x1->g1_1.k_half=1e-5"}).out);
    CHECK(edge.at("g1_1")[2] > base.at("g1_1")[2]);
    CHECK(run({"steady-state", "--builtin", "multilayer", "--param-set", "3"}).code == 2);
    CHECK(run({"steady-state", "--builtin", "multilayer", "--set", "ghost.k1=1"}).code == 1);
    CHECK(run({"steady-state", "--builtin", "multilayer", "--set", "g1_1.k1=0"}).code == 1);
    CHECK(run({"steady-state", "--builtin", "multilayer", "--input", "x9=1"}).code == 1);
  }

  TEST_CASE("classify artifacts")
  {
    const fs::path dir = scratch("classify");
    const auto r = run({"classify", "--builtin", "multilayer", "--grid", "2x2", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("g2_1 area_fraction") != std::string::npos);
    const std::string grid = slurp(dir / "grid.csv");
    CHECK(std::count(grid.begin(), grid.end(), '\n') == 5);
    for (const std::string g : {"g1_1", "g1_2", "g1_3", "g2_1"}) {
      CHECK(fs::exists(dir / ("mask_" + g + ".pgm")));
      CHECK(fs::exists(dir / ("metrics_" + g + ".json")));
    }
    CHECK(run({"classify", "--builtin", "multilayer", "--range", "x7:0:1,x2:0:1"}).code == 1);
  }

  TEST_CASE("ecoli region of b1892 reaches lower inputs than b1891")
  {
    const fs::path dir = scratch("ecoli");
    REQUIRE(run({"classify", "--builtin", "ecoli", "--grid", "101x101", "--out", dir.string()}).code == 0);
    const auto m91 = nlohmann::json::parse(slurp(dir / "metrics_b1891.json"));
    const auto m92 = nlohmann::json::parse(slurp(dir / "metrics_b1892.json"));
    CHECK(m92["x_extent"][0].get<double>() < m91["x_extent"][0].get<double>());
    CHECK(m92["y_extent"][0].get<double>() < m91["y_extent"][0].get<double>());
  }

  TEST_CASE("identical runs and replays are bitwise identical")
  {
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    const fs::path c = scratch("det_c");
    const std::vector<std::string> base{"classify", "--builtin", "random_structured", "--param-set", "2",
                                        "--grid", "31x17", "--range", "x:0:2e-4,y:0:3e-4",
                                        "--set", "g2_1.k_half=2e-6"};
    auto args = base;
    args.insert(args.end(), {"--out", a.string()});
    REQUIRE(run(args).code == 0);
    args = base;
    args.insert(args.end(), {"--out", b.string()});
    REQUIRE(run(args).code == 0);
    REQUIRE(run({"replay", (a / "manifest.json").string(), "--out", c.string()}).code == 0);
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto name = entry.path().filename();
      CAPTURE(name.string());
      if (name != "manifest.json") {
        CHECK(slurp(entry.path()) == slurp(b / name));
        CHECK(slurp(entry.path()) == slurp(c / name));
      }
    }
    auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
    auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
    for (auto* m : {&ma, &mb}) {
      m->erase("argv");
      (*m)["options"].erase("out");
    }
    CHECK(ma == mb);
    const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(manifest.at("version") == grnn::cli::kVersion);
    CHECK(manifest.at("options").at("grid") == "31x17");
    CHECK(manifest.contains("resolved_spec"));
  }

  TEST_CASE("no artifacts are written when a command fails")
  {
    const fs::path dir = scratch("failed");
    CHECK(run({"classify", "--builtin", "multilayer", "--range", "x:1:0,y:0:1", "--out", dir.string()}).code == 1);
    CHECK_FALSE(fs::exists(dir));
  }
}
