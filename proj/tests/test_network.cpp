#include "grnn/builtin.hpp"
#include "grnn/errors.hpp"
#include "grnn/network.hpp"
#include "grnn/spec_io.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace grnn;

namespace {

bool has_message(const ValidationReport& r, Violation::Kind kind, const std::string& fragment)
{
  for (const auto& v : r.violations) {
    if (v.kind == kind && v.message.find(fragment) != std::string::npos) {
      return true;
    }
  }
  return false;
}

} // namespace

TEST_SUITE("network")
{
  TEST_CASE("built-in networks validate")
  {
    for (const auto& b : builtin_networks()) {
      for (int set = 1; set <= b.parameter_sets(); ++set) {
        CAPTURE(b.name);
        CAPTURE(set);
        CHECK(validate(b.load(set)).ok());
      }
    }
  }

  TEST_CASE("multilayer shape")
  {
    const Grnn net = builtin_network("multilayer").load(1);
    CHECK(net.genes.size() == 4);
    CHECK(net.inputs.size() == 2);
    CHECK(net.edges.size() == 9);
    CHECK(net.outputs == std::vector<std::string>{"g2_1"});
  }

  TEST_CASE("added feedback edge is reported as a cycle")
  {
    Grnn net = builtin_network("multilayer").load(1);
    net.edges.push_back({"g2_1", "g1_1", RegulationMode::activation, 1e-5});
    const auto report = validate(net);
    CHECK(report.has(Violation::Kind::cycle));
    CHECK(has_message(report, Violation::Kind::cycle, "g1_1 -> g2_1 -> g1_1"));
    CHECK_THROWS_AS(require_valid(net), PreconditionError);
    CHECK_THROWS_AS(propagate_steady_state(net, {{"x1", 1.0}, {"x2", 1.0}}), PreconditionError);
  }

  TEST_CASE("structural violations")
  {
    Grnn net = builtin_network("multilayer").load(1);
    SUBCASE("non-positive rate")
    {
      net.genes["g1_1"].k1 = 0.0;
      CHECK(validate(net).has(Violation::Kind::non_positive_rate));
    }
    SUBCASE("missing parameter")
    {
      net.genes["g1_2"].d2 = std::nan("");
      CHECK(validate(net).has(Violation::Kind::missing_parameter));
    }
    SUBCASE("dangling edge")
    {
      net.edges.push_back({"nowhere", "g2_1", RegulationMode::activation, 1.0});
      CHECK(validate(net).has(Violation::Kind::dangling_edge));
    }
    SUBCASE("orphan gene")
    {
      net.genes["lonely"] = {"lonely", 1, 1, 1, 1, 1, 1};
      CHECK(validate(net).has(Violation::Kind::orphan_gene));
    }
    SUBCASE("duplicate edge")
    {
      net.edges.push_back(net.edges.front());
      CHECK(validate(net).has(Violation::Kind::duplicate_edge));
    }
    SUBCASE("invalid k_half")
    {
      net.edges.front().k_half = -1.0;
      CHECK(validate(net).has(Violation::Kind::invalid_k_half));
    }
    SUBCASE("hill coefficient below one")
    {
      net.genes["g1_3"].hill_n = 0.5;
      CHECK(validate(net).has(Violation::Kind::invalid_hill));
    }
    SUBCASE("input and gene share an id")
    {
      net.inputs.push_back("g1_1");
      CHECK(validate(net).has(Violation::Kind::id_collision));
    }
    SUBCASE("unknown output")
    {
      net.outputs.push_back("ghost");
      CHECK(validate(net).has(Violation::Kind::unknown_output));
    }
  }

  TEST_CASE("zero inputs silence every activator-driven gene")
  {
    const auto ss = propagate_steady_state(builtin_network("multilayer").load(1), {{"x1", 0.0}, {"x2", 0.0}});
    for (const auto& [id, s] : ss) {
      CAPTURE(id);
      CHECK(s.protein == 0.0);
      CHECK(s.normalized == 0.0);
    }
  }

  TEST_CASE("chain propagation uses upstream protein as the TF")
  {
    const Grnn net = builtin_network("random_structured").load(1);
    const InputAssignment in{{"x1", 3e-5}, {"x2", 2e-5}};
    const auto ss = propagate_steady_state(net, in);
    GenePerceptron g21 = net.genes.at("g2_1");
    const std::vector<RegulationInput> regs{{ss.at("g1_1").protein, 5e-6, RegulationMode::activation}};
    CHECK(ss.at("g2_1").protein == steady_state_protein(g21, regs));
  }

  TEST_CASE("propagation matches the independent evaluator")
  {
    for (const auto& b : builtin_networks()) {
      for (int set = 1; set <= b.parameter_sets(); ++set) {
        const Grnn net = b.load(set);
        const auto ss = propagate_steady_state(net, b.operating_point);
        const auto ref = oracle::steady_states(net, b.operating_point);
        for (const auto& [id, s] : ref) {
          CAPTURE(id);
          CHECK(oracle::rel_diff(ss.at(id).rna, s.rna) < 1e-12);
          CHECK(oracle::rel_diff(ss.at(id).protein, s.protein) < 1e-12);
          CHECK(oracle::rel_diff(ss.at(id).normalized, s.normalized) < 1e-12);
        }
      }
    }
  }

  TEST_CASE("multilayer steady state written out by hand")
  {
    const Grnn net = builtin_network("multilayer").load(1);
    const double x1 = 3e-5;
    const double x2 = 3e-5;
    const auto a = [](double tf, double k) { return tf / (tf + k); };
    const auto r = [](double tf, double k) { return k / (k + tf); };
    const double p11 = 0.1 * 0.1 * 100 / (0.3 * 0.3) * a(x1, 5e-5) * a(x2, 5e-5);
    const double p12 = 0.2 * 0.2 * 250 / (0.2 * 0.2) * a(x1, 1e-5) * a(x2, 1e-5);
    const double p13 = 0.4 * 0.4 * 500 / (0.5 * 0.5) * a(x1, 1e-4) * r(x2, 1e-4);
    const double p21 = 0.5 * 0.5 * 400 / (0.6 * 0.6) * a(p11, 5e-6) * a(p12, 5e-6) * a(p13, 5e-6);
    const auto ss = propagate_steady_state(net, {{"x1", x1}, {"x2", x2}});
    CHECK(oracle::rel_diff(ss.at("g1_1").protein, p11) < 1e-12);
    CHECK(oracle::rel_diff(ss.at("g1_2").protein, p12) < 1e-12);
    CHECK(oracle::rel_diff(ss.at("g1_3").protein, p13) < 1e-12);
    CHECK(oracle::rel_diff(ss.at("g2_1").protein, p21) < 1e-12);
  }

  TEST_CASE("input assignment must cover declared inputs")
  {
    const Grnn net = builtin_network("multilayer").load(1);
    CHECK_THROWS_AS(propagate_steady_state(net, {{"x1", 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(propagate_steady_state(net, {{"x1", 1.0}, {"x2", 1.0}, {"x3", 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(propagate_steady_state(net, {{"x1", -1.0}, {"x2", 1.0}}), InvalidArgument);
  }

  TEST_CASE("topological order")
  {
    const Grnn net = builtin_network("random_structured").load(1);
    const auto order = topological_order(net);
    CHECK(is_topological_order(net, order));
    CHECK(order.back() == "g3_1");
    std::vector<std::string> reversed(order.rbegin(), order.rend());
    CHECK_FALSE(is_topological_order(net, reversed));
  }

  TEST_CASE("activator-only network responds monotonically")
  {
    const Grnn net = builtin_network("ecoli").load(1);
    double previous = -1.0;
    for (double x = 0.0; x <= 5e-5; x += 2.5e-6) {
      const double v = propagate_steady_state(net, {{"b3025", x}, {"b3357", 2e-3}}).at("b1071").normalized;
      CHECK(v >= previous);
      previous = v;
    }
  }

  TEST_CASE("rate units convert to per-second")
  {
    Grnn net = builtin_network("ecoli").load(1);
    net.units["d1"] = RateUnit::per_minute;
    net.units["d2"] = RateUnit::per_hour;
    const GenePerceptron g = net.per_second("b1891");
    CHECK(g.d1 == doctest::Approx(0.2 / 60.0));
    CHECK(g.d2 == doctest::Approx(0.035 / 3600.0));
    CHECK(g.k1 == 0.05);
    const auto ss = propagate_steady_state(net, {{"b3025", 1e-5}, {"b3357", 1e-3}});
    const auto ref = oracle::steady_states(net, {{"b3025", 1e-5}, {"b3357", 1e-3}});
    CHECK(oracle::rel_diff(ss.at("b1071").protein, ref.at("b1071").protein) < 1e-12);
  }
}

TEST_SUITE("spec_io")
{
  TEST_CASE("built-in document loads with the expected shape")
  {
    const Grnn net = load_spec(builtin_network("multilayer").document(1));
    CHECK(net.genes.size() == 4);
    CHECK(net.edges.size() == 9);
    CHECK(net.genes.at("g1_1").hill_n == 1.0);
  }

  TEST_CASE("syntax errors carry a position")
  {
    CHECK_THROWS_AS(load_spec(""), SpecSyntaxError);
    try {
      load_spec("{\n  \"inputs\": [\"a\",\n  ]\n}");
      FAIL("expected a syntax error");
    } catch (const SpecSyntaxError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() >= 1);
    }
  }

  TEST_CASE("schema errors name the field")
  {
    const std::string base = R"({"inputs": ["u"], "outputs": ["g"],
      "genes": {"g": {"k1": 1, "k2": 1, "d1": 1, "d2": 1, "copy_number": 1}},
      "edges": [{"from": "u", "to": "g", "mode": "activation", "k_half": 1}]})";
    CHECK(validate(load_spec(base)).ok());
    const auto field_of = [](const std::string& doc) {
      try {
        load_spec(doc);
      } catch (const SpecSchemaError& e) {
        return e.field();
      }
      return std::string("<none>");
    };
    CHECK(field_of(R"({"inputs": [], "outputs": [], "genes": {}, "edges": [], "extra": 1})") == "extra");
    CHECK(field_of(R"({"inputs": [], "outputs": [], "genes": {"g": {"k1": 1, "k2": 1, "d1": 1, "d2": 1}}, "edges": []})") ==
          "genes.g.copy_number");
    CHECK(field_of(R"({"inputs": [], "outputs": [], "genes": {"g": {"k1": "a", "k2": 1, "d1": 1, "d2": 1, "copy_number": 1}}, "edges": []})") ==
          "genes.g.k1");
    CHECK(field_of(R"({"inputs": ["u"], "outputs": [], "genes": {}, "edges": [{"from": "u", "to": "g", "mode": "boost", "k_half": 1}]})")
              .find("mode") != std::string::npos);
    CHECK(field_of(R"({"inputs": [], "outputs": [], "genes": {}, "edges": [], "units": {"d1": "per_week"}})")
              .find("units") != std::string::npos);
  }

  TEST_CASE("save then load is the identity")
  {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
      Grnn net = oracle::random_network(rng, 2, 5);
      if (i % 3 == 0) {
        net.units["d2"] = RateUnit::per_hour;
      }
      const std::string text = save_spec(net);
      const Grnn back = load_spec(text);
      CHECK(back == net);
      CHECK(save_spec(back) == text);
    }
  }

  TEST_CASE("missing file")
  {
    CHECK_THROWS_AS(load_spec_file("/nonexistent/spec.json"), std::runtime_error);
  }
}
