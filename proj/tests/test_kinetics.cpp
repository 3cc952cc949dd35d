#include "grnn/errors.hpp"
#include "grnn/kinetics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace grnn;

namespace {

GenePerceptron gene(double k1, double k2, double d1, double d2, double cn, double n = 1.0)
{
  return {"g", k1, k2, d1, d2, cn, n};
}

RegulationInput act(double tf, double k) { return {tf, k, RegulationMode::activation}; }
RegulationInput rep(double tf, double k) { return {tf, k, RegulationMode::repression}; }

} // namespace

TEST_SUITE("kinetics")
{
  TEST_CASE("hill term boundary and half-maximal values")
  {
    CHECK(hill_term(act(2.0, 2.0)) == 0.5);
    CHECK(hill_term(act(0.0, 1e-5)) == 0.0);
    CHECK(hill_term(rep(0.0, 1e-5)) == 1.0);
    CHECK(hill_term(rep(7.0, 7.0)) == 0.5);
  }

  TEST_CASE("hill term with n = 2 at three times K")
  {
    // 9 K^2 / (9 K^2 + K^2) = 9/10
    CHECK(hill_term(act(3e-5, 1e-5), 2.0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(hill_term(act(3.0, 1.0), 2.0) == doctest::Approx(oracle::hill(3.0, 1.0, true, 2.0)));
  }

  TEST_CASE("hill term rejects bad input")
  {
    CHECK_THROWS_AS(hill_term(act(std::nan(""), 1.0)), InvalidArgument);
    CHECK_THROWS_AS(hill_term(act(1.0, std::numeric_limits<double>::infinity())), InvalidArgument);
    CHECK_THROWS_AS(hill_term(act(1.0, 0.0)), InvalidArgument);
    CHECK_THROWS_AS(hill_term(act(-1.0, 1.0)), InvalidArgument);
  }

  TEST_CASE("hill slope at K grows with the coefficient")
  {
    const double k = 2e-5;
    double previous = 0.0;
    for (double n : {1.0, 2.0, 4.0, 8.0}) {
      const double h = k * 1e-6;
      const double slope = (hill_term(act(k + h, k), n) - hill_term(act(k - h, k), n)) / (2 * h);
      CHECK(slope == doctest::Approx(n / (4.0 * k)).epsilon(1e-6));
      CHECK(slope > previous);
      previous = slope;
    }
  }

  TEST_CASE("rna right-hand side")
  {
    const auto g = gene(0.1, 0.1, 0.3, 0.3, 100);
    const std::vector<RegulationInput> one{act(1.0, 1.0)};
    CHECK(rna_rhs(g, one, 0.0) == doctest::Approx(5.0));
    const std::vector<RegulationInput> two{act(1.0, 1.0), act(2.0, 2.0)};
    CHECK(rna_rhs(g, two, 0.0) == doctest::Approx(2.5));
    const double r_star = steady_state_rna(g, two);
    CHECK(std::abs(rna_rhs(g, two, r_star)) < 1e-14);
    CHECK_THROWS_AS(rna_rhs(g, std::vector<RegulationInput>{}, 0.0), InvalidArgument);
  }

  TEST_CASE("protein right-hand side")
  {
    CHECK(protein_rhs(gene(0.1, 0.1, 0.3, 0.3, 1), 10.0, 0.0) == doctest::Approx(1.0));
    CHECK(protein_rhs(gene(0.1, 0.1, 0.2, 0.2, 1), 0.0, 5.0) == doctest::Approx(-1.0));
    const auto g = gene(0.1, 0.4, 0.3, 0.7, 1);
    CHECK(std::abs(protein_rhs(g, 3.0, 0.4 * 3.0 / 0.7)) < 1e-15);
  }

  TEST_CASE("steady states")
  {
    const auto g = gene(0.1, 0.1, 0.3, 0.3, 100);
    const std::vector<RegulationInput> saturated{act(1e12, 1e-5)};
    CHECK(steady_state_rna(g, saturated) == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
    CHECK(steady_state_rna(g, std::vector{act(0.0, 1.0)}) == 0.0);
    CHECK(steady_state_rna(g, std::vector{act(1.0, 1.0)}) == doctest::Approx(50.0 / 3.0));

    const std::vector<RegulationInput> both{act(1e12, 1.0), act(1e12, 1.0)};
    CHECK(steady_state_protein(g, both) == doctest::Approx(0.01 * 100 / 0.09).epsilon(1e-10));
    const std::vector<RegulationInput> half{act(5e-5, 5e-5), act(5e-5, 5e-5)};
    CHECK(steady_state_protein(g, half) == doctest::Approx(0.25 * 0.01 * 100 / 0.09));
    CHECK(steady_state_protein(g, std::vector{act(0.0, 1.0), act(0.0, 1.0)}) == 0.0);

    const auto h = gene(0.3, 0.7, 0.2, 0.9, 12);
    const std::vector<RegulationInput> mix{act(2.0, 1.0), rep(0.5, 1.5)};
    CHECK(steady_state_protein(h, mix) ==
          doctest::Approx(h.k2 * steady_state_rna(h, mix) / h.d2).epsilon(1e-14));
  }

  TEST_CASE("normalized steady state is the hill product")
  {
    const auto g = gene(0.4, 0.4, 0.5, 0.5, 500);
    CHECK(normalized_steady_state(g, std::vector{act(1.0, 1.0), act(3.0, 3.0)}) == 0.25);
    CHECK(normalized_steady_state(g, std::vector{act(1e15, 1.0), rep(0.0, 1.0)}) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normalized_steady_state(g, std::vector{act(1e-4, 1e-4), rep(1e-4, 1e-4)}) == 0.25);
  }

  TEST_CASE("closed forms at the initial time and far out")
  {
    const auto g = gene(0.1, 0.2, 0.3, 0.5, 100);
    const std::vector<RegulationInput> regs{act(1.0, 2.0)};
    CHECK(rna_closed_form(g, regs, 3.5, 0.0) == 3.5);
    CHECK(protein_closed_form(g, regs, 3.5, 1.25, 0.0) == 1.25);
    const double t_far = 40.0 / 0.3;
    CHECK(oracle::rel_diff(rna_closed_form(g, regs, 0.0, t_far), steady_state_rna(g, regs)) < 1e-12);
    CHECK(oracle::rel_diff(protein_closed_form(g, regs, 0.0, 0.0, t_far),
                           steady_state_protein(g, regs)) < 1e-10);
    CHECK_THROWS_AS(rna_closed_form(g, regs, 0.0, -1.0), InvalidArgument);
    CHECK_THROWS_AS(protein_closed_form(g, regs, 0.0, 0.0, -1.0), InvalidArgument);
  }

  TEST_CASE("closed forms match brute-force integration")
  {
    for (const auto& g : {gene(0.1, 0.1, 0.3, 0.7, 100), gene(0.1, 0.1, 0.3, 0.3, 100),
                          gene(0.05, 0.05, 0.2, 0.035, 72)}) {
      const std::vector<RegulationInput> regs{act(1e-5, 1e-5)};
      const double drive = g.k1 * g.copy_number * 0.5;
      const auto f = [&](const std::vector<double>& y) {
        return std::vector<double>{drive - g.d1 * y[0], g.k2 * y[0] - g.d2 * y[1]};
      };
      for (double t : {0.5, 3.0, 17.0}) {
        const auto y = oracle::rk4(f, {2.0, 1.0}, t, 20000);
        CHECK(oracle::rel_diff(rna_closed_form(g, regs, 2.0, t), y[0]) < 1e-8);
        CHECK(oracle::rel_diff(protein_closed_form(g, regs, 2.0, 1.0, t), y[1]) < 1e-8);
      }
    }
  }

  TEST_CASE("closed forms satisfy their differential equations")
  {
    const auto g = gene(0.3, 0.6, 0.4, 0.9, 20);
    const std::vector<RegulationInput> regs{act(2.0, 1.0), rep(1.0, 3.0)};
    const double h = 1e-4 / g.d1;
    for (double t = 0.5; t < 20.0; t += 1.7) {
      const double r = rna_closed_form(g, regs, 1.0, t);
      const double p = protein_closed_form(g, regs, 1.0, 4.0, t);
      const double dr = (rna_closed_form(g, regs, 1.0, t + h) - rna_closed_form(g, regs, 1.0, t - h)) / (2 * h);
      const double dp = (protein_closed_form(g, regs, 1.0, 4.0, t + h) -
                         protein_closed_form(g, regs, 1.0, 4.0, t - h)) / (2 * h);
      CHECK(dr == doctest::Approx(rna_rhs(g, regs, r)).epsilon(1e-6));
      CHECK(dp == doctest::Approx(protein_rhs(g, r, p)).epsilon(1e-6));
    }
  }

  TEST_CASE("protein closed form is continuous across the degenerate gap")
  {
    const std::vector<RegulationInput> regs{act(1.0, 1.0)};
    const double t = 4.0;
    const double exact = protein_closed_form(gene(0.1, 0.2, 0.3, 0.3, 10), regs, 0.5, 0.25, t);
    for (double eps : {1e-12, 1e-10, 1e-8, 1e-6}) {
      const double near = protein_closed_form(gene(0.1, 0.2, 0.3, 0.3 * (1 + eps), 10), regs, 0.5, 0.25, t);
      CHECK(oracle::rel_diff(near, exact) < 1e-5);
    }
  }

  TEST_CASE("gene validation")
  {
    CHECK_NOTHROW(require_valid(gene(1, 1, 1, 1, 1)));
    CHECK_THROWS_AS(require_valid(gene(0, 1, 1, 1, 1)), InvalidArgument);
    CHECK_THROWS_AS(require_valid(gene(1, 1, -1, 1, 1)), InvalidArgument);
    CHECK_THROWS_AS(require_valid(gene(1, 1, 1, 1, 1, 0.5)), InvalidArgument);
    CHECK_THROWS_AS(require_valid(gene(1, 1, 1, std::nan(""), 1)), InvalidArgument);
  }
}
