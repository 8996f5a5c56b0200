#include <catch2/catch_amalgamated.hpp>

#include "ubp/montecarlo.hpp"

#include <cmath>
#include <sstream>

using namespace ubp;
using Catch::Approx;

namespace {

UpdateFamily named(const char* name) {
  UpdateFamily f;
  REQUIRE(named_family(name, f));
  return f;
}

}  // namespace

TEST_CASE("counter generator golden values") {
  CHECK(detail::mix3(0, 0, 0) == 2558736989570252433ULL);
  CHECK(detail::mix3(1, 2, 3) == 15020427595393229491ULL);
  CHECK(detail::mix3(7, 11, 13) == 17122655245535767964ULL);
  CHECK(detail::unit_uniform(1, 2, 3) == Approx(0.814259011529328).epsilon(1e-15));
  CHECK(detail::unit_uniform(0, 0, 0) ==
        Approx(0.13870941014555427).epsilon(1e-15));
  for (std::uint64_t i = 0; i < 200; ++i) {
    const double u = detail::unit_uniform(3, 5, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("initial state sampling") {
  Lattice empty = sample_initial(16, 0.0, 9, 0);
  CHECK(empty.grid.popcount() == 0);
  Lattice full = sample_initial(16, 1.0, 9, 0);
  CHECK(full.grid.popcount() == 256);
  CHECK_THROWS_AS(sample_initial(16, -0.1, 9, 0), PreconditionError);
  CHECK_THROWS_AS(sample_initial(16, 1.1, 9, 0), PreconditionError);

  // Deterministic in (seed, trial); trials give distinct states.
  Lattice a = sample_initial(16, 0.5, 9, 4);
  Lattice b = sample_initial(16, 0.5, 9, 4);
  CHECK(a.grid == b.grid);
  Lattice c = sample_initial(16, 0.5, 9, 5);
  CHECK_FALSE(a.grid == c.grid);

  // Monotone coupling: raising p only adds sites.
  Lattice lo = sample_initial(32, 0.1, 9, 7);
  Lattice hi = sample_initial(32, 0.35, 9, 7);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x)
      if (lo.grid.get(x, y)) CHECK(hi.grid.get(x, y));

  // Site count within four sigmas of the binomial mean.
  Lattice s = sample_initial(64, 0.25, 11, 0);
  const double mean = 4096 * 0.25;
  const double sd = std::sqrt(4096 * 0.25 * 0.75);
  CHECK(std::abs(static_cast<double>(s.grid.popcount()) - mean) <= 4 * sd);
}

TEST_CASE("wilson interval") {
  const Interval whole = wilson(0, 0);
  CHECK(whole.lo == 0.0);
  CHECK(whole.hi == 1.0);
  const Interval zero = wilson(0, 50);
  CHECK(zero.lo == Approx(0.0).margin(1e-12));
  CHECK(zero.hi > 0.0);
  const Interval one = wilson(50, 50);
  CHECK(one.hi == Approx(1.0).margin(1e-12));
  CHECK(one.lo < 1.0);
  const Interval mid = wilson(61, 100);
  CHECK(mid.lo == Approx(0.512030170458).epsilon(1e-9));
  CHECK(mid.hi == Approx(0.699831259936).epsilon(1e-9));
  CHECK(mid.lo < 0.61);
  CHECK(mid.hi > 0.61);
}

TEST_CASE("csv schema") {
  CHECK(std::string(csv_header()) ==
        "family,n,p,trials,successes,phat,wilson_lo,wilson_hi,tau_median,"
        "tau_mean");
  EstimateRow r;
  r.family = "east";
  r.n = 8;
  r.p = 0.25;
  r.trials = 4;
  r.successes = 3;
  r.phat = 0.75;
  r.wilson_lo = 0.5;
  r.wilson_hi = 0.875;
  CHECK(to_csv(r) == "east,8,0.25,4,3,0.75,0.5,0.875,,");
  r.tau_median = 6;
  r.tau_mean = 8.5;
  CHECK(to_csv(r) == "east,8,0.25,4,3,0.75,0.5,0.875,6,8.5");
}

TEST_CASE("percolation probability of onenbr matches the closed form") {
  ExperimentConfig cfg;
  cfg.family_name = "onenbr";
  cfg.n = 32;
  cfg.p_grid = {0.001};
  cfg.trials = 100;
  cfg.seed = 1;
  const auto rows = percolation_probability(named("onenbr"), cfg);
  REQUIRE(rows.size() == 1);
  std::ostringstream os;
  write_csv(os, rows);
  CHECK(os.str() ==
        "family,n,p,trials,successes,phat,wilson_lo,wilson_hi,tau_median,"
        "tau_mean\n"
        "onenbr,32,0.001,100,57,0.57,0.472153895492,0.662667014759,,\n");
  // Exact model value: percolates iff any site is seeded.
  const double exact = 1.0 - std::pow(1.0 - 0.001, 1024.0);
  CHECK(rows[0].wilson_lo <= exact);
  CHECK(rows[0].wilson_hi >= exact);
}

TEST_CASE("percolation probability handles degenerate densities") {
  ExperimentConfig cfg;
  cfg.family_name = "twonbr";
  cfg.n = 16;
  cfg.p_grid = {0.0, 1.0};
  cfg.trials = 5;
  const auto rows = percolation_probability(named("twonbr"), cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].successes == 0);
  CHECK(rows[0].wilson_lo == 0.0);
  CHECK(rows[0].wilson_hi == 0.0);
  CHECK(rows[1].successes == 5);
  CHECK(rows[1].wilson_lo == 1.0);
  CHECK(rows[1].wilson_hi == 1.0);
}

TEST_CASE("worker count does not change the output") {
  ExperimentConfig one;
  one.family_name = "onenbr";
  one.n = 16;
  one.p_grid = {0.002, 0.01};
  one.trials = 50;
  one.seed = 4;
  one.workers = 1;
  ExperimentConfig three = one;
  three.workers = 3;
  const UpdateFamily fam = named("onenbr");
  std::ostringstream a, b;
  write_csv(a, percolation_probability(fam, one));
  write_csv(b, percolation_probability(fam, three));
  CHECK(a.str() == b.str());
}

TEST_CASE("experiment validation") {
  UpdateFamily two = named("twonbr");
  ExperimentConfig cfg;
  cfg.n = 3;  // below 4 * range
  cfg.p_grid = {0.1};
  CHECK_THROWS_AS(percolation_probability(two, cfg), PreconditionError);
  cfg.n = 16;
  cfg.trials = 0;
  CHECK_THROWS_AS(percolation_probability(two, cfg), PreconditionError);
  cfg.trials = 10;
  cfg.p_grid.clear();
  CHECK_THROWS_AS(percolation_probability(two, cfg), PreconditionError);
  CHECK_THROWS_AS(tau_scaling(two, cfg), PreconditionError);
}

TEST_CASE("pc bisection on onenbr") {
  ExperimentConfig cfg;
  cfg.family_name = "onenbr";
  cfg.n = 32;
  cfg.trials = 200;
  cfg.seed = 7;
  cfg.p_lo = 1e-5;
  cfg.p_hi = 0.05;
  const PcResult r = estimate_pc(named("onenbr"), cfg);
  CHECK(r.lo == Approx(0.0007209173583984374).epsilon(1e-12));
  CHECK(r.hi == Approx(0.00072129875183105465).epsilon(1e-12));
  CHECK(r.probe_lo.phat == Approx(0.02));
  CHECK(r.probe_hi.phat == Approx(1.0));
  CHECK(r.trace.size() == 17);
  CHECK(r.hi - r.lo < r.hi * 0x1.0p-10);
  for (const EstimateRow& row : r.trace) {
    CHECK(row.trials <= cfg.trials);
    CHECK(row.phat == Approx(static_cast<double>(row.successes) / row.trials));
  }
  // The known threshold scale for this family on a 32-torus.
  const double star = 1.0 - std::pow(2.0, -1.0 / 1024.0);
  const double mid = 0.5 * (r.lo + r.hi);
  CHECK(std::abs(mid - star) / star < 0.2);
}

TEST_CASE("pc bisection rejects bad brackets") {
  UpdateFamily onenbr = named("onenbr");
  ExperimentConfig cfg;
  cfg.n = 32;
  cfg.trials = 50;
  cfg.p_lo = 0.4;
  cfg.p_hi = 0.2;
  CHECK_THROWS_AS(estimate_pc(onenbr, cfg), PreconditionError);
  cfg.p_lo = 0.4;
  cfg.p_hi = 0.6;
  // Both probes percolate: the error names the measured probabilities.
  REQUIRE_THROWS_WITH(estimate_pc(onenbr, cfg),
                      Catch::Matchers::ContainsSubstring("non-bracketing"));
}

TEST_CASE("tau scaling for east") {
  ExperimentConfig cfg;
  cfg.family_name = "east";
  cfg.n = 256;
  cfg.p_grid = {0.1};
  cfg.trials = 2000;
  cfg.seed = 2;
  const TauScalingResult res = tau_scaling(named("east"), cfg);
  REQUIRE(res.rows.size() == 1);
  const TauRow& r = res.rows[0];
  CHECK(r.trials == 2000);
  CHECK(r.measured == 1999);
  CHECK(r.discarded == 1);
  CHECK(r.exhausted == 0);
  CHECK_FALSE(r.aborted);
  CHECK(r.tau_median == Approx(6.0));
  CHECK(r.tau_mean == Approx(8.8069034517258622).epsilon(1e-12));

  const auto rows = tau_rows_to_estimates(cfg, res);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].successes == 1999);
  REQUIRE(rows[0].tau_median.has_value());
  CHECK(*rows[0].tau_median == Approx(6.0));
}

TEST_CASE("tau scaling flags exhausted rows") {
  ExperimentConfig cfg;
  cfg.family_name = "east";
  cfg.n = 64;
  cfg.p_grid = {0.1};
  cfg.trials = 100;
  cfg.seed = 3;
  cfg.max_steps = 1;
  const TauScalingResult res = tau_scaling(named("east"), cfg);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].measured == 19);
  CHECK(res.rows[0].exhausted == 81);
  CHECK(res.rows[0].aborted);
}

TEST_CASE("line fit") {
  const LineFit f = fit_line({0, 1, 2}, {1, 3, 5});
  CHECK(f.slope == Approx(2.0));
  CHECK(f.intercept == Approx(1.0));
  const LineFit d1 = fit_line({1}, {2});
  CHECK(d1.slope == 0.0);
  const LineFit d2 = fit_line({2, 2, 2}, {1, 2, 3});
  CHECK(d2.slope == 0.0);
  const LineFit d3 = fit_line({0, 1}, {5, 5});
  CHECK(d3.slope == Approx(0.0).margin(1e-12));
  CHECK(d3.intercept == Approx(5.0));
}
