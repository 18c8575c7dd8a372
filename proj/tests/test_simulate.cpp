#include <doctest.h>

#include <cmath>

#include "accord/error.hpp"
#include "accord/ingestion.hpp"
#include "accord/simulate.hpp"

using namespace accord;

namespace {

ProcessSpec basic_spec() {
  ProcessSpec s;
  s.n_objects = 10;
  s.instruments = {{"A", 0.0}, {"B", 0.0}};
  s.sigma_object = 10.0;
  s.sigma_interaction = 4.0;
  s.sigma_noise = 2.0;
  s.replicates = 1;
  s.seed = 42;
  return s;
}

}  // namespace

TEST_CASE("process_spec_from_json round trip") {
  auto spec = process_spec_from_json(R"({
    "n_objects": 74,
    "instruments": [{"id": "AH", "bias": 0.0}, {"id": "EP", "bias": -30.0}],
    "sigma_object": 12.0,
    "sigma_interaction": 20.0,
    "sigma_noise": 5.0,
    "replicates": 2,
    "seed": 7
  })");
  CHECK(spec.n_objects == 74);
  REQUIRE(spec.instruments.size() == 2);
  CHECK(spec.instruments[1].id == "EP");
  CHECK(spec.instruments[1].bias == -30.0);
  CHECK(spec.sigma_interaction == 20.0);
  CHECK(spec.replicates == 2);
  CHECK(spec.seed == 7);
}

TEST_CASE("process_spec_from_json rejects malformed specs") {
  CHECK_THROWS_WITH_AS(process_spec_from_json("{nope"),
                       doctest::Contains("BadSpec"), Error);
  CHECK_THROWS_WITH_AS(process_spec_from_json(R"({"n_objects": 0,
      "instruments": [{"id":"A"},{"id":"B"}]})"),
                       doctest::Contains("BadSpec"), Error);
  CHECK_THROWS_WITH_AS(process_spec_from_json(R"({"n_objects": 5,
      "instruments": [{"id":"A"}], "sigma_noise": -1})"),
                       doctest::Contains("BadSpec"), Error);
}

TEST_CASE("gen_dataset is deterministic in the seed") {
  auto spec = basic_spec();
  auto a = gen_dataset(spec);
  auto b = gen_dataset(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.records()[i].value == b.records()[i].value);
  CHECK(emit_measurements_csv(a) == emit_measurements_csv(b));

  spec.seed = 43;
  auto c = gen_dataset(spec);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.records()[i].value != c.records()[i].value) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("gen_dataset shape and naming") {
  auto spec = basic_spec();
  spec.replicates = 3;
  auto ds = gen_dataset(spec);
  CHECK(ds.size() == 10 * 2 * 3);
  CHECK(ds.object_ids().front() == "P1");
  CHECK(ds.object_ids().back() == "P10");
  CHECK(ds.instrument_ids() == std::vector<std::string>{"A", "B"});
  CHECK(ds.variables() == std::vector<std::string>{"QLTY"});
}

TEST_CASE("all-zero sigmas give the deterministic mean plus bias") {
  ProcessSpec spec;
  spec.n_objects = 4;
  spec.instruments = {{"A", 5.0}, {"B", -5.0}};
  spec.replicates = 2;
  spec.seed = 9;
  auto ds = gen_dataset(spec);
  for (const auto& r : ds.records())
    CHECK(r.value == (r.instrument_id == "A" ? 55.0 : 45.0));
}

TEST_CASE("d_bar estimator is exact when only bias differs") {
  ProcessSpec spec;
  spec.n_objects = 6;
  spec.instruments = {{"A", 0.0}, {"B", -30.0}};
  spec.sigma_object = 8.0;  // shared between instruments, cancels in d
  spec.seed = 77;
  auto ds = gen_dataset(spec);
  CHECK(run_estimator("d_bar", spec, ds) ==
        doctest::Approx(30.0).epsilon(1e-9));
  CHECK(expected_mean_difference(spec) == 30.0);
}

TEST_CASE("aggregate_replicates averages cells") {
  auto ds = MeasurementDataset::build({{"P1", "A", 0, "QLTY", 10.0},
                                       {"P1", "A", 1, "QLTY", 14.0},
                                       {"P1", "B", 0, "QLTY", 6.0}});
  auto agg = aggregate_replicates(ds, "QLTY");
  REQUIRE(agg.size() == 2);
  CHECK(agg.records()[0].value == 12.0);
  CHECK(agg.records()[1].value == 6.0);
}

TEST_CASE("unknown estimator raises") {
  auto spec = basic_spec();
  auto ds = gen_dataset(spec);
  CHECK_THROWS_WITH_AS(run_estimator("variogram", spec, ds),
                       doctest::Contains("BadSpec"), Error);
}

TEST_CASE("monte_carlo summary is ordered and deterministic") {
  auto spec = basic_spec();
  auto s1 = monte_carlo(spec, "s_M", 50);
  auto s2 = monte_carlo(spec, "s_M", 50);
  CHECK(s1.mean == s2.mean);
  CHECK(s1.sd == s2.sd);
  CHECK(s1.n_reps == 50);
  CHECK(s1.min <= s1.q25);
  CHECK(s1.q25 <= s1.median);
  CHECK(s1.median <= s1.q75);
  CHECK(s1.q75 <= s1.max);
}

TEST_CASE("s_M responds monotonically to sigma_interaction") {
  auto spec = basic_spec();
  spec.n_objects = 30;
  spec.sigma_noise = 0.0;
  double prev = -1.0;
  for (double sig : {2.0, 8.0, 20.0}) {
    spec.sigma_interaction = sig;
    const double m = monte_carlo(spec, "s_M", 60).mean;
    CHECK(m > prev);
    prev = m;
  }
}

TEST_CASE("c4 factor") {
  CHECK(c4_factor(2) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
  CHECK(c4_factor(10) == doctest::Approx(0.9727).epsilon(1e-4));
  CHECK(c4_factor(100) > 0.997);
}

TEST_CASE("repeatability estimator tracks sigma_noise with c4 correction") {
  auto spec = basic_spec();
  spec.sigma_object = 0.0;
  spec.sigma_interaction = 0.0;
  spec.sigma_noise = 5.0;
  spec.replicates = 4;
  auto mc = monte_carlo(spec, "repeatability", 200);
  // mean of per-cell sds ~ c4(4) * sigma
  CHECK(mc.mean == doctest::Approx(c4_factor(4) * 5.0).epsilon(0.03));
}

TEST_CASE("analytic oracle targets") {
  ProcessSpec spec;
  spec.n_objects = 74;
  spec.instruments = {{"A", 0.0}, {"B", -30.0}};
  spec.sigma_object = 12.0;
  spec.sigma_interaction = 20.0;
  spec.sigma_noise = 5.0;
  spec.seed = 1;

  // E[MS(P:I)] = sum (b_j - bbar)^2 / (m-1) + sigma_g^2 + sigma_e^2
  const double bias_part = (15.0 * 15.0 + 15.0 * 15.0) / 1.0;
  CHECK(expected_ms_interaction(spec) ==
        doctest::Approx(bias_part + 400.0 + 25.0).epsilon(1e-12));

  // E[s_d] = sqrt(2 sigma_u^2) * c4(n), sigma_u^2 = sigma_g^2 + sigma_e^2
  CHECK(expected_sd_difference(spec) ==
        doctest::Approx(std::sqrt(2.0 * 425.0) * c4_factor(74)).epsilon(1e-12));

  // expected_icc is a mean of valid correlations
  const double rho = expected_icc(spec, 400, 5);
  CHECK(rho >= 0.0);
  CHECK(rho <= 1.0);
}

TEST_CASE("documented high-correlation poor-agreement scenario") {
  // strong shared object effect with a large systematic bias: the two
  // instruments rank programs nearly identically but disagree in level
  ProcessSpec spec;
  spec.n_objects = 74;
  spec.instruments = {{"A", 0.0}, {"B", -33.0}};
  spec.sigma_object = 18.0;
  spec.sigma_interaction = 6.0;
  spec.sigma_noise = 2.0;
  spec.seed = 2026;
  auto mc_r = monte_carlo(spec, "pearson_r", 100);
  CHECK(mc_r.mean > 0.7);
  auto mc_d = monte_carlo(spec, "d_bar", 100);
  CHECK(std::fabs(mc_d.mean) > 25.0);
}
