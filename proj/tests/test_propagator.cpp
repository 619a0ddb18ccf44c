#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "photonstat/errors.hpp"
#include "photonstat/expm.hpp"
#include "photonstat/liouville.hpp"
#include "photonstat/propagator.hpp"
#include "support.hpp"

using namespace photonstat;
using testsupport::max_abs;

namespace {

DriveSpec sampled_spec(const Topology& topology = SingleLine{}) {
  return DriveSpec::make(testsupport::gaussian_pulse(0.1, 20.0), topology);
}

}  // namespace

TEST_CASE("undriven two-segment grid") {
  const DriveSpec spec = DriveSpec::make(SquarePulse{0.1, 0.0}, SingleLine{}, 1.0, InitialState::excited);
  const PropagatorGrid grid = segment_propagators(spec, std::vector<double>{0.0, 0.1, 0.5, 1.0});
  const SuperOp d = dissipator(ops::sigma_minus());
  CHECK(max_abs(grid.segment(1).propagator - expm(SuperOp(d * 0.4))) < 1e-15);
  CHECK(grid.states().back().population_excited() == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));

  const DriveSpec plain = DriveSpec::make(SquarePulse{0.5, 0.0}, SingleLine{}, 1.0, InitialState::excited);
  const PropagatorGrid halves = segment_propagators(plain, 0.5);
  REQUIRE(halves.segment_count() == 2);
  const SuperOp half = expm(SuperOp(d * 0.5));
  CHECK(max_abs(halves.segment(0).propagator - half) < 1e-15);
  CHECK(max_abs(halves.segment(1).propagator - half) < 1e-15);
  CHECK(halves.states().back().population_excited() == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("segments preserve trace and compose") {
  std::mt19937_64 rng(41);
  for (int r = 0; r < 12; ++r) {
    const DriveSpec spec = r % 3 == 2 ? sampled_spec(r % 2 ? Topology{TwoLine{0.5, 0.0}} : Topology{SingleLine{}})
                                      : testsupport::random_square_spec(rng);
    const PropagatorGrid grid = segment_propagators(spec, default_step(spec));
    const auto& times = grid.times();
    for (int s = 0; s < 20; ++s) {
      const std::size_t j = std::uniform_int_distribution<std::size_t>(0, grid.segment_count() - 1)(rng);
      const OpVector v = testsupport::random_state(rng).vec();
      CHECK(std::abs(trace(grid.segment(j).propagator * v) - 1.0) < 1e-9);
    }
    // composition against a directly computed propagator
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, grid.segment_count() / 2)(rng);
    const std::size_t len = std::min<std::size_t>(1 + rng() % 40, grid.segment_count() - j);
    SuperOp product = SuperOp::Identity();
    for (std::size_t i = j; i < j + len; ++i) product = grid.segment(i).propagator * product;
    CHECK(max_abs(product - propagator_between(spec, times[j], times[j + len])) < 1e-8);
    // states follow the segments
    for (std::size_t i = 0; i + 1 < grid.states().size(); i += 7) {
      const OpVector next = grid.segment(i).propagator * grid.state(i).vec();
      CHECK(max_abs(devectorize(next) - grid.state(i + 1).matrix()) < 1e-10);
    }
  }
}

TEST_CASE("semigroup property at arbitrary times") {
  std::mt19937_64 rng(42);
  for (int r = 0; r < 20; ++r) {
    const DriveSpec spec = r % 4 == 3 ? sampled_spec() : testsupport::random_square_spec(rng);
    std::uniform_real_distribution<double> u(0.0, std::min(spec.t_end, 2.0 * spec.pulse_end()));
    double t[3] = {u(rng), u(rng), u(rng)};
    std::sort(t, t + 3);
    const SuperOp direct = propagator_between(spec, t[0], t[2]);
    const SuperOp split = propagator_between(spec, t[1], t[2]) * propagator_between(spec, t[0], t[1]);
    CHECK(max_abs(direct - split) < 1e-8);
  }
}

TEST_CASE("states stay physical along the window") {
  std::mt19937_64 rng(43);
  for (int r = 0; r < 10; ++r) {
    const DriveSpec spec = r == 9 ? sampled_spec() : testsupport::random_square_spec(rng);
    const PropagatorGrid grid = segment_propagators(spec, default_step(spec));
    for (const auto& rho : grid.states()) {
      CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-9);
      CHECK(max_abs(rho.matrix() - rho.matrix().adjoint()) < 1e-10);
      CHECK(rho.min_eigenvalue() >= -1e-9);
    }
  }
}

TEST_CASE("pi pulse inverts the emitter") {
  const double width = 0.1;
  const double photons = std::numbers::pi * std::numbers::pi / (2.0 * width);
  const DriveSpec spec = DriveSpec::make(SquarePulse{width, photons}, SingleLine{});
  const DensityMatrix at_t = evolve_state(spec, DensityMatrix::ground(), 0.0, width);
  CHECK(at_t.population_excited() > 0.95);
  // fine-step reference integration at step / 100
  const std::size_t fine = static_cast<std::size_t>(std::round(width / (default_step(spec) / 100.0)));
  const Operator2 ref = testsupport::reference_evolve(spec, ops::ground_projector(), 0.0, width, fine);
  CHECK(max_abs(at_t.matrix() - ref) < 1e-10);

  const DriveSpec tabulated = DriveSpec::make(SquarePulse{width, 49.35}, SingleLine{});
  CHECK(evolve_state(tabulated, DensityMatrix::ground(), 0.0, width).population_excited() > 0.95);
}

TEST_CASE("sampled envelopes match a fine reference integration") {
  for (const Topology& topo : {Topology{SingleLine{0.7}}, Topology{TwoLine{0.1, 0.0}}}) {
    const DriveSpec spec = sampled_spec(topo);
    const Operator2 ref = testsupport::reference_evolve(spec, ops::ground_projector(), 0.0, 0.4, 40000);
    CHECK(max_abs(evolve_state(spec, DensityMatrix::ground(), 0.0, 0.4).matrix() - ref) < 1e-9);
  }
}

TEST_CASE("step halving leaves stored states unchanged") {
  // a triangular envelope starting from zero makes sqrt(N_in) non-smooth at the ramp start
  const DriveSpec triangle = DriveSpec::make(SampledPulse{{0.0, 0.2, 0.4}, {0.0, 150.0, 0.0}}, SingleLine{});
  for (const DriveSpec& spec : {sampled_spec(), triangle}) {
    const double step = default_step(spec);
    const PropagatorGrid coarse = segment_propagators(spec, step);
    const PropagatorGrid fine = segment_propagators(spec, step / 2.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < coarse.times().size(); ++j) {
      const std::size_t f = fine.locate(coarse.times()[j]);
      const std::size_t idx = std::abs(fine.times()[f] - coarse.times()[j]) < 1e-12 ? f : f + 1;
      REQUIRE(std::abs(fine.times()[idx] - coarse.times()[j]) < 1e-12);
      worst = std::max(worst, max_abs(coarse.state(j).matrix() - fine.state(idx).matrix()));
    }
    CHECK(worst < 1e-8);
  }

  const DriveSpec square = DriveSpec::make(SquarePulse{0.3, 40.0}, TwoLine{0.2, 0.5});
  const PropagatorGrid a = segment_propagators(square, 0.01);
  const PropagatorGrid b = segment_propagators(square, 0.005);
  CHECK(max_abs(a.states().back().matrix() - b.states().back().matrix()) < 1e-12);
}

TEST_CASE("detuned coherence rotates and decays") {
  for (double delta : {-2.0, 0.5, 3.0}) {
    const DriveSpec spec = DriveSpec::make(SquarePulse{0.1, 0.0}, SingleLine{delta}, 5.0);
    Operator2 plus = Operator2::Constant(0.5);
    const DensityMatrix rho0(plus);
    for (double t : {0.3, 1.0, 4.0}) {
      const DensityMatrix rho = evolve_state(spec, rho0, 0.0, t);
      const Complex expected_10 = 0.5 * std::exp(Complex(-0.5, delta) * t);
      CHECK(std::abs(rho.matrix()(1, 0) - expected_10) < 1e-9);
      CHECK(std::abs(rho.matrix()(0, 1) - std::conj(expected_10)) < 1e-9);
    }
  }
}

TEST_CASE("ground state is stationary without drive") {
  const DriveSpec spec = DriveSpec::make(SquarePulse{0.1, 0.0}, SingleLine{1.0});
  const DensityMatrix rho = evolve_state(spec, DensityMatrix::ground(), 0.0, 7.3);
  CHECK(max_abs(rho.matrix() - ops::ground_projector()) < 1e-14);
  const DriveSpec resonant = DriveSpec::make(SquarePulse{0.1, 0.0}, TwoLine{0.3, 0.0});
  CHECK(max_abs(evolve_state(resonant, DensityMatrix::ground(), 0.0, 7.3).matrix() - ops::ground_projector()) < 1e-15);
}

TEST_CASE("invalid requests are rejected") {
  const DriveSpec spec = DriveSpec::make(SquarePulse{0.1, 10.0}, SingleLine{});
  CHECK_THROWS_AS(evolve_state(spec, DensityMatrix::ground(), 1.0, 0.5), ConfigError);
  CHECK_THROWS_AS(evolve_state(spec, DensityMatrix::ground(), 0.0, spec.t_end + 1.0), ConfigError);
  CHECK_THROWS_AS(segment_propagators(spec, 0.0), ConfigError);
  try {
    segment_propagators(spec, std::vector<double>{0.0, 0.07, 0.14, spec.t_end});
    FAIL("misaligned grid accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("misalignment") != std::string::npos);
  }
  CHECK_THROWS_AS(segment_propagators(spec, std::vector<double>{0.0, 0.1, 0.1, spec.t_end}), ConfigError);
  CHECK_THROWS_AS(segment_propagators(spec, std::vector<double>{0.0, 0.1, 5.0}), ConfigError);
}

TEST_CASE("aligned grid contains every breakpoint") {
  const DriveSpec spec = DriveSpec::make(SquarePulse{0.37, 10.0}, SingleLine{});
  const auto times = aligned_grid(spec, 0.05);
  CHECK(times.front() == 0.0);
  CHECK(times.back() == spec.t_end);
  CHECK(std::find(times.begin(), times.end(), 0.37) != times.end());
  for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] - times[i - 1] <= 0.05 + 1e-12);
  CHECK(default_step(spec) == doctest::Approx(0.01));
  CHECK(default_step(DriveSpec::make(SquarePulse{0.1, 1.0}, SingleLine{})) == doctest::Approx(0.005));
}
