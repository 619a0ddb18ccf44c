#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "photonstat/errors.hpp"
#include "photonstat/liouville.hpp"
#include "photonstat/propagator.hpp"
#include "support.hpp"

using namespace photonstat;
using testsupport::max_abs;

namespace {

Operator2 act(const SuperOp& s, const Operator2& m) { return devectorize(s * vectorize(m)); }

Operator2 coherence_entry() {  // the matrix unit with entry (0, 1) = 1
  Operator2 m = Operator2::Zero();
  m(0, 1) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("dissipator examples") {
  const SuperOp d = dissipator(ops::sigma_minus());
  CHECK(max_abs(act(d, ops::excited_projector()) - (ops::ground_projector() - ops::excited_projector())) < 1e-15);
  CHECK(max_abs(act(d, ops::ground_projector())) == 0.0);
  CHECK(max_abs(act(d, coherence_entry()) + 0.5 * coherence_entry()) < 1e-15);
}

TEST_CASE("dissipator preserves hermiticity") {
  std::mt19937_64 rng(21);
  for (int r = 0; r < 20; ++r) {
    const Operator2 c = testsupport::random_matrix(rng);
    const Operator2 a = testsupport::random_matrix(rng);
    const Operator2 h = a + a.adjoint();
    const Operator2 out = act(dissipator(c), h);
    CHECK(max_abs(out - out.adjoint()) < 1e-12);
  }
}

TEST_CASE("liouvillian matches the master equation written with 2x2 algebra") {
  std::mt19937_64 rng(22);
  for (int r = 0; r < 40; ++r) {
    const DriveSpec spec = testsupport::random_square_spec(rng);
    std::uniform_real_distribution<double> u(0.0, spec.t_end);
    const double t = r % 2 == 0 ? u(rng) * spec.pulse_end() / spec.t_end : u(rng);
    const SuperOp l = build_liouvillian(spec, t);
    for (int e = 0; e < 4; ++e) {
      Operator2 unit = Operator2::Zero();
      unit(e % 2, e / 2) = 1.0;
      CHECK(max_abs(act(l, unit) - testsupport::lindblad_rhs(spec, t, unit)) < 1e-12);
    }
    // trace preservation: the trace functional is a left null vector
    CHECK((trace_functional() * l).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("undriven resonant single line is exactly the dissipator") {
  const DriveSpec spec = DriveSpec::make(SquarePulse{0.1, 0.0}, SingleLine{0.0});
  CHECK(build_liouvillian(spec, 0.05) == dissipator(ops::sigma_minus()));
  CHECK(build_liouvillian(spec, 5.0) == dissipator(ops::sigma_minus()));
}

TEST_CASE("undriven liouvillian has the ground state as unique steady state") {
  const SuperOp l = build_liouvillian(DriveSpec::make(SquarePulse{0.1, 0.0}, SingleLine{}), 1.0);
  Eigen::FullPivLU<SuperOp> lu(l);
  CHECK(lu.dimensionOfKernel() == 1);
  CHECK(max_abs(act(l, ops::ground_projector())) == 0.0);
}

TEST_CASE("jump superoperators") {
  const SuperOp single = jump_superop(SingleLine{});
  const SuperOp two = jump_superop(TwoLine{0.3, 0.0});
  CHECK(max_abs(single - 0.5 * two) == 0.0);
  CHECK(max_abs(act(single, ops::excited_projector()) - 0.5 * ops::ground_projector()) == 0.0);
  CHECK(max_abs(act(two, ops::excited_projector()) - ops::ground_projector()) == 0.0);
  CHECK(max_abs(act(single, ops::ground_projector())) == 0.0);
  CHECK(max_abs(act(two, ops::ground_projector())) == 0.0);

  std::mt19937_64 rng(23);
  for (int r = 0; r < 10; ++r) {
    const Operator2 rho = testsupport::random_state(rng).matrix();
    CHECK(max_abs(act(single * single, rho)) == 0.0);
    CHECK(max_abs(act(two * two, rho)) == 0.0);
  }
}

TEST_CASE("decay channels split the total rate") {
  const auto single = decay_channels(SingleLine{});
  REQUIRE(single.size() == 2);
  CHECK(single[0].monitored);
  CHECK(single[0].weight + single[1].weight == 1.0);
  const auto two = decay_channels(TwoLine{0.25, 0.0});
  REQUIRE(two.size() == 2);
  CHECK(two[0].weight == 1.0);
  CHECK(two[1].weight == 0.25);
  CHECK(two[0].monitored);
  CHECK_FALSE(two[1].monitored);
}

TEST_CASE("undriven decay of the excited state") {
  const DriveSpec single = DriveSpec::make(SquarePulse{0.1, 0.0}, SingleLine{}, 2.0);
  CHECK(evolve_state(single, DensityMatrix::excited(), 0.0, 1.0).population_excited() ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const DriveSpec two = DriveSpec::make(SquarePulse{0.1, 0.0}, TwoLine{1.0, 0.0}, 2.0);
  CHECK(evolve_state(two, DensityMatrix::excited(), 0.0, 1.0).population_excited() ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("drive spec validation") {
  CHECK_THROWS_AS(DriveSpec::make(SquarePulse{0.1, 1.0}, TwoLine{1.5, 0.0}), ConfigError);
  CHECK_THROWS_AS(DriveSpec::make(SquarePulse{0.1, 1.0}, TwoLine{0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(DriveSpec::make(SquarePulse{0.0, 1.0}, SingleLine{}), ConfigError);
  CHECK_THROWS_AS(DriveSpec::make(SquarePulse{0.1, -1.0}, SingleLine{}), ConfigError);
  CHECK_THROWS_AS(DriveSpec::make(SquarePulse{1.0, 1.0}, SingleLine{}, 0.5), ConfigError);
  CHECK_THROWS_AS(liouvillian_at_rate(SingleLine{}, -1.0), ConfigError);
  try {
    DriveSpec::make(SquarePulse{0.1, 1.0}, TwoLine{1.5, 0.0});
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("0 < a <= 1") != std::string::npos);
  }

  const DriveSpec square = DriveSpec::make(SquarePulse{0.2, 3.0}, SingleLine{});
  CHECK(square.rate(0.0) == doctest::Approx(15.0));
  CHECK(square.rate(0.1999) == doctest::Approx(15.0));
  CHECK(square.rate(0.2) == 0.0);
  CHECK(square.t_end == doctest::Approx(12.2));
  CHECK(DriveSpec::make(SquarePulse{0.2, 3.0}, TwoLine{0.5, 0.0}).t_end == doctest::Approx(8.2));

  const DriveSpec sampled = DriveSpec::make(SampledPulse{{0.0, 1.0, 2.0}, {0.0, 4.0, 0.0}}, SingleLine{});
  CHECK(sampled.rate(0.5) == doctest::Approx(2.0));
  CHECK(sampled.rate(1.5) == doctest::Approx(2.0));
  CHECK(sampled.rate(3.0) == 0.0);
  CHECK(sampled.rate(-1.0) == 0.0);
}
