#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "photonstat/expm.hpp"
#include "photonstat/liouville.hpp"
#include "support.hpp"

using namespace photonstat;
using testsupport::max_abs;

TEST_CASE("pade exponential agrees with the reference implementation") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  for (double scale : {1e-6, 0.1, 1.0, 10.0, 200.0}) {
    for (int r = 0; r < 10; ++r) {
      SuperOp a;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(rng), g(rng)) * scale;
      // keep the spectrum in the left half plane so the result stays O(1)
      a -= SuperOp::Identity() * (a.cwiseAbs().rowwise().sum().maxCoeff());
      const SuperOp ours = expm(a);
      const SuperOp ref = a.exp();
      CHECK(max_abs(ours - ref) < 1e-12 * std::max(1.0, max_abs(ref)));
    }
  }
  CHECK(max_abs(expm(SuperOp::Zero().eval()) - SuperOp::Identity()) == 0.0);
}

TEST_CASE("physical liouvillian exponentials") {
  std::mt19937_64 rng(32);
  for (int r = 0; r < 30; ++r) {
    const DriveSpec spec = testsupport::random_square_spec(rng);
    const SuperOp l = build_liouvillian(spec, 0.0);
    for (double h : {1e-3, 0.005, 0.25, 3.0}) {
      const SuperOp lh = l * h;
      CHECK(max_abs(expm(lh) - lh.exp()) < 1e-12);
    }
  }
}

TEST_CASE("block-toeplitz hierarchy exponential equals the dense exponential") {
  std::mt19937_64 rng(33);
  for (int r = 0; r < 10; ++r) {
    const DriveSpec spec = testsupport::random_square_spec(rng);
    const SuperOp l = build_liouvillian(spec, 0.0);
    const SuperOp n = jump_superop(spec);
    const std::size_t levels = 6;
    for (bool counting : {false, true}) {
      const SuperOp diag = counting ? SuperOp(l - n) : l;
      for (double h : {0.005, 0.5, 4.0}) {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(4 * levels, 4 * levels);
        for (std::size_t i = 0; i < levels; ++i) {
          g.block<4, 4>(4 * i, 4 * i) = diag;
          if (i > 0) g.block<4, 4>(4 * i, 4 * (i - 1)) = n;
        }
        const Eigen::MatrixXcd dense = (g * h).exp();
        const BlockToeplitz ours = hierarchy_exponential(diag, n, h, levels);
        for (std::size_t j = 0; j < levels; ++j)
          CHECK(max_abs(ours.block(j) - dense.block<4, 4>(4 * j, 0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("block-toeplitz algebra") {
  BlockToeplitz a(3);
  a.block(0) = SuperOp::Identity() * 2.0;
  a.block(1) = SuperOp::Identity();
  const BlockToeplitz sq = a * a;
  CHECK(max_abs(sq.block(0) - 4.0 * SuperOp::Identity()) == 0.0);
  CHECK(max_abs(sq.block(1) - 4.0 * SuperOp::Identity()) == 0.0);
  CHECK(max_abs(sq.block(2) - 1.0 * SuperOp::Identity()) == 0.0);
  const auto v = BlockToeplitz::identity(3).apply({OpVector::Ones(), OpVector::Zero(), OpVector::Ones()});
  CHECK(v[0] == OpVector::Ones());
  CHECK(v[2] == OpVector::Ones());
}
