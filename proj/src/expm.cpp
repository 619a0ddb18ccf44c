#include "photonstat/expm.hpp"

namespace photonstat {

BlockToeplitz hierarchy_exponential(const SuperOp& diag, const SuperOp& sub, double h,
                                    std::size_t levels) {
  auto norm1 = [](const SuperOp& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); };
  const double bound = std::abs(h) * (norm1(diag) + norm1(sub));
  int squarings = 0;
  if (bound > 0.5) squarings = static_cast<int>(std::ceil(std::log2(bound / 0.5)));
  const double scale = h / std::ldexp(1.0, squarings);
  const SuperOp x0 = diag * scale;
  const SuperOp x1 = sub * scale;

  // ||X|| <= 0.5, so 0.5^20 / 20! is far below double precision.
  constexpr int kTerms = 20;
  BlockToeplitz sum = BlockToeplitz::identity(levels);
  BlockToeplitz term = BlockToeplitz::identity(levels);
  for (int p = 1; p <= kTerms; ++p) {
    BlockToeplitz next(levels);
    for (std::size_t j = 0; j < levels; ++j) {
      next.block(j).noalias() = term.block(j) * x0;
      if (j > 0) next.block(j).noalias() += term.block(j - 1) * x1;
      next.block(j) /= static_cast<double>(p);
      sum.block(j) += next.block(j);
    }
    term = std::move(next);
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace photonstat
