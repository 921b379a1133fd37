#include "spinthermal/types.hpp"

#include <cmath>

namespace spinthermal {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

}  // namespace

double PairSpec::delta_h() const {
  if (J == 0.0) {
    throw std::domain_error(
        "delta_h undefined at J = 0; the pair state is diagonal there");
  }
  return (h1 - h2) / J;
}

double PairSpec::xi() const {
  const double dh = delta_h();
  return 0.5 * std::sqrt(1.0 + dh * dh);
}

void PairSpec::validate() const {
  require_finite(J, "J");
  require_finite(gamma, "gamma");
  require_finite(h1, "h1");
  require_finite(h2, "h2");
}

void ChainSpec::validate(int max_sites) const {
  if (sites < 2) throw ValidationError("chain needs at least 2 sites");
  if (sites > max_sites) {
    throw ResourceLimitError("chain of " + std::to_string(sites) +
                             " sites exceeds the configured maximum of " +
                             std::to_string(max_sites));
  }
  require_finite(J, "J");
  require_finite(gamma, "gamma");
  require_finite(lambda, "lambda");
  if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
  if (static_cast<int>(fields.size()) != sites) {
    throw ValidationError("fields length must equal the site count");
  }
  for (double h : fields) {
    require_finite(h, "field");
    if (h < -1.0 || h > 1.0) {
      throw ValidationError("fields must lie in [-1, 1]");
    }
  }
}

PairSpec EffectiveSpec::scaled() const {
  PairSpec out = base;
  out.J = (1.0 + alpha0()) * base.J;
  out.h1 = (1.0 + alpha1) * base.h1;
  out.h2 = (1.0 + alpha2) * base.h2;
  return out;
}

void EffectiveSpec::validate() const {
  base.validate();
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2)) {
    throw ValidationError("alpha corrections must be finite");
  }
}

}  // namespace spinthermal
