#include "fastlim/model.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace fastlim {

void ModelParams::validate() const {
  const std::array<std::pair<const char*, double>, 11> fields{{{"d_R1", d_R1},
                                                               {"d_R2", d_R2},
                                                               {"d_S", d_S},
                                                               {"gamma1", gamma1},
                                                               {"gamma2", gamma2},
                                                               {"eta1", eta1},
                                                               {"eta2", eta2},
                                                               {"mu", mu},
                                                               {"rho", rho},
                                                               {"R_hat", R_hat},
                                                               {"epsilon", epsilon}}};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value) || value < 0.0) {
      throw DomainError(std::string("parameter ") + name + " must be finite and nonnegative");
    }
  }
  if (!(epsilon > 0.0)) throw DomainError("parameter epsilon must be positive");
  if (!(d_R2 < d_R1)) {
    throw DomainError("exposed roots must diffuse slower than healthy roots (d_R2 < d_R1)");
  }
}

void validate_pair(const TransitionPair& pair) {
  std::visit(
      [](const auto& tp) {
        using T = std::decay_t<decltype(tp)>;
        if constexpr (std::is_same_v<T, PowerPair>) {
          if (!(tp.p > 0.0) || !(tp.q < 0.0)) {
            throw DomainError("power pair requires p > 0 > q");
          }
        } else if constexpr (std::is_same_v<T, HollingPair>) {
          for (double c : {tp.a1, tp.b1, tp.c1, tp.d1, tp.a2, tp.b2, tp.c2, tp.d2}) {
            if (!(c >= 0.0)) throw DomainError("Holling coefficients must be nonnegative");
          }
          if (!(tp.a2 * tp.d2 - tp.b2 * tp.c2 < 0.0 && 0.0 < tp.a1 * tp.d1 - tp.b1 * tp.c1)) {
            throw DomainError("Holling pair requires a2 d2 - b2 c2 < 0 < a1 d1 - b1 c1");
          }
          if (tp.d1 == 0.0 || tp.d2 == 0.0) {
            throw DomainError("Holling pair requires d1, d2 > 0 so f, g are defined at s = 0");
          }
        } else {
          if (!(tp.S_hat > 0.0)) throw DomainError("saturation pair requires S_hat > 0");
        }
      },
      pair);
}

std::string describe(const TransitionPair& pair) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& tp) {
        using T = std::decay_t<decltype(tp)>;
        if constexpr (std::is_same_v<T, PowerPair>) {
          os << "power(p=" << tp.p << ",q=" << tp.q << ")";
        } else if constexpr (std::is_same_v<T, HollingPair>) {
          os << "holling(" << tp.a1 << ',' << tp.b1 << ',' << tp.c1 << ',' << tp.d1 << ';'
             << tp.a2 << ',' << tp.b2 << ',' << tp.c2 << ',' << tp.d2 << ")";
        } else {
          os << "saturation(S_hat=" << tp.S_hat << ")";
        }
      },
      pair);
  return os.str();
}

}  // namespace fastlim
