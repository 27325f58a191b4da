#pragma once

// Continuous-model algebra of the root/toxicity system: parameters,
// transition functions, critical-manifold split and reaction terms.
// Everything here is a pure function of scalars.

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>

#include "fastlim/errors.hpp"

namespace fastlim {

/// Physical and kinetic constants plus the time-scale epsilon.
struct ModelParams {
  double d_R1 = 0.01;    // healthy-root diffusion
  double d_R2 = 0.0021;  // exposed-root diffusion
  double d_S = 0.004;    // toxicity diffusion
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double eta1 = 1.0;
  double eta2 = 1.0;
  double mu = 5.0;
  double rho = 0.2;
  double R_hat = 1.0;
  double epsilon = 1.0;

  /// Throws DomainError unless every field is finite and nonnegative,
  /// epsilon > 0 and d_R2 < d_R1.
  void validate() const;
};

/// f(s) = s^p, g(s) = (1+s)^q with p > 0 > q.
struct PowerPair {
  double p = 1.0;
  double q = -1.0;
};

/// f(s) = (a1 s + b1)/(c1 s + d1), g(s) = (a2 s + b2)/(c2 s + d2).
struct HollingPair {
  double a1 = 1.0, b1 = 0.0, c1 = 0.0, d1 = 1.0;
  double a2 = 0.0, b2 = 1.0, c2 = 1.0, d2 = 1.0;
};

/// f(s) = s, g(s) = (S_hat - s)_+.
struct SaturationPair {
  double S_hat = 1.0;
};

using TransitionPair = std::variant<PowerPair, HollingPair, SaturationPair>;

/// Throws DomainError if the pair's coefficients violate its family's
/// sign constraints.
void validate_pair(const TransitionPair& pair);

std::string describe(const TransitionPair& pair);

inline constexpr double kDefaultManifoldFloor = 1e-12;

template <typename Scalar>
struct TransitionValues {
  Scalar f;
  Scalar g;
  Scalar fprime;
  Scalar gprime;
};

template <typename Scalar>
struct ComponentSplit {
  Scalar xi1;
  Scalar xi2;
};

template <typename Scalar>
struct FastRates {
  Scalar dr1;
  Scalar dr2;
  Scalar ds;
};

namespace detail {

template <typename Scalar>
void require_toxicity(Scalar s) {
  using std::isfinite;
  if (!(s >= Scalar(0)) || !isfinite(s)) {
    throw DomainError("toxicity value must be finite and nonnegative");
  }
}

template <typename Scalar>
Scalar power_derivative(Scalar s, Scalar p) {
  using std::pow;
  if (s == Scalar(0)) {
    if (p == Scalar(1)) return Scalar(1);
    return p > Scalar(1) ? Scalar(0) : std::numeric_limits<Scalar>::infinity();
  }
  return p * pow(s, p - Scalar(1));
}

template <typename Scalar>
Scalar rational(Scalar s, Scalar a, Scalar b, Scalar c, Scalar d) {
  const Scalar den = c * s + d;
  if (den == Scalar(0)) throw DomainError("Holling denominator vanishes");
  return (a * s + b) / den;
}

template <typename Scalar>
Scalar rational_derivative(Scalar s, Scalar a, Scalar b, Scalar c, Scalar d) {
  const Scalar den = c * s + d;
  return (a * d - b * c) / (den * den);
}

}  // namespace detail

/// f, g and their derivatives at s >= 0. At the Saturation kink s = S_hat
/// the right-sided derivative g' = 0 is returned.
template <typename Scalar>
TransitionValues<Scalar> eval_transition(const TransitionPair& pair, Scalar s) {
  detail::require_toxicity(s);
  return std::visit(
      [s](const auto& tp) -> TransitionValues<Scalar> {
        using std::pow;
        using T = std::decay_t<decltype(tp)>;
        if constexpr (std::is_same_v<T, PowerPair>) {
          const Scalar p(tp.p), q(tp.q);
          const Scalar one_s = Scalar(1) + s;
          return {pow(s, p), pow(one_s, q), detail::power_derivative(s, p),
                  q * pow(one_s, q - Scalar(1))};
        } else if constexpr (std::is_same_v<T, HollingPair>) {
          const Scalar a1(tp.a1), b1(tp.b1), c1(tp.c1), d1(tp.d1);
          const Scalar a2(tp.a2), b2(tp.b2), c2(tp.c2), d2(tp.d2);
          return {detail::rational(s, a1, b1, c1, d1), detail::rational(s, a2, b2, c2, d2),
                  detail::rational_derivative(s, a1, b1, c1, d1),
                  detail::rational_derivative(s, a2, b2, c2, d2)};
        } else {
          const Scalar cap(tp.S_hat);
          if (s >= cap) return {s, Scalar(0), Scalar(1), Scalar(0)};
          return {s, cap - s, Scalar(1), Scalar(-1)};
        }
      },
      pair);
}

/// Splits total root density R onto the critical manifold f(s) xi1 = g(s) xi2.
template <typename Scalar>
ComponentSplit<Scalar> xi_split(Scalar R, Scalar s, const TransitionPair& pair,
                                Scalar floor = Scalar(kDefaultManifoldFloor)) {
  const auto tv = eval_transition(pair, s);
  const Scalar sum = tv.f + tv.g;
  if (!(sum >= floor)) throw SingularManifoldError("f(s) + g(s) below manifold floor");
  // g/sum <= 1 in floating point, so xi1 <= R and the complement stays >= 0.
  const Scalar xi1 = R * (tv.g / sum);
  return {xi1, R - xi1};
}

/// a(s) = d_R1 - (d_R1 - d_R2) f/(f+g), the effective diffusion of R.
template <typename Scalar>
Scalar effective_diffusion(Scalar s, const ModelParams& params, const TransitionPair& pair,
                           Scalar floor = Scalar(kDefaultManifoldFloor)) {
  const auto tv = eval_transition(pair, s);
  const Scalar sum = tv.f + tv.g;
  if (!(sum >= floor)) throw SingularManifoldError("f(s) + g(s) below manifold floor");
  const Scalar d1(params.d_R1), d2(params.d_R2);
  return d1 - (d1 - d2) * (tv.f / sum);
}

/// Limiting reaction h(R, s) = sum_i xi_i (gamma_i (R_hat - R) - eta_i).
template <typename Scalar>
Scalar reaction_h(Scalar R, Scalar s, const ModelParams& params, const TransitionPair& pair,
                  Scalar floor = Scalar(kDefaultManifoldFloor)) {
  const auto [xi1, xi2] = xi_split(R, s, pair, floor);
  const Scalar room = Scalar(params.R_hat) - R;
  return Scalar(params.gamma1) * xi1 * room - Scalar(params.eta1) * xi1 +
         Scalar(params.gamma2) * xi2 * room - Scalar(params.eta2) * xi2;
}

/// Toxicity source mu (eta1 xi1 + eta2 xi2) of the limiting system.
template <typename Scalar>
Scalar limit_toxicity_source(Scalar R, Scalar s, const ModelParams& params,
                             const TransitionPair& pair,
                             Scalar floor = Scalar(kDefaultManifoldFloor)) {
  const auto [xi1, xi2] = xi_split(R, s, pair, floor);
  return Scalar(params.mu) * (Scalar(params.eta1) * xi1 + Scalar(params.eta2) * xi2);
}

/// Exchange flux f(s) r1 - g(s) r2, without the 1/epsilon factor.
template <typename Scalar>
Scalar fast_exchange(Scalar r1, Scalar r2, Scalar s, const TransitionPair& pair) {
  const auto tv = eval_transition(pair, s);
  return tv.f * r1 - tv.g * r2;
}

/// Pointwise reaction rates of the epsilon-system (no diffusion).
template <typename Scalar>
FastRates<Scalar> fast_reaction_rhs(Scalar r1, Scalar r2, Scalar s, const ModelParams& params,
                                    const TransitionPair& pair) {
  if (!(params.epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const Scalar w = fast_exchange(r1, r2, s, pair) / Scalar(params.epsilon);
  const Scalar room = Scalar(params.R_hat) - (r1 + r2);
  const Scalar g1(params.gamma1), g2(params.gamma2), e1(params.eta1), e2(params.eta2);
  return {g1 * r1 * room - e1 * r1 - w, g2 * r2 * room - e2 * r2 + w,
          Scalar(params.mu) * (e1 * r1 + e2 * r2) - Scalar(params.rho) * s};
}

}  // namespace fastlim
