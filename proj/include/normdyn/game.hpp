#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "normdyn/errors.hpp"

namespace normdyn {

// The two pure strategies of the coordination game. Canonical order: A before B.
enum class Strategy : std::uint8_t { A = 0, B = 1 };

inline char to_char(Strategy s) { return s == Strategy::A ? 'A' : 'B'; }

inline Strategy flipped(Strategy s) { return s == Strategy::A ? Strategy::B : Strategy::A; }

// Symmetric 2x2 coordination game:
//   value(A,A) = a   value(A,B) = c
//   value(B,A) = d   value(B,B) = b
// with a > d, b > c (strict coordination) and a - d > b - c (A strictly risk
// dominant). c = d makes the induced dynamics an exact potential game; c != d
// is accepted only with the explicit non-potential override and shuts off the
// Gibbs-based exact oracles.
class PayoffMatrix {
 public:
  PayoffMatrix(double a, double b, double c, double d, bool allow_non_potential = false)
      : a_(a), b_(b), c_(c), d_(d) {
    if (!(a > d))
      throw ValidationError("payoff requires a > d (coordination on A)");
    if (!(b > c))
      throw ValidationError("payoff requires b > c (coordination on B)");
    if (!(a - d > b - c))
      throw ValidationError("payoff requires a - d > b - c (A strictly risk dominant)");
    if (c != d && !allow_non_potential)
      throw ValidationError("payoff has c != d; pass the non-potential override to accept");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  // Payoff to `mine` against `other`.
  double value(Strategy mine, Strategy other) const {
    if (mine == Strategy::A) return other == Strategy::A ? a_ : c_;
    return other == Strategy::A ? d_ : b_;
  }

  bool potential_game() const { return c_ == d_; }

  // Critical contagion threshold r* = (b-c) / (a-d+b-c), in (0, 1/2).
  double r_star() const { return (b_ - c_) / (a_ - d_ + b_ - c_); }

 private:
  double a_, b_, c_, d_;
};

inline double epsilon_from_beta(double beta) { return std::exp(-beta); }

inline double beta_from_epsilon(double eps) {
  if (!(eps > 0.0) || eps > 1.0)
    throw ValidationError("epsilon must lie in (0, 1]");
  return -std::log(eps);
}

// Noise scale of the log-linear response. beta may be +infinity (symbolic
// best-response mode); epsilon = exp(-beta) is the derived perturbation scale.
struct ModelParams {
  double beta = 1.0;

  static ModelParams from_beta(double beta) {
    if (std::isnan(beta) || beta < 0.0)
      throw ValidationError("beta must be >= 0 (or +inf)");
    return ModelParams{beta};
  }

  static ModelParams from_epsilon(double eps) { return from_beta(beta_from_epsilon(eps)); }

  double epsilon() const { return infinite() ? 0.0 : std::exp(-beta); }
  bool infinite() const { return std::isinf(beta); }
};

// Exact oracles (chain builds, Gibbs weights, fitted exponents) only accept
// beta up to this bound; larger values are simulation-only.
inline constexpr double kMaxExactBeta = 50.0;

}  // namespace normdyn
