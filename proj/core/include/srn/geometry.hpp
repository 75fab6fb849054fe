#pragma once
// Super-critical Reissner-Nordstrom metric functions and the tortoise
// coordinate R(r), dR/dr = 1/A^2, normalized so that R(0) = 0.

#include <stdexcept>
#include <utility>

namespace srn {

struct MetricParams {
    double Q;  // source charge
    double M;  // source mass
    double q;  // test particle charge
    double m;  // test particle mass

    MetricParams(double Q_, double M_, double q_, double m_);
};

// A^2(r) = 1 - 2M/r + Q^2/r^2
double metric_factor(double r, const MetricParams& p);

class TortoiseMap {
  public:
    explicit TortoiseMap(const MetricParams& p);

    double tortoise(double r) const;         // R(r), R(0) = 0
    double inverse(double R) const;          // r(R) by bracketed bisection + Newton
    double constant() const { return C_; }   // additive constant of the closed form

    const MetricParams& params() const { return p_; }

    // (lim R^{-1/3} r(R), lim r^2 A^2) estimated from a decreasing R sequence
    // with Richardson extrapolation.
    std::pair<double, double> asymptotics() const;

  private:
    MetricParams p_;
    double C_;

    double closed_form(double r) const;  // antiderivative, no constant
    double series(double r) const;       // small-r expansion of R(r)
    bool series_ok(double r) const;
};

}  // namespace srn
