#include "srn/geometry.hpp"

#include <cmath>
#include <limits>

namespace srn {

MetricParams::MetricParams(double Q_, double M_, double q_, double m_)
    : Q(Q_), M(M_), q(q_), m(m_) {
    if (M < 0.0) throw std::invalid_argument("MetricParams: M must be >= 0");
    if (m < 0.0) throw std::invalid_argument("MetricParams: m must be >= 0");
    if (!(std::fabs(Q) > M))
        throw std::invalid_argument("MetricParams: need |Q| > M (super-critical)");
}

double metric_factor(double r, const MetricParams& p) {
    if (!(r > 0.0)) throw std::domain_error("metric_factor: r must be > 0");
    return 1.0 - 2.0 * p.M / r + p.Q * p.Q / (r * r);
}

TortoiseMap::TortoiseMap(const MetricParams& p) : p_(p), C_(0.0) {
    // Fix the constant by R(0) = 0.  The closed form stays finite at r = 0.
    C_ = -closed_form(0.0);
}

double TortoiseMap::closed_form(double r) const {
    const double M = p_.M, Q = p_.Q;
    const double s = std::sqrt(Q * Q - M * M);
    return r + M * std::log((r * r - 2.0 * M * r + Q * Q) / (Q * Q)) +
           (2.0 * M * M - Q * Q) / s * std::atan((r - M) / s);
}

bool TortoiseMap::series_ok(double r) const {
    const double Q2 = p_.Q * p_.Q;
    return std::fabs(2.0 * p_.M * r / Q2) + r * r / Q2 < 0.2;
}

double TortoiseMap::series(double r) const {
    // 1/A^2 = (r^2/Q^2) sum d_n r^n,  d_n = (2M/Q^2) d_{n-1} - (1/Q^2) d_{n-2};
    // integrate term by term.
    const double Q2 = p_.Q * p_.Q;
    const double a = 2.0 * p_.M / Q2, b = 1.0 / Q2;
    double dnm1 = 1.0, dn = a;
    double acc = dnm1 * r * r * r / 3.0;
    double rp = r * r * r * r;
    for (int n = 1; n < 24; ++n) {
        acc += dn * rp / (n + 3);
        rp *= r;
        const double next = a * dn - b * dnm1;
        dnm1 = dn;
        dn = next;
    }
    return acc / Q2;
}

double TortoiseMap::tortoise(double r) const {
    if (r < 0.0) throw std::domain_error("tortoise: r must be >= 0");
    if (r == 0.0) return 0.0;
    // The closed form cancels catastrophically as r -> 0 (R ~ r^3); switch to
    // the series well inside its convergence region.
    if (series_ok(r) && r < 0.05 * std::fabs(p_.Q)) return series(r);
    return closed_form(r) + C_;
}

double TortoiseMap::inverse(double R) const {
    if (R < 0.0) throw std::domain_error("inverse_tortoise: R must be >= 0");
    if (R == 0.0) return 0.0;
    double lo = 0.0, hi = std::max(1.0, std::fabs(p_.Q));
    while (tortoise(hi) < R) hi *= 2.0;
    // leading-order seed r ~ (3 Q^2 R)^{1/3} capped into the bracket
    double r = std::cbrt(3.0 * p_.Q * p_.Q * R);
    if (r <= lo || r >= hi) r = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = tortoise(r) - R;
        if (f > 0.0) hi = r; else lo = r;
        const double step = f * metric_factor(r, p_);  // Newton: dR/dr = 1/A^2
        double rn = r - step;
        if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
        const double tol = 1e-15 * std::max(1.0, r);
        if (std::fabs(rn - r) <= tol) return rn;
        r = rn;
    }
    if (hi - lo > 1e-9 * std::max(1.0, hi))
        throw std::runtime_error("inverse_tortoise: no convergence");
    return r;
}

std::pair<double, double> TortoiseMap::asymptotics() const {
    // Evaluate at R_k = R0 4^{-k} and Richardson-extrapolate; the corrections
    // form a power series in R^{1/3}, so eliminate several orders.
    constexpr int n = 8;
    double t1[n], t2[n];
    double R = 1e-6;
    for (int k = 0; k < n; ++k, R *= 0.25) {
        const double r = inverse(R);
        t1[k] = r / std::cbrt(R);
        t2[k] = r * r * metric_factor(r, p_);
    }
    const double w = std::cbrt(4.0);
    double wj = 1.0;
    for (int j = 1; j < 4; ++j) {
        wj *= w;  // stage j removes the R^{j/3} term
        for (int k = n - 1; k >= j; --k) {
            t1[k] = (wj * t1[k] - t1[k - 1]) / (wj - 1.0);
            t2[k] = (wj * t2[k] - t2[k - 1]) / (wj - 1.0);
        }
    }
    return {t1[n - 1], t2[n - 1]};
}

}  // namespace srn
