#include "vtbem/legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace vtbem {

namespace {

// P_n(x) and derivative by the stable three-term recurrence
void legendre_eval(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

LegendreRule build(int n) {
    LegendreRule r;
    r.order = n;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess + Newton
        double x = std::cos(PI * (i + 0.75) / (n + 0.5));
        double p, dp;
        for (int it = 0; it < 60; ++it) {
            legendre_eval(n, x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre_eval(n, x, p, dp);
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    r.bary.resize(n);
    for (int i = 0; i < n; ++i) {
        double w = 1.0;
        for (int j = 0; j < n; ++j)
            if (j != i) w *= (r.nodes[i] - r.nodes[j]);
        r.bary[i] = 1.0 / w;
    }
    r.diff.assign(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = r.bary[j] / (r.bary[i] * (r.nodes[i] - r.nodes[j]));
            r.diff[size_t(i) * n + j] = d;
            rowsum += d;
        }
        r.diff[size_t(i) * n + i] = -rowsum; // rows annihilate constants
    }
    return r;
}

} // namespace

std::vector<double> LegendreRule::interp_row(double xi) const {
    std::vector<double> row(order, 0.0);
    double denom = 0.0;
    for (int j = 0; j < order; ++j) {
        double d = xi - nodes[j];
        if (std::abs(d) < 1e-14) {
            row.assign(order, 0.0);
            row[j] = 1.0;
            return row;
        }
        row[j] = bary[j] / d;
        denom += row[j];
    }
    for (auto& v : row) v /= denom;
    return row;
}

double LegendreRule::interp(const std::vector<double>& values, double xi) const {
    auto row = interp_row(xi);
    double s = 0.0;
    for (int j = 0; j < order; ++j) s += row[j] * values[j];
    return s;
}

std::vector<double> LegendreRule::to_coefficients(const std::vector<double>& values) const {
    int n = order;
    std::vector<double> coef(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int q = 0; q < n; ++q) {
            double p, dp;
            legendre_eval(k, nodes[q], p, dp);
            s += weights[q] * p * values[q];
        }
        coef[k] = s * (2.0 * k + 1.0) / 2.0;
    }
    return coef;
}

double LegendreRule::eval_antiderivative(const std::vector<double>& coef, double xi) {
    // int_{-1}^{x} P_k = (P_{k+1}(x) - P_{k-1}(x)) / (2k+1), int P_0 = x + 1
    double acc = coef.empty() ? 0.0 : coef[0] * (xi + 1.0);
    for (size_t k = 1; k < coef.size(); ++k) {
        double pkp, pkm, dp;
        legendre_eval(int(k) + 1, xi, pkp, dp);
        legendre_eval(int(k) - 1, xi, pkm, dp);
        acc += coef[k] * (pkp - pkm) / (2.0 * double(k) + 1.0);
    }
    return acc;
}

std::vector<double> LegendreRule::antiderivative_at_nodes(const std::vector<double>& values) const {
    auto coef = to_coefficients(values);
    std::vector<double> out(order, 0.0);
    for (int q = 0; q < order; ++q) out[q] = eval_antiderivative(coef, nodes[q]);
    return out;
}

double LegendreRule::integrate(const std::vector<double>& values) const {
    double s = 0.0;
    for (int q = 0; q < order; ++q) s += weights[q] * values[q];
    return s;
}

const LegendreRule& legendre_rule(int order) {
    static std::map<int, LegendreRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build(order)).first;
    return it->second;
}

} // namespace vtbem
