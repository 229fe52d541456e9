#include "vtbem/fieldeval.hpp"

#include <cmath>
#include <thread>

#include "vtbem/special.hpp"

namespace vtbem {

namespace {

double smallest_panel(const Problem& prob) {
    double m = 1e300;
    for (const auto& c : prob.stars)
        for (const auto& p : c.panels) m = std::min(m, p.len);
    for (const auto& c : prob.circs)
        for (const auto& p : c.panels) m = std::min(m, p.len);
    return m;
}

} // namespace

FieldSolution eval_field(const Problem& prob, const std::vector<Vec>& sigma,
                         const std::vector<Vec>& rho, const std::vector<Vec2>& targets, int nthreads) {
    if (sigma.size() != prob.stars.size() || rho.size() != prob.circs.size())
        fail(Err::DomainError, "density vectors do not match the component lists");
    double k = prob.params.k;
    Complex inv_c1 = 1.0 / prob.params.c1;
    double guard = smallest_panel(prob);

    FieldSolution out;
    out.targets = targets;
    out.u = Vec::Zero(int(targets.size()));
    out.too_close.assign(targets.size(), 0);

    auto accumulate_panel = [&](const Panel& p, const Vec& dens, int node0, double parity, bool star,
                                const Vec2& x, Complex& acc, double& mindist) {
        for (int q = 0; q < p.order; ++q) {
            Vec2 d = x - p.x[size_t(q)];
            double r2v = norm2(d);
            double r = std::sqrt(r2v);
            mindist = std::min(mindist, r);
            if (r == 0.0) continue; // exactly on a node: flagged below, skip the singular term
            Hankel01 h = hankel01(k * r);
            Complex val;
            if (star) {
                Complex Dk = 0.25 * I * k * h.h1 * (dot(p.nrm[size_t(q)], d) / r);
                Complex Sk = 0.25 * I * h.h0;
                val = Dk - inv_c1 * Sk;
            } else {
                val = 0.25 * I * h.h0;
            }
            acc += parity * p.w[size_t(q)] * val * dens(node0 + q);
        }
    };

    auto eval_one = [&](size_t ti) {
        const Vec2& x = targets[ti];
        Complex acc = 0.0;
        double mindist = 1e300;
        for (size_t i = 0; i < prob.stars.size(); ++i) {
            const auto& c = prob.stars[i];
            for (int ip = 0; ip < c.npanels(); ++ip)
                accumulate_panel(c.panels[size_t(ip)], sigma[i], ip * c.order, 1.0, true, x, acc, mindist);
            for (const auto& fin : c.fins)
                for (size_t fp = 0; fp < fin.panels.size(); ++fp)
                    accumulate_panel(fin.panels[fp], sigma[i], fin.base_panel[fp] * c.order, fin.parity,
                                     true, x, acc, mindist);
        }
        for (size_t j = 0; j < prob.circs.size(); ++j) {
            const auto& c = prob.circs[j];
            for (int ip = 0; ip < c.npanels(); ++ip)
                accumulate_panel(c.panels[size_t(ip)], rho[j], ip * c.order, 1.0, false, x, acc, mindist);
            for (const auto& fin : c.fins)
                for (size_t fp = 0; fp < fin.panels.size(); ++fp)
                    accumulate_panel(fin.panels[fp], rho[j], fin.base_panel[fp] * c.order, fin.parity,
                                     false, x, acc, mindist);
        }
        out.u(int(ti)) = acc;
        out.too_close[ti] = (mindist < guard) ? 1 : 0;
    };

    int nth = std::max(1, nthreads);
    if (nth == 1 || targets.size() < 2 * size_t(nth)) {
        for (size_t ti = 0; ti < targets.size(); ++ti) eval_one(ti);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (targets.size() + size_t(nth) - 1) / size_t(nth);
        for (int th = 0; th < nth; ++th) {
            size_t lo = size_t(th) * chunk, hi = std::min(targets.size(), lo + chunk);
            if (lo < hi)
                pool.emplace_back([&, lo, hi] {
                    for (size_t ti = lo; ti < hi; ++ti) eval_one(ti);
                });
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

} // namespace vtbem
