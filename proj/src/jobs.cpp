#include "vtbem/jobs.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "vtbem/fieldeval.hpp"
#include "vtbem/oracles.hpp"
#include "vtbem/solver_dd.hpp"

namespace vtbem {

namespace {

Complex robin_of(const JobConfig& cfg, double k) {
    if (cfg.robin_incoming) return Complex(0.0, k);
    if (cfg.robin_outgoing) return Complex(0.0, -k);
    return cfg.robin_a;
}

Vec read_node_file(const std::string& path, int n) {
    std::ifstream f(path);
    if (!f) fail(Err::IoError, "cannot open bc data file " + path);
    Vec v(n);
    for (int i = 0; i < n; ++i) {
        double re, im;
        char comma;
        if (!(f >> re >> comma >> im)) fail(Err::IoError, "bc data file " + path + " is too short");
        v(i) = Complex(re, im);
    }
    return v;
}

// boundary data for one problem per the component bc specs
BoundaryData make_data(const Problem& prob, const std::vector<JobConfig::BcSpec>& star_bc,
                       const std::vector<JobConfig::BcSpec>& circ_bc) {
    BoundaryData data = zero_data(prob);
    double k = prob.params.k;
    // admissibility of every point source is judged against the whole
    // boundary; the per-component fills below then skip the check
    for (const auto& bc : star_bc)
        if (bc.type == JobConfig::BcSpec::Type::PointSource && !source_admissible(prob, bc.source))
            fail(Err::SourceInsideDomain, "point source lies inside the solution region");
    for (const auto& bc : circ_bc)
        if (bc.type == JobConfig::BcSpec::Type::PointSource && !source_admissible(prob, bc.source))
            fail(Err::SourceInsideDomain, "point source lies inside the solution region");
    auto fill = [&](const BoundaryComponent& comp, const JobConfig::BcSpec& bc, Vec& out, bool is_star,
                    size_t star_idx) {
        switch (bc.type) {
            case JobConfig::BcSpec::Type::Zero: return;
            case JobConfig::BcSpec::Type::Constant:
                out.setConstant(bc.value);
                return;
            case JobConfig::BcSpec::Type::File:
                out = read_node_file(bc.path, comp.nnodes());
                return;
            case JobConfig::BcSpec::Type::PointSource: {
                // manufactured data consistent with u* = G(., x0)
                Problem one;
                one.params = prob.params;
                if (is_star) {
                    one.stars.push_back(comp);
                    auto d = manufactured_data(one, bc.source, false);
                    out = d.f[0];
                    data.h_plus[star_idx] = d.h_plus[0];
                    data.h_minus[star_idx] = d.h_minus[0];
                } else {
                    one.circs.push_back(comp);
                    one.robin = {prob.robin.empty() ? prob.params.robin_a : prob.robin[0]};
                    // reuse the actual robin coefficient of this component
                    for (size_t j = 0; j < prob.circs.size(); ++j)
                        if (&prob.circs[j] == &comp) one.robin[0] = prob.robin[j];
                    auto d = manufactured_data(one, bc.source, false);
                    out = d.g[0];
                }
                return;
            }
        }
        (void)k;
    };
    size_t si = 0, ci = 0;
    for (size_t i = 0; i < prob.stars.size(); ++i, ++si) fill(prob.stars[i], star_bc[si], data.f[i], true, i);
    for (size_t j = 0; j < prob.circs.size(); ++j, ++ci) fill(prob.circs[j], circ_bc[ci], data.g[j], false, 0);
    return data;
}

void write_density_csv(const std::string& path, const BoundaryComponent& comp, const Vec& dens) {
    std::ofstream f(path);
    if (!f) fail(Err::IoError, "cannot open " + path);
    f << "s,re,im\n";
    char line[128];
    int i = 0;
    for (const auto& p : comp.panels)
        for (int q = 0; q < p.order; ++q, ++i) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p.s[size_t(q)], dens(i).real(),
                          dens(i).imag());
            f << line;
        }
}

void write_field_csv(const std::string& path, const FieldSolution& sol) {
    std::ofstream f(path);
    if (!f) fail(Err::IoError, "cannot open " + path);
    f << "x,y,re_u,im_u,flag\n";
    char line[160];
    for (int i = 0; i < sol.u.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%d\n", sol.targets[size_t(i)].x,
                      sol.targets[size_t(i)].y, sol.u(i).real(), sol.u(i).imag(),
                      int(sol.too_close[size_t(i)]));
        f << line;
    }
}

std::vector<Vec2> grid_targets(const JobConfig& cfg) {
    std::vector<Vec2> tg;
    if (!cfg.has_targets) return tg;
    for (int j = 0; j < cfg.ny; ++j)
        for (int i = 0; i < cfg.nx; ++i) {
            double fx = cfg.nx > 1 ? double(i) / (cfg.nx - 1) : 0.5;
            double fy = cfg.ny > 1 ? double(j) / (cfg.ny - 1) : 0.5;
            tg.push_back({cfg.bounds[0] + fx * (cfg.bounds[2] - cfg.bounds[0]),
                          cfg.bounds[1] + fy * (cfg.bounds[3] - cfg.bounds[1])});
        }
    return tg;
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (name.empty() || name.front() == '/') return name;
    return dir + "/" + name;
}

} // namespace

JobSummary run_job(const JobConfig& cfg, const JobOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    JobSummary sum;
    double k = 2.0 * PI / cfg.physics.wavelength;
    Complex a_default = robin_of(cfg, k);
    double max_len = cfg.physics.wavelength / cfg.panels_per_wavelength;

    auto build_problem = [&](const std::vector<int>& comp_ids) {
        Problem prob;
        prob.params = make_params(cfg.physics.wavelength, cfg.physics.deltaV, cfg.physics.deltaT,
                                  cfg.physics.gamma, a_default);
        prob.quad.tol = opt.tol;
        prob.quad.nthreads = opt.threads;
        std::vector<JobConfig::BcSpec> star_bc, circ_bc;
        for (int id : comp_ids) {
            const auto& c = cfg.components[size_t(id)];
            if (c.is_star) {
                prob.stars.push_back(panelize(c.curve, CompKind::Star, max_len, cfg.order));
                star_bc.push_back(c.bc);
            } else {
                prob.circs.push_back(panelize(c.curve, CompKind::Circ, max_len, cfg.order));
                prob.robin.push_back(c.robin_override.value_or(a_default));
                circ_bc.push_back(c.bc);
            }
        }
        return std::tuple(std::move(prob), std::move(star_bc), std::move(circ_bc));
    };

    std::vector<Vec2> targets = grid_targets(cfg);
    FieldSolution field;
    field.u = Vec::Zero(int(targets.size()));
    field.targets = targets;
    field.too_close.assign(targets.size(), 0);

    std::ofstream diag(join_path(opt.output_dir, cfg.diagnostics_path));
    if (!diag) fail(Err::IoError, "cannot open diagnostics file");

    if (cfg.mode() == JobConfig::Mode::CaseI) {
        std::vector<int> ids(cfg.components.size());
        for (size_t i = 0; i < ids.size(); ++i) ids[i] = int(i);
        auto [prob, star_bc, circ_bc] = build_problem(ids);
        auto sys = build_case1(prob);
        auto sgs = star_greens(prob);
        auto data = make_data(prob, star_bc, circ_bc);
        auto res = dense_solve(sys, build_rhs(sys, data, sgs));
        sum.unknowns = sys.n;
        sum.cond_estimate = res.cond1;
        sum.solve_residual = res.backward_error;
        auto parts = split_solution(sys, res.x);
        if (!targets.empty()) field = eval_field(prob, {parts[0]}, {}, targets, opt.threads);
        write_density_csv(join_path(opt.output_dir, "density_star_0.csv"), prob.stars[0], parts[0]);
    } else if (cfg.mode() == JobConfig::Mode::CaseII) {
        std::vector<int> ids(cfg.components.size());
        for (size_t i = 0; i < ids.size(); ++i) ids[i] = int(i);
        auto [prob, star_bc, circ_bc] = build_problem(ids);
        prepare_case2_geometry(prob, cfg.corner_depth, cfg.fin_length, cfg.circ_corner_depth);
        auto sys = build_blocks_case2(prob);
        auto sgs = star_greens(prob);
        auto data = make_data(prob, star_bc, circ_bc);
        auto res = dense_solve(sys, build_rhs(sys, data, sgs));
        sum.unknowns = sys.n;
        sum.cond_estimate = res.cond1;
        sum.solve_residual = res.backward_error;
        auto parts = split_solution(sys, res.x);
        std::vector<Vec> sigma, rho;
        for (size_t p = 0; p < sys.order.size(); ++p)
            (sys.order[p].kind == CompKind::Star ? sigma : rho).push_back(parts[p]);
        if (!targets.empty()) field = eval_field(prob, sigma, rho, targets, opt.threads);
        for (size_t i = 0; i < prob.stars.size(); ++i)
            write_density_csv(join_path(opt.output_dir, "density_star_" + std::to_string(i) + ".csv"),
                              prob.stars[i], sigma[i]);
        for (size_t j = 0; j < prob.circs.size(); ++j)
            write_density_csv(join_path(opt.output_dir, "density_circ_" + std::to_string(j) + ".csv"),
                              prob.circs[j], rho[j]);
    } else {
        // domain decomposition: regions own disjoint component subsets
        std::vector<Region> regions;
        std::vector<std::vector<JobConfig::BcSpec>> star_bcs, circ_bcs;
        for (const auto& rs : cfg.regions) {
            auto [prob, star_bc, circ_bc] = build_problem(rs.components);
            Region reg;
            reg.prob = std::move(prob);
            // interface list: positions of the interface components within the
            // region's circ array
            int ci = 0;
            for (int id : rs.components) {
                if (!cfg.components[size_t(id)].is_star) {
                    for (int iid : rs.interfaces)
                        if (iid == id) reg.interface_circs.push_back(ci);
                    ++ci;
                }
            }
            prepare_case2_geometry(reg.prob, cfg.corner_depth, cfg.fin_length, cfg.circ_corner_depth);
            regions.push_back(std::move(reg));
            star_bcs.push_back(star_bc);
            circ_bcs.push_back(circ_bc);
        }
        std::vector<RegionOps> ops;
        for (auto& reg : regions) ops.push_back(build_region_ops(reg));
        std::vector<BoundaryData> data;
        for (size_t r = 0; r < regions.size(); ++r)
            data.push_back(make_data(regions[r].prob, star_bcs[r], circ_bcs[r]));

        // pairings reference global component ids; translate to local circ idx
        std::vector<InterfacePairing> pairs;
        auto local_circ = [&](int region, int comp_id) {
            int ci = 0;
            for (int id : cfg.regions[size_t(region)].components) {
                if (!cfg.components[size_t(id)].is_star) {
                    if (id == comp_id) return ci;
                    ++ci;
                }
            }
            fail(Err::SchemaError, "pairing references a component outside its region");
        };
        for (const auto& p : cfg.pairings)
            pairs.push_back({p.region_a, local_circ(p.region_a, p.comp_a), p.region_b,
                             local_circ(p.region_b, p.comp_b)});

        auto dd = couple_regions(regions, ops, pairs, data);
        sum.coupling_cond = dd.coupling_cond;
        for (size_t r = 0; r < regions.size(); ++r) {
            sum.unknowns += ops[r].sys_plus.n;
            sum.cond_estimate = std::max(sum.cond_estimate, dd.region_cond[r]);
        }
        if (opt.dump_i2i)
            for (size_t r = 0; r < regions.size(); ++r) {
                write_i2i(join_path(opt.output_dir, "i2i_plus_to_minus_" + std::to_string(r) + ".bin"),
                          ops[r].i2i.plus_to_minus, 0);
                write_i2i(join_path(opt.output_dir, "i2i_minus_to_plus_" + std::to_string(r) + ".bin"),
                          ops[r].i2i.minus_to_plus, 1);
            }

        // targets are evaluated in the region that contains them (nearest
        // boundary wins when ambiguous); here: first region whose bounding box
        // of nodes contains the point, falling back to nearest node
        auto owner = [&](Vec2 x) {
            double best = 1e300;
            size_t rbest = 0;
            for (size_t r = 0; r < regions.size(); ++r) {
                for (const auto& c : regions[r].prob.stars)
                    for (const auto& p : c.panels)
                        for (const auto& v : p.x) {
                            double d = norm(x - v);
                            if (d < best) {
                                best = d;
                                rbest = r;
                            }
                        }
            }
            return rbest;
        };
        for (size_t t = 0; t < targets.size(); ++t) {
            size_t r = owner(targets[t]);
            const auto& parts = dd.densities[r];
            std::vector<Vec> sigma, rho;
            for (size_t p = 0; p < ops[r].sys_plus.order.size(); ++p)
                (ops[r].sys_plus.order[p].kind == CompKind::Star ? sigma : rho).push_back(parts[p]);
            auto one = eval_field(regions[r].prob, sigma, rho, {targets[t]});
            field.u(int(t)) = one.u(0);
            field.too_close[t] = one.too_close[0];
        }
        for (size_t r = 0; r < regions.size(); ++r) {
            const auto& parts = dd.densities[r];
            for (size_t p = 0; p < ops[r].sys_plus.order.size(); ++p) {
                auto ref = ops[r].sys_plus.order[p];
                std::string name = "density_region" + std::to_string(r) + "_" +
                                   (ref.kind == CompKind::Star ? "star_" : "circ_") +
                                   std::to_string(ref.idx) + ".csv";
                const auto& comp = ref.kind == CompKind::Star ? regions[r].prob.stars[size_t(ref.idx)]
                                                              : regions[r].prob.circs[size_t(ref.idx)];
                write_density_csv(join_path(opt.output_dir, name), comp, parts[p]);
            }
        }
    }

    if (!targets.empty()) {
        sum.field_file = join_path(opt.output_dir, cfg.field_path);
        write_field_csv(sum.field_file, field);
    }
    sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    diag << "unknowns: " << sum.unknowns << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", sum.cond_estimate);
    diag << "condition_estimate: " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.3e", sum.solve_residual);
    diag << "solve_residual: " << buf << "\n";
    if (sum.coupling_cond > 0.0) {
        std::snprintf(buf, sizeof buf, "%.3e", sum.coupling_cond);
        diag << "coupling_condition: " << buf << "\n";
    }
    std::snprintf(buf, sizeof buf, "%.2f", sum.wall_seconds);
    diag << "wall_seconds: " << buf << "\n";
    sum.diagnostics_file = join_path(opt.output_dir, cfg.diagnostics_path);
    return sum;
}

} // namespace vtbem
