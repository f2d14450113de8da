#include "maxkin/experiment.hpp"
#include "maxkin/kernels.hpp"
#include "maxkin/special_functions.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace maxkin {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

const char* method_name(EvalMethod m) {
    return m == EvalMethod::ClosedForm ? "closed_form" : "quadrature";
}

} // namespace

int cmd_kernels(const ExperimentConfig& cfg, const KeyValueConfig& raw) {
    const RestitutionLaw law = cfg.build_law();
    std::vector<std::array<std::string, 4>> rows;

    if (cfg.model == ModelKind::Granular3D) {
        std::vector<double> alphas = cfg.alpha_grid;
        if (alphas.empty())
            for (int i = 0; i <= 40; ++i) alphas.push_back(0.1 * i);
        for (double a : alphas) {
            const auto ev = kernel_A(a, cfg.e, law);
            rows.push_back({"A(" + fmt(a) + ")", fmt(ev.value), method_name(ev.method),
                            fmt(ev.est_abs_error)});
            if (a > 0.0) {
                rows.push_back({"C(" + fmt(a) + ")", fmt(1.0 - ev.value), method_name(ev.method),
                                fmt(ev.est_abs_error)});
            }
        }
        const double z = zeta_mean(cfg.e, law);
        rows.push_back({"zeta_mean", fmt(z), "closed_form", "0"});
    } else {
        const TradeRule1D rule(cfg.e, law, cfg.eta_on_keep_share);
        std::vector<double> ss = cfg.s_grid;
        if (ss.empty())
            for (int i = 0; i <= 40; ++i) ss.push_back(1.0 + 0.1 * i);
        for (double s : ss) {
            const auto ev = kernel_S(s, rule);
            rows.push_back(
                {"S(" + fmt(s) + ")", fmt(ev.value), method_name(ev.method), fmt(ev.est_abs_error)});
        }
        const auto pareto = pareto_index(rule, ss.back());
        rows.push_back({"s_star", pareto.s_star ? fmt(*pareto.s_star) : "absent", "bisection",
                        pareto.s_star ? "1e-9" : ""});
    }

    write_kernels_csv(cfg.out_dir / "kernels.csv", rows);
    write_sidecar(cfg.out_dir, raw, cfg.seed);
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const KeyValueConfig& raw) {
    auto records = run_replicas(cfg, cfg.replicas);

    std::vector<MomentTrace> traces_a, traces_b;
    for (auto& r : records) {
        traces_a.push_back(r.trace_a);
        traces_b.push_back(r.trace_b);
    }
    write_moments_csv(cfg.out_dir / "moments_a.csv", aggregate_traces(traces_a));
    write_moments_csv(cfg.out_dir / "moments_b.csv", aggregate_traces(traces_b));

    // metrics: replica-averaged w2, ds from pooled (averaged) CFs
    MetricReport rep;
    rep.times = records.front().metrics.times;
    rep.w2.assign(rep.times.size(), 0.0);
    for (const auto& r : records)
        for (std::size_t i = 0; i < rep.times.size(); ++i) rep.w2[i] += r.metrics.w2[i];
    for (auto& v : rep.w2) v /= static_cast<double>(records.size());
    if (!cfg.ds_orders.empty()) {
        for (std::size_t i = 0; i < rep.times.size(); ++i) {
            std::vector<EmpiricalCF> cfa, cfb;
            for (const auto& r : records) {
                cfa.push_back(r.cf_a[i]);
                cfb.push_back(r.cf_b[i]);
            }
            const auto fa = average_cf(cfa);
            const auto fb = average_cf(cfb);
            for (double s : cfg.ds_orders) rep.ds[s].push_back(ds_metric(fa, fb, s));
        }
    }

    // rate fits over the recorded window, skipping the first quarter as
    // transient; best effort (short traces or zero distances are left unfitted)
    const double t0 = cfg.t_end * 0.25, t1 = cfg.t_end;
    auto try_fit = [&](const std::string& name, const std::vector<double>& series) {
        for (double v : series)
            if (!(v > 0.0)) return;
        try {
            const auto fit = fit_exponential_rate(rep.times, series, t0, t1);
            rep.fitted_rates[name] = {fit.rate, fit.r2};
        } catch (const std::invalid_argument&) {
        }
    };
    for (const auto& [s, series] : rep.ds) try_fit("ds_" + fmt(s), series);
    try_fit("w2", rep.w2);
    write_metrics_csv(cfg.out_dir / "metrics.csv", rep);

    // summary: targets from the kernel module next to the fitted rates
    std::vector<std::pair<std::string, std::string>> summary;
    const RestitutionLaw law = cfg.build_law();
    if (cfg.model == ModelKind::Economy1D) {
        const TradeRule1D rule(cfg.e, law, cfg.eta_on_keep_share);
        for (double s : {2.0, 3.0, 4.0})
            summary.emplace_back("S_" + fmt(s), fmt(kernel_S(s, rule).value));
    } else {
        summary.emplace_back("zeta_mean", fmt(zeta_mean(cfg.e, law)));
        summary.emplace_back("C_2", fmt(contraction_rate_C(2.0, cfg.e, law)));
    }
    for (const auto& [name, fit] : rep.fitted_rates) {
        summary.emplace_back("rate_" + name, fmt(fit.first));
        summary.emplace_back("r2_" + name, fmt(fit.second));
    }
    // temperature drift across replicas (martingale diagnostic)
    {
        std::vector<MomentTrace> ts = traces_a;
        double first = 0.0, last = 0.0, var_last = 0.0;
        for (const auto& t : ts) {
            first += t.temperature.front();
            last += t.temperature.back();
        }
        first /= static_cast<double>(ts.size());
        last /= static_cast<double>(ts.size());
        for (const auto& t : ts)
            var_last += (t.temperature.back() - last) * (t.temperature.back() - last);
        const double se = ts.size() > 1 ? std::sqrt(var_last / (static_cast<double>(ts.size()) - 1.0) /
                                                    static_cast<double>(ts.size()))
                                        : 0.0;
        summary.emplace_back("temperature_initial", fmt(first));
        summary.emplace_back("temperature_final", fmt(last));
        summary.emplace_back("temperature_final_stderr", fmt(se));
        if (cfg.model == ModelKind::Granular3D && law.conservative() && ts.size() > 1 &&
            std::fabs(last - first) > 4.0 * se + 1e-12) {
            write_summary(cfg.out_dir / "summary.txt", summary);
            write_sidecar(cfg.out_dir, raw, cfg.seed);
            throw InvariantBreach("conservative run drifted in temperature beyond 4 standard errors");
        }
    }
    write_summary(cfg.out_dir / "summary.txt", summary);
    write_sidecar(cfg.out_dir, raw, cfg.seed);
    return 0;
}

int cmd_steady(const ExperimentConfig& cfg, const KeyValueConfig& raw) {
    if (cfg.model != ModelKind::Granular3D)
        throw ConfigError("steady: only the granular model has the radial Fourier steady state");
    const RestitutionLaw law = cfg.build_law();

    const auto condd = condd_check(cfg.e, law, cfg.condd_deltas);
    {
        std::vector<double> d, s;
        for (const auto& e : condd.entries) {
            d.push_back(e.delta);
            s.push_back(e.sum());
        }
        write_profile_csv(cfg.out_dir / "condd.csv", d, s, "delta", "p_a_plus_p_b");
    }
    std::vector<std::pair<std::string, std::string>> summary;
    summary.emplace_back("condd_b_degenerate_mass", fmt(condd.b_degenerate_mass));
    summary.emplace_back("condd_flagged", condd.flagged ? "true" : "false");
    if (condd.flagged) {
        summary.emplace_back("status", "flagged: law places positive mass on etilde = 1, the "
                                       "angular factor b can vanish and the lower-envelope "
                                       "construction fails; solve skipped");
        write_summary(cfg.out_dir / "summary.txt", summary);
        write_sidecar(cfg.out_dir, raw, cfg.seed);
        return 0;
    }

    SteadyStateResult sol;
    try {
        sol = solve_steady_state(build_ab_kernel(cfg.e, law, cfg.steady.quadrature_nodes),
                                 cfg.steady);
    } catch (const std::runtime_error& ex) {
        throw NonConvergence(ex.what());
    }
    write_profile_csv(cfg.out_dir / "psi.csv", sol.profile.xgrid, sol.profile.psi, "x", "psi");
    summary.emplace_back("iterations", std::to_string(sol.iterations));
    summary.emplace_back("final_change", fmt(sol.final_change));
    summary.emplace_back("raw_second_moment", fmt(sol.raw_second_moment));
    summary.emplace_back("argument_scale", fmt(sol.profile.argument_scale));
    summary.emplace_back("max_monotonicity_violation", fmt(sol.max_monotonicity_violation));
    summary.emplace_back("psi_nonincreasing",
                         sol.profile.is_nonincreasing(1e-10) ? "true" : "false");

    const auto gev = gevrey_check(sol.profile, cfg.gevrey_R);
    summary.emplace_back("gevrey_feasible", gev.feasible ? "true" : "false");
    summary.emplace_back("gevrey_kappa", fmt(gev.largest.kappa));
    summary.emplace_back("gevrey_mu", fmt(gev.largest.mu));
    summary.emplace_back("gevrey_R", fmt(cfg.gevrey_R));
    {
        std::vector<double> ks{gev.largest.kappa}, ms{gev.largest.mu};
        write_profile_csv(cfg.out_dir / "gevrey.csv", ks, ms, "kappa", "mu");
    }

    std::vector<double> vgrid;
    for (int i = 1; i <= 600; ++i) vgrid.push_back(6.0 * i / 600.0);
    const auto dens = invert_radial(sol.profile, vgrid);
    write_profile_csv(cfg.out_dir / "density.csv", dens.v, dens.f, "v", "f");
    summary.emplace_back("density_mass", fmt(dens.mass));
    summary.emplace_back("density_second_moment", fmt(dens.second_moment));

    // overpopulation diagnostic: ratio to the Maxwellian of the same energy
    {
        std::vector<double> ratio(dens.v.size());
        const double pref = std::pow(2.0 * std::acos(-1.0) / 3.0, -1.5);
        for (std::size_t i = 0; i < dens.v.size(); ++i) {
            const double maxw = pref * std::exp(-1.5 * dens.v[i] * dens.v[i]);
            ratio[i] = dens.f[i] / maxw;
        }
        write_profile_csv(cfg.out_dir / "overpopulation.csv", dens.v, ratio, "v",
                          "f_over_maxwellian");
        summary.emplace_back("overpopulation_at_v3", fmt(ratio[std::min<std::size_t>(
                                                        ratio.size() - 1, 299)]));
    }

    // Hill-style tail diagnostic on samples of the inverted profile is noisy;
    // report the direct log-slope of the density tail instead
    {
        const std::size_t i1 = dens.v.size() * 2 / 3, i2 = dens.v.size() - 1;
        if (dens.f[i1] > 0.0 && dens.f[i2] > 0.0) {
            const double slope = (std::log(dens.f[i2]) - std::log(dens.f[i1])) /
                                 (std::log(dens.v[i2]) - std::log(dens.v[i1]));
            summary.emplace_back("density_tail_log_slope", fmt(slope));
        }
    }

    write_summary(cfg.out_dir / "summary.txt", summary);
    write_sidecar(cfg.out_dir, raw, cfg.seed);
    return 0;
}

int cmd_metrics(const ExperimentConfig& cfg, const KeyValueConfig& raw) {
    // distances between two sample files (one value per line)
    const std::string fa = raw.get("metrics.samples_a");
    const std::string fb = raw.get("metrics.samples_b");
    auto read_samples = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open sample file: " + path);
        std::vector<double> out;
        double v;
        while (in >> v) out.push_back(v);
        if (out.empty()) throw ConfigError("no samples in: " + path);
        return out;
    };
    const auto a = read_samples(fa);
    const auto b = read_samples(fb);
    std::vector<std::pair<std::string, std::string>> summary;
    summary.emplace_back("w2", fmt(w2_1d(a, b)));
    const auto grid = geometric_grid(cfg.kmin, cfg.kmax, cfg.k_points);
    CFOptions cfo;
    cfo.standardize = cfg.standardize_cf;
    const auto ca = estimate_cf_1d(a, grid, cfo);
    const auto cb = estimate_cf_1d(b, grid, cfo);
    for (double s : cfg.ds_orders.empty() ? std::vector<double>{2.0} : cfg.ds_orders)
        summary.emplace_back("ds_" + fmt(s), fmt(ds_metric(ca, cb, s)));
    if (a.size() >= 1000) {
        const auto h = hill_tail_index(a, 0.02);
        summary.emplace_back("hill_a", fmt(h.index));
        summary.emplace_back("hill_a_diverging", h.diverging ? "true" : "false");
    }
    write_summary(cfg.out_dir / "metrics_summary.txt", summary);
    write_sidecar(cfg.out_dir, raw, cfg.seed);
    return 0;
}

} // namespace maxkin
