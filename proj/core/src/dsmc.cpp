#include "maxkin/dsmc.hpp"

#include <cmath>
#include <stdexcept>

namespace maxkin {

namespace {

struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

} // namespace

double ParticleEnsemble::mean_wealth() const {
    Kahan k;
    for (double v : v1) k.add(v);
    return k.sum / static_cast<double>(v1.size());
}

Vec3 ParticleEnsemble::mean_velocity() const {
    Kahan kx, ky, kz;
    for (const auto& v : v3) {
        kx.add(v.x);
        ky.add(v.y);
        kz.add(v.z);
    }
    const double n = static_cast<double>(v3.size());
    return {kx.sum / n, ky.sum / n, kz.sum / n};
}

double ParticleEnsemble::temperature() const {
    Kahan k;
    if (dim == Dim::D3) {
        for (const auto& v : v3) k.add(v.norm2());
        return k.sum / static_cast<double>(v3.size());
    }
    for (double v : v1) k.add(v * v);
    return k.sum / static_cast<double>(v1.size());
}

double ParticleEnsemble::raw_moment(double order) const {
    Kahan k;
    if (dim == Dim::D1) {
        for (double v : v1) k.add(std::pow(v, order));
        return k.sum / static_cast<double>(v1.size());
    }
    for (const auto& v : v3) k.add(std::pow(v.norm(), order));
    return k.sum / static_cast<double>(v3.size());
}

ParticleEnsemble init_ensemble(Dim dim, std::size_t n, const InitialCondition& init,
                               std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("init_ensemble: need at least two particles");
    ParticleEnsemble ens;
    ens.dim = dim;
    ens.seed = seed;
    Rng rng(seed);

    auto center_and_done = [&](void) {
        const Vec3 m = ens.mean_velocity();
        for (auto& v : ens.v3) v = v - m;
    };

    if (std::holds_alternative<Gaussian3D>(init)) {
        if (dim != Dim::D3) throw std::invalid_argument("init_ensemble: Gaussian3D needs D3");
        const double T = std::get<Gaussian3D>(init).temperature;
        if (!(T > 0.0)) throw std::invalid_argument("init_ensemble: temperature must be positive");
        const double s = std::sqrt(T / 3.0);
        ens.v3.resize(n);
        for (auto& v : ens.v3) v = {s * rng.normal(), s * rng.normal(), s * rng.normal()};
        center_and_done();
    } else if (std::holds_alternative<UniformBall3D>(init)) {
        if (dim != Dim::D3) throw std::invalid_argument("init_ensemble: UniformBall3D needs D3");
        const double T = std::get<UniformBall3D>(init).temperature;
        if (!(T > 0.0)) throw std::invalid_argument("init_ensemble: temperature must be positive");
        const double R = std::sqrt(5.0 * T / 3.0); // mean |v|^2 of the ball = 3R^2/5
        ens.v3.resize(n);
        for (auto& v : ens.v3) {
            // isotropic direction times r ~ R u^{1/3}
            double x, y, z, s2;
            do {
                x = 2.0 * rng.uniform01() - 1.0;
                y = 2.0 * rng.uniform01() - 1.0;
                z = 2.0 * rng.uniform01() - 1.0;
                s2 = x * x + y * y + z * z;
            } while (s2 > 1.0 || s2 == 0.0);
            const double r = R * std::cbrt(rng.uniform01()) / std::sqrt(s2);
            v = {r * x, r * y, r * z};
        }
        center_and_done();
    } else if (std::holds_alternative<ExponentialWealth>(init)) {
        if (dim != Dim::D1) throw std::invalid_argument("init_ensemble: ExponentialWealth needs D1");
        const double mean = std::get<ExponentialWealth>(init).mean;
        if (!(mean > 0.0)) throw std::invalid_argument("init_ensemble: mean must be positive");
        ens.v1.resize(n);
        for (auto& v : ens.v1) v = rng.exponential(mean);
    } else if (std::holds_alternative<ParetoWealth>(init)) {
        if (dim != Dim::D1) throw std::invalid_argument("init_ensemble: ParetoWealth needs D1");
        const auto& p = std::get<ParetoWealth>(init);
        if (!(p.index > 1.0) || !(p.mean > 0.0))
            throw std::invalid_argument("init_ensemble: Pareto index must exceed 1, mean positive");
        const double xm = p.mean * (p.index - 1.0) / p.index;
        ens.v1.resize(n);
        for (auto& v : ens.v1) v = xm * std::pow(1.0 - rng.uniform01(), -1.0 / p.index);
    } else if (std::holds_alternative<FromSamples1D>(init)) {
        if (dim != Dim::D1) throw std::invalid_argument("init_ensemble: FromSamples1D needs D1");
        ens.v1 = std::get<FromSamples1D>(init).samples;
        if (ens.v1.size() != n) throw std::invalid_argument("init_ensemble: sample count mismatch");
        for (double v : ens.v1)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("init_ensemble: 1D samples must be finite and >= 0");
    } else {
        if (dim != Dim::D3) throw std::invalid_argument("init_ensemble: FromSamples3D needs D3");
        ens.v3 = std::get<FromSamples3D>(init).samples;
        if (ens.v3.size() != n) throw std::invalid_argument("init_ensemble: sample count mismatch");
    }
    return ens;
}

void step(ParticleEnsemble& ens, const AnyRule& rule, double dt, Rng& rng) {
    if (!(dt > 0.0) || dt > 0.1 + 1e-12)
        throw std::invalid_argument("step: dt must lie in (0, 0.1]");
    const std::size_t n = ens.size();
    const std::uint64_t events = rng.poisson(static_cast<double>(n) * dt / 2.0);

    if (ens.dim == Dim::D3) {
        if (!std::holds_alternative<CollisionRule3D>(rule))
            throw std::invalid_argument("step: 3D ensemble requires a CollisionRule3D");
        const auto& r3 = std::get<CollisionRule3D>(rule);
        for (std::uint64_t k = 0; k < events; ++k) {
            std::size_t i = rng.uniform_index(n);
            std::size_t j = rng.uniform_index(n - 1);
            if (j >= i) ++j;
            const ScatterDirection sig = sample_direction(rng);
            const double etilde = r3.e + r3.law.sample(rng);
            auto [vp, wp] = collide_3d(ens.v3[i], ens.v3[j], sig, etilde);
            ens.v3[i] = vp;
            ens.v3[j] = wp;
        }
    } else {
        if (!std::holds_alternative<TradeRule1D>(rule))
            throw std::invalid_argument("step: 1D ensemble requires a TradeRule1D");
        const auto& r1 = std::get<TradeRule1D>(rule);
        for (std::uint64_t k = 0; k < events; ++k) {
            std::size_t i = rng.uniform_index(n);
            std::size_t j = rng.uniform_index(n - 1);
            if (j >= i) ++j;
            const double eta = r1.law.sample(rng);
            const double eta_star = r1.law.sample(rng);
            auto [vp, wp] = collide_1d(ens.v1[i], ens.v1[j], eta, eta_star, r1);
            ens.v1[i] = vp;
            ens.v1[j] = wp;
        }
    }
    ens.time += dt;
}

ExperimentRecord run_experiment(ParticleEnsemble a, ParticleEnsemble b, const AnyRule& rule,
                                double t_end, double dt, double record_every,
                                const std::vector<double>& record_orders,
                                const MetricOptions& mopt) {
    if (a.dim != b.dim) throw std::invalid_argument("run_experiment: mismatched dimensions");
    if (!(t_end > 0.0) || !(record_every > 0.0))
        throw std::invalid_argument("run_experiment: t_end and record_every must be positive");
    // streams depend only on each ensemble's own seed, so identical seeds
    // reproduce identical trajectories
    Rng rng_a(derive_seed(a.seed, "dsmc-stream"));
    Rng rng_b(derive_seed(b.seed, "dsmc-stream"));

    ExperimentRecord rec;
    const std::vector<double> kgrid =
        mopt.kgrid.empty() ? geometric_grid(1e-3, 20.0, 200) : mopt.kgrid;
    CFOptions cfo;
    cfo.standardize = mopt.standardize_cf;
    cfo.threads = mopt.threads;

    auto record = [&](double t) {
        rec.trace_a.times.push_back(t);
        rec.trace_b.times.push_back(t);
        for (double s : record_orders) {
            rec.trace_a.moments[s].push_back(a.raw_moment(s));
            rec.trace_b.moments[s].push_back(b.raw_moment(s));
        }
        rec.trace_a.temperature.push_back(a.dim == Dim::D3 ? a.temperature() : a.mean_wealth());
        rec.trace_b.temperature.push_back(b.dim == Dim::D3 ? b.temperature() : b.mean_wealth());
        rec.metrics.times.push_back(t);
        if (mopt.record_w2) {
            if (a.dim == Dim::D1)
                rec.metrics.w2.push_back(w2_1d(a.v1, b.v1));
            else
                rec.metrics.w2.push_back(w2_3d_sliced(a.v3, b.v3, mopt.sliced));
        }
        if (!mopt.ds_orders.empty()) {
            EmpiricalCF fa = a.dim == Dim::D1
                                 ? estimate_cf_1d(a.v1, kgrid, cfo)
                                 : estimate_cf_3d(a.v3, kgrid, mopt.n_directions, cfo);
            EmpiricalCF fb = b.dim == Dim::D1
                                 ? estimate_cf_1d(b.v1, kgrid, cfo)
                                 : estimate_cf_3d(b.v3, kgrid, mopt.n_directions, cfo);
            for (double s : mopt.ds_orders) rec.metrics.ds[s].push_back(ds_metric(fa, fb, s));
            rec.cf_a.push_back(std::move(fa));
            rec.cf_b.push_back(std::move(fb));
        }
    };

    record(a.time);
    const auto strides_per_record = static_cast<std::size_t>(std::llround(record_every / dt));
    if (strides_per_record == 0 ||
        std::fabs(strides_per_record * dt - record_every) > 1e-9 * record_every)
        throw std::invalid_argument("run_experiment: record_every must be an integer multiple of dt");
    const auto total_records = static_cast<std::size_t>(std::llround(t_end / record_every));
    for (std::size_t r = 0; r < total_records; ++r) {
        for (std::size_t s = 0; s < strides_per_record; ++s) {
            step(a, rule, dt, rng_a);
            step(b, rule, dt, rng_b);
        }
        record(a.time);
    }
    return rec;
}

RateFit fit_exponential_rate(const std::vector<double>& t, const std::vector<double>& y,
                             double t0, double t1) {
    if (t.size() != y.size()) throw std::invalid_argument("fit_exponential_rate: size mismatch");
    std::vector<double> ts, ls;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 - 1e-12 || t[i] > t1 + 1e-12) continue;
        if (!(y[i] > 0.0))
            throw std::invalid_argument("fit_exponential_rate: nonpositive value inside window");
        ts.push_back(t[i]);
        ls.push_back(std::log(y[i]));
    }
    if (ts.size() < 10)
        throw std::invalid_argument("fit_exponential_rate: need at least 10 points in window");
    const double n = static_cast<double>(ts.size());
    double st = 0.0, sl = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += ls[i];
    }
    const double mt = st / n, ml = sl / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxx += (ts[i] - mt) * (ts[i] - mt);
        sxy += (ts[i] - mt) * (ls[i] - ml);
        syy += (ls[i] - ml) * (ls[i] - ml);
    }
    RateFit fit;
    fit.rate = sxy / sxx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

} // namespace maxkin
