#ifndef MAXKIN_DSMC_HPP
#define MAXKIN_DSMC_HPP

#include "maxkin/collision.hpp"
#include "maxkin/metrics.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

namespace maxkin {

enum class Dim { D1, D3 };

// Initial data choices. 3D initializers are explicitly centered after sampling.
struct Gaussian3D { double temperature = 1.0; };          // mean |v|^2 = temperature
struct UniformBall3D { double temperature = 1.0; };       // radius chosen for mean |v|^2
struct ExponentialWealth { double mean = 1.0; };
struct ParetoWealth { double index = 3.0; double mean = 1.0; };
struct FromSamples1D { std::vector<double> samples; };
struct FromSamples3D { std::vector<Vec3> samples; };
using InitialCondition = std::variant<Gaussian3D, UniformBall3D, ExponentialWealth, ParetoWealth,
                                      FromSamples1D, FromSamples3D>;

struct ParticleEnsemble {
    Dim dim = Dim::D3;
    std::vector<double> v1;   // D1 wealths, nonnegative
    std::vector<Vec3> v3;     // D3 velocities
    double time = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const { return dim == Dim::D1 ? v1.size() : v3.size(); }
    double mean_wealth() const;
    Vec3 mean_velocity() const;     // Kahan-compensated per component
    double temperature() const;     // mean |v|^2 (3D)
    double raw_moment(double order) const; // mean v^s (1D) or mean |v|^s (3D)
};

ParticleEnsemble init_ensemble(Dim dim, std::size_t n, const InitialCondition& init,
                               std::uint64_t seed);

using AnyRule = std::variant<CollisionRule3D, TradeRule1D>;

// One DSMC stride of length dt: K ~ Poisson(N dt / 2) uniformly random
// unordered pairs collide (each particle collides at unit rate). 3D draws
// sigma uniform on the sphere plus one etilde per event; 1D draws independent
// eta, eta* for the two partners. dt must not exceed 0.1.
void step(ParticleEnsemble& ens, const AnyRule& rule, double dt, Rng& rng);

struct MomentTrace {
    std::vector<double> times;
    std::map<double, std::vector<double>> moments; // order -> series of raw moments
    std::vector<double> temperature;               // 3D mean |v|^2; 1D mean wealth
};

struct MetricReport {
    std::vector<double> times;
    std::vector<double> w2;                       // 1D sorted pairing / 3D sliced
    std::map<double, std::vector<double>> ds;     // s -> series
    std::map<std::string, std::pair<double, double>> fitted_rates; // name -> (rate, r2)
};

struct MetricOptions {
    bool record_w2 = true;
    std::vector<double> ds_orders;        // e.g. {2.0, 4.0}
    std::vector<double> kgrid;            // shared magnitudes; default set if empty
    int n_directions = 16;                // 3D only
    bool standardize_cf = true;
    int threads = 1;
    SlicedOptions sliced{};
};

struct ExperimentRecord {
    MomentTrace trace_a;
    MomentTrace trace_b;
    MetricReport metrics;
    // CF snapshots per record time, for replica-pooled metric evaluation
    std::vector<EmpiricalCF> cf_a;
    std::vector<EmpiricalCF> cf_b;
};

// Synchronized evolution of two ensembles under the same rule and clock, with
// periodic recording of raw moments and inter-ensemble distances. Deterministic
// given the ensembles' seeds.
ExperimentRecord run_experiment(ParticleEnsemble a, ParticleEnsemble b, const AnyRule& rule,
                                double t_end, double dt, double record_every,
                                const std::vector<double>& record_orders,
                                const MetricOptions& metric_opts);

struct RateFit {
    double rate = 0.0;
    double r2 = 0.0;
};

// Least-squares slope of log y against t restricted to [t0, t1].
RateFit fit_exponential_rate(const std::vector<double>& t, const std::vector<double>& y,
                             double t0, double t1);

} // namespace maxkin

#endif
