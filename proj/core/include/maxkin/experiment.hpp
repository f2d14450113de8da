#ifndef MAXKIN_EXPERIMENT_HPP
#define MAXKIN_EXPERIMENT_HPP

#include "maxkin/dsmc.hpp"
#include "maxkin/steady_state.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace maxkin {

// Validation failures map to exit code 2, runtime invariant breaches to 3,
// numerical non-convergence to 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantBreach : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value configuration. '#' starts a comment; keys are dotted paths.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::filesystem::path& p);
    static KeyValueConfig parse_string(const std::string& text);

    // canonical form: sorted keys, one "key = value" per line
    std::string serialize() const;
    std::uint64_t hash() const;

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double dflt) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long dflt) const;
    bool get_bool_or(const std::string& key, bool dflt) const;
    std::vector<double> get_doubles(const std::string& key) const; // comma separated

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    const std::map<std::string, std::string>& items() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

enum class ModelKind { Granular3D, Economy1D };

struct ExperimentConfig {
    ModelKind model = ModelKind::Granular3D;
    // law spec shared by both models; "e" holds lambda in the economy reading
    std::string law_kind = "two_point"; // deterministic|two_point|canonical_two_point|uniform_shifted|discrete
    double e = 0.9;
    double rho = 0.0;              // two_point
    double half_width = 0.0;       // uniform_shifted
    std::vector<double> atom_values;
    std::vector<double> atom_probs;
    bool eta_on_keep_share = false;

    std::size_t n_particles = 10000;
    int replicas = 1;
    std::uint64_t seed = 1;
    double t_end = 10.0;
    double dt = 0.01;
    double record_every = 0.25;
    std::vector<double> record_orders = {1.0, 2.0, 3.0, 4.0};

    // initial conditions for runs A and B
    std::string initial_a = "gaussian";
    std::string initial_b = "";
    double initial_param_a = 1.0;
    double initial_param2_a = 1.0;
    double initial_param_b = 1.0;
    double initial_param2_b = 1.0;

    // metric settings
    std::vector<double> ds_orders;
    double kmin = 1e-3, kmax = 20.0;
    int k_points = 200;
    int n_directions = 16;
    bool standardize_cf = true;

    // kernel tabulation settings
    std::vector<double> alpha_grid;
    std::vector<double> s_grid;

    // steady-state solver settings
    SteadySolveOptions steady{};
    std::vector<double> condd_deltas = {0.3, 0.1, 0.03, 0.01, 0.003};
    double gevrey_R = 4.0;

    std::filesystem::path out_dir = ".";
    int threads = 1;

    RestitutionLaw build_law() const;
    AnyRule build_rule() const;
    InitialCondition build_initial(char which, Rng& rng) const;

    static ExperimentConfig from_config(const KeyValueConfig& kv);
    KeyValueConfig to_config() const;
};

// Replica-averaged moment trace written as CSV rows (t, order, mean, stderr, replicas).
struct AggregatedTrace {
    std::vector<double> times;
    std::map<double, std::vector<double>> mean;   // order -> mean across replicas
    std::map<double, std::vector<double>> stderr_; // order -> standard error
    int replicas = 0;
};

AggregatedTrace aggregate_traces(const std::vector<MomentTrace>& traces);

// CSV writers; every file carries a header row and is accompanied by a
// metadata sidecar (config hash, seed, tool version).
void write_moments_csv(const std::filesystem::path& p, const AggregatedTrace& agg);
void write_metrics_csv(const std::filesystem::path& p, const MetricReport& rep);
void write_kernels_csv(const std::filesystem::path& p,
                       const std::vector<std::array<std::string, 4>>& rows);
void write_profile_csv(const std::filesystem::path& p, const std::vector<double>& x,
                       const std::vector<double>& y, const std::string& xname,
                       const std::string& yname);
void write_sidecar(const std::filesystem::path& dir, const KeyValueConfig& cfg,
                   std::uint64_t seed);
void write_summary(const std::filesystem::path& p,
                   const std::vector<std::pair<std::string, std::string>>& entries);

// Subcommand drivers. Each returns the process exit code.
int cmd_kernels(const ExperimentConfig& cfg, const KeyValueConfig& raw);
int cmd_simulate(const ExperimentConfig& cfg, const KeyValueConfig& raw);
int cmd_steady(const ExperimentConfig& cfg, const KeyValueConfig& raw);
int cmd_metrics(const ExperimentConfig& cfg, const KeyValueConfig& raw);

// Runs `count` replicas of the configured experiment on `threads` threads;
// replica r uses substream seeds derived from (seed, r). Deterministic.
std::vector<ExperimentRecord> run_replicas(const ExperimentConfig& cfg, int count);

} // namespace maxkin

#endif
