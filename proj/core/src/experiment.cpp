#include "maxkin/experiment.hpp"

#include "maxkin/kernels.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace maxkin {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open config file: " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.kv_[key] = value;
    }
    return cfg;
}

std::string KeyValueConfig::serialize() const {
    std::ostringstream os;
    for (const auto& [k, v] : kv_) os << k << " = " << v << "\n";
    return os.str();
}

std::uint64_t KeyValueConfig::hash() const { return fnv1a64(serialize()); }

std::string KeyValueConfig::get(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
    const std::string v = get(key);
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: " + v);
    }
}

double KeyValueConfig::get_double_or(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
}

long long KeyValueConfig::get_int(const std::string& key) const {
    const std::string v = get(key);
    try {
        std::size_t pos = 0;
        const long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: " + v);
    }
}

long long KeyValueConfig::get_int_or(const std::string& key, long long dflt) const {
    return has(key) ? get_int(key) : dflt;
}

bool KeyValueConfig::get_bool_or(const std::string& key, bool dflt) const {
    if (!has(key)) return dflt;
    const std::string v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': not a boolean: " + v);
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get(key));
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': not a number: " + tok);
        }
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

RestitutionLaw ExperimentConfig::build_law() const {
    const LawContext ctx =
        model == ModelKind::Granular3D ? LawContext::Granular3D : LawContext::Economy1D;
    try {
        if (law_kind == "deterministic") return RestitutionLaw::deterministic(e, ctx);
        if (law_kind == "two_point") {
            if (model != ModelKind::Granular3D)
                throw ConfigError("two_point law is the granular construction; economy laws are discrete");
            return make_two_point(e, rho);
        }
        if (law_kind == "canonical_two_point") {
            if (model != ModelKind::Granular3D)
                throw ConfigError("canonical_two_point is a granular construction");
            return make_canonical_two_point(e);
        }
        if (law_kind == "uniform_shifted") return RestitutionLaw::uniform_shifted(e, half_width, ctx);
        if (law_kind == "discrete") {
            if (atom_values.size() != atom_probs.size() || atom_values.empty())
                throw ConfigError("discrete law: law.atom_values and law.atom_probs must match");
            std::vector<Atom> atoms;
            for (std::size_t i = 0; i < atom_values.size(); ++i)
                atoms.push_back({atom_values[i], atom_probs[i]});
            return RestitutionLaw::discrete(e, std::move(atoms), ctx);
        }
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("law validation: ") + ex.what());
    }
    throw ConfigError("unknown law.kind: " + law_kind);
}

AnyRule ExperimentConfig::build_rule() const {
    try {
        if (model == ModelKind::Granular3D) return CollisionRule3D(e, build_law());
        return TradeRule1D(e, build_law(), eta_on_keep_share);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("rule validation: ") + ex.what());
    }
}

InitialCondition ExperimentConfig::build_initial(char which, Rng& rng) const {
    const std::string& kind = which == 'a' ? initial_a : initial_b;
    const double p1 = which == 'a' ? initial_param_a : initial_param_b;
    const double p2 = which == 'a' ? initial_param2_a : initial_param2_b;
    if (kind == "gaussian") return Gaussian3D{p1};
    if (kind == "uniform_ball") return UniformBall3D{p1};
    if (kind == "exponential") return ExponentialWealth{p1};
    if (kind == "pareto") return ParetoWealth{p1, p2};
    if (kind == "squared_exponential") {
        // v = E^2 / (2 mean) with E ~ Exp(mean): heavy but tail-free start
        FromSamples1D s;
        s.samples.resize(n_particles);
        for (auto& v : s.samples) {
            const double ex = rng.exponential(p1);
            v = ex * ex / (2.0 * p1);
        }
        return s;
    }
    if (kind == "dilated_exponential") {
        // mean-preserving dilation 1-c + c E about the mean; p2 = c in (0,1]
        FromSamples1D s;
        s.samples.resize(n_particles);
        for (auto& v : s.samples) v = p1 * (1.0 - p2) + p2 * rng.exponential(p1);
        return s;
    }
    if (kind == "inverse_gamma") {
        FromSamples1D s;
        s.samples.resize(n_particles);
        for (auto& v : s.samples) v = (p1 - 1.0) / rng.gamma(p1);
        return s;
    }
    if (kind == "gaussian_mixture") {
        // scale mixture of two centered Gaussians with mean |v|^2 = p1 and the
        // variance split parameter p2 in (0,1): sigma1^2 = p2*p1/3, sigma2^2 =
        // (2-p2)*p1/3, picked with equal probability
        FromSamples3D s;
        s.samples.resize(n_particles);
        const double s1 = std::sqrt(p2 * p1 / 3.0);
        const double s2 = std::sqrt((2.0 - p2) * p1 / 3.0);
        for (auto& v : s.samples) {
            const double sc = rng.uniform01() < 0.5 ? s1 : s2;
            v = {sc * rng.normal(), sc * rng.normal(), sc * rng.normal()};
        }
        return s;
    }
    throw ConfigError("unknown initial condition: " + kind);
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& kv) {
    ExperimentConfig c;
    const std::string model = kv.get_or("model", "granular3d");
    if (model == "granular3d") {
        c.model = ModelKind::Granular3D;
    } else if (model == "economy1d") {
        c.model = ModelKind::Economy1D;
    } else {
        throw ConfigError("model must be granular3d or economy1d, got: " + model);
    }
    c.law_kind = kv.get_or("law.kind", "canonical_two_point");
    c.e = kv.get_double_or(c.model == ModelKind::Granular3D ? "law.e" : "law.lambda",
                           c.model == ModelKind::Granular3D ? 0.9 : 0.5);
    c.rho = kv.get_double_or("law.rho", 0.0);
    c.half_width = kv.get_double_or("law.half_width", 0.0);
    if (kv.has("law.atom_values")) c.atom_values = kv.get_doubles("law.atom_values");
    if (kv.has("law.atom_probs")) c.atom_probs = kv.get_doubles("law.atom_probs");
    c.eta_on_keep_share = kv.get_bool_or("law.eta_on_keep_share", false);

    c.n_particles = static_cast<std::size_t>(kv.get_int_or("run.n", 10000));
    c.replicas = static_cast<int>(kv.get_int_or("run.replicas", 1));
    c.seed = static_cast<std::uint64_t>(kv.get_int_or("run.seed", 1));
    c.t_end = kv.get_double_or("run.t_end", 10.0);
    c.dt = kv.get_double_or("run.dt", 0.01);
    c.record_every = kv.get_double_or("run.record_every", 0.25);
    if (kv.has("run.record_orders")) c.record_orders = kv.get_doubles("run.record_orders");

    c.initial_a = kv.get_or("initial.a", c.model == ModelKind::Granular3D ? "gaussian" : "exponential");
    c.initial_b = kv.get_or("initial.b", "");
    c.initial_param_a = kv.get_double_or("initial.a_param", 1.0);
    c.initial_param2_a = kv.get_double_or("initial.a_param2", 1.0);
    c.initial_param_b = kv.get_double_or("initial.b_param", 1.0);
    c.initial_param2_b = kv.get_double_or("initial.b_param2", 1.0);

    if (kv.has("metrics.ds_orders")) c.ds_orders = kv.get_doubles("metrics.ds_orders");
    c.kmin = kv.get_double_or("metrics.kmin", 1e-3);
    c.kmax = kv.get_double_or("metrics.kmax", 20.0);
    c.k_points = static_cast<int>(kv.get_int_or("metrics.k_points", 200));
    c.n_directions = static_cast<int>(kv.get_int_or("metrics.n_directions", 16));
    c.standardize_cf = kv.get_bool_or("metrics.standardize", true);

    if (kv.has("kernels.alpha_grid")) c.alpha_grid = kv.get_doubles("kernels.alpha_grid");
    if (kv.has("kernels.s_grid")) c.s_grid = kv.get_doubles("kernels.s_grid");

    c.steady.grid.x_max = kv.get_double_or("steady.x_max", 40.0);
    c.steady.grid.n = static_cast<int>(kv.get_int_or("steady.grid_points", 801));
    c.steady.grid.stretch = kv.get_double_or("steady.stretch", 4.0);
    c.steady.tol = kv.get_double_or("steady.tol", 1e-10);
    c.steady.max_iter = static_cast<int>(kv.get_int_or("steady.max_iter", 2000));
    c.steady.mono_slack = kv.get_double_or("steady.mono_slack", 1e-12);
    c.steady.quadrature_nodes = static_cast<int>(kv.get_int_or("steady.quadrature_nodes", 64));
    if (kv.has("steady.condd_deltas")) c.condd_deltas = kv.get_doubles("steady.condd_deltas");
    c.gevrey_R = kv.get_double_or("steady.gevrey_R", 4.0);

    c.out_dir = kv.get_or("out.dir", ".");
    c.threads = static_cast<int>(kv.get_int_or("run.threads", 1));

    if (!(c.dt > 0.0) || c.dt > 0.1)
        throw ConfigError("run.dt must lie in (0, 0.1]");
    const double ratio = c.t_end / c.dt;
    if (std::fabs(ratio - std::llround(ratio)) > 1e-9)
        throw ConfigError("run.t_end must be an integer multiple of run.dt");
    if (c.replicas < 1) throw ConfigError("run.replicas must be >= 1");
    c.build_rule(); // validate law/rule up front
    return c;
}

KeyValueConfig ExperimentConfig::to_config() const {
    KeyValueConfig kv;
    kv.set("model", model == ModelKind::Granular3D ? "granular3d" : "economy1d");
    kv.set("law.kind", law_kind);
    kv.set(model == ModelKind::Granular3D ? "law.e" : "law.lambda", format_double(e));
    if (law_kind == "two_point") kv.set("law.rho", format_double(rho));
    if (law_kind == "uniform_shifted") kv.set("law.half_width", format_double(half_width));
    if (!atom_values.empty()) {
        std::string v, p;
        for (std::size_t i = 0; i < atom_values.size(); ++i) {
            v += (i ? "," : "") + format_double(atom_values[i]);
            p += (i ? "," : "") + format_double(atom_probs[i]);
        }
        kv.set("law.atom_values", v);
        kv.set("law.atom_probs", p);
    }
    kv.set("run.n", std::to_string(n_particles));
    kv.set("run.replicas", std::to_string(replicas));
    kv.set("run.seed", std::to_string(seed));
    kv.set("run.t_end", format_double(t_end));
    kv.set("run.dt", format_double(dt));
    kv.set("run.record_every", format_double(record_every));
    kv.set("initial.a", initial_a);
    if (!initial_b.empty()) kv.set("initial.b", initial_b);
    kv.set("initial.a_param", format_double(initial_param_a));
    kv.set("initial.b_param", format_double(initial_param_b));
    kv.set("out.dir", out_dir.string());
    return kv;
}

AggregatedTrace aggregate_traces(const std::vector<MomentTrace>& traces) {
    if (traces.empty()) throw std::invalid_argument("aggregate_traces: no traces");
    AggregatedTrace agg;
    agg.times = traces.front().times;
    agg.replicas = static_cast<int>(traces.size());
    const double R = static_cast<double>(traces.size());
    for (const auto& [order, series0] : traces.front().moments) {
        std::vector<double> mean(series0.size(), 0.0), var(series0.size(), 0.0);
        for (const auto& tr : traces) {
            const auto& s = tr.moments.at(order);
            if (s.size() != mean.size()) throw std::invalid_argument("aggregate_traces: ragged traces");
            for (std::size_t i = 0; i < s.size(); ++i) mean[i] += s[i];
        }
        for (auto& m : mean) m /= R;
        for (const auto& tr : traces) {
            const auto& s = tr.moments.at(order);
            for (std::size_t i = 0; i < s.size(); ++i)
                var[i] += (s[i] - mean[i]) * (s[i] - mean[i]);
        }
        std::vector<double> se(series0.size(), 0.0);
        if (traces.size() > 1)
            for (std::size_t i = 0; i < se.size(); ++i)
                se[i] = std::sqrt(var[i] / (R - 1.0) / R);
        agg.mean[order] = std::move(mean);
        agg.stderr_[order] = std::move(se);
    }
    return agg;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open output file: " + p.string());
    return out;
}

} // namespace

void write_moments_csv(const std::filesystem::path& p, const AggregatedTrace& agg) {
    auto out = open_out(p);
    out << "t,order,mean,stderr,replicas\n";
    for (const auto& [order, mean] : agg.mean) {
        const auto& se = agg.stderr_.at(order);
        for (std::size_t i = 0; i < agg.times.size(); ++i)
            out << format_double(agg.times[i]) << ',' << format_double(order) << ','
                << format_double(mean[i]) << ',' << format_double(se[i]) << ',' << agg.replicas
                << '\n';
    }
}

void write_metrics_csv(const std::filesystem::path& p, const MetricReport& rep) {
    auto out = open_out(p);
    out << "t,metric,s,value\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        if (i < rep.w2.size())
            out << format_double(rep.times[i]) << ",w2,," << format_double(rep.w2[i]) << '\n';
        for (const auto& [s, series] : rep.ds)
            out << format_double(rep.times[i]) << ",ds," << format_double(s) << ','
                << format_double(series[i]) << '\n';
    }
    for (const auto& [name, fit] : rep.fitted_rates)
        out << ",rate:" << name << ",," << format_double(fit.first) << '\n';
}

void write_kernels_csv(const std::filesystem::path& p,
                       const std::vector<std::array<std::string, 4>>& rows) {
    auto out = open_out(p);
    out << "param,value,method,est_error\n";
    for (const auto& r : rows) out << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << '\n';
}

void write_profile_csv(const std::filesystem::path& p, const std::vector<double>& x,
                       const std::vector<double>& y, const std::string& xname,
                       const std::string& yname) {
    auto out = open_out(p);
    out << xname << ',' << yname << '\n';
    for (std::size_t i = 0; i < x.size(); ++i)
        out << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
}

void write_sidecar(const std::filesystem::path& dir, const KeyValueConfig& cfg,
                   std::uint64_t seed) {
    auto out = open_out(dir / "run_meta.txt");
    out << "config_hash = " << cfg.hash() << "\n";
    out << "root_seed = " << seed << "\n";
    out << "tool = maxkin 1.0.0\n";
    out << "---\n" << cfg.serialize();
}

void write_summary(const std::filesystem::path& p,
                   const std::vector<std::pair<std::string, std::string>>& entries) {
    auto out = open_out(p);
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

std::vector<ExperimentRecord> run_replicas(const ExperimentConfig& cfg, int count) {
    std::vector<ExperimentRecord> records(static_cast<std::size_t>(count));
    const AnyRule rule = cfg.build_rule();
    const Dim dim = cfg.model == ModelKind::Granular3D ? Dim::D3 : Dim::D1;

    MetricOptions mopt;
    mopt.ds_orders = cfg.ds_orders;
    mopt.record_w2 = true;
    mopt.kgrid = geometric_grid(cfg.kmin, cfg.kmax, cfg.k_points);
    mopt.n_directions = cfg.n_directions;
    mopt.standardize_cf = cfg.standardize_cf;
    mopt.threads = 1; // replica-level parallelism below

    auto run_one = [&](int r) {
        const std::uint64_t seed_a = derive_seed(cfg.seed, "init-a", static_cast<std::uint64_t>(r));
        const std::uint64_t seed_b = derive_seed(cfg.seed, "init-b", static_cast<std::uint64_t>(r));
        Rng init_rng_a(derive_seed(cfg.seed, "init-samples-a", static_cast<std::uint64_t>(r)));
        Rng init_rng_b(derive_seed(cfg.seed, "init-samples-b", static_cast<std::uint64_t>(r)));
        ParticleEnsemble a =
            init_ensemble(dim, cfg.n_particles, cfg.build_initial('a', init_rng_a), seed_a);
        ParticleEnsemble b =
            cfg.initial_b.empty()
                ? init_ensemble(dim, cfg.n_particles, cfg.build_initial('a', init_rng_b), seed_b)
                : init_ensemble(dim, cfg.n_particles, cfg.build_initial('b', init_rng_b), seed_b);
        records[static_cast<std::size_t>(r)] =
            run_experiment(std::move(a), std::move(b), rule, cfg.t_end, cfg.dt, cfg.record_every,
                           cfg.record_orders, mopt);
    };

    const int threads = std::max(1, cfg.threads);
    if (threads == 1 || count == 1) {
        for (int r = 0; r < count; ++r) run_one(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic_int next{0};
        for (int t = 0; t < std::min(threads, count); ++t)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < count; r = next.fetch_add(1)) run_one(r);
            });
        for (auto& th : pool) th.join();
    }
    return records;
}

} // namespace maxkin
