#include "maxkin/restitution.hpp"

#include "maxkin/quadrature.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace maxkin {

namespace {
constexpr double kMomentTol = 1e-12;
}

RestitutionLaw RestitutionLaw::deterministic(double e, LawContext ctx) {
    RestitutionLaw law;
    law.kind_ = LawKind::Deterministic;
    law.context_ = ctx;
    law.e_ = e;
    law.beta2_ = 0.0;
    law.atoms_ = {{0.0, 1.0}};
    law.cum_ = {1.0};
    law.validate();
    return law;
}

RestitutionLaw RestitutionLaw::discrete(double e, std::vector<Atom> atoms, LawContext ctx) {
    RestitutionLaw law;
    law.kind_ = atoms.size() == 2 ? LawKind::TwoPoint : LawKind::Discrete;
    law.context_ = ctx;
    law.e_ = e;
    law.atoms_ = std::move(atoms);
    double var = 0.0;
    for (const auto& a : law.atoms_) var += a.prob * a.value * a.value;
    law.beta2_ = var;
    law.cum_.clear();
    double c = 0.0;
    for (const auto& a : law.atoms_) {
        c += a.prob;
        law.cum_.push_back(c);
    }
    law.validate();
    return law;
}

RestitutionLaw RestitutionLaw::uniform_shifted(double e, double half_width, LawContext ctx) {
    if (!(half_width > 0.0)) throw std::invalid_argument("uniform_shifted: half_width must be positive");
    RestitutionLaw law;
    law.kind_ = LawKind::UniformShifted;
    law.context_ = ctx;
    law.e_ = e;
    law.half_width_ = half_width;
    law.beta2_ = half_width * half_width / 3.0;
    law.validate();
    return law;
}

void RestitutionLaw::validate() const {
    if (!(e_ >= 0.0) || !(e_ <= 1.0))
        throw std::invalid_argument("RestitutionLaw: coefficient must lie in [0,1]");
    if (support_min() < -e_ - 1e-14)
        throw std::invalid_argument("RestitutionLaw: support violates eta >= -" +
                                    std::to_string(e_) + " (no-debt/positivity bound)");
    if (kind_ == LawKind::UniformShifted) return;
    double mean = 0.0, psum = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.prob >= 0.0)) throw std::invalid_argument("RestitutionLaw: negative atom probability");
        mean += a.prob * a.value;
        psum += a.prob;
    }
    if (std::fabs(psum - 1.0) > 1e-12)
        throw std::invalid_argument("RestitutionLaw: atom probabilities must sum to 1 (got " +
                                    std::to_string(psum) + ")");
    if (std::fabs(mean) > 1e-12)
        throw std::invalid_argument("RestitutionLaw: <eta> must vanish (got " +
                                    std::to_string(mean) + ")");
}

bool RestitutionLaw::conservative() const {
    return context_ == LawContext::Granular3D && std::fabs(beta2_ - (1.0 - e_ * e_)) < 1e-12;
}

double RestitutionLaw::support_min() const {
    if (kind_ == LawKind::UniformShifted) return -half_width_;
    double m = atoms_.front().value;
    for (const auto& a : atoms_) m = std::min(m, a.value);
    return m;
}

double RestitutionLaw::etilde_max() const {
    if (kind_ == LawKind::UniformShifted) return e_ + half_width_;
    double m = atoms_.front().value;
    for (const auto& a : atoms_) m = std::max(m, a.value);
    return e_ + m;
}

double RestitutionLaw::moment(double s, MomentOf of) const {
    if (!(s >= 0.0)) throw std::invalid_argument("moment: order must be nonnegative");
    const bool integral_order = std::fabs(s - std::round(s)) < 1e-12;
    auto power = [&](double base) {
        if (integral_order) {
            double r = 1.0;
            for (int k = 0; k < static_cast<int>(std::llround(s)); ++k) r *= base;
            return r;
        }
        if (base < 0.0)
            throw std::domain_error("moment: negative base with fractional exponent");
        return std::pow(base, s);
    };
    if (kind_ == LawKind::UniformShifted) {
        const double lo = -half_width_, hi = half_width_;
        auto f = [&](double eta) {
            return power(of == MomentOf::Eta ? eta : e_ + eta) / (hi - lo);
        };
        auto q = integrate_adaptive(f, lo, hi, kMomentTol);
        if (!q.converged) throw std::runtime_error("moment: quadrature did not converge");
        return q.value;
    }
    double acc = 0.0;
    for (const auto& a : atoms_)
        acc += a.prob * power(of == MomentOf::Eta ? a.value : e_ + a.value);
    return acc;
}

double RestitutionLaw::expect_etilde(const std::function<double(double)>& f) const {
    if (kind_ == LawKind::UniformShifted) {
        const double lo = -half_width_, hi = half_width_;
        auto g = [&](double eta) { return f(e_ + eta) / (hi - lo); };
        auto q = integrate_adaptive(g, lo, hi, kMomentTol);
        if (!q.converged) throw std::runtime_error("expect_etilde: quadrature did not converge");
        return q.value;
    }
    double acc = 0.0;
    for (const auto& a : atoms_) acc += a.prob * f(e_ + a.value);
    return acc;
}

double RestitutionLaw::sample(Rng& rng) const {
    if (kind_ == LawKind::UniformShifted) return rng.uniform(-half_width_, half_width_);
    if (atoms_.size() == 1) return atoms_[0].value;
    const double u = rng.uniform01();
    for (std::size_t i = 0; i + 1 < cum_.size(); ++i)
        if (u < cum_[i]) return atoms_[i].value;
    return atoms_.back().value;
}

double RestitutionLaw::mass_at_unit_etilde() const {
    if (kind_ == LawKind::UniformShifted) return 0.0;
    double m = 0.0;
    for (const auto& a : atoms_)
        if (std::fabs(e_ + a.value - 1.0) < 1e-12) m += a.prob;
    return m;
}

std::string RestitutionLaw::describe() const {
    std::ostringstream os;
    os << (context_ == LawContext::Granular3D ? "granular(e=" : "economy(lambda=") << e_
       << ", beta2=" << beta2_ << ", ";
    switch (kind_) {
        case LawKind::Deterministic: os << "deterministic"; break;
        case LawKind::TwoPoint: os << "two_point"; break;
        case LawKind::UniformShifted: os << "uniform_shifted(h=" << half_width_ << ")"; break;
        case LawKind::Discrete: os << "discrete[" << atoms_.size() << "]"; break;
    }
    os << ")";
    return os.str();
}

double canonical_rho(double e) {
    if (!(e > 0.0) || !(e <= 1.0)) throw std::invalid_argument("canonical_rho: e in (0,1]");
    return std::sqrt(1.0 - e * e) / e;
}

RestitutionLaw make_two_point(double e, double rho) {
    if (!(e > 0.0) || !(e <= 1.0))
        throw std::invalid_argument("make_two_point: e must lie in (0,1]");
    if (e == 1.0) return RestitutionLaw::deterministic(1.0);
    const double c = std::sqrt(1.0 - e * e);
    if (!(rho >= c / e - 1e-14))
        throw std::invalid_argument("make_two_point: rho < sqrt(1-e^2)/e puts an atom below -e");
    // The smaller atom carries the negative sign; only that choice has mean zero
    // together with variance 1-e^2.
    std::vector<Atom> atoms = {{-c / rho, rho * rho / (1.0 + rho * rho)},
                               {c * rho, 1.0 / (1.0 + rho * rho)}};
    return RestitutionLaw::discrete(e, std::move(atoms));
}

RestitutionLaw make_canonical_two_point(double e) { return make_two_point(e, canonical_rho(e)); }

} // namespace maxkin
