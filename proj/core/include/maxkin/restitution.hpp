#ifndef MAXKIN_RESTITUTION_HPP
#define MAXKIN_RESTITUTION_HPP

#include "maxkin/rng.hpp"

#include <functional>
#include <string>
#include <vector>

namespace maxkin {

// Law of the zero-mean perturbation eta of the restitution coefficient
// (granular model, etilde = e + eta) or of the random trade return
// (economy model, share lambda + eta). The support constraint keeps the
// perturbed coefficient nonnegative: eta >= -e (3D) resp. eta >= -lambda (1D),
// the no-debt condition in the economy reading.
enum class LawKind { Deterministic, TwoPoint, UniformShifted, Discrete };
enum class LawContext { Granular3D, Economy1D };

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

enum class MomentOf { Eta, EtildePower };

class RestitutionLaw {
public:
    // Deterministic eta == 0 (beta2 = 0).
    static RestitutionLaw deterministic(double e, LawContext ctx = LawContext::Granular3D);
    // General discrete law from atoms; validates mean 0, support, prob sum.
    static RestitutionLaw discrete(double e, std::vector<Atom> atoms,
                                   LawContext ctx = LawContext::Granular3D);
    // eta ~ Uniform[-half_width, half_width]; requires half_width <= e (support).
    static RestitutionLaw uniform_shifted(double e, double half_width,
                                          LawContext ctx = LawContext::Granular3D);

    LawKind kind() const { return kind_; }
    LawContext context() const { return context_; }
    // restitution coefficient e, or the saving share lambda in the economy reading
    double e() const { return e_; }
    double beta2() const { return beta2_; }
    bool conservative() const; // Granular3D with beta2 == 1 - e^2
    double support_min() const;
    double etilde_max() const;
    const std::vector<Atom>& atoms() const { return atoms_; } // empty for UniformShifted

    // <eta^s> or <(e+eta)^s>. Exact atom sums for discrete kinds; adaptive
    // quadrature (1e-12 absolute) for the continuous family.
    double moment(double s, MomentOf of) const;

    // Expectation of an arbitrary function of etilde = e + eta under the law.
    double expect_etilde(const std::function<double(double)>& f) const;

    double sample(Rng& rng) const;

    // Mass placed exactly on eta = 1 - e (etilde = 1); the pathological atom of
    // the steady-state existence discussion.
    double mass_at_unit_etilde() const;

    std::string describe() const;

private:
    RestitutionLaw() = default;
    void validate() const;

    LawKind kind_ = LawKind::Deterministic;
    LawContext context_ = LawContext::Granular3D;
    double e_ = 1.0;
    double beta2_ = 0.0;
    double half_width_ = 0.0;          // UniformShifted only
    std::vector<Atom> atoms_;          // discrete kinds
    std::vector<double> cum_;          // sampling CDF
};

// Two-point law of the contraction-constant discussion: eta takes
// -sqrt(1-e^2)/rho with probability rho^2/(1+rho^2) and +sqrt(1-e^2)*rho with
// probability 1/(1+rho^2). Mean 0 and variance 1-e^2 hold exactly, so the law
// is conservative in the mean. Requires rho >= sqrt(1-e^2)/e and e > 0.
// e == 1 degenerates to the deterministic elastic law.
RestitutionLaw make_two_point(double e, double rho);

// rho = sqrt(1-e^2)/e: atoms etilde in {0, 1/e} with probabilities {1-e^2, e^2}.
RestitutionLaw make_canonical_two_point(double e);

double canonical_rho(double e);

} // namespace maxkin

#endif
