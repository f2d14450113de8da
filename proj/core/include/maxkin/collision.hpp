#ifndef MAXKIN_COLLISION_HPP
#define MAXKIN_COLLISION_HPP

#include "maxkin/restitution.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace maxkin {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Unit vector on S^2; the angular parameter of the collision map.
struct ScatterDirection {
    Vec3 sigma;
    explicit ScatterDirection(const Vec3& s) : sigma(s) {
        if (std::fabs(s.norm() - 1.0) > 1e-14)
            throw std::invalid_argument("ScatterDirection: |sigma| must be 1");
    }
};

// sigma uniform on the sphere: cos(theta) uniform on [-1,1], azimuth uniform.
ScatterDirection sample_direction(Rng& rng);

struct CollisionRule3D {
    double e;
    RestitutionLaw law;

    CollisionRule3D(double e_, RestitutionLaw law_) : e(e_), law(std::move(law_)) {
        if (law.context() != LawContext::Granular3D)
            throw std::invalid_argument("CollisionRule3D: law must carry the Granular3D context");
        if (law.e() != e)
            throw std::invalid_argument("CollisionRule3D: coefficient mismatch with law");
        if (e + law.support_min() < -1e-14)
            throw std::invalid_argument("CollisionRule3D: etilde = e + eta must stay nonnegative");
    }
};

struct TradeRule1D {
    double lambda;         // p = lambda, q = 1 - lambda
    RestitutionLaw law;    // Economy1D context; support in [-lambda, inf)
    // Alternative share convention: eta multiplies the (1-lambda) share instead
    // of the lambda share. Off by default; S(2) is identical either way but
    // higher moments differ, and no quantitative claim here is tied to it.
    bool eta_on_keep_share = false;

    TradeRule1D(double lambda_, RestitutionLaw law_, bool alt_share = false)
        : lambda(lambda_), law(std::move(law_)), eta_on_keep_share(alt_share) {
        if (!(lambda >= 0.0 && lambda <= 1.0))
            throw std::invalid_argument("TradeRule1D: lambda must lie in [0,1]");
        if (law.context() != LawContext::Economy1D)
            throw std::invalid_argument("TradeRule1D: law must carry the Economy1D context");
        if (law.e() != lambda)
            throw std::invalid_argument("TradeRule1D: lambda mismatch with law");
        if (lambda + law.support_min() < -1e-14)
            throw std::invalid_argument("TradeRule1D: lambda + eta must stay nonnegative (no debt)");
    }
};

// Binary collision with a fixed realization etilde of the random restitution:
//   v' = (v+w)/2 + (1-etilde)/4 (v-w) + (1+etilde)/4 |v-w| sigma
//   w' = (v+w)/2 - (1-etilde)/4 (v-w) - (1+etilde)/4 |v-w| sigma
// Momentum v'+w' = v+w holds to rounding by construction; v = w maps to the
// midpoint for any sigma.
std::pair<Vec3, Vec3> collide_3d(const Vec3& v, const Vec3& w, const ScatterDirection& sigma,
                                 double etilde);

// Binary trade with independent returns eta, eta_star:
//   v' = (lambda+eta) v + (1-lambda) w,   w' = (lambda+eta_star) w + (1-lambda) v
// Both outputs are nonnegative whenever eta, eta_star >= -lambda.
std::pair<double, double> collide_1d(double v, double w, double eta, double eta_star,
                                     const TradeRule1D& rule);

// Energy change of a single realization; equals
// -(1-etilde^2)/4 (|u|^2 - |u| u.sigma) with u = v-w.
double energy_defect_3d(const Vec3& v, const Vec3& w, const ScatterDirection& sigma,
                        double etilde);

// Law-averaged energy change <|v'|^2+|w'|^2> - (|v|^2+|w|^2), computed by the
// exact sum over the law; equals -(1-e^2-beta^2)/4 (|u|^2 - |u| u.sigma), so it
// vanishes identically for conservative laws (beta^2 = 1-e^2).
double mean_energy_defect_3d(const Vec3& v, const Vec3& w, const ScatterDirection& sigma,
                             const CollisionRule3D& rule);

} // namespace maxkin

#endif
