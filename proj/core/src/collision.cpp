#include "maxkin/collision.hpp"

#include <numbers>

namespace maxkin {

ScatterDirection sample_direction(Rng& rng) {
    const double ct = rng.uniform(-1.0, 1.0);
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return ScatterDirection({st * std::cos(phi), st * std::sin(phi), ct});
}

std::pair<Vec3, Vec3> collide_3d(const Vec3& v, const Vec3& w, const ScatterDirection& sigma,
                                 double etilde) {
    if (!(etilde >= 0.0)) throw std::invalid_argument("collide_3d: etilde must be nonnegative");
    const Vec3 center = 0.5 * (v + w);
    const Vec3 u = v - w;
    const Vec3 d = (0.25 * (1.0 - etilde)) * u + (0.25 * (1.0 + etilde) * u.norm()) * sigma.sigma;
    return {center + d, center - d};
}

std::pair<double, double> collide_1d(double v, double w, double eta, double eta_star,
                                     const TradeRule1D& rule) {
    if (eta < -rule.lambda - 1e-14 || eta_star < -rule.lambda - 1e-14)
        throw std::invalid_argument("collide_1d: eta below -lambda violates the no-debt bound");
    const double p = rule.lambda, q = 1.0 - rule.lambda;
    double vp, wp;
    if (!rule.eta_on_keep_share) {
        vp = (p + eta) * v + q * w;
        wp = (p + eta_star) * w + q * v;
    } else {
        vp = p * v + (q + eta) * w;
        wp = p * w + (q + eta_star) * v;
    }
    return {vp, wp};
}

double energy_defect_3d(const Vec3& v, const Vec3& w, const ScatterDirection& sigma,
                        double etilde) {
    const Vec3 u = v - w;
    return -(1.0 - etilde * etilde) / 4.0 * (u.norm2() - u.norm() * u.dot(sigma.sigma));
}

double mean_energy_defect_3d(const Vec3& v, const Vec3& w, const ScatterDirection& sigma,
                             const CollisionRule3D& rule) {
    const Vec3 u = v - w;
    const double ang = u.norm2() - u.norm() * u.dot(sigma.sigma);
    return rule.law.expect_etilde(
        [&](double et) { return -(1.0 - et * et) / 4.0 * ang; });
}

} // namespace maxkin
