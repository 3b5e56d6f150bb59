#include "relqi/random.hpp"

#include <cmath>
#include <numbers>

namespace relqi
{

Vec3 random_unit_vector(Rng& rng)
{
    std::normal_distribution<double> normal;
    Vec3 v;
    do {
        v = Vec3(normal(rng), normal(rng), normal(rng));
    } while (v.norm() < 1e-6);
    return v.normalized();
}

LorentzTransform random_boost(Rng& rng, double max_rapidity)
{
    std::uniform_real_distribution<double> eta(0.0, max_rapidity);
    const double rapidity = eta(rng);
    return LorentzTransform::boost(rapidity, random_unit_vector(rng));
}

LorentzTransform random_rotation(Rng& rng)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double theta = angle(rng);
    return LorentzTransform::rotation(theta, random_unit_vector(rng));
}

LorentzTransform random_lorentz(Rng& rng, double max_rapidity)
{
    const LorentzTransform r1 = random_rotation(rng);
    const LorentzTransform b = random_boost(rng, max_rapidity);
    const LorentzTransform r2 = random_rotation(rng);
    return r2 * b * r1;
}

FourVector random_lightlike(Rng& rng, double min_energy, double max_energy)
{
    std::uniform_real_distribution<double> energy(min_energy, max_energy);
    const double e = energy(rng);
    return mass_shell(0.0, e * random_unit_vector(rng));
}

FourVector random_massive(Rng& rng, double mass, double max_ratio)
{
    std::uniform_real_distribution<double> ratio(0.0, max_ratio);
    const double r = ratio(rng);
    return mass_shell(mass, r * mass * random_unit_vector(rng));
}

}  // namespace relqi
