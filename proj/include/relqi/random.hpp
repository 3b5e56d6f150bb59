#pragma once

#include "relqi/lorentz.hpp"

#include <random>

namespace relqi
{

/// Generator used for every randomized sweep; its name goes into reports.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

Vec3 random_unit_vector(Rng& rng);

/// Rapidity uniform in [0, max_rapidity], isotropic axis.
LorentzTransform random_boost(Rng& rng, double max_rapidity);

/// Angle uniform in [0, 2 pi), isotropic axis.
LorentzTransform random_rotation(Rng& rng);

/// rotation * boost * rotation
LorentzTransform random_lorentz(Rng& rng, double max_rapidity);

/// Isotropic direction, energy uniform in [min_energy, max_energy].
FourVector random_lightlike(Rng& rng, double min_energy = 0.5, double max_energy = 2.0);

/// On-shell momentum with |k|/m uniform in [0, max_ratio].
FourVector random_massive(Rng& rng, double mass, double max_ratio);

}  // namespace relqi
