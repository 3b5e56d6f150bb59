#pragma once

#include "relqi/lorentz.hpp"

#include <string>
#include <vector>

namespace relqi
{

enum class Species
{
    boson,
    fermion,
    antifermion,
};

std::string to_string(Species s);
Species species_from_string(const std::string& name);

inline bool is_fermionic(Species s) { return s != Species::boson; }

/// Momentum tolerance for label comparison.
inline constexpr double kLabelTolerance = 1e-12;

/*!
 * Identifies one field mode: momentum, polarization/spin index, species and
 * the spatial port it travels through. The port separates beams that share a
 * momentum, e.g. the two inputs of a beam splitter.
 */
struct ModeLabel
{
    FourVector momentum;
    int index = 0;
    Species species = Species::boson;
    int port = 0;

    bool operator==(const ModeLabel& other) const;
    bool operator!=(const ModeLabel& other) const { return !(*this == other); }
};

std::string describe(const ModeLabel& label);

/// Position of `label` in `modes`, or -1.
int find_mode(const std::vector<ModeLabel>& modes, const ModeLabel& label);

}  // namespace relqi
