#pragma once

#include "relqi/bogoliubov.hpp"
#include "relqi/experiments.hpp"
#include "relqi/fields.hpp"
#include "relqi/fock.hpp"
#include "relqi/interferometer.hpp"
#include "relqi/lorentz.hpp"

#include <json.hpp>

#include <string>

namespace relqi
{

using json = nlohmann::ordered_json;

/// Complex numbers are [re, im]; matrices are row-major nested arrays.
json to_json(const cplx& z);
cplx complex_from_json(const json& j);

json to_json(const MatX& m);
MatX matrix_from_json(const json& j);
json real_matrix_to_json(const Mat4& m);
Mat4 real4_from_json(const json& j);

/// [t, x, y, z]
json to_json(const FourVector& v);
FourVector four_vector_from_json(const json& j);

/// Matrix plus spinor lift; loading re-checks the Lorentz conditions.
json to_json(const LorentzTransform& t);
LorentzTransform lorentz_from_json(const json& j);

json to_json(const ModeLabel& m);
ModeLabel mode_label_from_json(const json& j);

json to_json(const NormalizationDiagnostics& d);
/// Loading rechecks unitarity of the final matrix.
json to_json(const ModeTransformMatrix& m);
ModeTransformMatrix mode_transform_from_json(const json& j);

/// Loading rechecks the symplectic or unitarity condition.
json to_json(const BogoliubovMap& map);
BogoliubovMap bogoliubov_from_json(const json& j);

/// {"1,0": p, ...} keyed by comma-joined occupation patterns.
json to_json(const DetectionStatistics& s);
DetectionStatistics statistics_from_json(const json& j);

json to_json(const ExperimentReport& r);
json to_json(const SweepReport& r);

/// {"modes": [...], "A": [[...]], "B": [[...]]}; unknown keys are rejected.
BosonicBilinearH bosonic_hamiltonian_from_json(const json& j);
json to_json(const BosonicBilinearH& h);

/// Same layout over the fermion modes, with A and B the s-tuple blocks.
FermionicBilinearH fermionic_hamiltonian_from_json(const json& j);
json to_json(const FermionicBilinearH& h);

/// Throws ValidationError if `j` has a key outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what);

}  // namespace relqi
