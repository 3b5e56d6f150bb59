#include "relqi/serialize.hpp"

#include "relqi/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace relqi
{
namespace
{

const json& field(const json& j, const char* key, const std::string& what)
{
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(what + ": missing key '" + key + "'");
    return j.at(key);
}

double number(const json& j, const std::string& what)
{
    if (!j.is_number())
        throw ValidationError(what + ": expected a number");
    return j.get<double>();
}

std::string pattern_key(const Occupation& occ)
{
    std::string key;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i)
            key += ',';
        key += std::to_string(occ[i]);
    }
    return key;
}

Occupation pattern_from_key(const std::string& key)
{
    Occupation occ;
    std::stringstream in(key);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            std::size_t used = 0;
            occ.push_back(std::stoi(part, &used));
            if (used != part.size())
                throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ValidationError("bad occupation pattern '" + key + "'");
        }
    }
    return occ;
}

json labels_to_json(const std::vector<ModeLabel>& modes)
{
    json out = json::array();
    for (const auto& m : modes)
        out.push_back(to_json(m));
    return out;
}

std::vector<ModeLabel> labels_from_json(const json& j)
{
    if (!j.is_array())
        throw ValidationError("modes: expected an array");
    std::vector<ModeLabel> out;
    for (const auto& m : j)
        out.push_back(mode_label_from_json(m));
    return out;
}

}  // namespace

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what)
{
    if (!j.is_object())
        throw ValidationError(what + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            known = known || key == a;
        if (!known)
            throw ValidationError(what + ": unknown key '" + key + "'");
    }
}

json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2)
        throw ValidationError("complex number must be [re, im]");
    return {number(j[0], "complex"), number(j[1], "complex")};
}

json to_json(const MatX& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

MatX matrix_from_json(const json& j)
{
    if (!j.is_array())
        throw ValidationError("matrix must be a nested array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0) : 0;
    MatX m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ValidationError("matrix rows must have equal length");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

json real_matrix_to_json(const Mat4& m)
{
    json rows = json::array();
    for (int r = 0; r < 4; ++r)
        rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2), m(r, 3)}));
    return rows;
}

Mat4 real4_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 4)
        throw ValidationError("Lorentz matrix must be 4x4");
    Mat4 m;
    for (std::size_t r = 0; r < 4; ++r) {
        if (!j[r].is_array() || j[r].size() != 4)
            throw ValidationError("Lorentz matrix must be 4x4");
        for (std::size_t c = 0; c < 4; ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = number(j[r][c], "Lorentz matrix");
    }
    return m;
}

json to_json(const FourVector& v) { return json::array({v.t(), v.x(), v.y(), v.z()}); }

FourVector four_vector_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 4)
        throw ValidationError("four-vector must be [t, x, y, z]");
    return {number(j[0], "four-vector"), number(j[1], "four-vector"), number(j[2], "four-vector"),
            number(j[3], "four-vector")};
}

json to_json(const LorentzTransform& t)
{
    json out;
    out["matrix"] = real_matrix_to_json(t.matrix());
    out["spinor"] = to_json(MatX(t.spinor()));
    return out;
}

LorentzTransform lorentz_from_json(const json& j)
{
    // rapidity and metric_defect are informational fields written by the CLI
    require_keys(j, {"matrix", "spinor", "rapidity", "metric_defect"}, "Lorentz transform");
    LorentzTransform t = LorentzTransform::from_matrix(real4_from_json(field(j, "matrix", "Lorentz transform")));
    if (!j.contains("spinor"))
        return t;
    const MatX s = matrix_from_json(j.at("spinor"));
    if (s.rows() != 4 || s.cols() != 4)
        throw ValidationError("spinor lift must be 4x4");
    constexpr double tol = 1e-9;
    if (max_abs(s - MatX(t.spinor())) <= tol)
        return t;
    // The matrix fixes the lift only up to sign; pick the other branch.
    const LorentzTransform flipped = t.other_lift();
    if (max_abs(s - MatX(flipped.spinor())) <= tol)
        return flipped;
    throw ValidationError("spinor lift does not match the Lorentz matrix");
}

json to_json(const ModeLabel& m)
{
    json out;
    out["momentum"] = to_json(m.momentum);
    out["index"] = m.index;
    out["species"] = to_string(m.species);
    out["port"] = m.port;
    return out;
}

ModeLabel mode_label_from_json(const json& j)
{
    require_keys(j, {"momentum", "index", "species", "port"}, "mode");
    ModeLabel m;
    m.momentum = four_vector_from_json(field(j, "momentum", "mode"));
    if (j.contains("index")) {
        if (!j.at("index").is_number_integer())
            throw ValidationError("mode: index must be an integer");
        m.index = j.at("index").get<int>();
    }
    if (j.contains("species")) {
        if (!j.at("species").is_string())
            throw ValidationError("mode: species must be a string");
        m.species = species_from_string(j.at("species").get<std::string>());
    }
    if (j.contains("port")) {
        if (!j.at("port").is_number_integer())
            throw ValidationError("mode: port must be an integer");
        m.port = j.at("port").get<int>();
    }
    return m;
}

json to_json(const NormalizationDiagnostics& d)
{
    json out;
    out["raw_unitarity_defect"] = d.raw_unitarity_defect;
    out["unitarity_defect"] = d.unitarity_defect;
    out["raw_singular"] = d.raw_singular;
    out["raw_determinant"] = to_json(d.raw_determinant);
    out["reference_determinant"] = d.reference_determinant;
    out["note"] = d.note;
    return out;
}

json to_json(const ModeTransformMatrix& m)
{
    json out;
    out["kind"] = to_string(m.kind);
    out["matrix"] = to_json(m.matrix);
    out["raw"] = to_json(m.raw);
    if (m.bare_overlap.size())
        out["bare_overlap"] = to_json(m.bare_overlap);
    out["phase"] = to_json(m.phase);
    out["source_momentum"] = to_json(m.source_momentum);
    out["target_momentum"] = to_json(m.target_momentum);
    out["diagnostics"] = to_json(m.diagnostics);
    return out;
}

ModeTransformMatrix mode_transform_from_json(const json& j)
{
    require_keys(j,
                 {"kind", "matrix", "raw", "bare_overlap", "phase", "source_momentum", "target_momentum",
                  "diagnostics"},
                 "mode transform");
    const std::string what = "mode transform";
    ModeTransformMatrix m;
    m.kind = field_kind_from_string(field(j, "kind", what).get<std::string>());
    m.matrix = matrix_from_json(field(j, "matrix", what));
    m.raw = j.contains("raw") ? matrix_from_json(j.at("raw")) : m.matrix;
    if (j.contains("bare_overlap"))
        m.bare_overlap = matrix_from_json(j.at("bare_overlap"));
    m.phase = complex_from_json(field(j, "phase", what));
    m.source_momentum = four_vector_from_json(field(j, "source_momentum", what));
    m.target_momentum = four_vector_from_json(field(j, "target_momentum", what));
    if (m.matrix.rows() != m.matrix.cols() || m.matrix.rows() == 0)
        throw ValidationError("mode transform matrix must be square");
    if (std::abs(std::abs(m.phase) - 1.0) > 1e-10)
        throw ValidationError("mode transform phase must have unit modulus");
    m.diagnostics.unitarity_defect = unitarity_defect(m.matrix);
    m.diagnostics.raw_unitarity_defect = unitarity_defect(m.raw);
    if (m.diagnostics.unitarity_defect > 1e-10)
        throw ValidationError("mode transform matrix is not unitary");
    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        require_keys(d,
                     {"raw_unitarity_defect", "unitarity_defect", "raw_singular", "raw_determinant",
                      "reference_determinant", "note"},
                     "diagnostics");
        if (d.contains("raw_singular"))
            m.diagnostics.raw_singular = d.at("raw_singular").get<bool>();
        if (d.contains("raw_determinant"))
            m.diagnostics.raw_determinant = complex_from_json(d.at("raw_determinant"));
        if (d.contains("reference_determinant"))
            m.diagnostics.reference_determinant = number(d.at("reference_determinant"), "diagnostics");
        if (d.contains("note"))
            m.diagnostics.note = d.at("note").get<std::string>();
    }
    return m;
}

json to_json(const BogoliubovMap& map)
{
    json out;
    out["statistics"] = map.statistics == Statistics::bosonic ? "bosonic" : "fermionic";
    out["source"] = labels_to_json(map.source);
    out["target"] = labels_to_json(map.target);
    out["alpha"] = to_json(map.alpha);
    out["beta"] = to_json(map.beta);
    out["canonical_defect"] = map.canonical_defect();
    return out;
}

BogoliubovMap bogoliubov_from_json(const json& j)
{
    require_keys(j, {"statistics", "source", "target", "alpha", "beta", "canonical_defect"}, "Bogoliubov map");
    const std::string what = "Bogoliubov map";
    BogoliubovMap map;
    const std::string stats = field(j, "statistics", what).get<std::string>();
    if (stats == "bosonic")
        map.statistics = Statistics::bosonic;
    else if (stats == "fermionic")
        map.statistics = Statistics::fermionic;
    else
        throw ValidationError("unknown statistics '" + stats + "'");
    map.source = labels_from_json(field(j, "source", what));
    map.target = labels_from_json(field(j, "target", what));
    map.alpha = matrix_from_json(field(j, "alpha", what));
    map.beta = matrix_from_json(field(j, "beta", what));
    const auto n = static_cast<Eigen::Index>(map.source.size());
    const auto m = static_cast<Eigen::Index>(map.target.size());
    if (map.alpha.rows() != n || map.alpha.cols() != m || map.beta.rows() != n || map.beta.cols() != m)
        throw ValidationError("Bogoliubov map blocks do not match the mode lists");
    map.require_canonical();
    return map;
}

json to_json(const DetectionStatistics& s)
{
    json out = json::object();
    for (const auto& [occ, p] : s.outcomes)
        out[pattern_key(occ)] = p;
    return out;
}

DetectionStatistics statistics_from_json(const json& j)
{
    if (!j.is_object())
        throw ValidationError("statistics must be an object");
    DetectionStatistics s;
    for (const auto& [key, value] : j.items()) {
        const double p = number(value, "statistics");
        if (p < -1e-12 || p > 1.0 + 1e-12)
            throw ValidationError("probability out of range for pattern " + key);
        s.outcomes[pattern_from_key(key)] = p;
    }
    return s;
}

json to_json(const ExperimentReport& r)
{
    json out;
    out["experiment"] = r.experiment;
    out["pass"] = r.pass;
    out["max_discrepancy"] = r.max_discrepancy;
    out["tolerance"] = r.tolerance;
    out["truncation_flagged"] = r.truncation_flagged;
    out["rest_frame_stats"] = to_json(r.rest_frame_stats);
    out["boosted_frame_stats"] = to_json(r.boosted_frame_stats);
    json checks = json::object();
    for (const auto& [name, value] : r.checks)
        checks[name] = value;
    out["checks"] = checks;
    json diags = json::array();
    for (const auto& d : r.field_diagnostics) {
        json e;
        e["mode"] = d.mode;
        e["kind"] = to_string(d.kind);
        e["raw_unitarity_defect"] = d.raw_unitarity_defect;
        e["unitarity_defect"] = d.unitarity_defect;
        e["raw_singular"] = d.raw_singular;
        diags.push_back(e);
    }
    out["field_diagnostics"] = diags;
    return out;
}

json to_json(const SweepReport& r)
{
    json out;
    out["pass"] = r.pass;
    out["max_discrepancy"] = r.max_discrepancy;
    out["tolerance"] = r.tolerance;
    json cases = json::array();
    for (const auto& c : r.cases)
        cases.push_back(to_json(c));
    out["cases"] = cases;
    return out;
}

BosonicBilinearH bosonic_hamiltonian_from_json(const json& j)
{
    require_keys(j, {"statistics", "modes", "A", "B"}, "Hamiltonian");
    if (j.contains("statistics") && j.at("statistics") != "bosonic")
        throw ValidationError("expected a bosonic Hamiltonian");
    const auto modes = labels_from_json(field(j, "modes", "Hamiltonian"));
    const auto n = static_cast<Eigen::Index>(modes.size());
    MatX a = j.contains("A") ? matrix_from_json(j.at("A")) : MatX::Zero(n, n);
    MatX b = j.contains("B") ? matrix_from_json(j.at("B")) : MatX::Zero(n, n);
    return {modes, a, b};
}

json to_json(const BosonicBilinearH& h)
{
    json out;
    out["statistics"] = "bosonic";
    out["modes"] = labels_to_json(h.modes());
    out["A"] = to_json(h.A());
    out["B"] = to_json(h.B());
    return out;
}

FermionicBilinearH fermionic_hamiltonian_from_json(const json& j)
{
    require_keys(j, {"statistics", "modes", "A", "B"}, "Hamiltonian");
    if (field(j, "statistics", "Hamiltonian") != "fermionic")
        throw ValidationError("expected a fermionic Hamiltonian");
    const auto modes = labels_from_json(field(j, "modes", "Hamiltonian"));
    const auto n = static_cast<Eigen::Index>(2 * modes.size());
    MatX a = j.contains("A") ? matrix_from_json(j.at("A")) : MatX::Zero(n, n);
    MatX b = j.contains("B") ? matrix_from_json(j.at("B")) : MatX::Zero(n, n);
    return {modes, a, b};
}

json to_json(const FermionicBilinearH& h)
{
    json out;
    out["statistics"] = "fermionic";
    out["modes"] = labels_to_json(h.fermion_modes());
    out["A"] = to_json(h.calA());
    out["B"] = to_json(h.calB());
    return out;
}

}  // namespace relqi
