#include "relqi/experiments.hpp"

#include "relqi/errors.hpp"

#include <cmath>
#include <map>

namespace relqi
{
namespace
{

// Groups mode positions by (momentum, port) preserving first appearance.
std::vector<std::vector<std::size_t>> group_by_momentum(const std::vector<ModeLabel>& modes, Species species)
{
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i].species != species)
            continue;
        bool placed = false;
        for (auto& g : groups) {
            const ModeLabel& head = modes[g.front()];
            ModeLabel probe = modes[i];
            probe.index = head.index;
            if (probe == head) {
                g.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed)
            groups.push_back({i});
    }
    return groups;
}

// Fill alpha(source, target) = conj(phase * M(j, l)) for one momentum group.
void place_block(MatX& alpha, const std::vector<std::size_t>& group, const ModeTransformMatrix& m, int index_offset,
                 const std::vector<ModeLabel>& modes)
{
    for (std::size_t src : group)
        for (std::size_t dst : group) {
            const int l = modes[src].index - index_offset;
            const int j = modes[dst].index - index_offset;
            alpha(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(dst)) = std::conj(m.phase * m.matrix(j, l));
        }
}

void check_group(const std::vector<std::size_t>& group, const std::vector<ModeLabel>& modes, int lo, int hi)
{
    if (static_cast<int>(group.size()) != hi - lo + 1)
        throw ValidationError("each momentum/port needs the full set of internal states");
    for (std::size_t i : group)
        if (modes[i].index < lo || modes[i].index > hi)
            throw ValidationError("internal index out of range for " + describe(modes[i]));
}

FieldDiagnostic diagnostic_for(const ModeLabel& label, const ModeTransformMatrix& m)
{
    return {describe(label), m.kind, m.diagnostics.raw_unitarity_defect, m.diagnostics.unitarity_defect,
            m.diagnostics.raw_singular};
}

ModeLabel moved(ModeLabel label, const LorentzTransform& lambda)
{
    label.momentum = lambda.apply(label.momentum);
    return label;
}

}  // namespace

double ExperimentReport::check(const std::string& name) const
{
    for (const auto& [key, value] : checks)
        if (key == name)
            return value;
    throw ValidationError("report has no check named '" + name + "'");
}

BogoliubovMap photon_frame_map(const std::vector<ModeLabel>& modes, const LorentzTransform& lambda,
                               const FourVector& ell, PolarizationFrame frame,
                               std::vector<FieldDiagnostic>* diagnostics)
{
    const auto n = static_cast<Eigen::Index>(modes.size());
    MatX alpha = MatX::Zero(n, n);
    std::vector<ModeLabel> target;
    for (const auto& m : modes) {
        if (m.species != Species::boson)
            throw ValidationError("photon frame map over non-bosonic mode");
        target.push_back(moved(m, lambda));
    }
    for (const auto& group : group_by_momentum(modes, Species::boson)) {
        check_group(group, modes, 0, 1);
        const auto u = em_bogoliubov(lambda, modes[group.front()].momentum, ell, frame);
        place_block(alpha, group, u, 0, modes);
        if (diagnostics)
            diagnostics->push_back(diagnostic_for(modes[group.front()], u));
    }
    return {modes, target, alpha, MatX::Zero(n, n), Statistics::bosonic};
}

BogoliubovMap electron_frame_map(const std::vector<ModeLabel>& physical_modes, double mass,
                                 const LorentzTransform& lambda, const FourVector& ell,
                                 std::vector<FieldDiagnostic>* diagnostics)
{
    const auto n = static_cast<Eigen::Index>(physical_modes.size());
    MatX alpha = MatX::Zero(n, n);
    std::vector<ModeLabel> target;
    for (const auto& m : physical_modes)
        target.push_back(moved(m, lambda));
    for (Species species : {Species::fermion, Species::antifermion}) {
        for (const auto& group : group_by_momentum(physical_modes, species)) {
            check_group(group, physical_modes, 1, 2);
            const FourVector& k = physical_modes[group.front()].momentum;
            const auto d = species == Species::fermion ? dirac_bogoliubov(lambda, k, mass, ell)
                                                       : antifermion_bogoliubov(lambda, k, mass, ell);
            place_block(alpha, group, d, 1, physical_modes);
            if (diagnostics)
                diagnostics->push_back(diagnostic_for(physical_modes[group.front()], d));
        }
    }
    return {physical_modes, target, alpha, MatX::Zero(n, n), Statistics::fermionic};
}

ExperimentReport twin_photon(const FourVector& k1, const FourVector& k2, const LorentzTransform& lambda,
                             const TwinPhotonOptions& options)
{
    em_polarization_basis(k1);
    em_polarization_basis(k2);
    if (options.polarization != 0 && options.polarization != 1)
        throw ValidationError("photon polarization index must be 0 or 1");

    const std::vector<ModeLabel> modes = {{k1, 0, Species::boson, 1}, {k1, 1, Species::boson, 1},
                                          {k2, 0, Species::boson, 2}, {k2, 1, Species::boson, 2}};
    const std::vector<std::vector<std::size_t>> ports = {{0, 1}, {2, 3}};
    const BosonicBilinearH h = beam_splitter(modes, {{0, 2}, {1, 3}});
    const CreationPolynomial input = {
        {1.0, {modes[static_cast<std::size_t>(options.polarization)], modes[2 + static_cast<std::size_t>(options.polarization)]}}};

    ExperimentReport report;
    report.experiment = "twin-photon";

    const auto space = std::make_shared<const FockSpace>(modes, options.cutoff);
    const FockState rest_in = prepare(input, space);
    const EvolutionResult rest_out = evolve(rest_in, h);
    report.rest_frame_stats = detector_statistics(rest_out.state, ports);
    const FockState heisenberg_out = apply_bogoliubov(input, heisenberg_transform(h), options.cutoff);

    const BogoliubovMap frame = photon_frame_map(modes, lambda, options.ell, options.frame, &report.field_diagnostics);
    const FockState boosted_in = apply_bogoliubov(input, frame, options.cutoff);
    const BosonicBilinearH boosted_h = transport_hamiltonian(h, frame);
    const EvolutionResult boosted_out = evolve(boosted_in, boosted_h);
    report.boosted_frame_stats = detector_statistics(boosted_out.state, ports);

    report.max_discrepancy = max_discrepancy(report.rest_frame_stats, report.boosted_frame_stats);
    report.truncation_flagged = rest_out.flagged || boosted_out.flagged || rest_in.truncated() || boosted_in.truncated();
    report.checks = {
        {"rest_coincidence", report.rest_frame_stats.probability({1, 1})},
        {"boosted_coincidence", report.boosted_frame_stats.probability({1, 1})},
        {"heisenberg_residual", max_abs(heisenberg_out.amplitudes() - rest_out.state.amplitudes())},
        {"boosted_norm_defect", std::abs(boosted_out.state.norm() - 1.0)},
    };
    report.pass = report.max_discrepancy <= report.tolerance && !report.truncation_flagged;
    return report;
}

ExperimentReport twin_electron(const FourVector& k1, const FourVector& k2, double mass, int spin,
                               const LorentzTransform& lambda, const TwinElectronOptions& options)
{
    require_on_shell(k1, mass);
    require_on_shell(k2, mass);
    if (spin != 1 && spin != 2)
        throw ValidationError("spin index must be 1 or 2");

    const std::vector<ModeLabel> fermions = {{k1, 1, Species::fermion, 1}, {k1, 2, Species::fermion, 1},
                                             {k2, 1, Species::fermion, 2}, {k2, 2, Species::fermion, 2}};
    const FermionicBilinearH h = fermionic_beam_splitter(fermions, {{0, 2}, {1, 3}});
    const auto physical = h.physical_modes();
    const std::vector<std::vector<std::size_t>> ports = {{0, 1}, {2, 3}};
    const auto s = static_cast<std::size_t>(spin - 1);
    const CreationPolynomial input = {{1.0, {fermions[s], fermions[2 + s]}}};

    ExperimentReport report;
    report.experiment = "twin-electron";

    const auto space = std::make_shared<const FockSpace>(physical, 1);
    const FockState rest_in = prepare(input, space);
    const FockState rest_out = evolve(rest_in, h).state;
    report.rest_frame_stats = detector_statistics(rest_out, ports);

    const BogoliubovMap frame = electron_frame_map(physical, mass, lambda, options.ell, &report.field_diagnostics);
    const FockState boosted_in = apply_bogoliubov(input, frame, 1);
    const FermionicBilinearH boosted_h = transport_hamiltonian(h, frame);
    const FockState boosted_out = evolve(boosted_in, boosted_h).state;
    report.boosted_frame_stats = detector_statistics(boosted_out, ports);
    report.max_discrepancy = max_discrepancy(report.rest_frame_stats, report.boosted_frame_stats);

    // Closed form in the boosted frame: each electron picks up its own D and phase.
    const auto d1 = dirac_bogoliubov(lambda, k1, mass, options.ell);
    const auto d2 = dirac_bogoliubov(lambda, k2, mass, options.ell);
    const auto& target = frame.target;
    CreationPolynomial expected_poly;
    for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m)
            expected_poly.push_back({d1.phase * d1.matrix(l, spin - 1) * d2.phase * d2.matrix(m, spin - 1),
                                     {target[static_cast<std::size_t>(l)], target[2 + static_cast<std::size_t>(m)]}});
    const FockState expected = prepare(expected_poly, boosted_out.space());

    const cplx overlap = expected.amplitudes().dot(boosted_out.amplitudes());
    const cplx global = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
    const double full_residual = max_abs(boosted_out.amplitudes() - global * expected.amplitudes());

    const FockSpace& bs = *boosted_out.space();
    double diagonal_residual = 0.0;
    double same_port_cross_spin = 0.0;
    for (int l = 0; l < 2; ++l) {
        Occupation occ(bs.mode_count(), 0);
        occ[static_cast<std::size_t>(l)] = 1;
        occ[2 + static_cast<std::size_t>(l)] = 1;
        const cplx predicted = d1.phase * d1.matrix(l, spin - 1) * d2.phase * d2.matrix(l, spin - 1);
        diagonal_residual = std::max(diagonal_residual, std::abs(boosted_out.amplitude(occ) - global * predicted));
    }
    for (std::size_t port = 0; port < 2; ++port) {
        Occupation occ(bs.mode_count(), 0);
        occ[2 * port] = 1;
        occ[2 * port + 1] = 1;
        same_port_cross_spin = std::max(same_port_cross_spin, std::abs(boosted_out.amplitude(occ)));
    }

    const cplx rest_overlap = rest_in.amplitudes().dot(rest_out.amplitudes());
    report.checks = {
        {"rest_coincidence", report.rest_frame_stats.probability({1, 1})},
        {"boosted_coincidence", report.boosted_frame_stats.probability({1, 1})},
        {"rest_double_occupation",
         report.rest_frame_stats.probability({2, 0}) + report.rest_frame_stats.probability({0, 2})},
        {"boosted_double_occupation",
         report.boosted_frame_stats.probability({2, 0}) + report.boosted_frame_stats.probability({0, 2})},
        {"rest_self_overlap", std::abs(rest_overlap)},
        {"boosted_state_residual", full_residual},
        {"same_spin_amplitude_residual", diagonal_residual},
        {"same_port_cross_spin_amplitude", same_port_cross_spin},
    };
    report.pass = report.max_discrepancy <= report.tolerance;
    return report;
}

SweepReport frame_invariance_sweep(const Experiment& experiment, const std::vector<LorentzTransform>& family)
{
    SweepReport sweep;
    for (const auto& lambda : family) {
        sweep.cases.push_back(experiment(lambda));
        const auto& r = sweep.cases.back();
        sweep.max_discrepancy = std::max(sweep.max_discrepancy, r.max_discrepancy);
        sweep.pass = sweep.pass && r.pass;
    }
    sweep.pass = sweep.pass && sweep.max_discrepancy <= sweep.tolerance;
    return sweep;
}

}  // namespace relqi
