#pragma once

#include "relqi/fields.hpp"
#include "relqi/fock.hpp"
#include "relqi/interferometer.hpp"

#include <functional>
#include <string>
#include <vector>

namespace relqi
{

/// Frame-invariance tolerance on detector statistics.
inline constexpr double kInvarianceTolerance = 1e-9;

struct FieldDiagnostic
{
    std::string mode;
    FieldKind kind;
    double raw_unitarity_defect;
    double unitarity_defect;
    bool raw_singular;
};

struct ExperimentReport
{
    std::string experiment;
    DetectionStatistics rest_frame_stats;
    DetectionStatistics boosted_frame_stats;
    double max_discrepancy = 0.0;
    double tolerance = kInvarianceTolerance;
    std::vector<FieldDiagnostic> field_diagnostics;
    /// Named scalar checks specific to the experiment such as coincidence rates and amplitude residuals.
    std::vector<std::pair<std::string, double>> checks;
    bool truncation_flagged = false;
    bool pass = false;

    double check(const std::string& name) const;
};

struct TwinPhotonOptions
{
    int polarization = 0;
    FourVector ell{};
    int cutoff = 2;
    PolarizationFrame frame = PolarizationFrame::transported;
};

/*!
 * Two photons of equal polarization on the two input ports of a 50:50 beam
 * splitter, simulated in the rest frame and again in the frame reached by
 * Lambda: input labels and the beam-splitter Hamiltonian are carried over
 * by the electromagnetic mode map, then evolved and counted per port.
 */
ExperimentReport twin_photon(const FourVector& k1, const FourVector& k2, const LorentzTransform& lambda,
                             const TwinPhotonOptions& options = {});

struct TwinElectronOptions
{
    FourVector ell{};
};

/*!
 * Two electrons with the same spin index on the two ports of a fermionic
 * 50:50 beam splitter. Reports the per-port statistics in both frames and
 * the amplitude residual of the boosted output against
 * sum_l D_lj(k1) D_lj(k2) b'^+_l(port 1) b'^+_l(port 2) |0>.
 */
ExperimentReport twin_electron(const FourVector& k1, const FourVector& k2, double mass, int spin,
                               const LorentzTransform& lambda, const TwinElectronOptions& options = {});

using Experiment = std::function<ExperimentReport(const LorentzTransform&)>;

struct SweepReport
{
    std::vector<ExperimentReport> cases;
    double max_discrepancy = 0.0;
    double tolerance = kInvarianceTolerance;
    bool pass = true;
};

SweepReport frame_invariance_sweep(const Experiment& experiment, const std::vector<LorentzTransform>& family);

/// Bosonic frame map a(k) -> a'(Lambda k) for photon modes (one port, both polarizations).
BogoliubovMap photon_frame_map(const std::vector<ModeLabel>& modes, const LorentzTransform& lambda,
                               const FourVector& ell, PolarizationFrame frame, std::vector<FieldDiagnostic>* diagnostics = nullptr);

/// Fermionic frame map over [fermions.., antifermions..] with two spin states per momentum/port.
BogoliubovMap electron_frame_map(const std::vector<ModeLabel>& physical_modes, double mass,
                                 const LorentzTransform& lambda, const FourVector& ell,
                                 std::vector<FieldDiagnostic>* diagnostics = nullptr);

}  // namespace relqi
