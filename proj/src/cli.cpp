#include "relqi/cli.hpp"

#include "relqi/errors.hpp"
#include "relqi/experiments.hpp"
#include "relqi/random.hpp"
#include "relqi/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace relqi::cli
{
namespace
{

const std::vector<std::string> kCommands = {"transform", "interfere", "twin-photon", "twin-electron", "sweep"};

struct Options
{
    std::string command;
    std::string field = "scalar";
    bool identity = false;
    double rapidity = 0.0;
    std::string axis = "z";
    double angle = 0.0;
    std::string rot_axis = "z";
    bool boost_only = false;
    std::vector<double> momentum;
    std::vector<double> k1;
    std::vector<double> k2;
    double mass = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> ell;
    int cutoff = 0;
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 0;
    int cases = 20;
    double max_rapidity = 2.0;
    std::string frame = "transported";
    int polarization = 0;
    int spin = 1;
    std::string experiment = "twin-photon";
    std::string hamiltonian;
    std::vector<int> input;
    std::optional<json> hamiltonian_inline;
};

struct Output
{
    json document;
    std::string csv;
    int status = kExitOk;
};

std::string fmt(double v)
{
    std::ostringstream s;
    s << std::setprecision(17) << (v == 0.0 ? 0.0 : v);
    return s.str();
}

std::string join(const Occupation& occ, char sep)
{
    std::string s;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i)
            s += sep;
        s += std::to_string(occ[i]);
    }
    return s;
}

Vec3 parse_axis(const std::string& text)
{
    std::string t = text;
    double sign = 1.0;
    if (!t.empty() && (t[0] == '-' || t[0] == '+') && t.size() == 2) {
        sign = t[0] == '-' ? -1.0 : 1.0;
        t = t.substr(1);
    }
    if (t == "x")
        return sign * Vec3::UnitX();
    if (t == "y")
        return sign * Vec3::UnitY();
    if (t == "z")
        return sign * Vec3::UnitZ();
    std::vector<double> parts;
    std::stringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(piece, &used));
            if (used != piece.size())
                throw std::invalid_argument(piece);
        } catch (const std::exception&) {
            throw ValidationError("axis must be x, y, z or a,b,c; got '" + text + "'");
        }
    }
    if (parts.size() != 3)
        throw ValidationError("axis must be x, y, z or a,b,c; got '" + text + "'");
    Vec3 v(parts[0], parts[1], parts[2]);
    if (!v.allFinite() || v.norm() < 1e-12)
        throw ValidationError("axis must be a non-zero finite vector");
    return v.normalized();
}

Vec3 vec3(const std::vector<double>& v, const Vec3& fallback)
{
    if (v.empty())
        return fallback;
    return {v[0], v[1], v[2]};
}

FourVector four(const std::vector<double>& v)
{
    if (v.empty())
        return {};
    return {v[0], v[1], v[2], v[3]};
}

PolarizationFrame parse_frame(const std::string& name)
{
    if (name == "transported")
        return PolarizationFrame::transported;
    if (name == "canonical")
        return PolarizationFrame::canonical;
    throw ValidationError("frame must be 'transported' or 'canonical'");
}

LorentzTransform build_lambda(const Options& o, const CLI::App& app)
{
    const bool has_boost = app.count("--rapidity") > 0;
    const bool has_rotation = app.count("--angle") > 0;
    if (o.identity) {
        if (has_boost || has_rotation)
            throw ValidationError("--identity cannot be combined with --rapidity or --angle");
        return LorentzTransform::identity();
    }
    if (o.boost_only && has_rotation)
        throw ValidationError("--boost-only excludes --angle");
    const LorentzTransform boost = LorentzTransform::boost(o.rapidity, parse_axis(o.axis));
    if (!has_rotation)
        return boost;
    return boost * LorentzTransform::rotation(o.angle, parse_axis(o.rot_axis));
}

void add_lambda_options(CLI::App& sub, Options& o)
{
    sub.add_flag("--identity", o.identity, "Use the identity transform");
    sub.add_option("--rapidity", o.rapidity, "Boost rapidity");
    sub.add_option("--axis", o.axis, "Boost axis: x, y, z or a,b,c");
    sub.add_option("--angle", o.angle, "Rotation angle in radians, applied before the boost");
    sub.add_option("--rot-axis", o.rot_axis, "Rotation axis: x, y, z or a,b,c");
    sub.add_flag("--boost-only", o.boost_only, "Require a pure boost");
}

void add_common_options(CLI::App& sub, Options& o)
{
    sub.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub.add_option("--out", o.out, "Write output to this path instead of stdout");
}

/// Rewrites config-file keys as command-line tokens; explicit flags win.
std::vector<std::string> expand_config(std::vector<std::string> args, Options& o)
{
    std::string path;
    for (auto it = args.begin(); it != args.end();) {
        if (*it == "--config") {
            if (std::next(it) == args.end())
                throw ValidationError("--config needs a path");
            path = *std::next(it);
            it = args.erase(it, std::next(it, 2));
        } else if (it->rfind("--config=", 0) == 0) {
            path = it->substr(9);
            it = args.erase(it);
        } else {
            ++it;
        }
    }
    if (path.empty())
        return args;

    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read config '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object())
        throw ValidationError("config must be a JSON object");

    const bool explicit_command =
        !args.empty() && std::find(kCommands.begin(), kCommands.end(), args.front()) != kCommands.end();
    std::vector<std::string> tokens;
    if (cfg.contains("command")) {
        if (!cfg.at("command").is_string())
            throw ValidationError("config: command must be a string");
        const std::string command = cfg.at("command").get<std::string>();
        if (explicit_command && args.front() != command)
            throw ValidationError("config command '" + command + "' conflicts with '" + args.front() + "'");
        if (!explicit_command)
            tokens.push_back(command);
    }
    if (explicit_command) {
        tokens.push_back(args.front());
        args.erase(args.begin());
    }

    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command")
            continue;
        const std::string flag = "--" + key;
        if (given(flag))
            continue;
        if (key == "hamiltonian" && value.is_object()) {
            o.hamiltonian_inline = value;
            continue;
        }
        auto scalar = [&](const json& v) -> std::string {
            if (v.is_string())
                return v.get<std::string>();
            if (v.is_number())
                return v.dump();
            throw ValidationError("config: unsupported value for '" + key + "'");
        };
        if (value.is_boolean()) {
            if (value.get<bool>())
                tokens.push_back(flag);
        } else if (value.is_array()) {
            tokens.push_back(flag);
            for (const auto& v : value)
                tokens.push_back(scalar(v));
        } else {
            tokens.push_back(flag + "=" + scalar(value));
        }
    }
    tokens.insert(tokens.end(), args.begin(), args.end());
    return tokens;
}

json lambda_json(const LorentzTransform& lambda)
{
    json j = to_json(lambda);
    const auto p = boost_parameters(lambda);
    j["rapidity"] = p.rapidity;
    j["metric_defect"] = lambda.metric_defect();
    return j;
}

Output run_transform(const Options& o, const CLI::App& app)
{
    const FieldKind kind = field_kind_from_string(o.field);
    const bool massless = kind == FieldKind::electromagnetic;
    const double mass = std::isnan(o.mass) ? (massless ? 0.0 : 1.0) : o.mass;
    if (massless && mass != 0.0)
        throw ValidationError("electromagnetic modes are massless");
    if (!massless && mass <= 0.0)
        throw ValidationError("massive field needs a positive mass");
    const Vec3 p = vec3(o.momentum, massless ? Vec3(Vec3::UnitZ()) : Vec3(Vec3::Zero()));
    const FourVector k = mass_shell(mass, p);
    const LorentzTransform lambda = build_lambda(o, app);
    const FourVector ell = four(o.ell);
    const ModeTransformMatrix m = field_bogoliubov(kind, lambda, k, mass, ell, parse_frame(o.frame));

    // Frame map over the internal states of this single momentum.
    const bool fermionic = kind == FieldKind::dirac || kind == FieldKind::antifermion;
    const Species species = kind == FieldKind::dirac         ? Species::fermion
                            : kind == FieldKind::antifermion ? Species::antifermion
                                                             : Species::boson;
    const int offset = fermionic ? 1 : 0;
    std::vector<ModeLabel> source, target;
    for (Eigen::Index j = 0; j < m.matrix.rows(); ++j) {
        source.push_back({k, static_cast<int>(j) + offset, species, 0});
        target.push_back({m.target_momentum, static_cast<int>(j) + offset, species, 0});
    }
    const MatX alpha = (m.phase * m.matrix).adjoint();
    const BogoliubovMap map{source, target, alpha, MatX::Zero(alpha.rows(), alpha.cols()),
                            fermionic ? Statistics::fermionic : Statistics::bosonic};

    Output r;
    json& d = r.document;
    d["command"] = "transform";
    d["field"] = to_string(kind);
    d["mass"] = mass;
    d["momentum"] = to_json(k);
    d["ell"] = to_json(ell);
    if (kind == FieldKind::electromagnetic)
        d["frame"] = o.frame;
    d["lorentz"] = lambda_json(lambda);
    d["transform"] = to_json(m);
    d["map"] = to_json(map);

    std::ostringstream csv;
    csv << "section,row,col,re,im\n";
    auto emit = [&](const char* name, const MatX& mat) {
        for (Eigen::Index i = 0; i < mat.rows(); ++i)
            for (Eigen::Index j = 0; j < mat.cols(); ++j)
                csv << name << ',' << i << ',' << j << ',' << fmt(mat(i, j).real()) << ',' << fmt(mat(i, j).imag())
                    << '\n';
    };
    emit("matrix", m.matrix);
    emit("raw", m.raw);
    csv << "phase,0,0," << fmt(m.phase.real()) << ',' << fmt(m.phase.imag()) << '\n';
    r.csv = csv.str();
    return r;
}

CreationPolynomial polynomial_from_pattern(const std::vector<ModeLabel>& modes, const std::vector<int>& pattern)
{
    if (pattern.size() != modes.size())
        throw ValidationError("--input needs one occupation per mode");
    CreationTerm term{1.0, {}};
    double norm = 1.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (pattern[i] < 0)
            throw ValidationError("occupations must be non-negative");
        for (int n = 0; n < pattern[i]; ++n) {
            term.creators.push_back(modes[i]);
            norm *= n + 1;
        }
    }
    term.coefficient = 1.0 / std::sqrt(norm);
    return {term};
}

json load_hamiltonian(const Options& o)
{
    if (o.hamiltonian_inline)
        return *o.hamiltonian_inline;
    std::ifstream in(o.hamiltonian);
    if (!in)
        throw ValidationError("cannot read Hamiltonian '" + o.hamiltonian + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("Hamiltonian '" + o.hamiltonian + "' is not valid JSON: " + e.what());
    }
}

template <typename H>
Output interfere_with(const H& h, const std::vector<ModeLabel>& modes, const Options& o, int cutoff)
{
    std::vector<int> pattern = o.input;
    if (pattern.empty())
        throw ValidationError("--input is required with a custom Hamiltonian");
    const auto space = std::make_shared<const FockSpace>(modes, cutoff);
    const FockState in = prepare(polynomial_from_pattern(modes, pattern), space);
    const EvolutionResult evolved = evolve(in, h);
    std::vector<std::size_t> all(modes.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    const DetectionStatistics stats = number_statistics(evolved.state, all);

    Output r;
    json& d = r.document;
    d["command"] = "interfere";
    d["hamiltonian"] = to_json(h);
    d["cutoff"] = cutoff;
    d["input"] = pattern;
    d["statistics"] = to_json(stats);
    d["truncation_loss"] = evolved.truncation_loss;
    d["truncation_flagged"] = evolved.flagged;
    const BogoliubovMap map = heisenberg_transform(h);
    d["heisenberg_map"] = to_json(map);
    if (map.number_conserving(1e-12)) {
        const DetectionStatistics hs = number_statistics(apply_bogoliubov(in, map), all);
        d["heisenberg_statistics"] = to_json(hs);
        d["max_discrepancy"] = max_discrepancy(stats, hs);
    }
    if (evolved.flagged)
        r.status = kExitNumerical;

    std::ostringstream csv;
    csv << "pattern,probability\n";
    for (const auto& [occ, p] : stats.outcomes)
        csv << join(occ, ';') << ',' << fmt(p) << '\n';
    r.csv = csv.str();
    return r;
}

Output run_interfere(const Options& o)
{
    if (o.hamiltonian.empty() && !o.hamiltonian_inline) {
        const FourVector k = mass_shell(0.0, Vec3::UnitZ());
        const std::vector<ModeLabel> modes = {{k, 0, Species::boson, 1}, {k, 0, Species::boson, 2}};
        Options hom = o;
        if (hom.input.empty())
            hom.input = {1, 1};
        return interfere_with(beam_splitter(modes[0], modes[1]), modes, hom, o.cutoff ? o.cutoff : 2);
    }
    const json cfg = load_hamiltonian(o);
    const bool fermionic = cfg.is_object() && cfg.contains("statistics") && cfg.at("statistics") == "fermionic";
    if (fermionic) {
        const FermionicBilinearH h = fermionic_hamiltonian_from_json(cfg);
        return interfere_with(h, h.physical_modes(), o, 1);
    }
    const BosonicBilinearH h = bosonic_hamiltonian_from_json(cfg);
    return interfere_with(h, h.modes(), o, o.cutoff ? o.cutoff : kDefaultCutoff);
}

Output report_output(const ExperimentReport& report)
{
    Output r;
    r.document = to_json(report);
    std::ostringstream csv;
    csv << "section,key,value\n";
    for (const auto& [occ, p] : report.rest_frame_stats.outcomes)
        csv << "rest," << join(occ, ';') << ',' << fmt(p) << '\n';
    for (const auto& [occ, p] : report.boosted_frame_stats.outcomes)
        csv << "boosted," << join(occ, ';') << ',' << fmt(p) << '\n';
    for (const auto& [name, v] : report.checks)
        csv << "check," << name << ',' << fmt(v) << '\n';
    csv << "summary,max_discrepancy," << fmt(report.max_discrepancy) << '\n';
    csv << "summary,pass," << (report.pass ? 1 : 0) << '\n';
    r.csv = csv.str();
    if (!report.pass || report.truncation_flagged)
        r.status = kExitNumerical;
    return r;
}

Experiment photon_experiment(const Options& o)
{
    const FourVector k1 = mass_shell(0.0, vec3(o.k1, Vec3::UnitZ()));
    const FourVector k2 = mass_shell(0.0, vec3(o.k2, Vec3::UnitZ()));
    TwinPhotonOptions opts;
    opts.polarization = o.polarization;
    opts.ell = four(o.ell);
    opts.cutoff = o.cutoff ? o.cutoff : 2;
    opts.frame = parse_frame(o.frame);
    return [=](const LorentzTransform& lambda) { return twin_photon(k1, k2, lambda, opts); };
}

Experiment electron_experiment(const Options& o)
{
    const double mass = std::isnan(o.mass) ? 1.0 : o.mass;
    if (mass <= 0.0)
        throw ValidationError("electron mass must be positive");
    const FourVector k1 = mass_shell(mass, vec3(o.k1, Vec3(0.3, 0.0, 0.4)));
    const FourVector k2 = mass_shell(mass, vec3(o.k2, Vec3(-0.3, 0.0, 0.4)));
    TwinElectronOptions opts;
    opts.ell = four(o.ell);
    const int spin = o.spin;
    return [=](const LorentzTransform& lambda) { return twin_electron(k1, k2, mass, spin, lambda, opts); };
}

Output run_twin(const Options& o, const CLI::App& app, bool photon)
{
    const LorentzTransform lambda = build_lambda(o, app);
    const Experiment experiment = photon ? photon_experiment(o) : electron_experiment(o);
    Output r = report_output(experiment(lambda));
    json doc;
    doc["command"] = photon ? "twin-photon" : "twin-electron";
    doc["lorentz"] = lambda_json(lambda);
    doc["report"] = r.document;
    r.document = doc;
    return r;
}

Output run_sweep(const Options& o)
{
    if (o.cases < 1)
        throw ValidationError("--cases must be at least 1");
    if (!(o.max_rapidity >= 0.0) || o.max_rapidity > kMaxRapidity)
        throw RangeError("--max-rapidity out of range");
    const bool photon = o.experiment == "twin-photon";
    const Experiment experiment = photon ? photon_experiment(o) : electron_experiment(o);
    Rng rng(o.seed);
    std::vector<LorentzTransform> family;
    for (int i = 0; i < o.cases; ++i)
        family.push_back(random_lorentz(rng, o.max_rapidity));
    const SweepReport sweep = frame_invariance_sweep(experiment, family);

    Output r;
    json& d = r.document;
    d["command"] = "sweep";
    d["experiment"] = o.experiment;
    d["generator"] = kRngName;
    d["seed"] = o.seed;
    d["cases"] = o.cases;
    d["max_rapidity"] = o.max_rapidity;
    json transforms = json::array();
    for (const auto& lambda : family)
        transforms.push_back(lambda_json(lambda));
    d["transforms"] = transforms;
    d["report"] = to_json(sweep);

    std::ostringstream csv;
    csv << "case,rapidity,max_discrepancy,pass\n";
    for (std::size_t i = 0; i < sweep.cases.size(); ++i)
        csv << i << ',' << fmt(boost_parameters(family[i]).rapidity) << ',' << fmt(sweep.cases[i].max_discrepancy)
            << ',' << (sweep.cases[i].pass ? 1 : 0) << '\n';
    r.csv = csv.str();
    if (!sweep.pass)
        r.status = kExitNumerical;
    return r;
}

int execute(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    Options o;
    std::vector<std::string> args = expand_config(raw_args, o);

    CLI::App app{"Relativistic mode transforms and frame-invariance experiments", "relqi"};
    app.require_subcommand(1);

    auto* transform = app.add_subcommand("transform", "Emit the mode transformation matrix of one field mode");
    transform->add_option("--field", o.field, "scalar, vector, em, dirac or antifermion");
    transform->add_option("--momentum", o.momentum, "Spatial momentum px py pz")->expected(3);
    transform->add_option("--mass", o.mass, "Particle mass");
    transform->add_option("--frame", o.frame, "Photon polarization frame: transported or canonical");
    transform->add_option("--ell", o.ell, "Translation four-vector t x y z")->expected(4);
    add_lambda_options(*transform, o);
    add_common_options(*transform, o);

    auto* interfere = app.add_subcommand("interfere", "Evolve an occupation pattern under a bilinear Hamiltonian");
    interfere->add_option("--hamiltonian", o.hamiltonian, "Hamiltonian JSON file");
    interfere->add_option("--input", o.input, "Occupation per mode");
    interfere->add_option("--cutoff", o.cutoff, "Bosonic occupation cutoff");
    add_common_options(*interfere, o);

    auto add_photon = [&](CLI::App& sub) {
        sub.add_option("--k1", o.k1, "Momentum of the photon in port 1")->expected(3);
        sub.add_option("--k2", o.k2, "Momentum of the photon in port 2")->expected(3);
        sub.add_option("--polarization", o.polarization, "Shared polarization index 0 or 1");
        sub.add_option("--cutoff", o.cutoff, "Bosonic occupation cutoff");
        sub.add_option("--frame", o.frame, "Photon polarization frame: transported or canonical");
        sub.add_option("--ell", o.ell, "Translation four-vector t x y z")->expected(4);
    };
    auto add_electron = [&](CLI::App& sub) {
        sub.add_option("--k1", o.k1, "Momentum of the electron in port 1")->expected(3);
        sub.add_option("--k2", o.k2, "Momentum of the electron in port 2")->expected(3);
        sub.add_option("--mass", o.mass, "Electron mass");
        sub.add_option("--spin", o.spin, "Shared spin index 1 or 2");
        sub.add_option("--ell", o.ell, "Translation four-vector t x y z")->expected(4);
    };

    auto* photon = app.add_subcommand("twin-photon", "Two photons on a beam splitter in two frames");
    add_photon(*photon);
    add_lambda_options(*photon, o);
    add_common_options(*photon, o);

    auto* electron = app.add_subcommand("twin-electron", "Two electrons on a beam splitter in two frames");
    add_electron(*electron);
    add_lambda_options(*electron, o);
    add_common_options(*electron, o);

    auto* sweep = app.add_subcommand("sweep", "Frame-invariance check over seeded random Lorentz transforms");
    sweep->add_option("--experiment", o.experiment, "twin-photon or twin-electron")
        ->check(CLI::IsMember({"twin-photon", "twin-electron"}));
    sweep->add_option("--seed", o.seed, "Generator seed");
    sweep->add_option("--cases", o.cases, "Number of random transforms");
    sweep->add_option("--max-rapidity", o.max_rapidity, "Upper bound on the boost rapidity");
    sweep->add_option("--k1", o.k1, "Momentum in port 1")->expected(3);
    sweep->add_option("--k2", o.k2, "Momentum in port 2")->expected(3);
    sweep->add_option("--mass", o.mass, "Electron mass");
    sweep->add_option("--spin", o.spin, "Shared electron spin index 1 or 2");
    sweep->add_option("--polarization", o.polarization, "Shared photon polarization index 0 or 1");
    sweep->add_option("--cutoff", o.cutoff, "Bosonic occupation cutoff");
    sweep->add_option("--frame", o.frame, "Photon polarization frame: transported or canonical");
    sweep->add_option("--ell", o.ell, "Translation four-vector t x y z")->expected(4);
    add_common_options(*sweep, o);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    Output result;
    if (transform->parsed())
        result = run_transform(o, *transform);
    else if (interfere->parsed())
        result = run_interfere(o);
    else if (photon->parsed())
        result = run_twin(o, *photon, true);
    else if (electron->parsed())
        result = run_twin(o, *electron, false);
    else
        result = run_sweep(o);

    const std::string text = o.format == "csv" ? result.csv : result.document.dump(2) + "\n";
    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream file(o.out, std::ios::binary);
        if (!file)
            throw ValidationError("cannot write '" + o.out + "'");
        file << text;
    }
    return result.status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        return execute(args, out, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace relqi::cli
