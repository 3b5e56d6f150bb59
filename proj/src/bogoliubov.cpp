#include "relqi/bogoliubov.hpp"

#include "relqi/errors.hpp"

#include <cmath>
#include <sstream>

namespace relqi
{

std::string to_string(Species s)
{
    switch (s) {
    case Species::boson: return "boson";
    case Species::fermion: return "fermion";
    case Species::antifermion: return "antifermion";
    }
    return "unknown";
}

Species species_from_string(const std::string& name)
{
    if (name == "boson") return Species::boson;
    if (name == "fermion") return Species::fermion;
    if (name == "antifermion") return Species::antifermion;
    throw ValidationError("unknown species '" + name + "'");
}

bool ModeLabel::operator==(const ModeLabel& other) const
{
    return index == other.index && species == other.species && port == other.port
           && (momentum.components() - other.momentum.components()).cwiseAbs().maxCoeff() <= kLabelTolerance;
}

std::string describe(const ModeLabel& label)
{
    std::ostringstream os;
    os << to_string(label.species) << "[port " << label.port << ", index " << label.index << ", k=("
       << label.momentum.t() << ", " << label.momentum.x() << ", " << label.momentum.y() << ", "
       << label.momentum.z() << ")]";
    return os.str();
}

int find_mode(const std::vector<ModeLabel>& modes, const ModeLabel& label)
{
    for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes[i] == label)
            return static_cast<int>(i);
    return -1;
}

BogoliubovMap BogoliubovMap::identity(const std::vector<ModeLabel>& modes, Statistics statistics)
{
    const auto n = static_cast<Eigen::Index>(modes.size());
    return {modes, modes, MatX::Identity(n, n), MatX::Zero(n, n), statistics};
}

MatX BogoliubovMap::nambu() const
{
    const Eigen::Index n = alpha.rows();
    const Eigen::Index m = alpha.cols();
    MatX t(2 * n, 2 * m);
    t << alpha, beta, beta.conjugate(), alpha.conjugate();
    return t;
}

double BogoliubovMap::symplectic_defect() const
{
    const Eigen::Index n = alpha.rows();
    const double first = max_abs(alpha * alpha.adjoint() - beta * beta.adjoint() - MatX::Identity(n, n));
    const double second = max_abs(alpha * beta.transpose() - beta * alpha.transpose());
    return std::max(first, second);
}

double BogoliubovMap::fermionic_unitarity_defect() const
{
    const MatX t = nambu();
    return max_abs(t * t.adjoint() - MatX::Identity(t.rows(), t.rows()));
}

double BogoliubovMap::canonical_defect() const
{
    return statistics == Statistics::bosonic ? symplectic_defect() : fermionic_unitarity_defect();
}

void BogoliubovMap::require_canonical(double tol) const
{
    if (alpha.rows() != static_cast<Eigen::Index>(source.size())
        || alpha.cols() != static_cast<Eigen::Index>(target.size()) || beta.rows() != alpha.rows()
        || beta.cols() != alpha.cols())
        throw ValidationError("Bogoliubov map blocks do not match its mode lists");
    const double defect = canonical_defect();
    if (!(defect <= tol)) {
        std::ostringstream os;
        os << (statistics == Statistics::bosonic ? "symplectic" : "unitarity") << " condition violated by "
           << defect;
        throw ValidationError(os.str());
    }
}

BogoliubovMap BogoliubovMap::then(const BogoliubovMap& second) const
{
    if (target.size() != second.source.size())
        throw ValidationError("cannot compose maps over different mode sets");
    for (std::size_t i = 0; i < target.size(); ++i)
        if (target[i] != second.source[i])
            throw ValidationError("cannot compose maps: intermediate modes differ");
    return from_nambu(nambu() * second.nambu(), source, second.target, statistics);
}

BogoliubovMap BogoliubovMap::inverse() const
{
    if (source.size() != target.size())
        throw ValidationError("only square maps are invertible");
    return from_nambu(nambu().inverse(), target, source, statistics);
}

BogoliubovMap from_nambu(const MatX& nambu, std::vector<ModeLabel> source, std::vector<ModeLabel> target,
                         Statistics statistics)
{
    const auto n = static_cast<Eigen::Index>(source.size());
    const auto m = static_cast<Eigen::Index>(target.size());
    if (nambu.rows() != 2 * n || nambu.cols() != 2 * m)
        throw ValidationError("Nambu matrix shape does not match mode lists");
    return {std::move(source), std::move(target), nambu.topLeftCorner(n, m), nambu.topRightCorner(n, m),
            statistics};
}

}  // namespace relqi
