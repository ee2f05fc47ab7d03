#include "plap/core.hpp"

#include <cmath>

namespace plap {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Integration: return "integration";
    case ErrorKind::SearchFailure: return "search-failure";
    case ErrorKind::BracketFailure: return "bracket-failure";
    case ErrorKind::DegenerateState: return "degenerate-state";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::OutOfTube: return "out-of-tube";
    case ErrorKind::DegenerateGradient: return "degenerate-gradient";
    case ErrorKind::Exclusion: return "exclusion";
    case ErrorKind::Verification: return "verification";
    case ErrorKind::MeshGeneration: return "mesh-generation";
    case ErrorKind::Location: return "location";
    case ErrorKind::LineSearch: return "line-search";
    case ErrorKind::Solver: return "solver";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

void Params::validate() const
{
    require(std::isfinite(p) && p > 1.0, ErrorKind::Validation, "exponent p must satisfy p > 1");
    require(n >= 2, ErrorKind::Validation, "dimension n must satisfy n >= 2");
}

}  // namespace plap
