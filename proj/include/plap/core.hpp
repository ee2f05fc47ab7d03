#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace plap {

inline constexpr std::string_view kVersion = "1.0.0";

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorKind {
    Validation,
    Integration,
    SearchFailure,
    BracketFailure,
    DegenerateState,
    SingularPoint,
    OutOfTube,
    DegenerateGradient,
    Exclusion,
    Verification,
    MeshGeneration,
    Location,
    LineSearch,
    Solver,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what)
{
    if (!cond) {
        fail(kind, what);
    }
}

/// The exponent/dimension pair every equation depends on.
struct Params {
    double p = 2.0;
    int n = 2;

    void validate() const;
};

}  // namespace plap
