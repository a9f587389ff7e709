#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace sympidx {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

enum class ErrorKind {
    NotSymplectic,
    ClusterAmbiguity,
    NotTotallyDegenerateBlock,
    LogFailure,
    DriftExceeded,
    NonIntegerIndex,
    UnresolvedCrossing,
    SpectralProximity,
    NonPositiveMeanIndex,
    MissingIterateData,
    NotClosed,
    OutsideChart,
    ReturnTimeNoConvergence,
    EvenN,
    InvalidParams,
    Schema,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace sympidx
