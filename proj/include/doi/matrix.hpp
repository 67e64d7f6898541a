#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace doi {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// All errors thrown by the library derive from Error so callers can catch
// library failures separately from logic bugs.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct SingularBasis : Error { using Error::Error; };
struct ConditioningExceeded : Error { using Error::Error; };
struct ClusterAmbiguity : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct RadiusExceeded : Error { using Error::Error; };
struct SeparationViolation : Error { using Error::Error; };
struct SpectraOverlap : Error { using Error::Error; };
struct NonDiagonalizableInput : Error { using Error::Error; };
struct NuViolation : Error { using Error::Error; };
struct SeparationUnattainable : Error { using Error::Error; };
struct EmptyList : Error { using Error::Error; };
struct DerivativeUnavailable : Error { using Error::Error; };
struct InvalidInput : Error { using Error::Error; };

inline double frob(const CMat& a) { return a.norm(); }

// Throws if a is not square or contains a non-finite entry.
void check_matrix(const CMat& a, const std::string& what);

// Throws DimensionMismatch unless both are n-by-n with the same n.
void check_same_dims(const CMat& a, const CMat& b, const std::string& what);

// 2-norm condition number via SVD; inf if numerically singular.
double condition_number(const CMat& a);

// ||a - b|| / max(1, ||a||), the normalization used for all identity checks.
inline double relative_residual(const CMat& a, const CMat& b) {
    return (a - b).norm() / std::max(1.0, a.norm());
}

}  // namespace doi
