#include "doi/matrix.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace doi {

void check_matrix(const CMat& a, const std::string& what) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw DimensionMismatch(what + ": expected a nonempty square matrix, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    if (!a.allFinite())
        throw InvalidInput(what + ": matrix contains NaN or Inf entries");
}

void check_same_dims(const CMat& a, const CMat& b, const std::string& what) {
    check_matrix(a, what);
    check_matrix(b, what);
    if (a.rows() != b.rows())
        throw DimensionMismatch(what + ": dimensions differ (" + std::to_string(a.rows()) +
                                " vs " + std::to_string(b.rows()) + ")");
}

double condition_number(const CMat& a) {
    Eigen::JacobiSVD<CMat> svd(a);
    const auto& s = svd.singularValues();
    double smin = s(s.size() - 1);
    if (smin <= 0.0 || !std::isfinite(smin)) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

}  // namespace doi
