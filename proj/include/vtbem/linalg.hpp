#ifndef VTBEM_LINALG_HPP
#define VTBEM_LINALG_HPP

#include <Eigen/Dense>
#include <vector>

#include "vtbem/types.hpp"

namespace vtbem {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// LU with partial pivoting plus a Hager-style 1-norm condition estimate.
class DenseSolver {
public:
    explicit DenseSolver(Mat A);

    Vec solve(const Vec& b) const;
    Mat solve(const Mat& B) const;
    Vec solve_adjoint(const Vec& b) const;
    double cond1() const; // ||A||_1 * est(||A^-1||_1)
    double backward_error(const Vec& x, const Vec& b) const;
    int size() const { return int(a_.rows()); }
    const Mat& matrix() const { return a_; }

private:
    Mat a_;
    Eigen::PartialPivLU<Mat> lu_;
    Eigen::VectorXd rscale_;
    double anorm1_ = 0.0;
    mutable double cond_cache_ = -1.0;
};

std::vector<Complex> eigenvalues(const Mat& A);
Eigen::VectorXd singular_values(const Mat& A);

} // namespace vtbem

#endif
