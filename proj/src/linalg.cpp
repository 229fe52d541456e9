#include "vtbem/linalg.hpp"

#include <cmath>

namespace vtbem {

DenseSolver::DenseSolver(Mat A) : a_(std::move(A)) {
    anorm1_ = 0.0;
    for (int c = 0; c < a_.cols(); ++c) anorm1_ = std::max(anorm1_, a_.col(c).cwiseAbs().sum());
    // row equilibration: block systems mix identity scales c1/2 and 1/2,
    // three orders apart; scaling keeps the LU noise at the smaller blocks'
    // relative level
    int n = int(a_.rows());
    rscale_ = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) {
        double m = a_.row(i).cwiseAbs().maxCoeff();
        if (m > 0.0) rscale_(i) = 1.0 / m;
    }
    Mat scaled = rscale_.cast<Complex>().asDiagonal() * a_;
    lu_.compute(scaled);
    const auto& U = lu_.matrixLU();
    for (int i = 0; i < U.rows(); ++i) {
        if (std::abs(U(i, i)) < 1e-300) fail(Err::SingularSystem, "LU pivot underflow");
    }
}

Vec DenseSolver::solve(const Vec& b) const { return lu_.solve(rscale_.cast<Complex>().asDiagonal() * b); }

Mat DenseSolver::solve(const Mat& B) const { return lu_.solve(rscale_.cast<Complex>().asDiagonal() * B); }

Vec DenseSolver::solve_adjoint(const Vec& b) const {
    // (R A)^H z = b via the stored factors P (RA) = L U
    const Mat& f = lu_.matrixLU();
    Vec w = f.triangularView<Eigen::Upper>().adjoint().solve(b);
    Vec v = f.triangularView<Eigen::UnitLower>().adjoint().solve(w);
    Vec z = lu_.permutationP().transpose() * v;
    return rscale_.cast<Complex>().asDiagonal() * z;
}

double DenseSolver::cond1() const {
    if (cond_cache_ >= 0.0) return cond_cache_;
    // Hager's estimator for ||A^-1||_1 using a few solves
    int n = size();
    Vec x = Vec::Constant(n, Complex(1.0 / n, 0.0));
    double est = 0.0;
    for (int it = 0; it < 6; ++it) {
        Vec y = solve(x);
        est = y.cwiseAbs().sum();
        Vec xi(n);
        for (int i = 0; i < n; ++i) {
            double m = std::abs(y(i));
            xi(i) = (m == 0.0) ? Complex(1.0, 0.0) : y(i) / m;
        }
        Vec z = solve_adjoint(xi);
        int jmax = 0;
        double zmax = 0.0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(z(i)) > zmax) {
                zmax = std::abs(z(i));
                jmax = i;
            }
        }
        double zx = std::abs((z.adjoint() * x)(0));
        if (zmax <= zx) break;
        x = Vec::Zero(n);
        x(jmax) = 1.0;
    }
    cond_cache_ = anorm1_ * est;
    return cond_cache_;
}

double DenseSolver::backward_error(const Vec& x, const Vec& b) const {
    double denom = anorm1_ * x.cwiseAbs().maxCoeff();
    if (denom == 0.0) return 0.0;
    return (a_ * x - b).cwiseAbs().maxCoeff() / denom;
}

std::vector<Complex> eigenvalues(const Mat& A) {
    Eigen::ComplexEigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
    std::vector<Complex> out(size_t(A.rows()));
    for (int i = 0; i < A.rows(); ++i) out[size_t(i)] = es.eigenvalues()(i);
    return out;
}

Eigen::VectorXd singular_values(const Mat& A) {
    Eigen::BDCSVD<Mat> svd(A);
    return svd.singularValues();
}

} // namespace vtbem
