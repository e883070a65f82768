#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tbethe/model.hpp"
#include "tbethe/twist_flow.hpp"

namespace tbethe::aba {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

enum class Entry { A, B, C, D };

/// Complex vector on the 2^N spin-chain space with its magnon sector.
struct StateVector {
    VectorXcd amplitudes;
    int magnon_number = 0;
};

/// Monodromy matrix entry as a dense operator. Built by the aux-space 2x2
/// block recursion over sites; N capped because the matrices are dense.
MatrixXcd monodromy_entry(int sites, Entry entry, cdouble lambda, int size_cap = 12);

/// Twisted transfer matrix t_beta(lambda) = A + e^{-i beta} D.
MatrixXcd transfer_matrix(int sites, cdouble lambda, double beta, int size_cap = 12);

/// H = (i/2) t'(i/2) t(i/2)^{-1} - N/2 from the exact derivative of the
/// transfer matrix at beta = 0.
MatrixXcd hamiltonian_from_transfer(int sites, int size_cap = 12);

/// B(l_M) ... B(l_1) |0>. Refuses roots on the singular values +-i/2; the
/// unchecked variant exists for the null-vector checks.
StateVector bethe_vector(int sites, const RootSet& roots, int size_cap = 14);
StateVector bethe_vector_unchecked(int sites, const RootSet& roots, int size_cap = 14);

/// Numerically extrapolated beta -> 0 limit of beta^{-N} prod B(l_j(beta))|0>,
/// normalized to unit norm with the first significant amplitude real positive.
/// The series must reach order >= N.
struct LimitVector {
    StateVector vector;
    double extrapolation_error = 0.0; // disagreement between extrapolation stages
};
LimitVector singular_limit_vector(const ModelSpec& spec, const TwistSeries& series,
                                  int size_cap = 14);

struct EigenCheckPoint {
    cdouble test_point;
    cdouble rayleigh; // <v, t v> / <v, v>
    double residual;  // ||t v - rayleigh v|| / ||v||
};

struct EigenCheckReport {
    std::vector<EigenCheckPoint> points;
    double max_residual = 0.0;
};

/// Verify the Bethe vector is an eigenvector of t_beta at the given points.
EigenCheckReport transfer_eigenvalue_check(int sites, const RootSet& roots, double beta,
                                           const std::vector<cdouble>& test_points,
                                           int size_cap = 12);

} // namespace tbethe::aba
