#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "tbethe/model.hpp"

namespace tbethe::ed {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Computational basis: index bitmask with bit n = spin at site n+1, 0 = up.
/// Twisted Hamiltonian per the boundary rotation: the boundary hop picks up
/// phases e^{-+i beta}, the zz bond is untouched.
MatrixXcd build_hamiltonian(int sites, double beta, int size_cap = 14);

/// Basis states of the S^z = N/2 - M weight space, ascending bitmask order.
std::vector<int> sector_basis(int sites, int magnons);

struct SectorSpectrum {
    std::vector<double> eigenvalues;        // ascending
    std::vector<VectorXcd> eigenvectors;    // in the full 2^N space, if requested
};

SectorSpectrum sector_spectrum(int sites, int magnons, double beta, bool want_vectors = false,
                               int size_cap = 14);

/// One Bethe prediction to be matched against the exact spectrum.
struct BetheLevel {
    RootSet roots;
    int magnons = 0;
    double energy = 0.0;
};

struct SpectrumMatch {
    RootSet roots;
    double energy = 0.0;
    int matched_ed_index = -1;
    double abs_delta = 0.0;
    bool ambiguous = false; // a second ED level sat within the threshold
};

struct SpectrumReport {
    int sector_magnons = 0;
    std::vector<double> ed_eigenvalues;
    std::vector<SpectrumMatch> matches;
    std::vector<int> unmatched_ed;
    std::vector<int> unmatched_bethe; // indices into the input levels
    bool complete() const { return unmatched_ed.empty() && unmatched_bethe.empty(); }
};

/// Match Bethe levels against the exact sector-M spectrum at beta = 0. Each
/// highest-weight level with M' <= M magnons contributes one descendant to the
/// sector when M <= N - M'; the input should list every such level once.
SpectrumReport match_spectrum(int sites, int magnons, double beta,
                              const std::vector<BetheLevel>& levels, double threshold = 1e-8);

/// |<v,w>| / (|v| |w|).
double eigvec_overlap(const VectorXcd& v, const VectorXcd& w);

/// sigma^z_total / 2 as a diagonal operator (for symmetry checks).
MatrixXcd sz_total(int sites);
/// S^x_total (for SU(2) checks at beta = 0).
MatrixXcd sx_total(int sites);
/// Lowering operator S^-_k at site k (1-based).
MatrixXcd lowering(int sites, int site);

} // namespace tbethe::ed
