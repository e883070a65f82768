#include "tbethe/ed.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>

#include "tbethe/errors.hpp"

namespace tbethe::ed {

namespace {

void check_cap(int sites, int cap) {
    if (sites < 1) throw SpecError("sites must be >= 1");
    if (sites > cap)
        throw SpecError("chain size " + std::to_string(sites) + " exceeds the cap " +
                        std::to_string(cap));
}

} // namespace

MatrixXcd build_hamiltonian(int sites, double beta, int size_cap) {
    check_cap(sites, size_cap);
    const int dim = 1 << sites;
    MatrixXcd h = MatrixXcd::Zero(dim, dim);
    const cdouble hop_fwd = std::exp(cdouble(0, -beta)); // sigma^+_N sigma^-_1 phase
    const cdouble hop_bwd = std::exp(cdouble(0, +beta));

    for (int n = 0; n < sites; ++n) {
        const int m = (n + 1) % sites;
        const bool boundary = (m != n + 1);
        for (int state = 0; state < dim; ++state) {
            const int sn = (state >> n) & 1;
            const int sm = (state >> m) & 1;
            // (1/4)(sigma^z sigma^z - 1)
            h(state, state) += sn == sm ? 0.0 : -0.5;
            // (1/2)(e^{-i beta} sigma^+_n sigma^-_m + e^{+i beta} sigma^-_n sigma^+_m)
            // on the boundary bond, plain on the bulk bonds
            if (sn == 1 && sm == 0) { // down at n, up at m: sigma^+_n sigma^-_m acts
                const int flipped = state ^ (1 << n) ^ (1 << m);
                h(flipped, state) += 0.5 * (boundary ? hop_fwd : cdouble(1));
            } else if (sn == 0 && sm == 1) {
                const int flipped = state ^ (1 << n) ^ (1 << m);
                h(flipped, state) += 0.5 * (boundary ? hop_bwd : cdouble(1));
            }
        }
    }
    return h;
}

std::vector<int> sector_basis(int sites, int magnons) {
    std::vector<int> basis;
    const int dim = 1 << sites;
    for (int s = 0; s < dim; ++s)
        if (std::popcount(unsigned(s)) == magnons) basis.push_back(s);
    return basis;
}

SectorSpectrum sector_spectrum(int sites, int magnons, double beta, bool want_vectors,
                               int size_cap) {
    check_cap(sites, size_cap);
    if (magnons < 0 || magnons > sites) throw SpecError("magnon number out of range");
    const auto h = build_hamiltonian(sites, beta, size_cap);
    const auto basis = sector_basis(sites, magnons);
    const int d = int(basis.size());
    MatrixXcd block(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) block(i, j) = h(basis[i], basis[j]);

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(block,
                                                want_vectors ? Eigen::ComputeEigenvectors
                                                             : Eigen::EigenvaluesOnly);
    SectorSpectrum out;
    out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
    if (want_vectors) {
        const int dim = 1 << sites;
        for (int k = 0; k < d; ++k) {
            VectorXcd full = VectorXcd::Zero(dim);
            for (int i = 0; i < d; ++i) full(basis[i]) = es.eigenvectors()(i, k);
            out.eigenvectors.push_back(std::move(full));
        }
    }
    return out;
}

SpectrumReport match_spectrum(int sites, int magnons, double beta,
                              const std::vector<BetheLevel>& levels, double threshold) {
    SpectrumReport rep;
    rep.sector_magnons = magnons;
    rep.ed_eigenvalues = sector_spectrum(sites, magnons, beta).eigenvalues;

    std::vector<bool> taken(rep.ed_eigenvalues.size(), false);
    for (std::size_t b = 0; b < levels.size(); ++b) {
        const auto& lvl = levels[b];
        // at beta = 0 a highest-weight level with M' magnons appears in
        // sectors M' <= M <= N - M'
        if (beta == 0.0 && (lvl.magnons > magnons || magnons > sites - lvl.magnons)) continue;
        if (beta != 0.0 && lvl.magnons != magnons) continue;
        int best = -1, second = -1;
        double best_d = threshold, second_d = threshold;
        for (std::size_t e = 0; e < rep.ed_eigenvalues.size(); ++e) {
            if (taken[e]) continue;
            const double d = std::abs(rep.ed_eigenvalues[e] - lvl.energy);
            if (d < best_d) {
                second = best;
                second_d = best_d;
                best = int(e);
                best_d = d;
            } else if (d < second_d) {
                second = int(e);
                second_d = d;
            }
        }
        if (best < 0) {
            rep.unmatched_bethe.push_back(int(b));
            continue;
        }
        taken[best] = true;
        SpectrumMatch m;
        m.roots = lvl.roots;
        m.energy = lvl.energy;
        m.matched_ed_index = best;
        m.abs_delta = best_d;
        // genuinely degenerate multiplets land within the threshold of each
        // other; that is expected, so the flag marks only near-degeneracy
        // between *distinct* values
        m.ambiguous = (second >= 0 && std::abs(rep.ed_eigenvalues[second] - lvl.energy) <
                                          threshold &&
                       std::abs(rep.ed_eigenvalues[second] - rep.ed_eigenvalues[best]) >
                           threshold * 10);
        rep.matches.push_back(std::move(m));
    }
    for (std::size_t e = 0; e < rep.ed_eigenvalues.size(); ++e)
        if (!taken[e]) rep.unmatched_ed.push_back(int(e));
    return rep;
}

double eigvec_overlap(const VectorXcd& v, const VectorXcd& w) {
    if (v.size() != w.size()) throw SpecError("overlap: dimension mismatch");
    const double nv = v.norm(), nw = w.norm();
    if (nv == 0.0 || nw == 0.0) throw SpecError("overlap: zero vector");
    return std::abs(v.dot(w)) / (nv * nw);
}

MatrixXcd sz_total(int sites) {
    const int dim = 1 << sites;
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < dim; ++s)
        m(s, s) = 0.5 * (sites - 2 * std::popcount(unsigned(s)));
    return m;
}

MatrixXcd sx_total(int sites) {
    const int dim = 1 << sites;
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < dim; ++s)
        for (int n = 0; n < sites; ++n) m(s ^ (1 << n), s) += 0.5;
    return m;
}

MatrixXcd lowering(int sites, int site) {
    if (site < 1 || site > sites) throw SpecError("site index out of range");
    const int bit = 1 << (site - 1);
    const int dim = 1 << sites;
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < dim; ++s)
        if (!(s & bit)) m(s | bit, s) = 1.0; // up -> down
    return m;
}

} // namespace tbethe::ed
