#include "tbethe/aba.hpp"

#include <bit>
#include <cmath>

#include "tbethe/errors.hpp"

namespace tbethe::aba {

namespace {

void check_cap(int sites, int cap) {
    if (sites < 1) throw SpecError("sites must be >= 1");
    if (sites > cap)
        throw SpecError("chain size " + std::to_string(sites) + " exceeds the cap " +
                        std::to_string(cap));
}

struct Blocks {
    MatrixXcd a, b, c, d;
};

/// kron of a 2x2 site operator with an operator on the lower sites; the new
/// site occupies the high bit.
MatrixXcd site_kron(const Eigen::Matrix2cd& p, const MatrixXcd& x) {
    const int d = int(x.rows());
    MatrixXcd out(2 * d, 2 * d);
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) out.block(s * d, t * d, d, d) = p(s, t) * x;
    return out;
}

/// T^(n) = L_n T^(n-1) in the 2x2 auxiliary space. Site basis: 0 = up.
Blocks monodromy_blocks(int sites, cdouble lambda) {
    Eigen::Matrix2cd lax_aa, lax_ab, lax_ba, lax_bb;
    const cdouble half_i(0, 0.5), iu(0, 1);
    // aux blocks of the Lax operator: [[lam + i sz/2, i sminus],[i splus, lam - i sz/2]]
    lax_aa << lambda + half_i, 0, 0, lambda - half_i;
    lax_ab << 0, 0, iu, 0; // i sigma^-: up -> down
    lax_ba << 0, iu, 0, 0; // i sigma^+
    lax_bb << lambda - half_i, 0, 0, lambda + half_i;

    Blocks t;
    t.a = MatrixXcd::Ones(1, 1);
    t.b = MatrixXcd::Zero(1, 1);
    t.c = MatrixXcd::Zero(1, 1);
    t.d = MatrixXcd::Ones(1, 1);
    for (int n = 1; n <= sites; ++n) {
        Blocks next;
        next.a = site_kron(lax_aa, t.a) + site_kron(lax_ab, t.c);
        next.b = site_kron(lax_aa, t.b) + site_kron(lax_ab, t.d);
        next.c = site_kron(lax_ba, t.a) + site_kron(lax_bb, t.c);
        next.d = site_kron(lax_ba, t.b) + site_kron(lax_bb, t.d);
        t = std::move(next);
    }
    return t;
}

/// Monodromy with its lambda-derivative, for the Hamiltonian formula.
std::pair<Blocks, Blocks> monodromy_blocks_deriv(int sites, cdouble lambda) {
    Eigen::Matrix2cd lax_aa, lax_ab, lax_ba, lax_bb, one2;
    const cdouble half_i(0, 0.5), iu(0, 1);
    lax_aa << lambda + half_i, 0, 0, lambda - half_i;
    lax_ab << 0, 0, iu, 0;
    lax_ba << 0, iu, 0, 0;
    lax_bb << lambda - half_i, 0, 0, lambda + half_i;
    one2 << 1, 0, 0, 1;

    Blocks t, dt;
    t.a = MatrixXcd::Ones(1, 1);
    t.b = MatrixXcd::Zero(1, 1);
    t.c = MatrixXcd::Zero(1, 1);
    t.d = MatrixXcd::Ones(1, 1);
    dt.a = MatrixXcd::Zero(1, 1);
    dt.b = MatrixXcd::Zero(1, 1);
    dt.c = MatrixXcd::Zero(1, 1);
    dt.d = MatrixXcd::Zero(1, 1);
    for (int n = 1; n <= sites; ++n) {
        Blocks next, dnext;
        next.a = site_kron(lax_aa, t.a) + site_kron(lax_ab, t.c);
        next.b = site_kron(lax_aa, t.b) + site_kron(lax_ab, t.d);
        next.c = site_kron(lax_ba, t.a) + site_kron(lax_bb, t.c);
        next.d = site_kron(lax_ba, t.b) + site_kron(lax_bb, t.d);
        // dL = identity in both spaces
        dnext.a = site_kron(one2, t.a) + site_kron(lax_aa, dt.a) + site_kron(lax_ab, dt.c);
        dnext.b = site_kron(one2, t.b) + site_kron(lax_aa, dt.b) + site_kron(lax_ab, dt.d);
        dnext.c = site_kron(one2, t.c) + site_kron(lax_ba, dt.a) + site_kron(lax_bb, dt.c);
        dnext.d = site_kron(one2, t.d) + site_kron(lax_ba, dt.b) + site_kron(lax_bb, dt.d);
        t = std::move(next);
        dt = std::move(dnext);
    }
    return {t, dt};
}

int vector_magnons(const VectorXcd& v) {
    const int dim = int(v.size());
    double best = 0.0;
    int mag = 0;
    for (int s = 0; s < dim; ++s) {
        const double a = std::abs(v(s));
        if (a > best) {
            best = a;
            mag = std::popcount(unsigned(s));
        }
    }
    return mag;
}

/// Apply B(lambda) by sweeping the Lax operators over aux (x) chain space:
/// start in aux state 1, project aux state 0. O(N 2^N), any scalar type.
template <class C>
std::vector<C> apply_monodromy_b(int sites, const C& lam, const std::vector<C>& psi) {
    using R = real_of<C>;
    const int dim = 1 << sites;
    const C iu(R(0), R(1)), half_i(R(0), R(1) / R(2));
    std::vector<C> work(2 * dim, C(0));
    for (int s = 0; s < dim; ++s) work[dim + s] = psi[s]; // aux = 1
    for (int n = 0; n < sites; ++n) {
        const int bit = 1 << n;
        std::vector<C> next(2 * dim, C(0));
        for (int a = 0; a < 2; ++a)
            for (int s = 0; s < dim; ++s) {
                const C amp = work[a * dim + s];
                if (amp == C(0)) continue;
                const int sn = (s >> n) & 1; // 0 = up
                if (a == 0) {
                    // (0,0): lam + i sz/2 ; (1,0): i sigma^+ needs down
                    next[s] += (sn == 0 ? lam + half_i : lam - half_i) * amp;
                    if (sn == 1) next[dim + (s ^ bit)] += iu * amp;
                } else {
                    // (0,1): i sigma^- needs up ; (1,1): lam - i sz/2
                    if (sn == 0) next[s ^ bit] += iu * amp;
                    next[dim + s] += (sn == 0 ? lam - half_i : lam + half_i) * amp;
                }
            }
        work = std::move(next);
    }
    return std::vector<C>(work.begin(), work.begin() + dim);
}

} // namespace

MatrixXcd monodromy_entry(int sites, Entry entry, cdouble lambda, int size_cap) {
    check_cap(sites, size_cap);
    auto blocks = monodromy_blocks(sites, lambda);
    switch (entry) {
        case Entry::A: return blocks.a;
        case Entry::B: return blocks.b;
        case Entry::C: return blocks.c;
        case Entry::D: return blocks.d;
    }
    throw SpecError("bad entry");
}

MatrixXcd transfer_matrix(int sites, cdouble lambda, double beta, int size_cap) {
    check_cap(sites, size_cap);
    auto blocks = monodromy_blocks(sites, lambda);
    return blocks.a + std::exp(cdouble(0, -beta)) * blocks.d;
}

MatrixXcd hamiltonian_from_transfer(int sites, int size_cap) {
    check_cap(sites, size_cap);
    auto [t, dt] = monodromy_blocks_deriv(sites, cdouble(0, 0.5));
    const MatrixXcd tv = t.a + t.d;
    const MatrixXcd dtv = dt.a + dt.d;
    const int dim = 1 << sites;
    MatrixXcd h = cdouble(0, 0.5) * dtv * tv.partialPivLu().solve(MatrixXcd::Identity(dim, dim));
    h -= 0.5 * sites * MatrixXcd::Identity(dim, dim);
    return h;
}

StateVector bethe_vector_unchecked(int sites, const RootSet& roots, int size_cap) {
    check_cap(sites, size_cap);
    const int dim = 1 << sites;
    std::vector<cdouble> psi(dim, cdouble(0));
    psi[0] = 1.0; // all spins up
    for (const auto& l : roots.roots) psi = apply_monodromy_b(sites, l, psi);
    StateVector out;
    out.amplitudes = VectorXcd::Map(psi.data(), dim);
    out.magnon_number = int(roots.size());
    return out;
}

StateVector bethe_vector(int sites, const RootSet& roots, int size_cap) {
    for (const auto& l : roots.roots) {
        if (std::abs(l - cdouble(0, 0.5)) < 1e-8 || std::abs(l - cdouble(0, -0.5)) < 1e-8)
            throw SpecError("root at +-i/2: the naive Bethe vector is null; "
                            "use the singular limit vector");
    }
    return bethe_vector_unchecked(sites, roots, size_cap);
}

namespace {

/// beta^{-N} prod_j B(lambda_j(beta)) |0> at one beta, in C-precision.
template <class C>
std::vector<C> renormalized_vector(const ModelSpec& spec, const TwistSeries& series, double beta) {
    const int sites = spec.sites;
    const int dim = 1 << sites;
    const C beta_c = complex_traits<C>::make(beta, 0.0);

    // roots from the series at this beta
    std::vector<C> roots;
    for (std::size_t j = 0; j < series.base_values.size(); ++j) {
        C acc(0);
        for (int l = series.order; l >= 1; --l)
            acc = (acc + series.coefficients[j][l - 1].template to<C>()) * beta_c;
        roots.push_back(series.base_values[j].template to<C>() + acc);
    }

    std::vector<C> psi(dim, C(0));
    psi[0] = C(1);
    for (const auto& l : roots) psi = apply_monodromy_b(sites, l, psi);

    const C scale = powi(C(1) / beta_c, sites);
    for (auto& z : psi) z *= scale;
    return psi;
}

} // namespace

LimitVector singular_limit_vector(const ModelSpec& spec, const TwistSeries& series,
                                  int size_cap) {
    check_cap(spec.sites, size_cap);
    if (!spec.is_xxx_half())
        throw UnsupportedModelError("Bethe vectors are built for the XXX spin-1/2 chain only");
    if (series.spec.sites != spec.sites || series.spec.magnons != spec.magnons)
        throw SpecError("series belongs to a different chain");
    if (series.order < spec.sites)
        throw SpecError("series order must reach N for the beta^{-N} limit");

    const Precision prec = Precision::decimal(std::max(series.digits, 40));
    const int dim = 1 << spec.sites;

    // geometric beta ladder, Richardson-extrapolated to zero
    std::vector<double> betas;
    for (int k = 0; k <= 6; ++k) betas.push_back(0.1 * std::pow(10.0, -0.5 * k));

    return with_precision(prec, [&]<class C>() {
        std::vector<std::vector<C>> samples;
        for (double b : betas) samples.push_back(renormalized_vector<C>(spec, series, b));

        // Neville to beta = 0, componentwise; track the last-stage correction
        const std::size_t n = betas.size();
        std::vector<std::vector<C>> t = samples;
        double last_correction = 0.0;
        for (std::size_t k = 1; k < n; ++k)
            for (std::size_t i = 0; i + k < n; ++i) {
                const C xi = complex_traits<C>::make(betas[i], 0.0);
                const C xk = complex_traits<C>::make(betas[i + k], 0.0);
                for (int s = 0; s < dim; ++s) {
                    const C updated = (t[i + 1][s] * xi - t[i][s] * xk) / (xi - xk);
                    if (k == n - 1 && i == 0)
                        last_correction =
                            std::max(last_correction, abs_as_double(updated - t[i + 1][s]));
                    t[i][s] = updated;
                }
            }

        VectorXcd v(dim);
        double norm2 = 0.0;
        for (int s = 0; s < dim; ++s) {
            v(s) = to_cdouble(t[0][s]);
            norm2 += std::norm(v(s));
        }
        const double nrm = std::sqrt(norm2);
        if (nrm < 1e-30) throw NumericError("limit vector vanished (insufficient series order?)");
        LimitVector out;
        out.extrapolation_error = last_correction / nrm;
        if (out.extrapolation_error > 1e-6)
            throw NumericError("limit extrapolation stages disagree (precision exhaustion)");
        v /= nrm;
        // canonical phase: first significant amplitude real positive
        for (int s = 0; s < dim; ++s) {
            if (std::abs(v(s)) > 1e-8) {
                v *= std::abs(v(s)) / v(s);
                break;
            }
        }
        out.vector.amplitudes = v;
        out.vector.magnon_number = vector_magnons(v);
        return out;
    });
}

EigenCheckReport transfer_eigenvalue_check(int sites, const RootSet& roots, double beta,
                                           const std::vector<cdouble>& test_points,
                                           int size_cap) {
    check_cap(sites, size_cap);
    auto v = bethe_vector(sites, roots, size_cap);
    const double nrm = v.amplitudes.norm();
    if (nrm < 1e-12) throw NumericError("Bethe vector is numerically null");
    EigenCheckReport rep;
    for (const auto& mu : test_points) {
        auto t = transfer_matrix(sites, mu, beta, size_cap);
        VectorXcd tv = t * v.amplitudes;
        const cdouble rayleigh = v.amplitudes.dot(tv) / cdouble(nrm * nrm);
        const double resid = (tv - rayleigh * v.amplitudes).norm() / nrm;
        rep.points.push_back({mu, rayleigh, resid});
        rep.max_residual = std::max(rep.max_residual, resid);
    }
    return rep;
}

} // namespace tbethe::aba
