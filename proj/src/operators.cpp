#include "hqs/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace hqs {

using cd = std::complex<double>;
using Triplet = Eigen::Triplet<cd>;

SparseC sparse_identity(long n) {
    SparseC id(n, n);
    id.setIdentity();
    return id;
}

SparseC kron(const SparseC& a, const SparseC& b) {
    SparseC out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(a.nonZeros()) * b.nonZeros());
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseC::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseC::InnerIterator ib(b, kb); ib; ++ib)
                    trips.emplace_back(ia.row() * b.rows() + ib.row(),
                                       ia.col() * b.cols() + ib.col(),
                                       ia.value() * ib.value());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

namespace {

SparseC fock_annihilation(int f) {
    SparseC a(f, f);
    std::vector<Triplet> trips;
    for (int n = 1; n < f; ++n) trips.emplace_back(n - 1, n, std::sqrt(double(n)));
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

// Spin basis within one factor: index 0 = |down>, 1 = |up>.
SparseC pauli_lower() {
    SparseC s(2, 2);
    s.insert(0, 1) = 1.0;
    s.makeCompressed();
    return s;
}

SparseC pauli_z() {
    SparseC s(2, 2);
    s.insert(0, 0) = -1.0;
    s.insert(1, 1) = 1.0;
    s.makeCompressed();
    return s;
}

// Embeds a single-spin operator at factor k (1-indexed).
SparseC embed_spin(const HilbertSpec& spec, int k, const SparseC& op) {
    if (k < 1 || k > spec.n_spins) throw std::invalid_argument("spin index out of range");
    SparseC left = sparse_identity(1L << (k - 1));
    SparseC right = sparse_identity((1L << (spec.n_spins - k)) * spec.fock_cutoff);
    return kron(kron(left, op), right);
}

SparseC embed_cavity(const HilbertSpec& spec, const SparseC& op) {
    return kron(sparse_identity(spec.spin_dim()), op);
}

void check_hermitian(const SparseC& h) {
    SparseC defect = SparseC(h.adjoint()) - h;
    double maxdef = 0;
    for (int k = 0; k < defect.outerSize(); ++k)
        for (SparseC::InnerIterator it(defect, k); it; ++it)
            maxdef = std::max(maxdef, std::abs(it.value()));
    if (maxdef > 1e-12) throw std::logic_error("constructed Hamiltonian is not Hermitian");
}

}  // namespace

OperatorMatrix annihilation(const HilbertSpec& spec) {
    return {embed_cavity(spec, fock_annihilation(spec.fock_cutoff)), spec};
}

OperatorMatrix spin_lower(const HilbertSpec& spec, int k) {
    return {embed_spin(spec, k, pauli_lower()), spec};
}

OperatorMatrix spin_z(const HilbertSpec& spec, int k) {
    return {embed_spin(spec, k, pauli_z()), spec};
}

std::vector<SpinClass> per_spin(const SpinClasses& classes) {
    std::vector<SpinClass> spins;
    spins.reserve(classes.total);
    for (const auto& c : classes.classes)
        for (long i = 0; i < c.multiplicity; ++i) spins.push_back({c.detuning, c.coupling, 1});
    return spins;
}

OperatorMatrix build_h0(const HilbertSpec& spec, const SystemParams& params,
                        const SpinClasses& classes) {
    if (spec.fock_cutoff < 2) throw std::invalid_argument("fock_cutoff must be >= 2");
    const auto spins = per_spin(classes);
    if (static_cast<int>(spins.size()) != spec.n_spins)
        throw std::invalid_argument("spin classes do not match HilbertSpec.n_spins");

    const SparseC a = annihilation(spec).mat;
    const SparseC adag = a.adjoint();
    SparseC h = params.delta_c * SparseC(adag * a) -
                0.5 * params.eta * SparseC(SparseC(a * a) + SparseC(adag * adag));
    for (int k = 1; k <= spec.n_spins; ++k) {
        const SparseC sm = spin_lower(spec, k).mat;
        const SparseC sp = sm.adjoint();
        h = h + 0.5 * spins[k - 1].detuning * spin_z(spec, k).mat +
            spins[k - 1].coupling * SparseC(SparseC(sm * adag) + SparseC(sp * a));
    }
    h.makeCompressed();
    check_hermitian(h);
    return {h, spec};
}

OperatorMatrix build_hsq(const HilbertSpec& spec, const SystemParams& params,
                         const SpinClasses& classes, double r) {
    if (spec.fock_cutoff < 2) throw std::invalid_argument("fock_cutoff must be >= 2");
    const auto spins = per_spin(classes);
    if (static_cast<int>(spins.size()) != spec.n_spins)
        throw std::invalid_argument("spin classes do not match HilbertSpec.n_spins");

    const SparseC a = annihilation(spec).mat;
    const SparseC adag = a.adjoint();
    const SparseC x_plus = a + adag;    // a + a'
    const SparseC x_minus = a - adag;   // a - a'
    const double er = std::exp(r), emr = std::exp(-r);

    SparseC h = effective_detuning(params.delta_c, r) * SparseC(adag * a);
    for (int k = 1; k <= spec.n_spins; ++k) {
        const SparseC sm = spin_lower(spec, k).mat;
        const SparseC sp = sm.adjoint();
        const SparseC s_plus = sm + sp;
        const SparseC s_minus = SparseC(sm) - SparseC(sp);
        const double g = spins[k - 1].coupling;
        h = h + 0.5 * spins[k - 1].detuning * spin_z(spec, k).mat +
            0.5 * g * er * SparseC(x_plus * s_plus) -
            0.5 * g * emr * SparseC(x_minus * s_minus);
    }
    h.makeCompressed();
    check_hermitian(h);
    return {h, spec};
}

SparseC dissipator(const SparseC& x) {
    const long d = x.rows();
    const SparseC id = sparse_identity(d);
    const SparseC xdx = SparseC(x.adjoint()) * x;
    return SparseC(kron(x, x.conjugate())) - 0.5 * SparseC(kron(xdx, id)) -
           0.5 * SparseC(kron(id, SparseC(xdx.transpose())));
}

SparseC hamiltonian_superop(const SparseC& h) {
    const long d = h.rows();
    const SparseC id = sparse_identity(d);
    const cd mi(0.0, -1.0);
    return mi * SparseC(SparseC(kron(h, id)) - SparseC(kron(id, SparseC(h.transpose()))));
}

std::vector<long> support_table(const HilbertSpec& spec, int k) {
    if (k < 1 || k > spec.n_spins) throw std::invalid_argument("spin index out of range");
    const long f = spec.fock_cutoff;
    const long dim = spec.dim();
    const long rest_dim = 1L << (spec.n_spins - 1);
    const long s_small = 2 * f;                    // spin_k (x) cavity
    const long support = s_small * s_small;        // vectorized support size
    const int shift = spec.n_spins - k;
    const long low_mask = (1L << shift) - 1;

    auto insert_bit = [&](long rest, long b) {
        return ((rest >> shift) << (shift + 1)) | (b << shift) | (rest & low_mask);
    };

    std::vector<long> table(support * rest_dim * rest_dim);
    for (long rr = 0; rr < rest_dim * rest_dim; ++rr) {
        const long rest_row = rr / rest_dim, rest_col = rr % rest_dim;
        long* row = table.data() + rr * support;
        for (long u = 0; u < support; ++u) {
            const long v_row = u / s_small, v_col = u % s_small;
            const long i = insert_bit(rest_row, v_row / f) * f + (v_row % f);
            const long j = insert_bit(rest_col, v_col / f) * f + (v_col % f);
            row[u] = i * dim + j;
        }
    }
    return table;
}

SparseC lift_term(const TrotterTerm& term, const HilbertSpec& spec) {
    const long sdim = spec.dim() * spec.dim();
    if (term.spin_index == -1) {
        if (term.small.rows() != sdim) throw std::invalid_argument("term/basis mismatch");
        return term.small;
    }
    const auto table = support_table(spec, term.spin_index);
    const long support = 4L * spec.fock_cutoff * spec.fock_cutoff;
    const long rest = static_cast<long>(table.size()) / support;

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(term.small.nonZeros()) * rest);
    for (int kk = 0; kk < term.small.outerSize(); ++kk)
        for (SparseC::InnerIterator it(term.small, kk); it; ++it)
            for (long rr = 0; rr < rest; ++rr)
                trips.emplace_back(table[rr * support + it.row()],
                                   table[rr * support + it.col()], it.value());
    SparseC out(sdim, sdim);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Liouvillian build_liouvillian(const HilbertSpec& spec, const SystemParams& params,
                              const SpinClasses& classes, Frame frame, double r) {
    const auto spins = per_spin(classes);
    if (static_cast<int>(spins.size()) != spec.n_spins)
        throw std::invalid_argument("spin classes do not match HilbertSpec.n_spins");

    Liouvillian L;
    L.basis = spec;

    const OperatorMatrix h =
        frame == Frame::Lab ? build_h0(spec, params, classes) : build_hsq(spec, params, classes, r);
    SparseC full = hamiltonian_superop(h.mat) + params.kappa * dissipator(annihilation(spec).mat);
    for (int k = 1; k <= spec.n_spins; ++k) {
        full = full + params.gamma_h * dissipator(spin_lower(spec, k).mat) +
               params.gamma_p * dissipator(spin_z(spec, k).mat);
    }
    full.makeCompressed();
    L.full = full;

    // Small-space operators on spin (x) cavity, dimension 2F.
    const long f = spec.fock_cutoff;
    const SparseC a_f = fock_annihilation(f);
    const SparseC adag_f = a_f.adjoint();
    const SparseC id2 = sparse_identity(2), idf = sparse_identity(f);
    const SparseC a_s = kron(id2, a_f);
    const SparseC sm_s = kron(pauli_lower(), idf);
    const SparseC sp_s = sm_s.adjoint();
    const SparseC sz_s = kron(pauli_z(), idf);

    SparseC hc_f;  // cavity-only Hamiltonian on the Fock factor
    if (frame == Frame::Lab) {
        hc_f = params.delta_c * SparseC(adag_f * a_f) -
               0.5 * params.eta * SparseC(SparseC(a_f * a_f) + SparseC(adag_f * adag_f));
    } else {
        hc_f = effective_detuning(params.delta_c, r) * SparseC(adag_f * a_f);
    }

    if (spec.n_spins == 0) {
        TrotterTerm t;
        t.spin_index = -1;
        t.small = L.full;
        L.terms.push_back(std::move(t));
        return L;
    }

    const double share = 1.0 / spec.n_spins;
    for (int k = 1; k <= spec.n_spins; ++k) {
        const double g = spins[k - 1].coupling;
        const double dk = spins[k - 1].detuning;
        SparseC hk = 0.5 * dk * sz_s + share * kron(id2, hc_f);
        if (frame == Frame::Lab) {
            hk = hk + g * SparseC(SparseC(sm_s * SparseC(a_s.adjoint())) + SparseC(sp_s * a_s));
        } else {
            const SparseC x_plus = a_s + SparseC(a_s.adjoint());
            const SparseC x_minus = SparseC(a_s) - SparseC(a_s.adjoint());
            const SparseC s_plus = sm_s + sp_s;
            const SparseC s_minus = SparseC(sm_s) - SparseC(sp_s);
            hk = hk + 0.5 * g * std::exp(r) * SparseC(x_plus * s_plus) -
                 0.5 * g * std::exp(-r) * SparseC(x_minus * s_minus);
        }
        TrotterTerm t;
        t.spin_index = k;
        t.small = hamiltonian_superop(hk) + params.gamma_h * dissipator(sm_s) +
                  params.gamma_p * dissipator(sz_s) + (share * params.kappa) * dissipator(a_s);
        t.small.makeCompressed();
        L.terms.push_back(std::move(t));
    }
    return L;
}

// --- DensitySuperket --------------------------------------------------------

double DensitySuperket::trace() const {
    const long d = basis.dim();
    cd tr(0.0, 0.0);
    for (long i = 0; i < d; ++i) tr += v[i * d + i];
    return tr.real();
}

Eigen::MatrixXcd DensitySuperket::unvec() const {
    const long d = basis.dim();
    return Eigen::Map<const Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        v.data(), d, d);
}

double DensitySuperket::hermiticity_defect() const {
    const Eigen::MatrixXcd rho = unvec();
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensitySuperket::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(unvec(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensitySuperket DensitySuperket::from_density(const Eigen::MatrixXcd& rho,
                                              const HilbertSpec& basis) {
    const long d = basis.dim();
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("density matrix does not match basis");
    DensitySuperket s;
    s.basis = basis;
    s.v.resize(d * d);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) s.v[i * d + j] = rho(i, j);
    return s;
}

DensitySuperket DensitySuperket::pure_cavity_product(const Eigen::VectorXcd& cavity_ket,
                                                     const HilbertSpec& basis) {
    if (cavity_ket.size() != basis.fock_cutoff)
        throw std::invalid_argument("cavity ket does not match fock_cutoff");
    const long d = basis.dim();
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(d);
    ket.head(basis.fock_cutoff) = cavity_ket;  // all spins down occupy s_bits = 0
    ket.normalize();
    Eigen::MatrixXcd rho = ket * ket.adjoint();
    return from_density(rho, basis);
}

}  // namespace hqs
