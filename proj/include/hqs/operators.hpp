#ifndef HQS_OPERATORS_HPP
#define HQS_OPERATORS_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hqs/model.hpp"

namespace hqs {

using SparseC = Eigen::SparseMatrix<std::complex<double>>;

/// Truncated Fock space (photon numbers 0..F-1) tensored with N_q spin-1/2
/// factors. Spin k occupies tensor factor k (1-indexed, spin 1 slowest), the
/// cavity is the last (fastest) factor: ket index i = s_bits * F + n.
struct HilbertSpec {
    int fock_cutoff = 2;
    int n_spins = 0;

    long dim() const { return static_cast<long>(fock_cutoff) << n_spins; }
    long spin_dim() const { return 1L << n_spins; }
    bool operator==(const HilbertSpec& o) const {
        return fock_cutoff == o.fock_cutoff && n_spins == o.n_spins;
    }
};

struct OperatorMatrix {
    SparseC mat;
    HilbertSpec basis;
};

/// Vectorized density operator. Superket index = row * dim + col, so that
/// left multiplication is X (x) I and right multiplication is I (x) X^T.
struct DensitySuperket {
    Eigen::VectorXcd v;
    HilbertSpec basis;

    double trace() const;
    Eigen::MatrixXcd unvec() const;
    double hermiticity_defect() const;  ///< max |rho - rho^dag|
    double min_eigenvalue() const;      ///< smallest eigenvalue of unvec()

    static DensitySuperket from_density(const Eigen::MatrixXcd& rho, const HilbertSpec& basis);
    /// Pure product state: given cavity ket (length F), all spins down.
    static DensitySuperket pure_cavity_product(const Eigen::VectorXcd& cavity_ket,
                                               const HilbertSpec& basis);
};

enum class Frame { Lab, Squeezed };

/// One factor of the Trotter decomposition. `small` acts on the vectorized
/// spin_k (x) cavity subspace, dimension (2F)^2; the remaining spin factors
/// are spectators. spin_index == -1 marks a cavity-only term on the full
/// superket space (N_q == 0).
struct TrotterTerm {
    int spin_index = -1;  ///< 1-indexed
    SparseC small;
};

struct Liouvillian {
    HilbertSpec basis;
    SparseC full;                    ///< dim^2 x dim^2
    std::vector<TrotterTerm> terms;  ///< sum over lifted terms equals `full`
};

// --- elementary operators -------------------------------------------------

SparseC kron(const SparseC& a, const SparseC& b);
SparseC sparse_identity(long n);
OperatorMatrix annihilation(const HilbertSpec& spec);
OperatorMatrix spin_lower(const HilbertSpec& spec, int k);
OperatorMatrix spin_z(const HilbertSpec& spec, int k);

// --- Hamiltonians ----------------------------------------------------------

/// Driven Tavis-Cummings Hamiltonian in the frame rotating at half the drive
/// frequency: sum_k Dk sz_k/2 + Dc a'a + sum_k g_k (s-_k a' + s+_k a)
/// - eta/2 (a^2 + a'^2). `classes` is expanded so that each simulated spin is
/// one class member (sum of multiplicities must equal spec.n_spins).
OperatorMatrix build_h0(const HilbertSpec& spec, const SystemParams& params,
                        const SpinClasses& classes);

/// Squeezed-frame Hamiltonian: Dc_eff a'a + 1/2 sum_k { Dk sz_k
/// + g_k e^r (a+a')(s- + s+) - g_k e^-r (a-a')(s- - s+) }.
OperatorMatrix build_hsq(const HilbertSpec& spec, const SystemParams& params,
                         const SpinClasses& classes, double r);

// --- superoperators ---------------------------------------------------------

/// Vectorized Lindblad dissipator of a jump operator x on a d-dim space:
/// x (x) x* - 1/2 (x'x) (x) I - 1/2 I (x) (x'x)^T.
SparseC dissipator(const SparseC& x);

/// Hamiltonian part -i (H (x) I - I (x) H^T).
SparseC hamiltonian_superop(const SparseC& h);

/// Full vectorized Liouvillian plus its per-spin Trotter decomposition
/// L_k = (spin-k Hamiltonian + spin-k/cavity coupling + spin-k dissipators)
///       + 1/N_q * (cavity-only Hamiltonian + kappa dissipator).
Liouvillian build_liouvillian(const HilbertSpec& spec, const SystemParams& params,
                              const SpinClasses& classes, Frame frame, double r);

/// Superket index table for the spin_k (x) cavity support: entry
/// [rr * S + u] is the full superket index for support index u in [0,(2F)^2)
/// and spectator index rr in [0, 4^(N-1)).
std::vector<long> support_table(const HilbertSpec& spec, int k);

/// Embeds a Trotter term into the full superoperator space (test utility).
SparseC lift_term(const TrotterTerm& term, const HilbertSpec& spec);

/// Expands spin classes to one (detuning, coupling) entry per physical spin.
std::vector<SpinClass> per_spin(const SpinClasses& classes);

}  // namespace hqs

#endif
