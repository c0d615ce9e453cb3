#ifndef HQS_PROPAGATE_HPP
#define HQS_PROPAGATE_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hqs/operators.hpp"

namespace hqs {

enum class PropagationMethod { DenseExpm, Trotter2, Trotter2Truncated };

struct PropagatorConfig {
    PropagationMethod method = PropagationMethod::Trotter2;
    double dt = 1e-4;          ///< internal step [us]
    double svd_cutoff = 0.0;   ///< relative singular-value cutoff (truncated mode)
    int max_rank = std::numeric_limits<int>::max();
    double krylov_tol = 1e-10;

    void validate() const;
};

/// e^{L dt} |rho>. Uses the dense matrix exponential when the superoperator
/// fits in memory (Hilbert dim <= 64), otherwise a Krylov (Arnoldi)
/// application with the given residual tolerance.
DensitySuperket expm_apply(const Liouvillian& L, const DensitySuperket& rho, double dt,
                           double krylov_tol = 1e-10);

/// Krylov application of e^{A t} v with adaptive sub-stepping. Throws
/// PropagationError (carrying the achieved residual) on non-convergence.
Eigen::VectorXcd krylov_expm_multiply(const SparseC& A, const Eigen::VectorXcd& v, double t,
                                      double tol);

/// Precomputed symmetric (Strang) sweep over the Liouvillian's Trotter terms:
/// half-step factors for L_N..L_2, a full step for L_1, then L_2..L_N. Each
/// factor is the dense exponential of the term on its spin (x) cavity support.
class TrotterWorkspace {
public:
    TrotterWorkspace(const Liouvillian& L, double dt);
    void apply(Eigen::VectorXcd& v) const;
    double dt() const { return dt_; }

private:
    struct Factor {
        Eigen::MatrixXcd exp;       // dense exponential on the support
        const std::vector<long>* table;  // gather/scatter indices
    };
    void apply_factor(const Factor& f, Eigen::VectorXcd& v) const;

    double dt_;
    long support_ = 0, rest_ = 0;
    std::vector<std::vector<long>> tables_;
    std::vector<Factor> sweep_;
    bool full_space_ = false;       // single cavity-only term
    Eigen::MatrixXcd full_exp_;
    mutable Eigen::MatrixXcd buf_;
};

/// One second-order Suzuki-Trotter (Strang) step of size dt.
DensitySuperket strang_step(const Liouvillian& L, const DensitySuperket& rho, double dt);

/// Low-rank truncation across the cavity|spins bipartition of the superket:
/// singular values below cutoff * sigma_max or beyond max_rank are zeroed,
/// then the trace is renormalized to 1.
DensitySuperket truncate(const DensitySuperket& rho, double cutoff, int max_rank);

using SnapshotObserver = std::function<void(double t, const DensitySuperket& rho)>;

/// Fixed-step evolution with snapshots at multiples of dt_out. The internal
/// step divides dt_out evenly and is at most config.dt. Snapshot invariants
/// (trace, Hermiticity) are enforced; violations raise PropagationError.
void evolve_observe(const Liouvillian& L, const DensitySuperket& rho0, double t_end,
                    double dt_out, const PropagatorConfig& config,
                    const SnapshotObserver& observer,
                    std::vector<std::string>* warnings = nullptr);

std::vector<DensitySuperket> evolve(const Liouvillian& L, const DensitySuperket& rho0,
                                    double t_end, double dt_out, const PropagatorConfig& config,
                                    std::vector<std::string>* warnings = nullptr);

}  // namespace hqs

#endif
