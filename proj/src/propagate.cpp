#include "hqs/propagate.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "hqs/errors.hpp"

namespace hqs {

using cd = std::complex<double>;

namespace {
// Dense exponentials of the full superoperator are limited to Hilbert
// dimension 64 (a 4096 x 4096 matrix); beyond that the Krylov path applies.
constexpr long kDenseDimGuard = 64;
}  // namespace

void PropagatorConfig::validate() const {
    if (dt <= 0) throw ConfigError("propagator dt must be positive");
    if (svd_cutoff < 0 || svd_cutoff >= 1)
        throw ConfigError("svd_cutoff must be in [0, 1)");
    if (max_rank < 1) throw ConfigError("max_rank must be >= 1");
}

Eigen::VectorXcd krylov_expm_multiply(const SparseC& A, const Eigen::VectorXcd& v, double t,
                                      double tol) {
    const long n = A.rows();
    if (v.size() != n) throw std::invalid_argument("vector does not match operator");
    const double beta0 = v.norm();
    if (beta0 == 0.0 || t == 0.0) return v;

    const int m = std::min<long>(30, n);
    Eigen::MatrixXcd V(n, m + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);

    Eigen::VectorXcd w = v;
    double t_done = 0.0;
    double tau = t - t_done;
    int rejections = 0;
    double last_err = 0.0;

    while (t_done < t) {
        const double beta = w.norm();
        V.col(0) = w / beta;
        int j = 0;
        bool happy = false;
        for (; j < m; ++j) {
            Eigen::VectorXcd p = A * V.col(j);
            for (int i = 0; i <= j; ++i) {
                H(i, j) = V.col(i).dot(p);
                p -= H(i, j) * V.col(i);
            }
            // re-orthogonalization pass keeps the basis usable at large norms
            for (int i = 0; i <= j; ++i) {
                const cd c = V.col(i).dot(p);
                H(i, j) += c;
                p -= c * V.col(i);
            }
            H(j + 1, j) = p.norm();
            if (std::abs(H(j + 1, j)) < 1e-14 * beta) {
                happy = true;
                ++j;
                break;
            }
            V.col(j + 1) = p / H(j + 1, j);
        }

        tau = std::min(tau, t - t_done);
        double used_tau = tau;
        while (true) {
            if (happy) {
                // invariant subspace: exact for the whole remaining interval
                used_tau = t - t_done;
                const Eigen::MatrixXcd F = (used_tau * H.topLeftCorner(j, j)).exp();
                w = beta * (V.leftCols(j) * F.col(0));
                last_err = 0.0;
                break;
            }
            // augmented Hessenberg: the last row carries the residual coupling
            Eigen::MatrixXcd Haug = Eigen::MatrixXcd::Zero(m + 1, m + 1);
            Haug.topLeftCorner(m, m) = H.topRows(m);
            Haug(m, m - 1) = H(m, m - 1);
            const Eigen::MatrixXcd F = (tau * Haug).exp();
            const double err = beta * std::abs(F(m, 0));
            if (err <= tol * std::max(1.0, beta0) || tau <= 1e-14 * t) {
                if (err > tol * std::max(1.0, beta0)) {
                    throw PropagationError(
                        "Krylov exponential did not converge, achieved residual " +
                            std::to_string(err),
                        t_done);
                }
                w = beta * (V.leftCols(m + 1) * F.col(0));
                last_err = err;
                used_tau = tau;
                if (err < 0.1 * tol * std::max(1.0, beta0)) tau *= 1.5;
                break;
            }
            tau *= 0.5;
            if (++rejections > 200)
                throw PropagationError(
                    "Krylov exponential did not converge, achieved residual " +
                        std::to_string(err),
                    t_done);
        }
        t_done += used_tau;
    }
    (void)last_err;
    return w;
}

DensitySuperket expm_apply(const Liouvillian& L, const DensitySuperket& rho, double dt,
                           double krylov_tol) {
    if (!(rho.basis == L.basis)) throw std::invalid_argument("basis mismatch");
    DensitySuperket out = rho;
    if (dt == 0.0) return out;
    if (L.basis.dim() <= kDenseDimGuard) {
        const Eigen::MatrixXcd P = (dt * Eigen::MatrixXcd(L.full)).exp();
        out.v = P * rho.v;
    } else {
        out.v = krylov_expm_multiply(L.full, rho.v, dt, krylov_tol);
    }
    return out;
}

// --- TrotterWorkspace --------------------------------------------------------

TrotterWorkspace::TrotterWorkspace(const Liouvillian& L, double dt) : dt_(dt) {
    if (L.terms.empty()) throw std::invalid_argument("Liouvillian has no Trotter terms");
    const int nt = static_cast<int>(L.terms.size());

    if (nt == 1 && L.terms[0].spin_index == -1) {
        full_space_ = true;
        if (L.basis.dim() > kDenseDimGuard)
            throw std::invalid_argument("cavity-only Trotter factor too large for dense mode");
        full_exp_ = (dt * Eigen::MatrixXcd(L.terms[0].small)).exp();
        return;
    }

    const long f = L.basis.fock_cutoff;
    support_ = 4 * f * f;
    rest_ = L.basis.spin_dim() / 2 * (L.basis.spin_dim() / 2);
    tables_.resize(nt);
    std::vector<Eigen::MatrixXcd> half(nt), full(nt);
    for (int k = 0; k < nt; ++k) {
        tables_[k] = support_table(L.basis, L.terms[k].spin_index);
        const Eigen::MatrixXcd dense(L.terms[k].small);
        if (k == 0)
            full[k] = (dt * dense).exp();
        else
            half[k] = (0.5 * dt * dense).exp();
    }
    // symmetric sweep: L_N..L_2 half, L_1 full, L_2..L_N half
    for (int k = nt - 1; k >= 1; --k) sweep_.push_back({half[k], &tables_[k]});
    sweep_.push_back({full[0], &tables_[0]});
    for (int k = 1; k <= nt - 1; ++k) sweep_.push_back({half[k], &tables_[k]});
    buf_.resize(support_, rest_);
}

void TrotterWorkspace::apply_factor(const Factor& fac, Eigen::VectorXcd& v) const {
    const std::vector<long>& tab = *fac.table;
    for (long rr = 0; rr < rest_; ++rr) {
        const long* idx = tab.data() + rr * support_;
        for (long u = 0; u < support_; ++u) buf_(u, rr) = v[idx[u]];
    }
    const Eigen::MatrixXcd prod = fac.exp * buf_;
    for (long rr = 0; rr < rest_; ++rr) {
        const long* idx = tab.data() + rr * support_;
        for (long u = 0; u < support_; ++u) v[idx[u]] = prod(u, rr);
    }
}

void TrotterWorkspace::apply(Eigen::VectorXcd& v) const {
    if (full_space_) {
        v = full_exp_ * v;
        return;
    }
    for (const auto& fac : sweep_) apply_factor(fac, v);
}

DensitySuperket strang_step(const Liouvillian& L, const DensitySuperket& rho, double dt) {
    if (!(rho.basis == L.basis)) throw std::invalid_argument("basis mismatch");
    TrotterWorkspace ws(L, dt);
    DensitySuperket out = rho;
    ws.apply(out.v);
    return out;
}

// --- truncation ---------------------------------------------------------------

DensitySuperket truncate(const DensitySuperket& rho, double cutoff, int max_rank) {
    const long f = rho.basis.fock_cutoff;
    const long s = rho.basis.spin_dim();
    const long dim = rho.basis.dim();

    // matrix between (cavity (x) cavity-dual) and (spins (x) spins-dual)
    Eigen::MatrixXcd m(f * f, s * s);
    for (long sr = 0; sr < s; ++sr)
        for (long sc = 0; sc < s; ++sc)
            for (long nr = 0; nr < f; ++nr)
                for (long nc = 0; nc < f; ++nc)
                    m(nr * f + nc, sr * s + sc) = rho.v[(sr * f + nr) * dim + (sc * f + nc)];

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    for (long i = 0; i < sv.size(); ++i)
        if (i >= max_rank || sv[i] < cutoff * smax) sv[i] = 0.0;
    m = svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();

    DensitySuperket out = rho;
    for (long sr = 0; sr < s; ++sr)
        for (long sc = 0; sc < s; ++sc)
            for (long nr = 0; nr < f; ++nr)
                for (long nc = 0; nc < f; ++nc)
                    out.v[(sr * f + nr) * dim + (sc * f + nc)] = m(nr * f + nc, sr * s + sc);

    const double tr = out.trace();
    if (std::abs(tr) < 1e-12)
        throw PropagationError("truncation removed all trace", 0.0);
    out.v /= tr;
    return out;
}

// --- evolution -----------------------------------------------------------------

void evolve_observe(const Liouvillian& L, const DensitySuperket& rho0, double t_end,
                    double dt_out, const PropagatorConfig& config,
                    const SnapshotObserver& observer, std::vector<std::string>* warnings) {
    config.validate();
    if (!(rho0.basis == L.basis)) throw std::invalid_argument("basis mismatch");
    if (t_end < 0 || dt_out <= 0) throw std::invalid_argument("bad time grid");

    const long n_out = static_cast<long>(std::floor(t_end / dt_out * (1.0 + 1e-12)));
    const long steps_per_out = std::max<long>(1, static_cast<long>(std::ceil(dt_out / config.dt - 1e-12)));
    const double dt_int = dt_out / steps_per_out;

    const long f = L.basis.fock_cutoff;
    const long s = L.basis.spin_dim();
    const long dim = L.basis.dim();
    const bool truncated = config.method == PropagationMethod::Trotter2Truncated;

    Eigen::MatrixXcd dense_prop;
    std::unique_ptr<TrotterWorkspace> ws;
    if (config.method == PropagationMethod::DenseExpm) {
        if (dim <= kDenseDimGuard)
            dense_prop = (dt_int * Eigen::MatrixXcd(L.full)).exp();
    } else {
        ws = std::make_unique<TrotterWorkspace>(L, dt_int);
    }

    DensitySuperket cur = rho0;
    bool truncation_warned = false, positivity_warned = false;

    auto snapshot = [&](double t) {
        const double tr = cur.trace();
        if (std::abs(tr - 1.0) > 1e-9)
            throw PropagationError("trace invariant violated (trace = " + std::to_string(tr) + ")", t);
        if (cur.hermiticity_defect() > 1e-9)
            throw PropagationError("Hermiticity invariant violated", t);
        if (warnings) {
            double top_pop = 0.0, min_diag = 0.0;
            for (long ss = 0; ss < s; ++ss) {
                for (long n = f - 2; n < f; ++n)
                    top_pop += std::real(cur.v[(ss * f + n) * dim + (ss * f + n)]);
                for (long n = 0; n < f; ++n)
                    min_diag = std::min(min_diag, std::real(cur.v[(ss * f + n) * dim + (ss * f + n)]));
            }
            if (!truncation_warned && top_pop > 1e-4) {
                warnings->push_back("Fock truncation inadequate: top-two level population " +
                                    std::to_string(top_pop) + " at t=" + std::to_string(t));
                truncation_warned = true;
            }
            if (!positivity_warned && min_diag < -1e-6) {
                warnings->push_back("positivity monitor: negative population " +
                                    std::to_string(min_diag) + " at t=" + std::to_string(t));
                positivity_warned = true;
            }
        }
        observer(t, cur);
    };

    snapshot(0.0);
    for (long k = 1; k <= n_out; ++k) {
        for (long step = 0; step < steps_per_out; ++step) {
            if (config.method == PropagationMethod::DenseExpm) {
                if (dim <= kDenseDimGuard)
                    cur.v = dense_prop * cur.v;
                else
                    cur.v = krylov_expm_multiply(L.full, cur.v, dt_int, config.krylov_tol);
            } else {
                ws->apply(cur.v);
            }
            if (truncated) cur = truncate(cur, config.svd_cutoff, config.max_rank);
        }
        snapshot(k * dt_out);
    }
}

std::vector<DensitySuperket> evolve(const Liouvillian& L, const DensitySuperket& rho0,
                                    double t_end, double dt_out, const PropagatorConfig& config,
                                    std::vector<std::string>* warnings) {
    std::vector<DensitySuperket> out;
    evolve_observe(
        L, rho0, t_end, dt_out, config,
        [&](double, const DensitySuperket& rho) { out.push_back(rho); }, warnings);
    return out;
}

}  // namespace hqs
