#include "hdlasso/compat.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdlasso/projections.hpp"
#include "hdlasso/rng.hpp"

namespace hdlasso {

namespace {

struct OrthantProblem {
    const Eigen::MatrixXd* Sigma;
    const Eigen::LDLT<Eigen::MatrixXd>* kkt_solver;  // factor of (2Σ̂ + ρI)
    const std::vector<int>* S;
    const std::vector<int>* Sc;
    double L = 0.0;
    double rho = 1.0;
    double grad_scale = 1.0;  // max(1, 2 λ_max(Σ̂)) for tolerance scaling
};

struct OrthantState {
    Eigen::VectorXd z, u;
};

struct OrthantSolve {
    Eigen::VectorXd alpha;  // signed coordinates: α_j = β_j on S, -β_j off S
    double value = std::numeric_limits<double>::infinity();
    double kkt = std::numeric_limits<double>::infinity();
    int iters = 0;
    bool converged = false;
};

Eigen::VectorXd project_feasible(const OrthantProblem& pr, const Eigen::VectorXd& signs,
                                 const Eigen::VectorXd& w) {
    const auto& S = *pr.S;
    const auto& Sc = *pr.Sc;
    Eigen::VectorXd z = w;
    Eigen::VectorXd xs(S.size());
    for (size_t i = 0; i < S.size(); ++i) xs[i] = signs[i] * w[S[i]];
    const Eigen::VectorXd px = project_simplex(xs, 1.0);
    for (size_t i = 0; i < S.size(); ++i) z[S[i]] = signs[i] * px[i];
    if (!Sc.empty()) {
        Eigen::VectorXd wc(Sc.size());
        for (size_t k = 0; k < Sc.size(); ++k) wc[k] = w[Sc[k]];
        const Eigen::VectorXd pc = project_l1_ball(wc, pr.L);
        for (size_t k = 0; k < Sc.size(); ++k) z[Sc[k]] = pc[k];
    }
    return z;
}

struct PolishResult {
    bool ok = false;
    Eigen::VectorXd alpha;
    double value = 0.0;
    double kkt = 0.0;
};

// Exact solve on the face identified from z: active simplex coordinates P,
// active ball coordinates F with their signs, and the ball constraint state.
// The reduced KKT system is linear; the candidate is accepted only when the
// full set of first-order conditions holds within tolerance.
PolishResult try_polish(const OrthantProblem& pr, const Eigen::VectorXd& signs,
                        const Eigen::VectorXd& z, bool ball_active) {
    const auto& S = *pr.S;
    const auto& Sc = *pr.Sc;
    const Eigen::MatrixXd& Sig = *pr.Sigma;
    PolishResult out;

    const double zmax = z.size() ? z.cwiseAbs().maxCoeff() : 0.0;
    const double eps_face = 1e-6 * std::max(1.0, zmax);

    std::vector<int> P;  // positions within S
    for (size_t i = 0; i < S.size(); ++i)
        if (signs[i] * z[S[i]] > eps_face) P.push_back(static_cast<int>(i));
    if (P.empty()) {
        int best = 0;
        for (size_t i = 1; i < S.size(); ++i)
            if (signs[i] * z[S[i]] > signs[best] * z[S[best]]) best = static_cast<int>(i);
        P.push_back(best);
    }
    std::vector<int> F;  // positions within Sc
    std::vector<double> sigma_F;
    for (size_t k = 0; k < Sc.size(); ++k) {
        if (std::abs(z[Sc[k]]) > eps_face) {
            F.push_back(static_cast<int>(k));
            sigma_F.push_back(z[Sc[k]] > 0 ? 1.0 : -1.0);
        }
    }
    if (F.empty()) ball_active = false;

    const int q = static_cast<int>(P.size() + F.size());
    if (q > 400) return out;
    const int dim = q + 1 + (ball_active ? 1 : 0);

    std::vector<int> cols(q);  // global coordinate of each unknown
    for (size_t i = 0; i < P.size(); ++i) cols[i] = S[P[i]];
    for (size_t k = 0; k < F.size(); ++k) cols[P.size() + k] = Sc[F[k]];

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    for (size_t i = 0; i < P.size(); ++i) {
        const int r = static_cast<int>(i);
        for (int t = 0; t < q; ++t) M(r, t) = signs[P[i]] * 2.0 * Sig(S[P[i]], cols[t]);
        M(r, q) = -1.0;  // -μ
    }
    for (size_t k = 0; k < F.size(); ++k) {
        const int r = static_cast<int>(P.size() + k);
        for (int t = 0; t < q; ++t) M(r, t) = 2.0 * Sig(Sc[F[k]], cols[t]);
        if (ball_active) M(r, q + 1) = sigma_F[k];  // +ν σ_k
    }
    for (size_t i = 0; i < P.size(); ++i) M(q, static_cast<int>(i)) = signs[P[i]];
    rhs[q] = 1.0;
    if (ball_active) {
        for (size_t k = 0; k < F.size(); ++k)
            M(q + 1, static_cast<int>(P.size() + k)) = sigma_F[k];
        rhs[q + 1] = pr.L;
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible()) return out;
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite()) return out;

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(Sig.rows());
    for (int t = 0; t < q; ++t) alpha[cols[t]] = sol[t];
    const double mu = sol[q];
    const double nu = ball_active ? sol[q + 1] : 0.0;

    const double tol_g = 1e-9 * pr.grad_scale;
    double viol = 0.0;
    // primal feasibility on the face (clamp fuzz at zero)
    for (size_t i = 0; i < P.size(); ++i) {
        const double xi = signs[P[i]] * alpha[S[P[i]]];
        if (xi < 0.0) {
            if (xi < -1e-11) return out;
            alpha[S[P[i]]] = 0.0;
        }
    }
    for (size_t k = 0; k < F.size(); ++k) {
        const double wk = sigma_F[k] * alpha[Sc[F[k]]];
        if (wk < 0.0) {
            if (wk < -1e-11) return out;
            alpha[Sc[F[k]]] = 0.0;
        }
    }
    if (nu < -tol_g) return out;
    if (!ball_active && !Sc.empty()) {
        double l1 = 0.0;
        for (int k : Sc) l1 += std::abs(alpha[k]);
        if (l1 > pr.L + 1e-11 * std::max(1.0, pr.L)) return out;
    }

    const Eigen::VectorXd grad = 2.0 * (Sig * alpha);
    for (size_t i = 0; i < S.size(); ++i) {
        const double gi = signs[i] * grad[S[i]];
        const bool active = std::find(P.begin(), P.end(), static_cast<int>(i)) != P.end();
        viol = std::max(viol, active ? std::abs(gi - mu) : std::max(0.0, mu - gi));
    }
    for (size_t k = 0; k < Sc.size(); ++k) {
        const double gk = grad[Sc[k]];
        const auto pos = std::find(F.begin(), F.end(), static_cast<int>(k));
        if (pos != F.end()) {
            viol = std::max(viol, std::abs(gk + nu * sigma_F[pos - F.begin()]));
        } else {
            viol = std::max(viol, std::max(0.0, std::abs(gk) - nu));
        }
    }
    if (viol > tol_g) return out;

    out.ok = true;
    out.alpha = std::move(alpha);
    out.value = out.alpha.dot(Sig * out.alpha);
    out.kkt = viol;
    return out;
}

OrthantSolve solve_orthant(const OrthantProblem& pr, const Eigen::VectorXd& signs,
                           const CompatOptions& opts, OrthantState* state) {
    const auto& S = *pr.S;
    const Eigen::MatrixXd& Sig = *pr.Sigma;
    const int p = static_cast<int>(Sig.rows());
    const double relax = 1.7;

    Eigen::VectorXd z, u;
    if (state && state->z.size() == p) {
        z = state->z;
        u = state->u;
        z = project_feasible(pr, signs, z);
    } else {
        z = Eigen::VectorXd::Zero(p);
        for (size_t i = 0; i < S.size(); ++i) z[S[i]] = signs[i] / static_cast<double>(S.size());
        u = Eigen::VectorXd::Zero(p);
    }

    OrthantSolve best;
    const auto consider = [&](const Eigen::VectorXd& alpha, double kkt) {
        const double val = alpha.dot(Sig * alpha);
        if (val < best.value || (val == best.value && kkt < best.kkt)) {
            best.value = val;
            best.alpha = alpha;
            best.kkt = kkt;
        }
    };

    int next_polish = 30;
    Eigen::VectorXd x(p), z_old(p);
    for (int it = 1; it <= opts.max_iters; ++it) {
        x = pr.kkt_solver->solve(pr.rho * (z - u));
        z_old = z;
        const Eigen::VectorXd xr = relax * x + (1.0 - relax) * z_old;
        z = project_feasible(pr, signs, xr + u);
        u += xr - z;

        if (it == next_polish || it == opts.max_iters) {
            next_polish = it + std::max(30, it);
            double l1c = 0.0;
            for (int k : *pr.Sc) l1c += std::abs(z[k]);
            const bool ball_tight = l1c > pr.L - 1e-6 * std::max(1.0, pr.L);
            PolishResult polish = try_polish(pr, signs, z, ball_tight);
            if (!polish.ok && !pr.Sc->empty())
                polish = try_polish(pr, signs, z, !ball_tight);
            if (polish.ok) {
                consider(polish.alpha, polish.kkt);
                if (polish.kkt <= opts.target_kkt) {
                    best.converged = true;
                    best.iters = it;
                    if (state) {
                        state->z = z;
                        state->u = u;
                    }
                    return best;
                }
            }
            const double rp = (x - z).cwiseAbs().maxCoeff();
            const double rd = pr.rho * (z - z_old).cwiseAbs().maxCoeff();
            if (rp < 1e-12 && rd < 1e-12) break;
        }
    }

    // fall back to the feasible ADMM iterate
    consider(z, (x - z).cwiseAbs().maxCoeff() * pr.rho);
    best.converged = best.kkt <= opts.target_kkt;
    best.iters = opts.max_iters;
    if (state) {
        state->z = z;
        state->u = u;
    }
    return best;
}

Eigen::VectorXd signs_from_bits(std::uint64_t bits, int k) {
    Eigen::VectorXd s(k);
    s[0] = 1.0;  // symmetry: (α, -α) give the same value
    for (int i = 1; i < k; ++i) s[i] = (bits >> (i - 1)) & 1 ? -1.0 : 1.0;
    return s;
}

}  // namespace

std::vector<CompatibilityResult> compatibility_constants(const GramMatrix& Sigma,
                                                         const std::vector<double>& Ls,
                                                         const IndexSet& S,
                                                         const CompatOptions& opts) {
    const Eigen::MatrixXd& Sig = Sigma.matrix();
    const int p = Sigma.p();
    if (S.empty()) throw DomainError("compatibility_constant: empty index set S");
    S.check_range(p);
    for (double L : Ls)
        if (L <= 0.0) throw DomainError("compatibility_constant: L must be positive");

    const std::vector<int>& Sm = S.members();
    const IndexSet Scomp = S.complement(p);
    const std::vector<int>& Sc = Scomp.members();
    const int k = S.size();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sig, Eigen::EigenvaluesOnly);
    const double lam_max = es.eigenvalues().maxCoeff();
    const double rho = std::max(1e-6, Sig.trace() / p);

    Eigen::MatrixXd H = 2.0 * Sig;
    H.diagonal().array() += rho;
    const Eigen::LDLT<Eigen::MatrixXd> solver(H);

    OrthantProblem pr;
    pr.Sigma = &Sig;
    pr.kkt_solver = &solver;
    pr.S = &Sm;
    pr.Sc = &Sc;
    pr.rho = rho;
    pr.grad_scale = std::max(1.0, 2.0 * lam_max);

    // solve ascending in L so each orthant warm-starts from the previous ball
    std::vector<size_t> order(Ls.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return Ls[a] < Ls[b]; });

    const bool enumerate = k <= opts.sign_cap;
    std::vector<Eigen::VectorXd> patterns;
    if (enumerate) {
        const std::uint64_t count = 1ULL << (k - 1);
        for (std::uint64_t bits = 0; bits < count; ++bits)
            patterns.push_back(signs_from_bits(bits, k));
    } else {
        Rng rng(opts.seed);
        for (int r = 0; r < opts.random_patterns; ++r) {
            Eigen::VectorXd s(k);
            s[0] = 1.0;
            for (int i = 1; i < k; ++i) s[i] = rng.rademacher();
            patterns.push_back(std::move(s));
        }
    }

    std::vector<CompatibilityResult> results(Ls.size());
    for (size_t oi = 0; oi < order.size(); ++oi) {
        CompatibilityResult& res = results[order[oi]];
        res.L = Ls[order[oi]];
        res.S = S;
        res.method = enumerate ? CompatMethod::SignEnumeration : CompatMethod::RandomRestart;
        res.certified = enumerate;
        res.value = std::numeric_limits<double>::infinity();
    }

    std::vector<OrthantState> states(patterns.size());
    for (size_t pi = 0; pi < patterns.size(); ++pi) {
        for (size_t oi = 0; oi < order.size(); ++oi) {
            CompatibilityResult& res = results[order[oi]];
            pr.L = res.L;
            OrthantSolve sol = solve_orthant(pr, patterns[pi], opts, &states[pi]);
            res.certified = res.certified && sol.converged;
            res.max_orthant_kkt = std::max(res.max_orthant_kkt, sol.kkt);
            res.iterations += sol.iters;
            // the objective is a PSD quadratic: negatives are pure roundoff
            const double value = std::max(0.0, static_cast<double>(k) * sol.value);
            if (value < res.value) {
                res.value = value;
                // map signed coordinates back: β_S = α_S, β_{S^c} = -α_{S^c}
                res.minimizer = sol.alpha;
                for (int c : Sc) res.minimizer[c] = -sol.alpha[c];
            }
        }
    }
    return results;
}

CompatibilityResult compatibility_constant(const GramMatrix& Sigma, double L, const IndexSet& S,
                                           const CompatOptions& opts) {
    return compatibility_constants(Sigma, {L}, S, opts).front();
}

CompatibilityResult compatibility_constant(const Eigen::MatrixXd& X, double L, const IndexSet& S,
                                           const CompatOptions& opts) {
    return compatibility_constant(gram(X), L, S, opts);
}

double compat_random_search_oracle(const GramMatrix& Sigma, double L, const IndexSet& S,
                                   int samples, std::uint64_t seed) {
    const Eigen::MatrixXd& Sig = Sigma.matrix();
    const int p = Sigma.p();
    if (S.empty()) throw DomainError("compat_random_search_oracle: empty S");
    S.check_range(p);
    const std::vector<int>& Sm = S.members();
    const IndexSet Scomp = S.complement(p);
    const std::vector<int>& Sc = Scomp.members();
    const int k = S.size();
    const int kc = static_cast<int>(Sc.size());

    Rng rng(seed);
    const auto value_of = [&](const Eigen::VectorXd& alpha) { return k * alpha.dot(Sig * alpha); };

    // uniform draw on the feasible set in signed coordinates: ℓ1 sphere on S
    // (exponential spacings give a uniform simplex point), ℓ1 ball off S
    const auto draw_uniform = [&]() {
        Eigen::VectorXd alpha = Eigen::VectorXd::Zero(p);
        double total = 0.0;
        Eigen::VectorXd mag(k);
        for (int i = 0; i < k; ++i) {
            mag[i] = rng.exponential();
            total += mag[i];
        }
        for (int i = 0; i < k; ++i) alpha[Sm[i]] = rng.rademacher() * mag[i] / total;
        if (kc > 0) {
            double totc = rng.exponential();  // extra spacing makes the radius Beta-distributed
            Eigen::VectorXd magc(kc);
            for (int i = 0; i < kc; ++i) {
                magc[i] = rng.exponential();
                totc += magc[i];
            }
            const double radius = L * std::pow(rng.uniform(), 1.0 / kc);
            for (int i = 0; i < kc; ++i)
                alpha[Sc[i]] = rng.rademacher() * radius * magc[i] / totc;
        }
        return alpha;
    };

    const auto project = [&](Eigen::VectorXd alpha) {
        Eigen::VectorXd xs(k);
        for (int i = 0; i < k; ++i) xs[i] = std::abs(alpha[Sm[i]]);
        const Eigen::VectorXd px = project_simplex(xs, 1.0);
        for (int i = 0; i < k; ++i)
            alpha[Sm[i]] = (alpha[Sm[i]] >= 0 ? 1.0 : -1.0) * px[i];
        if (kc > 0) {
            Eigen::VectorXd wc(kc);
            for (int i = 0; i < kc; ++i) wc[i] = alpha[Sc[i]];
            const Eigen::VectorXd pc = project_l1_ball(wc, L);
            for (int i = 0; i < kc; ++i) alpha[Sc[i]] = pc[i];
        }
        return alpha;
    };

    const int uniform_phase = samples / 5;
    Eigen::VectorXd best = draw_uniform();
    double best_val = value_of(best);
    for (int t = 1; t < uniform_phase; ++t) {
        const Eigen::VectorXd alpha = draw_uniform();
        const double v = value_of(alpha);
        if (v < best_val) {
            best_val = v;
            best = alpha;
        }
    }

    const int phases = 10;
    const int per_phase = (samples - uniform_phase) / phases;
    double radius = 0.5;
    for (int ph = 0; ph < phases; ++ph, radius *= 0.35) {
        for (int t = 0; t < per_phase; ++t) {
            Eigen::VectorXd alpha = best;
            for (int j = 0; j < p; ++j) alpha[j] += radius * rng.gaussian();
            alpha = project(alpha);
            const double v = value_of(alpha);
            if (v < best_val) {
                best_val = v;
                best = alpha;
            }
        }
    }
    return std::max(0.0, best_val);
}

double lambda_max_noise(const Eigen::MatrixXd& X, const Eigen::VectorXd& eps) {
    if (eps.size() != X.rows()) throw DimensionError("lambda_max_noise: shape mismatch");
    return (X.transpose() * eps).cwiseAbs().maxCoeff() / static_cast<double>(X.rows());
}

double theoretical_lambda(int n, int p, double a) {
    if (n < 1 || p < 1) throw DomainError("theoretical_lambda: n, p must be >= 1");
    if (a < 0.0) throw DomainError("theoretical_lambda: a must be nonnegative");
    return std::sqrt(2.0 * (std::log(2.0 * p) + a) / n);
}

}  // namespace hdlasso
