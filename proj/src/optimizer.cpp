#include "qcomm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace qcomm {

namespace {

// Relative floor below which a half-step operator is treated as zero.
constexpr double kDegenerateTol = 1e-13;

CMatrix normalized(CMatrix m) {
    const double nrm = std::sqrt(frobenius_norm_sq(m));
    if (!(nrm > 1e-300)) throw NumericalError("normalize: zero matrix");
    m *= Complex(1.0 / nrm);
    return m;
}

CVector top_eigenvector(const HermitianEigen& eig) {
    const std::size_t dim = eig.values.size();
    CVector u{std::vector<Complex>(dim)};
    for (std::size_t i = 0; i < dim; ++i) u.entries[i] = eig.vectors(i, 0);
    return u;
}

// P G P with P = I - v v^dagger / n, v = vec(I).
CMatrix project_traceless_operator(const CMatrix& gm, std::size_t n) {
    const std::size_t dim = gm.n();
    std::vector<std::size_t> diag_idx(n);
    for (std::size_t i = 0; i < n; ++i) diag_idx[i] = i * n + i;
    const double inv_n = 1.0 / static_cast<double>(n);

    // G v and v^dagger G v, exploiting that v is a 0/1 indicator.
    std::vector<Complex> gv(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t k : diag_idx) gv[r] += gm(r, k);
    Complex vgv = 0.0;
    for (std::size_t k : diag_idx) vgv += gv[k];

    std::vector<double> v(dim, 0.0);
    for (std::size_t k : diag_idx) v[k] = 1.0;

    CMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            // (P G P)_ij = G_ij - v_i (Gv)_j^* / n - (Gv)_i v_j / n + v_i v_j (v'Gv) / n^2
            Complex z = gm(i, j);
            if (v[i] != 0.0) z -= std::conj(gv[j]) * inv_n;
            if (v[j] != 0.0) z -= gv[i] * inv_n;
            if (v[i] != 0.0 && v[j] != 0.0) z += vgv * inv_n * inv_n;
            out(i, j) = z;
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        out(i, i) = out(i, i).real();
        for (std::size_t j = i + 1; j < dim; ++j) out(j, i) = std::conj(out(i, j));
    }
    return out;
}

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    threads = std::clamp(threads, 1, std::max(count, 1));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

OptResult run_restarts(const OptConfig& cfg, const std::optional<CMatrix>& start0) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.n);

    std::vector<std::optional<AscentTrace>> traces(static_cast<std::size_t>(cfg.restarts));
    std::vector<std::exception_ptr> errors(traces.size());

    parallel_for(cfg.restarts, cfg.threads, [&](int r) {
        const auto idx = static_cast<std::size_t>(r);
        try {
            CMatrix a0(n);
            if (r == 0 && start0) {
                a0 = *start0;
            } else {
                Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(r));
                a0 = sample_class(n, cfg.matrix_class, rng);
            }
            traces[idx] = ascend(a0, cfg.q, cfg.matrix_class, cfg.max_alternations, cfg.ratio_tol);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    });

    for (std::size_t r = 0; r < errors.size(); ++r) {
        if (!errors[r]) continue;
        try {
            std::rethrow_exception(errors[r]);
        } catch (const std::exception& e) {
            throw OptimizerError("restart " + std::to_string(r) + " at q=" + std::to_string(cfg.q) +
                                     ": " + e.what(),
                                 static_cast<int>(r));
        }
    }

    OptResult best;
    bool have = false;
    for (std::size_t r = 0; r < traces.size(); ++r) {
        const AscentTrace& t = *traces[r];
        if (t.converged) ++best.converged_restarts;
        if (!have || t.ratio > best.best_ratio) {
            have = true;
            best.best_ratio = t.ratio;
            best.a = t.a;
            best.b = t.b;
            best.alternations_used = t.alternations;
            best.restart_index = static_cast<int>(r);
            best.converged = t.converged;
        }
    }
    return best;
}

}  // namespace

std::string to_string(MatrixClass c) {
    switch (c) {
        case MatrixClass::General: return "general";
        case MatrixClass::TracelessA: return "traceless";
        case MatrixClass::NormalA: return "normal";
    }
    return "unknown";
}

std::optional<MatrixClass> parse_matrix_class(const std::string& s) {
    if (s == "general") return MatrixClass::General;
    if (s == "traceless") return MatrixClass::TracelessA;
    if (s == "normal") return MatrixClass::NormalA;
    return std::nullopt;
}

void OptConfig::validate() const {
    if (n < 1) throw std::invalid_argument("OptConfig: n must be >= 1");
    if (n > 16) throw std::invalid_argument("OptConfig: n must be <= 16");
    if (matrix_class == MatrixClass::TracelessA && n < 2) {
        throw std::invalid_argument("OptConfig: traceless class requires n >= 2");
    }
    if (!std::isfinite(q)) throw std::invalid_argument("OptConfig: q must be finite");
    if (restarts < 1) throw std::invalid_argument("OptConfig: restarts must be >= 1");
    if (max_alternations < 1) throw std::invalid_argument("OptConfig: max_alternations must be >= 1");
    if (!(ratio_tol > 0.0)) throw std::invalid_argument("OptConfig: ratio_tol must be > 0");
    if (threads < 1) throw std::invalid_argument("OptConfig: threads must be >= 1");
}

CMatrix build_MA(const CMatrix& a, double q) {
    const std::size_t n = a.n();
    const CMatrix id = CMatrix::identity(n);
    CMatrix m = kron(id, a);
    m -= Complex(q) * kron(a.transpose(), id);
    return m;
}

CMatrix build_NB(const CMatrix& b, double q) {
    const std::size_t n = b.n();
    const CMatrix id = CMatrix::identity(n);
    CMatrix m = kron(b.transpose(), id);
    m -= Complex(q) * kron(id, b);
    return m;
}

HalfStep best_B_given_A(const CMatrix& a, double q) {
    const double na = frobenius_norm_sq(a);
    if (!(std::sqrt(na) > 1e-300)) throw std::invalid_argument("best_B_given_A: A must be nonzero");
    const auto eig = hermitian_eigen(gram(build_MA(a, q)));
    CMatrix b = normalized(devectorize(top_eigenvector(eig), a.n()));
    return {std::move(b), std::max(eig.values.front(), 0.0) / na};
}

HalfStep best_A_given_B(const CMatrix& b, double q, MatrixClass cls) {
    const std::size_t n = b.n();
    const double nb = frobenius_norm_sq(b);
    if (!(std::sqrt(nb) > 1e-300)) throw std::invalid_argument("best_A_given_B: B must be nonzero");
    const CMatrix gm = gram(build_NB(b, q));

    double top = 0.0;
    CMatrix a(n);
    switch (cls) {
        case MatrixClass::General: {
            const auto eig = hermitian_eigen(gm);
            top = eig.values.front();
            a = devectorize(top_eigenvector(eig), n);
            break;
        }
        case MatrixClass::TracelessA: {
            const auto eig = hermitian_eigen(project_traceless_operator(gm, n));
            top = eig.values.front();
            a = project_to_class(devectorize(top_eigenvector(eig), n), cls);
            break;
        }
        case MatrixClass::NormalA: {
            CMatrix restricted(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) restricted(i, j) = gm(i * n + i, j * n + j);
            const auto eig = hermitian_eigen(restricted);
            top = eig.values.front();
            std::vector<Complex> d(n);
            for (std::size_t i = 0; i < n; ++i) d[i] = eig.vectors(i, 0);
            a = CMatrix::diagonal(d);
            break;
        }
    }
    if (!(top > kDegenerateTol * nb)) {
        throw NumericalError("best_A_given_B: projected operator vanishes for this B");
    }
    return {normalized(std::move(a)), top / nb};
}

CMatrix project_to_class(const CMatrix& a, MatrixClass cls) {
    const std::size_t n = a.n();
    switch (cls) {
        case MatrixClass::General: return a;
        case MatrixClass::TracelessA: {
            CMatrix r = a;
            const Complex shift = a.trace() / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) r(i, i) -= shift;
            return r;
        }
        case MatrixClass::NormalA: {
            CMatrix r(n);
            for (std::size_t i = 0; i < n; ++i) r(i, i) = a(i, i);
            return r;
        }
    }
    return a;
}

CMatrix sample_class(std::size_t n, MatrixClass cls, Rng& rng) {
    switch (cls) {
        case MatrixClass::General: return random_matrix(n, rng);
        case MatrixClass::TracelessA: return random_traceless(n, rng);
        case MatrixClass::NormalA: return random_normal_diag(n, rng);
    }
    return random_matrix(n, rng);
}

AscentTrace ascend(const CMatrix& a0, double q, MatrixClass cls, int max_alternations,
                   double ratio_tol) {
    AscentTrace t{normalized(project_to_class(a0, cls)), CMatrix(a0.n()), 0.0, 0, false, {}};
    t.history.reserve(static_cast<std::size_t>(2 * max_alternations));

    double previous = -1.0;
    for (int k = 1; k <= max_alternations; ++k) {
        HalfStep bs = best_B_given_A(t.a, q);
        t.b = std::move(bs.m);
        t.history.push_back(bs.value);

        HalfStep as = best_A_given_B(t.b, q, cls);
        t.a = std::move(as.m);
        t.history.push_back(as.value);
        t.alternations = k;

        if (k > 1 && as.value - previous < ratio_tol) {
            t.converged = true;
            break;
        }
        previous = as.value;
    }
    t.ratio = ratio(t.a, t.b, q);
    return t;
}

OptResult maximize_ratio(const OptConfig& cfg) { return run_restarts(cfg, std::nullopt); }

std::optional<WitnessPair> class_witness(int n, double q, MatrixClass cls) {
    if (n < 1) throw std::invalid_argument("class_witness: requires n >= 1");
    const auto dim = static_cast<std::size_t>(n);
    if (n == 1) {
        if (cls == MatrixClass::TracelessA) return std::nullopt;
        const CMatrix one = CMatrix::identity(1);
        return WitnessPair{one, one, q, (1.0 - q) * (1.0 - q), "projector"};
    }

    auto by_label = [&](const std::string& label) -> std::optional<WitnessPair> {
        for (auto& w : sharpness_witnesses(q, n))
            if (w.label == label) return w;
        return std::nullopt;
    };

    switch (cls) {
        case MatrixClass::General:
            if (q > 0.0 && q != 1.0) {
                auto [a, b] = f_family_pair(q, t_max(q));
                return WitnessPair{embed(a, dim), embed(b, dim), q, f_at_tmax(q), "ftmax"};
            }
            return q > 0.0 ? by_label("kyfan_normal") : by_label("projector");
        case MatrixClass::NormalA:
            return q > 0.0 ? by_label("kyfan_normal") : by_label("projector");
        case MatrixClass::TracelessA:
            if (q <= 0.0) {
                if (auto w = by_label("diag_counterexample")) return w;
            }
            return by_label("traceless_a_mirror");
    }
    return std::nullopt;
}

OptResult seed_with_witness(const OptConfig& cfg) {
    cfg.validate();
    auto w = class_witness(cfg.n, cfg.q, cfg.matrix_class);
    if (!w) return run_restarts(cfg, std::nullopt);
    return run_restarts(cfg, w->a);
}

BoundValue reference_bound(int n, double q, MatrixClass cls) {
    const double minus = (1.0 - q) * (1.0 - q);
    const double plus = 1.0 + q * q;
    switch (cls) {
        case MatrixClass::TracelessA: return traceless_bound_value(n, q);
        case MatrixClass::General:
        case MatrixClass::NormalA:
            if (q > 0.0) return {plus, BoundRegime::NormalEitherPositiveQ};
            return {minus, BoundRegime::GeneralNonpositiveQ};
    }
    return {plus, BoundRegime::NormalEitherPositiveQ};
}

std::vector<SweepRow> sweep_q(int n, std::span<const double> q_values, MatrixClass cls,
                              const OptConfig& cfg_template, bool seed_witness) {
    std::vector<double> qs(q_values.begin(), q_values.end());
    std::stable_sort(qs.begin(), qs.end());

    std::vector<SweepRow> rows;
    rows.reserve(qs.size());
    for (double q : qs) {
        OptConfig cfg = cfg_template;
        cfg.n = n;
        cfg.q = q;
        cfg.matrix_class = cls;
        const OptResult res = seed_witness ? seed_with_witness(cfg) : maximize_ratio(cfg);
        const double bound = reference_bound(n, q, cls).coefficient;
        rows.push_back({q, n, cls, res.best_ratio, bound, res.best_ratio - bound,
                        res.converged_restarts});
    }
    return rows;
}

std::vector<double> q_grid(double from, double to, int steps) {
    if (steps < 1) throw std::invalid_argument("q_grid: steps must be >= 1");
    if (!std::isfinite(from) || !std::isfinite(to)) throw std::invalid_argument("q_grid: bounds must be finite");
    std::vector<double> qs(static_cast<std::size_t>(steps));
    if (steps == 1) {
        qs[0] = from;
        return qs;
    }
    for (int i = 0; i < steps; ++i) qs[static_cast<std::size_t>(i)] = from + (to - from) * i / (steps - 1);
    qs.back() = to;
    return qs;
}

}  // namespace qcomm
