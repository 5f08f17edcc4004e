#include "qcomm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcomm/bounds.hpp"

namespace qcomm {

namespace {

constexpr double kProofTol = 1e-10;
constexpr double kProp1Tol = 1e-9;
constexpr double kConjectureTol = 1e-6;
constexpr double kWitnessTol = 1e-4;

CMatrix unit_norm(CMatrix m) {
    m *= Complex(1.0 / std::sqrt(frobenius_norm_sq(m)));
    return m;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

CMatrix block_2x2(Complex m00, Complex m01, Complex m10, Complex m11) {
    CMatrix m(2);
    m(0, 0) = m00;
    m(0, 1) = m01;
    m(1, 0) = m10;
    m(1, 1) = m11;
    return m;
}

Complex det2(const CMatrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

std::array<Complex, 3> cross(const std::array<Complex, 3>& a, const std::array<Complex, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Complex dot(const std::array<Complex, 3>& a, const std::array<Complex, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

const CMatrix& pauli(int k) {
    static const CMatrix s1 = CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    static const CMatrix s2 = CMatrix::from_rows({{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}});
    static const CMatrix s3 = CMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    switch (k) {
        case 1: return s1;
        case 2: return s2;
        case 3: return s3;
        default: throw std::invalid_argument("pauli: index must be 1, 2 or 3");
    }
}

CMatrix PauliVector::to_matrix() const {
    CMatrix m(2);
    for (int k = 0; k < 3; ++k) m += a[static_cast<std::size_t>(k)] * pauli(k + 1);
    return m;
}

// --- first proof: X >= 0 --------------------------------------------------

XDecomposition x_decomposition(const CMatrix& a, const CMatrix& b, double q) {
    if (a.n() != 2 || b.n() != 2) throw std::invalid_argument("x_decomposition: 2x2 matrices only");
    if (a(0, 0) != Complex{} || a(1, 1) != Complex{}) {
        throw std::invalid_argument("x_decomposition: A must have zero diagonal");
    }
    const Complex a12 = a(0, 1), a21 = a(1, 0);
    const Complex b11 = b(0, 0), b12 = b(0, 1), b21 = b(1, 0), b22 = b(1, 1);

    const double direct = (1.0 + q * q) * frobenius_norm_sq(a) * frobenius_norm_sq(b) -
                          frobenius_norm_sq(q_commutator(a, b, q));

    const double off = std::norm(a12) * std::norm(b12) + std::norm(a21) * std::norm(b21);
    const double diag = std::norm(a12) * std::norm(b11 + q * b22) + std::norm(a21) * std::norm(b22 + q * b11);
    const Complex cp = a12 * std::conj(b12) + a21 * std::conj(b21);
    const Complex cm = a12 * std::conj(b12) - a21 * std::conj(b21);

    return {direct, (1.0 - q) * (1.0 - q) * off + diag + 2.0 * q * std::norm(cp),
            (1.0 + q) * (1.0 + q) * off + diag - 2.0 * q * std::norm(cm)};
}

CheckReport check_X_nonneg(double q, int trials, std::uint64_t seed) {
    Rng rng(seed);
    double worst = -INFINITY;
    double worst_mismatch = 0.0;
    int upper_mismatch = 0, lower_mismatch = 0;
    for (int t = 0; t < trials; ++t) {
        CMatrix a(2);
        a(0, 1) = rng.complex_gaussian();
        a(1, 0) = rng.complex_gaussian();
        a = unit_norm(std::move(a));
        const CMatrix b = unit_norm(random_matrix(2, rng));

        const auto x = x_decomposition(a, b, q);
        worst = std::max(worst, -x.direct);
        const double scale = std::max(1.0, std::abs(x.direct));
        const double du = std::abs(x.upper - x.direct) / scale;
        const double dl = std::abs(x.lower - x.direct) / scale;
        worst_mismatch = std::max({worst_mismatch, du, dl});
        if (du > kProofTol) ++upper_mismatch;
        if (dl > kProofTol) ++lower_mismatch;
    }

    CheckReport r{"X_nonneg q=" + fmt(q), trials, worst, kProofTol, false, {}};
    // Both regroupings are the same polynomial; at least one must agree.
    const bool one_matches = upper_mismatch == 0 || lower_mismatch == 0;
    r.passed = worst <= kProofTol && one_matches;
    std::ostringstream d;
    d << "tol=" << kProofTol << " max_regroup_mismatch=" << worst_mismatch
      << " nonneg_variant=" << (q >= 0.0 ? "upper" : "lower");
    if (upper_mismatch != lower_mismatch) {
        d << " only_" << (upper_mismatch == 0 ? "upper" : "lower") << "_variant_matched";
    }
    r.details = d.str();
    return r;
}

// --- second proof: M_A M_A^dagger = M1 (+) M2 -----------------------------

CheckReport check_M_blocks(Complex a, Complex b, double q) {
    const CMatrix am = block_2x2(0.0, a, b, 0.0);
    const CMatrix m = build_MA(am, q);
    const CMatrix h = m * m.adjoint();

    const double na = std::norm(a), nb = std::norm(b);
    const double s = na + nb;
    const double q2 = q * q;
    const CMatrix m1 = block_2x2(na + q2 * nb, -q * s, -q * s, nb + q2 * na);
    const CMatrix m2 = block_2x2((1.0 + q2) * nb, -2.0 * q * std::conj(a) * b,
                                 -2.0 * q * a * std::conj(b), (1.0 + q2) * na);
    CMatrix target(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            target(i, j) = m1(i, j);
            target(i + 2, j + 2) = m2(i, j);
        }

    const double scale = std::max(1.0, std::sqrt(frobenius_norm_sq(h)));
    std::array<std::size_t, 4> perm{0, 1, 2, 3};
    bool similar = false;
    std::array<std::size_t, 4> found{};
    do {
        double resid = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) resid += std::norm(h(perm[i], perm[j]) - target(i, j));
        if (std::sqrt(resid) <= 1e-12 * scale) {
            similar = true;
            found = perm;
            break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    const double tr_expected = (1.0 + q2) * s;
    const double det_expected = (1.0 - q2) * (1.0 - q2) * na * nb;
    bool algebra_ok = true;
    double discriminant_slack = INFINITY;
    for (const CMatrix* blk : {&m1, &m2}) {
        const double tr = (blk->trace()).real();
        const double det = det2(*blk).real();
        algebra_ok = algebra_ok && std::abs(tr - tr_expected) <= 1e-12 * std::max(1.0, tr_expected) &&
                     std::abs(det - det_expected) <= 1e-12 * std::max(1.0, tr_expected * tr_expected);
        discriminant_slack = std::min(discriminant_slack, tr * tr - 4.0 * det);
    }

    const double top = hermitian_eigen(h).values.front();
    const double violation = s > 0.0 ? (top - tr_expected) / s : top;

    CheckReport r{"M_blocks", 1, violation, kProofTol, false, {}};
    r.passed = similar && algebra_ok && violation <= kProofTol &&
               discriminant_slack >= -1e-12 * std::max(1.0, tr_expected * tr_expected);
    std::ostringstream d;
    d << "tol=" << kProofTol << " permutation_similar=" << (similar ? "yes" : "no");
    if (similar) d << " perm=(" << found[0] << found[1] << found[2] << found[3] << ")";
    d << " trace_det_ok=" << (algebra_ok ? "yes" : "no") << " tr^2-4det=" << discriminant_slack;
    r.details = d.str();
    return r;
}

CheckReport check_M_blocks_random(int trials, std::uint64_t seed) {
    Rng rng(seed);
    CheckReport agg{"M_blocks random", trials, -INFINITY, kProofTol, true, {}};
    int failures = 0;
    for (int t = 0; t < trials; ++t) {
        const Complex a = rng.complex_gaussian();
        const Complex b = rng.complex_gaussian();
        const double q = rng.uniform(-3.0, 3.0);
        const auto r = check_M_blocks(a, b, q);
        agg.worst_violation = std::max(agg.worst_violation, r.worst_violation);
        if (!r.passed) {
            ++failures;
            if (agg.details.empty()) agg.details = "first failure: " + r.details;
        }
    }
    agg.passed = failures == 0;
    agg.details = "tol=" + fmt(kProofTol) + " failures=" + std::to_string(failures) +
                  (agg.details.empty() ? "" : " " + agg.details);
    return agg;
}

// --- su(2) identity -------------------------------------------------------

CMatrix su2_qcommutator(const PauliVector& a, const PauliVector& b, double q) {
    const Complex ab = dot(a.a, b.a);
    const auto c = cross(a.a, b.a);
    CMatrix r = Complex((1.0 - q)) * ab * CMatrix::identity(2);
    const Complex factor(0.0, 1.0 + q);
    for (int k = 0; k < 3; ++k) r += factor * c[static_cast<std::size_t>(k)] * pauli(k + 1);
    return r;
}

CheckReport check_su2_identity(double q, int trials, std::uint64_t seed) {
    Rng rng(seed);
    double worst_entry = 0.0, worst_norm = 0.0, worst = -INFINITY;
    for (int t = 0; t < trials; ++t) {
        PauliVector a, b;
        for (auto& z : a.a) z = rng.complex_gaussian();
        for (auto& z : b.a) z = rng.complex_gaussian();
        const CMatrix am = unit_norm(a.to_matrix());
        const CMatrix bm = unit_norm(b.to_matrix());
        const double sa = std::sqrt(frobenius_norm_sq(a.to_matrix()));
        const double sb = std::sqrt(frobenius_norm_sq(b.to_matrix()));
        for (auto& z : a.a) z /= sa;
        for (auto& z : b.a) z /= sb;

        const CMatrix direct = q_commutator(am, bm, q);
        const CMatrix closed = su2_qcommutator(a, b, q);
        worst_entry = std::max(worst_entry, std::sqrt(frobenius_norm_sq(direct - closed)));

        const auto c = cross(a.a, b.a);
        const double cross_sq = std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
        const double identity = 2.0 * ((1.0 - q) * (1.0 - q) * std::norm(dot(a.a, b.a)) +
                                       (1.0 + q) * (1.0 + q) * cross_sq);
        const double lhs = frobenius_norm_sq(direct);
        worst_norm = std::max(worst_norm, std::abs(lhs - identity));
        worst = std::max(worst, lhs - (1.0 + q * q));
    }
    CheckReport r{"su2_identity q=" + fmt(q), trials, worst, kProofTol, false, {}};
    r.passed = worst <= kProofTol && worst_entry <= 1e-12 && worst_norm <= 1e-12;
    std::ostringstream d;
    d << "tol=" << kProofTol << " max_entry_residual=" << worst_entry
      << " max_norm_identity_residual=" << worst_norm;
    r.details = d.str();
    return r;
}

// --- rank-one traceless, Prop. 1, q=2 counterexample ------------------------

CheckReport check_rank_one_traceless(double q, int n, int trials, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("check_rank_one_traceless: requires n >= 2");
    const auto dim = static_cast<std::size_t>(n);
    Rng rng(seed);
    double worst = -INFINITY, worst_trace = 0.0;
    for (int t = 0; t < trials; ++t) {
        const CVector u = random_vector(dim, rng);
        CVector v = random_vector(dim, rng);
        Complex uv = 0.0;  // <u|v>
        for (std::size_t i = 0; i < dim; ++i) uv += std::conj(u.entries[i]) * v.entries[i];
        const double uu = u.norm_sq();
        for (std::size_t i = 0; i < dim; ++i) v.entries[i] -= uv / uu * u.entries[i];

        CMatrix a(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) a(i, j) = u.entries[i] * std::conj(v.entries[j]);
        a = unit_norm(std::move(a));
        const CMatrix b = random_matrix(dim, rng);
        worst_trace = std::max(worst_trace, std::abs(a.trace()));
        worst = std::max(worst, ratio(a, b, q) - (1.0 + q * q));
    }
    CheckReport r{"rank_one_traceless n=" + std::to_string(n) + " q=" + fmt(q), trials, worst,
                  kProofTol, worst <= kProofTol, {}};
    r.details = "tol=" + fmt(kProofTol) + " max|trA|=" + fmt(worst_trace);
    return r;
}

CheckReport check_prop1(double q, int n, int trials, std::uint64_t seed) {
    if (q < 0.0) throw std::invalid_argument("check_prop1: requires q >= 0");
    if (n < 1) throw std::invalid_argument("check_prop1: requires n >= 1");
    const auto dim = static_cast<std::size_t>(n);
    Rng rng(seed);
    double worst_kyfan = -INFINITY, worst_frob = -INFINITY;
    for (int t = 0; t < trials; ++t) {
        const CMatrix a = unit_norm(random_normal_diag(dim, rng));
        const CMatrix b = unit_norm(random_matrix(dim, rng));
        const double lhs = frobenius_norm_sq(q_commutator(a, b, q));
        worst_kyfan = std::max(worst_kyfan, lhs - (1.0 + q * q) * kyfan22_norm_sq(a));
        worst_frob = std::max(worst_frob, lhs - (1.0 + q * q));
    }
    const double worst = std::max(worst_kyfan, worst_frob);
    CheckReport r{"prop1 n=" + std::to_string(n) + " q=" + fmt(q), trials, worst, kProp1Tol,
                  worst <= kProp1Tol, {}};
    std::ostringstream d;
    d << "tol=" << kProp1Tol << " worst_kyfan_form=" << worst_kyfan << " worst_frobenius_form=" << worst_frob;
    r.details = d.str();
    return r;
}

CheckReport check_counterexample_q2() {
    const WitnessPair w = counterexample_q2();
    const double na = frobenius_norm_sq(w.a);
    const double nb = frobenius_norm_sq(w.b);
    const double nc = frobenius_norm_sq(q_commutator(w.a, w.b, 2.0));
    const double bound = bound_normal_positive(2.0) * na * nb;
    const double err = std::max({std::abs(na - 69.0), std::abs(nb - 69.0), std::abs(nc - 23953.0),
                                 std::abs(bound - 23805.0)});
    CheckReport r{"counterexample_q2", 1, err, 1e-9, err <= 1e-9 && nc > bound, {}};
    std::ostringstream d;
    d.precision(17);
    d << "|A|^2=" << na << " |B|^2=" << nb << " |[A,B]_2|^2=" << nc << " bound=" << bound
      << " exceeds=" << (nc > bound ? "yes" : "no");
    r.details = d.str();
    return r;
}

// --- conjectures ----------------------------------------------------------

std::vector<CheckReport> check_conjectures(int n, std::span<const double> q_grid, MatrixClass cls,
                                           const OptConfig& cfg) {
    const auto rows = sweep_q(n, q_grid, cls, cfg, true);
    std::vector<CheckReport> out;
    out.reserve(rows.size());
    for (const SweepRow& row : rows) {
        const BoundValue bound = reference_bound(n, row.q, cls);
        double attained = -INFINITY;
        if (auto w = class_witness(n, row.q, cls)) attained = ratio(w->a, w->b, row.q);

        CheckReport r;
        r.name = (row.q > 0.0 ? "conjecture1" : "conjecture2");
        r.name += " n=" + std::to_string(n) + " q=" + fmt(row.q) + " class=" + to_string(cls);
        r.trials = cfg.restarts;
        r.worst_violation = row.max_ratio - bound.coefficient;
        r.tolerance = kConjectureTol;
        const bool supported = r.worst_violation <= kConjectureTol;
        const bool sharp = attained >= bound.coefficient - kWitnessTol;
        r.passed = supported && sharp;

        std::ostringstream d;
        d.precision(12);
        d << "tol=" << kConjectureTol << " regime=" << to_string(bound.regime)
          << " bound=" << bound.coefficient << " max_ratio=" << row.max_ratio
          << " witness_ratio=" << attained;
        if (!supported) d << " VIOLATION: optimizer exceeds conjectured bound by " << r.worst_violation;
        if (!sharp) d << " witness does not attain bound";
        r.details = d.str();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CheckReport> run_proof_suite(const ProofSuiteConfig& cfg) {
    std::vector<CheckReport> out;
    std::uint64_t k = 0;
    auto next_seed = [&] { return cfg.seed * 0x100000001b3ULL + (++k); };

    for (double q : {-2.0, -1.0, -0.3, 0.0, 0.3, 1.0, 2.0})
        out.push_back(check_X_nonneg(q, cfg.x_trials, next_seed()));
    out.push_back(check_M_blocks_random(cfg.trials, next_seed()));
    for (double q : {-1.0, 0.5, 2.0}) out.push_back(check_su2_identity(q, cfg.trials, next_seed()));
    for (double q : {-1.0, 0.5, 2.0})
        for (int n = 2; n <= 6; ++n) out.push_back(check_rank_one_traceless(q, n, cfg.trials, next_seed()));
    for (double q : {0.5, 1.0, 2.0, 5.0})
        for (int n = 2; n <= 6; ++n) out.push_back(check_prop1(q, n, cfg.trials, next_seed()));
    out.push_back(check_counterexample_q2());
    return out;
}

}  // namespace qcomm
