#include "qcomm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcomm {

std::string to_string(BoundRegime r) {
    switch (r) {
        case BoundRegime::GeneralNonpositiveQ: return "general_nonpositive_q";
        case BoundRegime::NormalEitherPositiveQ: return "normal_either_positive_q";
        case BoundRegime::TracelessConjecturePositiveQ: return "traceless_conjecture_positive_q";
        case BoundRegime::TracelessConjectureNonpositiveQ: return "traceless_conjecture_nonpositive_q";
    }
    return "unknown";
}

double ratio(const CMatrix& a, const CMatrix& b, double q) {
    const double na = frobenius_norm_sq(a);
    const double nb = frobenius_norm_sq(b);
    if (!(std::sqrt(na) > 1e-300) || !(std::sqrt(nb) > 1e-300)) {
        throw std::invalid_argument("ratio: A and B must be nonzero");
    }
    return frobenius_norm_sq(q_commutator(a, b, q)) / na / nb;
}

double bound_general_nonpositive(double q) {
    if (q > 0.0) throw std::invalid_argument("bound_general_nonpositive: requires q <= 0");
    return (1.0 - q) * (1.0 - q);
}

double bound_normal_positive(double q) {
    if (q < 0.0) throw std::invalid_argument("bound_normal_positive: requires q >= 0");
    return 1.0 + q * q;
}

double g(int n) {
    if (n < 2) throw std::invalid_argument("g: requires n >= 2");
    const double m = n;
    return (m * m - 3.0 * m + 3.0) / (m * (m - 1.0));
}

CrossoverInterval q_crossover(int n) {
    if (n < 4) throw std::invalid_argument("q_crossover: requires n >= 4");
    const double m = n;
    const double k = std::sqrt((m - 2.0) * (m - 3.0) / (m * (m - 1.0)));
    const double denom = 2.0 * m - 3.0;
    return {(-m * m * (k + 1.0) + m * (k + 3.0) - 3.0) / denom,
            (m * m * (k - 1.0) - m * (k - 3.0) - 3.0) / denom};
}

double bound_traceless(int n, double q) { return traceless_bound_value(n, q).coefficient; }

BoundValue traceless_bound_value(int n, double q) {
    if (n < 2) throw std::invalid_argument("bound_traceless: requires n >= 2");
    const double plus = 1.0 + q * q;
    if (q > 0.0) return {plus, BoundRegime::TracelessConjecturePositiveQ};
    return {std::max(g(n) * (1.0 - q) * (1.0 - q), plus),
            BoundRegime::TracelessConjectureNonpositiveQ};
}

std::pair<CMatrix, CMatrix> f_family_pair(double q, double t) {
    if (!(q > 0.0)) throw std::invalid_argument("f_family_pair: requires q > 0");
    if (!(t >= 0.0)) throw std::invalid_argument("f_family_pair: requires t >= 0");
    const double r = std::sqrt(t);
    return {CMatrix::from_rows({{q, r}, {0.0, -1.0}}), CMatrix::from_rows({{q, 0.0}, {-r, -1.0}})};
}

double f_eval(double q, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("f_eval: requires t >= 0");
    const double q2 = q * q;
    const double num = t * t * (1.0 + q2) + 2.0 * t * (1.0 + q) * (1.0 + q2 * q) +
                       (1.0 - q) * (1.0 - q) * (1.0 + q2 * q2);
    const double den = t + q2 + 1.0;
    return num / (den * den);
}

namespace {
void require_tmax_domain(double q, const char* op) {
    if (!(q > 0.0) || q == 1.0) {
        throw std::invalid_argument(std::string(op) + ": requires q > 0 and q != 1");
    }
}
}  // namespace

double t_max(double q) {
    require_tmax_domain(q, "t_max");
    const double q2 = q * q;
    return (3.0 * q2 * q2 + 2.0 * q2 + 3.0) / ((1.0 - q) * (1.0 - q));
}

double x_of_q(double q) {
    const double q2 = q * q;
    return q * (1.0 - q) * (1.0 - q) / (2.0 * (1.0 + q2 * q2));
}

double h_of_q(double q) { return (1.0 + q) * (1.0 + q) / (2.0 * (1.0 + q * q)); }

double f_at_tmax(double q) {
    require_tmax_domain(q, "f_at_tmax");
    const double x = x_of_q(q);
    return (1.0 - h_of_q(q) * x) / (1.0 - x) * (1.0 + q * q);
}

WitnessPair diag_counterexample(int n, double q) {
    if (n < 2) throw std::invalid_argument("diag_counterexample: requires n >= 2");
    std::vector<Complex> d(static_cast<std::size_t>(n), -1.0);
    d[0] = n - 1.0;
    CMatrix a = CMatrix::diagonal(d);
    return {a, a, q, g(n) * (1.0 - q) * (1.0 - q), "diag_counterexample"};
}

WitnessPair counterexample_q2() {
    return {CMatrix::from_rows({{2.0, 8.0}, {0.0, -1.0}}),
            CMatrix::from_rows({{2.0, 0.0}, {-8.0, -1.0}}), 2.0, 23953.0 / 4761.0,
            "counterexample_q2"};
}

CMatrix embed(const CMatrix& small, std::size_t n) {
    if (small.n() > n) throw std::invalid_argument("embed: target smaller than source");
    CMatrix m(n);
    for (std::size_t i = 0; i < small.n(); ++i)
        for (std::size_t j = 0; j < small.n(); ++j) m(i, j) = small(i, j);
    return m;
}

std::vector<WitnessPair> sharpness_witnesses(double q, int n) {
    if (n < 2) throw std::invalid_argument("sharpness_witnesses: requires n >= 2");
    const auto dim = static_cast<std::size_t>(n);
    std::vector<WitnessPair> out;

    if (q > 0.0) {
        std::vector<Complex> d(dim, 0.0);
        d[0] = 1.0;
        d[1] = -q;
        out.push_back({CMatrix::diagonal(d), CMatrix::unit(dim, 0, 1), q, 1.0 + q * q,
                       "kyfan_normal"});
    } else {
        const CMatrix p = CMatrix::unit(dim, 0, 0);
        out.push_back({p, p, q, (1.0 - q) * (1.0 - q), "projector"});
        if (n >= 4) {
            const auto [lo, hi] = q_crossover(n);
            if (q >= lo && q <= hi) out.push_back(diag_counterexample(n, q));
        }
    }

    std::vector<Complex> d(dim, 0.0);
    d[0] = -q;
    d[1] = 1.0;
    out.push_back({CMatrix::unit(dim, 0, 1), CMatrix::diagonal(d), q, 1.0 + q * q,
                   "traceless_a_mirror"});
    return out;
}

}  // namespace qcomm
