#include "qcomm/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcomm {

namespace {

void require_same_dim(const CMatrix& a, const CMatrix& b, const char* op) {
    if (a.n() != b.n()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(a.n()) + " vs " + std::to_string(b.n()) + ")");
    }
}

double off_diagonal_norm_sq(const CMatrix& h) {
    double s = 0.0;
    const std::size_t n = h.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(h(i, j));
    return s;
}

}  // namespace

// --- CMatrix --------------------------------------------------------------

CMatrix::CMatrix(std::size_t n) : n_(n), data_(n * n) {
    if (n == 0) throw std::invalid_argument("CMatrix: dimension must be >= 1");
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    CMatrix m(rows.size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != rows.size()) throw std::invalid_argument("CMatrix: rows must form a square");
        std::size_t j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    if (!m.is_finite()) throw std::invalid_argument("CMatrix: non-finite entry");
    return m;
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> d) {
    CMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix CMatrix::unit(std::size_t n, std::size_t i, std::size_t j) {
    CMatrix m(n);
    m(i, j) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

CMatrix CMatrix::transpose() const {
    CMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Complex CMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

bool CMatrix::is_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

bool CMatrix::is_diagonal() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (i != j && (*this)(i, j) != Complex{}) return false;
    return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& rhs) {
    require_same_dim(*this, rhs, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& rhs) {
    require_same_dim(*this, rhs, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

CMatrix operator+(CMatrix lhs, const CMatrix& rhs) { return lhs += rhs; }
CMatrix operator-(CMatrix lhs, const CMatrix& rhs) { return lhs -= rhs; }
CMatrix operator*(Complex s, CMatrix m) { return m *= s; }

CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs) {
    require_same_dim(lhs, rhs, "operator*");
    const std::size_t n = lhs.n();
    CMatrix r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += a * rhs(k, j);
        }
    }
    return r;
}

double CVector::norm_sq() const {
    double s = 0.0;
    for (const auto& z : entries) s += std::norm(z);
    return s;
}

CVector operator*(const CMatrix& m, const CVector& v) {
    if (m.n() != v.dim()) throw std::invalid_argument("matrix-vector: dimension mismatch");
    CVector r{std::vector<Complex>(v.dim())};
    for (std::size_t i = 0; i < m.n(); ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < m.n(); ++j) s += m(i, j) * v.entries[j];
        r.entries[i] = s;
    }
    return r;
}

// --- arithmetic -----------------------------------------------------------

CMatrix q_commutator(const CMatrix& a, const CMatrix& b, double q) {
    require_same_dim(a, b, "q_commutator");
    CMatrix r = a * b;
    r -= Complex(q) * (b * a);
    return r;
}

double frobenius_norm_sq(const CMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return s;
}

CMatrix gram(const CMatrix& m) {
    const std::size_t n = m.n();
    CMatrix g(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const Complex mki = std::conj(m(k, i));
            if (mki == Complex{}) continue;
            for (std::size_t j = i; j < n; ++j) g(i, j) += mki * m(k, j);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        g(i, i) = g(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) g(j, i) = std::conj(g(i, j));
    }
    return g;
}

CMatrix kron(const CMatrix& x, const CMatrix& y) {
    const std::size_t nx = x.n();
    const std::size_t m = y.n();
    CMatrix r(nx * m);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nx; ++j) {
            const Complex xij = x(i, j);
            if (xij == Complex{}) continue;
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l) r(i * m + k, j * m + l) = xij * y(k, l);
        }
    return r;
}

CVector vectorize(const CMatrix& b) {
    const std::size_t n = b.n();
    CVector v{std::vector<Complex>(n * n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v.entries[j * n + i] = b(i, j);
    return v;
}

CMatrix devectorize(const CVector& v, std::size_t n) {
    if (v.dim() != n * n) throw std::invalid_argument("devectorize: length is not n*n");
    CMatrix b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = v.entries[j * n + i];
    return b;
}

// --- spectral -------------------------------------------------------------

HermitianEigen hermitian_eigen(const CMatrix& h_in, const JacobiOptions& opts) {
    const std::size_t n = h_in.n();
    const double scale_sq = frobenius_norm_sq(h_in);

    double asym_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) asym_sq += std::norm(h_in(i, j) - std::conj(h_in(j, i)));
    if (std::sqrt(asym_sq) > 1e-12 * std::sqrt(scale_sq)) {
        throw std::invalid_argument("hermitian_eigen: input is not Hermitian");
    }

    CMatrix h = h_in;
    for (std::size_t i = 0; i < n; ++i) h(i, i) = h(i, i).real();
    CMatrix v = CMatrix::identity(n);

    const double threshold_sq = opts.off_tolerance * opts.off_tolerance * scale_sq;
    bool converged = false;
    int sweep = 0;
    for (; sweep <= opts.max_sweeps; ++sweep) {
        if (off_diagonal_norm_sq(h) <= threshold_sq) {
            converged = true;
            break;
        }
        if (sweep == opts.max_sweeps) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex hpq = h(p, q);
                const double abs_h = std::abs(hpq);
                if (abs_h == 0.0) continue;

                const double a = h(p, p).real();
                const double b = h(q, q).real();
                const Complex phase_c = std::conj(hpq / abs_h);
                const double theta = (b - a) / (2.0 * abs_h);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // Column rotation by V = [[c, s], [-s e*, c e*]] on (p, q);
                // rows follow from Hermiticity.
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const Complex hp = h(k, p);
                    const Complex hq = h(k, q) * phase_c;
                    h(k, p) = c * hp - s * hq;
                    h(k, q) = s * hp + c * hq;
                    h(p, k) = std::conj(h(k, p));
                    h(q, k) = std::conj(h(k, q));
                }
                h(p, p) = a - t * abs_h;
                h(q, q) = b + t * abs_h;
                h(p, q) = 0.0;
                h(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vp = v(k, p);
                    const Complex vq = v(k, q) * phase_c;
                    v(k, p) = c * vp - s * vq;
                    v(k, q) = s * vp + c * vq;
                }
            }
        }
    }
    if (!converged) {
        throw NumericalError("hermitian_eigen: Jacobi did not converge after " +
                                 std::to_string(sweep) + " sweeps",
                             sweep);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return h(x, x).real() > h(y, y).real();
    });

    HermitianEigen out{std::vector<double>(n), CMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = h(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

SingularSpectrum singular_values(const CMatrix& a) {
    const auto eig = hermitian_eigen(gram(a));
    SingularSpectrum s;
    s.values.reserve(eig.values.size());
    for (double lambda : eig.values) s.values.push_back(std::sqrt(std::max(lambda, 0.0)));
    return s;
}

double operator_norm(const CMatrix& a) { return singular_values(a).values.front(); }

double kyfan22_norm_sq(const CMatrix& a) {
    const auto s = singular_values(a).values;
    const double s2 = s.size() > 1 ? s[1] : 0.0;
    return s[0] * s[0] + s2 * s2;
}

// --- sampling -------------------------------------------------------------

Complex Rng::complex_gaussian() {
    constexpr double kHalf = 0.70710678118654752440;
    const double re = gaussian();
    const double im = gaussian();
    return {kHalf * re, kHalf * im};
}

CMatrix random_matrix(std::size_t n, Rng& rng) {
    CMatrix m(n);
    for (auto& z : m.data()) z = rng.complex_gaussian();
    return m;
}

CMatrix random_traceless(std::size_t n, Rng& rng) {
    CMatrix m = random_matrix(n, rng);
    const Complex shift = m.trace() / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= shift;
    return m;
}

CMatrix random_normal_diag(std::size_t n, Rng& rng) {
    std::vector<Complex> d(n);
    for (auto& z : d) z = rng.complex_gaussian();
    return CMatrix::diagonal(d);
}

CVector random_vector(std::size_t dim, Rng& rng) {
    CVector v{std::vector<Complex>(dim)};
    for (auto& z : v.entries) z = rng.complex_gaussian();
    return v;
}

}  // namespace qcomm
